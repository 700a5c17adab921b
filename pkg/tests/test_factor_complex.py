import random
from fractions import Fraction as Fr

import pytest

from outerspace.words import FreeGroup
from outerspace.marked_graph import rose, standard_marking
from outerspace.stallings import FactorHandle
from outerspace.factor_complex import (project, build_ball, ProjectionImage,
                                       check_reparam_quasigeodesic)
from outerspace.randomgen import random_marked_graph
from outerspace.folding import standard_geodesic


F3 = FreeGroup(3)


def handle(*texts):
    return FactorHandle.from_words([F3.word(t) for t in texts],
                                   ambient_rank=3)


@pytest.fixture(scope="module")
def small_ball():
    return build_ball(F3, bound=4, aut_product_length=2, vertex_cap=2000)


def test_project_rose_six_handles():
    img = project(rose(F3, [Fr(1, 3)] * 3))
    assert len(img) == 6


def test_project_two_vertex_graph():
    ends = {1: (0, 1), 2: (0, 1), 3: (0, 1), 4: (0, 1)}
    T = standard_marking(F3, {0, 1}, ends, {e: Fr(1, 4) for e in ends}, 0)
    img = project(T)
    # theta: circles from edge pairs (6, rank 1) and triples (4, rank 2)
    assert len(img) == 10
    assert all(1 <= h.rank <= 2 for h in img)


def test_project_requires_rank_three():
    F2 = FreeGroup(2)
    from outerspace.marked_graph import rose as rose2
    with pytest.raises(ValueError):
        project(rose2(F2, [Fr(1, 2), Fr(1, 2)]))


def test_projection_depends_on_marking():
    rng = random.Random(81)
    from outerspace.randomgen import random_automorphism
    G = rose(F3, [Fr(1, 3)] * 3)
    phi, phi_inv = random_automorphism(rng, F3, 6)
    G2 = G.remark(phi, phi_inv)
    c1 = {h.code for h in project(G)}
    c2 = {h.code for h in project(G2)}
    assert c1 != c2 or phi.is_identity()


def test_ball_adjacency_containment(small_ball):
    ha, hab = handle("a"), handle("a", "b")
    assert small_ball.distance_upper(ha, hab) == 1
    assert small_ball.distance_upper(ha, handle("b")) == 2
    assert small_ball.distance_upper(ha, ha) == 0


def test_ball_adjacency_replays_conjugate_into(small_ball):
    from outerspace.stallings import conjugate_into
    codes = sorted(small_ball.handles)[:30]
    for c1 in codes[:10]:
        for c2 in codes[:10]:
            if c1 >= c2:
                continue
            h1, h2 = small_ball.handles[c1], small_ball.handles[c2]
            expected = (conjugate_into(h1.core, h2.core)[0]
                        or conjugate_into(h2.core, h1.core)[0]) \
                and h1.rank != h2.rank
            assert (c2 in small_ball.adjacency[c1]) == expected


def test_ball_ranks_proper(small_ball):
    for h in small_ball.handles.values():
        assert 1 <= h.rank <= 2


def test_distance_monotone_under_refinement(small_ball):
    bigger = build_ball(F3, bound=5, aut_product_length=2, vertex_cap=4000)
    ha, hb = handle("a"), handle("b")
    pairs = [(ha, hb), (ha, handle("a", "b")), (handle("ab"), handle("b"))]
    for h1, h2 in pairs:
        d_small = small_ball.distance_upper(h1, h2)
        d_big = bigger.distance_upper(h1, h2)
        if d_small is not None:
            assert d_big is not None and d_big <= d_small


def test_projection_diameter_at_most_four():
    rng = random.Random(82)
    graphs = [random_marked_graph(rng, F3, 3) for _ in range(5)]
    seeds = {}
    images = []
    for G in graphs:
        img = project(G)
        images.append(img)
        for h in img:
            seeds[h.code] = h
    ball = build_ball(F3, seeds=list(seeds.values()), bound=6,
                      aut_product_length=2, vertex_cap=4000)
    for img in images:
        diam = ball.diameter_upper(list(img))
        assert diam is not None and diam <= 4


def test_qg_constant_sequence():
    img = project(rose(F3, [Fr(1, 3)] * 3))
    ball = build_ball(F3, seeds=list(img), bound=4, aut_product_length=2)
    report = check_reparam_quasigeodesic([img] * 5, K=6, ball=ball)
    assert report.ok
    assert len(report.breakpoints) == 2


def test_qg_along_folding_path():
    rng = random.Random(83)
    G = random_marked_graph(rng, F3, 4)
    Gp = random_marked_graph(rng, F3, 4)
    sg = standard_geodesic(G, Gp)
    images = [project(ev.graph) for ev in sg.path.events]
    seeds = {h.code: h for img in images for h in img}
    ball = build_ball(F3, seeds=list(seeds.values()), bound=6,
                      aut_product_length=2, vertex_cap=4000)
    report = check_reparam_quasigeodesic(images, K=6, ball=ball)
    assert report.ok
    assert report.consistent


def test_qg_teleport_fails():
    # a constructed sequence whose single step exceeds any window bound:
    # alternate far factors so even one step has diameter > K
    img_a = ProjectionImage([handle("a")])
    img_b = ProjectionImage([handle("b")])
    ball = build_ball(F3, bound=4, aut_product_length=2)
    report = check_reparam_quasigeodesic([img_a, img_b, img_a, img_b],
                                         K=1, ball=ball)
    assert not report.ok
    assert report.failed_window is not None
