import random
from fractions import Fraction as Fr

import pytest

from outerspace.words import FreeGroup, CyclicWord
from outerspace.marked_graph import rose
from outerspace.lipschitz import stretch_factor, optimal_map
from outerspace.folding import (standard_geodesic, folding_path, fold_step,
                                path_statistics, _multi_gates, _event_depth)
from outerspace.randomgen import random_marked_graph, random_cyclic_word
from outerspace.stallings import core_graph


F3 = FreeGroup(3)


def test_same_simplex_pure_segment():
    R1 = rose(F3, [Fr(1, 3)] * 3)
    R2 = rose(F3, [Fr(1, 2), Fr(1, 4), Fr(1, 4)])
    sg = standard_geodesic(R1, R2)
    assert sg.lengths_end == R2.lengths
    assert len(sg.path.events) == 1      # only the initial snapshot
    assert not sg.collapsed_edges


def test_single_fold_constructed():
    # rose marked so that a and b images share a prefix: one early event
    rng = random.Random(51)
    G = random_marked_graph(rng, F3, 2)
    Gp = random_marked_graph(rng, F3, 2)
    sg = standard_geodesic(G, Gp)
    assert len(sg.path.events) >= 1
    # event times strictly increase
    times = sg.path.times()
    assert all(a < b for a, b in zip(times, times[1:]))


def test_fold_marking_roundtrip():
    rng = random.Random(52)
    for _ in range(10):
        G = random_marked_graph(rng, F3, 3)
        Gp = random_marked_graph(rng, F3, 3)
        sg = standard_geodesic(G, Gp)
        for ev in sg.path.events:
            assert ev.graph.validate() == []


def test_connecting_maps_compose():
    rng = random.Random(53)
    G = random_marked_graph(rng, F3, 3)
    Gp = random_marked_graph(rng, F3, 3)
    sg = standard_geodesic(G, Gp)
    path = sg.path
    n = len(path.events)
    if n < 3:
        pytest.skip("path too short for a composition check")
    i, j, k = 0, n // 2, n - 1
    m_ij = path.connecting_edge_map(i, j)
    m_jk = path.connecting_edge_map(j, k)
    m_ik = path.connecting_edge_map(i, k)
    from outerspace.words import free_reduce
    for d, p in m_ij.items():
        comp = tuple(free_reduce([x for e in p for x in m_jk[e]]))
        assert comp == m_ik[d]
    # identity at equal times
    m_ii = path.connecting_edge_map(i, i)
    assert all(m_ii[d] == (d,) for d in m_ii)


def test_marking_loops_transport_through_folds():
    rng = random.Random(54)
    G = random_marked_graph(rng, F3, 3)
    Gp = random_marked_graph(rng, F3, 3)
    sg = standard_geodesic(G, Gp)
    path = sg.path
    n = len(path.events)
    from outerspace.words import free_reduce
    for j in range(1, n):
        m = path.connecting_edge_map(0, j)
        start = path.events[0].graph
        end = path.events[j].graph
        for i in range(1, F3.rank + 1):
            loop = [x for d in start.marking_in[i] for x in m[d]]
            assert tuple(free_reduce(loop)) == end.marking_in[i]


def test_geodesic_additivity_exact():
    rng = random.Random(55)
    for _ in range(4):
        G = random_marked_graph(rng, F3, 3)
        Gp = random_marked_graph(rng, F3, 3)
        sg = standard_geodesic(G, Gp)
        snaps = [ev.graph.normalize() for ev in sg.path.events]
        lam_cache = {}

        def lam(i, j):
            if (i, j) not in lam_cache:
                lam_cache[(i, j)] = stretch_factor(snaps[i], snaps[j])[0]
            return lam_cache[(i, j)]

        n = len(snaps)
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    assert lam(i, j) * lam(j, k) == lam(i, k)


def test_standard_geodesic_multiplicativity():
    rng = random.Random(56)
    for _ in range(6):
        G = random_marked_graph(rng, F3, 3)
        Gp = random_marked_graph(rng, F3, 3)
        lam, _ = stretch_factor(G, Gp)
        sg = standard_geodesic(G, Gp)
        mid = sg.mid.normalize()
        lam1, _ = stretch_factor(G, mid)
        lam2, _ = stretch_factor(mid, Gp)
        assert lam1 * lam2 == lam


def test_final_snapshot_reaches_target():
    rng = random.Random(57)
    for _ in range(5):
        G = random_marked_graph(rng, F3, 3)
        Gp = random_marked_graph(rng, F3, 3)
        sg = standard_geodesic(G, Gp)
        last = sg.path.events[-1].graph.normalize()
        t = Gp.normalize()
        assert stretch_factor(last, t)[0] == 1
        assert stretch_factor(t, last)[0] == 1


def test_illegal_turn_monotonicity():
    rng = random.Random(58)
    for _ in range(6):
        G = random_marked_graph(rng, F3, 3)
        Gp = random_marked_graph(rng, F3, 3)
        sg = standard_geodesic(G, Gp)
        probes = [random_cyclic_word(rng, F3, rng.randint(2, 6))
                  for _ in range(5)]
        stats = path_statistics(sg.path, probe_loops=probes)
        for pi in range(len(probes)):
            seq = [row["loops"][pi]["illegal_turns"] for row in stats]
            assert all(x >= y for x, y in zip(seq, seq[1:]))


def test_legal_probe_loops_stretch_maximally():
    # a witness loop is legal, and legal loops attain the stretch at
    # every time: l_target(w) = lambda(G_t -> target) * l_t(w) exactly,
    # while arbitrary loops stretch by at most that factor
    rng = random.Random(59)
    for _ in range(4):
        G = random_marked_graph(rng, F3, 3)
        Gp = random_marked_graph(rng, F3, 3)
        sg = standard_geodesic(G, Gp)
        snaps = [ev.graph.normalize() for ev in sg.path.events]
        target = Gp.normalize()
        _, wit = stretch_factor(snaps[0], target)
        wcls = CyclicWord(F3, snaps[0].path_word(wit.edges).letters)
        lt = target.translation_length(wcls)
        for g in snaps:
            lam_t, _ = stretch_factor(g, target)
            assert lt == lam_t * g.translation_length(wcls)
            for _ in range(3):
                other = random_cyclic_word(rng, F3, 5)
                assert (target.translation_length(other)
                        <= lam_t * g.translation_length(other))


def test_volume_strictly_decreases():
    rng = random.Random(60)
    G = random_marked_graph(rng, F3, 3)
    Gp = random_marked_graph(rng, F3, 3)
    sg = standard_geodesic(G, Gp)
    vols = [ev.graph.volume() for ev in sg.path.events]
    assert all(a > b for a, b in zip(vols, vols[1:]))


def test_subgroup_volume_statistics():
    rng = random.Random(61)
    G = random_marked_graph(rng, F3, 3)
    Gp = random_marked_graph(rng, F3, 3)
    sg = standard_geodesic(G, Gp)
    H = core_graph([F3.word("ab"), F3.word("c")], based=True)
    stats = path_statistics(sg.path, probe_subgroups=[H])
    for row in stats:
        assert row["subgroups"][0]["volume"] > 0


def test_within_event_order_independence():
    # folding the gates one at a time at the same depth (transporting the
    # remaining gates through each fold) yields a snapshot isometric to
    # the simultaneous fold: translation lengths and volumes agree
    rng = random.Random(62)
    found = 0
    for _ in range(30):
        G = random_marked_graph(rng, F3, 3)
        Gp = random_marked_graph(rng, F3, 3)
        sg = standard_geodesic(G, Gp)
        ev0 = sg.path.events[0]
        f = ev0.residual
        gates = _multi_gates(f)
        if len(gates) < 2:
            continue
        found += 1
        tau = _event_depth(f, gates)
        _, g_sim, _, _, _ = fold_step(ev0.graph, f, gates=gates, tau=tau)
        for order in (list(gates), list(gates)[::-1]):
            g_seq, f_seq = ev0.graph, f
            pending = list(order)
            while pending:
                gate = pending.pop(0)
                step = fold_step(g_seq, f_seq, gates=[gate], tau=tau)
                _, g_seq, f_seq, emap, vmap = step
                transported = []
                for (v2, dirs2) in pending:
                    transported.append((vmap[v2],
                                        tuple(emap[d][0] for d in dirs2)))
                pending = transported
            probes = [random_cyclic_word(rng, F3, 4) for _ in range(6)]
            for p in probes:
                assert g_seq.translation_length(p) == g_sim.translation_length(p)
            assert g_seq.volume() == g_sim.volume()
        if found >= 3:
            break
    assert found >= 1


def test_fold_precondition_errors():
    R1 = rose(F3, [Fr(1, 3)] * 3)
    R2 = rose(F3, [Fr(1, 2), Fr(1, 4), Fr(1, 4)])
    f = optimal_map(R1, R2)
    with pytest.raises(ValueError):
        folding_path(R1, f)     # slopes are not 1: wrong parametrization
