import random
from fractions import Fraction as Fr

import pytest

from outerspace.words import FreeGroup
from outerspace.marked_graph import rose, standard_marking
from outerspace.lipschitz import (candidates, stretch_factor, distance,
                                  optimal_map, tension_graph, gates,
                                  optimize_in_simplex, class_of_loop)
from outerspace.oracles import brute_stretch, all_short_loops
from outerspace.randomgen import random_marked_graph
from outerspace.traintrack import is_legal, classify_recurrence


F3 = FreeGroup(3)


def R_unit():
    return rose(F3, [Fr(1, 3)] * 3)


def R_skew():
    return rose(F3, [Fr(1, 2), Fr(1, 4), Fr(1, 4)])


def theta4():
    ends = {1: (0, 1), 2: (0, 1), 3: (0, 1), 4: (0, 1)}
    return standard_marking(F3, {0, 1}, ends, {e: Fr(1, 4) for e in ends}, 0)


def barbell():
    # two loops joined by an arc, plus a third loop for rank 3
    ends = {1: (0, 0), 2: (1, 1), 3: (0, 1), 4: (0, 0)}
    return standard_marking(F3, {0, 1}, ends, {e: Fr(1, 4) for e in ends}, 0)


def test_candidates_rose_count():
    # 3 petals + 6 figure-eights (xy, xy^-1 per petal pair)
    cs = candidates(R_unit())
    assert len(cs) == 9
    shapes = sorted(c.shape for c in cs)
    assert shapes.count("embedded-circle") == 3
    assert shapes.count("figure-eight") == 6


def test_candidates_match_bruteforce_on_theta():
    T = theta4()
    cs = candidates(T)
    loops = all_short_loops(T)
    best = None
    R = R_skew()
    for loop in loops:
        lt = R.translation_length(class_of_loop(T, loop))
        lg = sum(T.lengths[abs(e)] for e in loop)
        r = lt / lg
        best = r if best is None else max(best, r)
    lam, _ = stretch_factor(T, R)
    assert lam == best


def test_barbell_candidate_crosses_arc_twice():
    B = barbell()
    barbells = [c for c in candidates(B) if c.shape == "barbell"]
    assert barbells
    for c in barbells:
        counts = c.crossing_counts()
        assert counts[3] == 2       # the arc
        assert counts.get(1, 0) <= 1 or counts.get(2, 0) <= 1


def test_stretch_identity():
    R = R_skew()
    lam, _ = stretch_factor(R, R)
    assert lam == 1


def test_stretch_rose_pair_exact():
    lam, wit = stretch_factor(R_unit(), R_skew())
    assert lam == Fr(3, 2)
    assert wit.edges == (1,)
    lam2, _ = stretch_factor(R_skew(), R_unit())
    assert lam2 == Fr(4, 3)


def test_stretch_against_bruteforce_random():
    rng = random.Random(31)
    for _ in range(12):
        G = random_marked_graph(rng, F3, 3)
        Gp = random_marked_graph(rng, F3, 3)
        lam, _ = stretch_factor(G, Gp)
        blam, _ = brute_stretch(G, Gp)
        assert lam == blam


def test_triangle_inequality_exact():
    rng = random.Random(32)
    for _ in range(8):
        A = random_marked_graph(rng, F3, 3)
        B = random_marked_graph(rng, F3, 3)
        C = random_marked_graph(rng, F3, 3)
        ab, _ = stretch_factor(A, B)
        bc, _ = stretch_factor(B, C)
        ac, _ = stretch_factor(A, C)
        assert ac <= ab * bc


def test_distance_normalizes():
    R = rose(F3, [1, 1, 1])
    assert distance(R, R_unit()) == 1


def test_witness_length_bound():
    rng = random.Random(33)
    for _ in range(15):
        G = random_marked_graph(rng, F3, 3)   # volume 1 by construction
        Gp = random_marked_graph(rng, F3, 3)
        _, wit = stretch_factor(G, Gp)
        assert wit.length_in(G) < 2


def test_optimal_map_rose_pair():
    f = optimal_map(R_unit(), R_skew())
    assert f.slopes() == {1: Fr(3, 2), 2: Fr(3, 4), 3: Fr(3, 4)}
    assert tension_graph(f) == {1}


def test_optimal_map_identity_marking():
    f = optimal_map(R_skew(), R_skew())
    assert all(s == 1 for s in f.slopes().values())
    assert tension_graph(f) == {1, 2, 3}


def test_optimal_map_certification_random():
    rng = random.Random(34)
    for _ in range(15):
        G = random_marked_graph(rng, F3, 3)
        Gp = random_marked_graph(rng, F3, 3)
        lam, wit = stretch_factor(G, Gp)
        f = optimal_map(G, Gp, lam, wit)
        assert f.sigma() == lam
        assert f.is_difference_of_markings()
        f.check_consistency()
        tens = tension_graph(f)
        assert all(abs(e) in tens for e in wit.edges)
        tt = f.gates(tens)
        assert is_legal(tt, wit.edges, cyclic=True)
        for v in set(G.origin(d) for d in G.directions_at(G.basepoint)):
            pass
        # every tension vertex met by the witness has >= 2 gates
        for e in wit.edges:
            v = G.origin(e)
            assert tt.gate_count(v) >= 2


def test_gates_definition_replay():
    f = optimal_map(R_unit(), R_skew())
    tt = gates(f, set(R_unit().edge_ends))
    for v in tt.gates:
        for g in tt.gates[v]:
            germs = {f.germ(d) for d in g}
            assert len(germs) == 1
    # directions in distinct gates have distinct germs
    all_dirs = [d for g in tt.gates[0] for d in g]
    for d1 in all_dirs:
        for d2 in all_dirs:
            same_gate = tt.gate_of(d1) is tt.gate_of(d2)
            assert same_gate == (f.germ(d1) == f.germ(d2))


def test_gates_collapsed_edge_rejected():
    f = optimal_map(R_unit(), R_skew())
    from outerspace.paths import TargetPath, vertex_point
    f.edge_images[2] = TargetPath.point(R_skew(), vertex_point(0))
    with pytest.raises(ValueError):
        f.gates({1, 2, 3})


def test_optimize_in_simplex_same_simplex():
    lengths, lam = optimize_in_simplex(R_unit(), R_skew())
    assert lam == 1
    assert lengths == {1: Fr(1, 2), 2: Fr(1, 4), 3: Fr(1, 4)}


def test_optimize_in_simplex_beats_samples():
    rng = random.Random(35)
    T = theta4()
    lengths, lam_star = optimize_in_simplex(R_unit(), T)
    X = R_unit().with_lengths(lengths)
    lamX, _ = stretch_factor(X, T)
    assert lamX == lam_star
    for _ in range(100):
        raw = {e: Fr(rng.randint(1, 12), 12) for e in R_unit().edge_ends}
        vol = sum(raw.values())
        Y = R_unit().with_lengths({e: l / vol for e, l in raw.items()})
        lamY, _ = stretch_factor(Y, T)
        assert lamY >= lam_star


def test_optimize_in_simplex_recurrent_structure():
    rng = random.Random(36)
    for _ in range(5):
        Gp = random_marked_graph(rng, F3, 3)
        lengths, lam_star = optimize_in_simplex(R_unit(), Gp)
        X = R_unit().with_lengths(lengths)
        f = optimal_map(X, Gp)
        assert tension_graph(f) == set(X.edge_ends)
        tt = f.gates(set(X.edge_ends))
        verdict = classify_recurrence(tt)
        assert verdict.kind in ("recurrent", "birecurrent")
