import json
import random
from fractions import Fraction as Fr

import pytest

from outerspace.words import FreeGroup, CyclicWord
from outerspace.marked_graph import (MarkedMetricGraph, rose, standard_marking,
                                     EdgePath)
from outerspace.stallings import core_graph
from outerspace.randomgen import (random_marked_graph, random_cyclic_word,
                                  random_word)


F3 = FreeGroup(3)


def theta4():
    ends = {1: (0, 1), 2: (0, 1), 3: (0, 1), 4: (0, 1)}
    return standard_marking(F3, {0, 1}, ends, {e: Fr(1, 4) for e in ends}, 0)


def test_rose_valid_volume_one():
    R = rose(F3, [Fr(1, 3)] * 3)
    assert R.validate() == []
    assert R.volume() == 1


def test_zero_length_edge_diagnosed():
    R = rose(F3, [Fr(0), Fr(1, 2), Fr(1, 2)])
    assert any("nonpositive length" in d for d in R.validate())


def test_marking_mismatch_diagnosed():
    R = rose(F3, [Fr(1, 3)] * 3)
    R.marking_out[1] = F3.word("b")
    assert any("marking mismatch" in d for d in R.validate())


def test_loop_representative_petals():
    R = rose(F3, [Fr(1, 3)] * 3)
    assert R.loop_representative(F3.word("a").cyclic()).edges == (1,)
    assert R.loop_representative(F3.word("abA").cyclic()).edges == (2,)


def test_loop_representative_roundtrip_random():
    rng = random.Random(21)
    for _ in range(25):
        G = random_marked_graph(rng, F3, 3)
        g = random_cyclic_word(rng, F3, rng.randint(1, 6))
        rep = G.loop_representative(g)
        back = CyclicWord(F3, G.path_word(rep.edges).letters)
        assert back == g


def test_translation_length_examples():
    R = rose(F3, [Fr(1, 3)] * 3)
    assert R.translation_length(F3.word("abc").cyclic()) == 1
    assert R.translation_length(F3.word("abA").cyclic()) == Fr(1, 3)
    R2 = rose(F3, [Fr(1, 2), Fr(1, 4), Fr(1, 4)])
    assert R2.translation_length(F3.word("aab").cyclic()) == Fr(5, 4)


def test_translation_length_conjugacy_invariant():
    rng = random.Random(22)
    G = random_marked_graph(rng, F3, 3)
    for _ in range(30):
        w = random_word(rng, F3, 5)
        g = random_word(rng, F3, rng.randint(0, 4))
        assert (G.translation_length(w.cyclic())
                == G.translation_length((g * w * g.inverse()).cyclic()))


def test_volume_and_normalize():
    R = rose(F3, [1, 1, 1])
    assert R.volume() == 3
    N = R.normalize()
    assert N.volume() == 1
    assert N.lengths[1] == Fr(1, 3)
    assert N.normalize().lengths == N.lengths
    rng = random.Random(23)
    for _ in range(10):
        G = random_marked_graph(rng, F3, 3)
        G2 = G.with_lengths({e: 3 * l for e, l in G.lengths.items()})
        g = random_cyclic_word(rng, F3, 5)
        assert (G2.normalize().translation_length(g)
                == G2.translation_length(g) / G2.volume())


def test_subgraph_factors_rose():
    R = rose(F3, [Fr(1, 3)] * 3)
    handles = R.subgraph_factors()
    assert len(handles) == 6
    assert sorted(h.rank for h in handles) == [1, 1, 1, 2, 2, 2]
    assert len({h.code for h in handles}) == 6


def test_subgraph_factors_ranks_by_euler_characteristic():
    G = theta4()
    for h in G.subgraph_factors():
        assert 1 <= h.rank <= 2
        assert h.rank == h.core.rank()


def test_subgroup_core_volumes():
    R2 = rose(F3, [Fr(1, 2), Fr(1, 4), Fr(1, 4)])
    Ha = core_graph([F3.word("a")], based=True)
    _, vol = R2.subgroup_core_in_graph(Ha)
    assert vol == Fr(1, 2)
    Hab = core_graph([F3.word("a"), F3.word("b")], based=True)
    _, vol2 = R2.subgroup_core_in_graph(Hab)
    assert vol2 == Fr(3, 4)


def test_cyclic_subgroup_volume_is_translation_length():
    rng = random.Random(24)
    for _ in range(15):
        G = random_marked_graph(rng, F3, 3)
        w = random_word(rng, F3, rng.randint(1, 5))
        if not len(w):
            continue
        H = core_graph([w], based=True)
        _, vol = G.subgroup_core_in_graph(H)
        assert vol == G.translation_length(w.cyclic())


def test_marking_roundtrip_preserved_by_remark():
    rng = random.Random(25)
    from outerspace.randomgen import random_automorphism
    G = rose(F3, [Fr(1, 3)] * 3)
    for _ in range(10):
        phi, phi_inv = random_automorphism(rng, F3, 4)
        G = G.remark(phi, phi_inv)
        assert G.validate() == []


def test_json_roundtrip():
    rng = random.Random(26)
    G = random_marked_graph(rng, F3, 3)
    data = json.loads(json.dumps(G.to_json()))
    G2 = MarkedMetricGraph.from_json(data)
    assert G2.validate() == []
    for _ in range(5):
        g = random_cyclic_word(rng, F3, 5)
        assert G.translation_length(g) == G2.translation_length(g)


def test_degree_two_needs_flag():
    # vertex 1 subdivides a petal: degree 2
    ends = {1: (0, 1), 2: (1, 0), 3: (0, 0), 4: (0, 0)}
    lengths = {e: Fr(1, 4) for e in ends}
    G = standard_marking(F3, {0, 1}, ends, lengths, 0)
    assert any("degree" in d for d in G.validate())
    G.subdivided = True
    assert G.validate() == []


def test_edgepath_tightening():
    R = rose(F3, [Fr(1, 3)] * 3)
    p = EdgePath(R, (1, -1, 2), cyclic=False)
    assert p.edges == (2,)
    c = EdgePath(R, (1, 2, -1), cyclic=True)
    assert c.edges == (2,)
