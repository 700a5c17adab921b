import random

import pytest

from outerspace.words import (FreeGroup, Word, Automorphism,
                              reduce_word, cyclic_normal_form,
                              RankMismatchError, parse_letters)


F3 = FreeGroup(3)


def test_reduce_cancellation():
    assert str(reduce_word(F3, "abB")) == "a"
    assert str(reduce_word(F3, "abBc")) == "ac"


def test_reduce_empty():
    assert reduce_word(F3, "").is_identity()
    assert reduce_word(F3, "aA").is_identity()


def test_reduce_already_reduced():
    assert str(reduce_word(F3, "abA")) == "abA"


def test_reduce_idempotent():
    rng = random.Random(1)
    for _ in range(100):
        letters = [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(12)]
        w = Word(F3, letters)
        assert Word(F3, w.letters).letters == w.letters


def test_reduce_length_subadditive():
    rng = random.Random(2)
    for _ in range(100):
        u = Word(F3, [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(8)])
        v = Word(F3, [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(8)])
        assert len(u * v) <= len(u) + len(v)


def test_cyclic_normal_form_conjugation():
    assert str(cyclic_normal_form(F3.word("abA"))) == "b"


def test_cyclic_normal_form_rotation():
    assert str(cyclic_normal_form(F3.word("ba"))) == "ab"


def test_cyclic_normal_form_conjugated_pair():
    w = F3.word("A") * F3.word("cb") * F3.word("a")
    assert cyclic_normal_form(w) == cyclic_normal_form(F3.word("cb"))


def test_cyclic_conjugacy_invariance_randomized():
    rng = random.Random(3)
    for _ in range(60):
        w = Word(F3, [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(6)])
        g = Word(F3, [rng.choice([1, -1, 2, -2, 3, -3])
                      for _ in range(rng.randint(0, 4))])
        assert cyclic_normal_form(w) == cyclic_normal_form(g * w * g.inverse())


def test_inverse_not_quotiented():
    w = F3.word("ab")
    assert cyclic_normal_form(w) != cyclic_normal_form(w.inverse())


def test_apply_identity():
    phi = Automorphism.identity(F3)
    w = F3.word("abcAB")
    assert phi.apply(w) == w


def test_apply_elementary():
    phi = Automorphism(F3, [F3.word("ab"), F3.word("b"), F3.word("c")])
    assert str(phi.apply(F3.word("a"))) == "ab"


def test_apply_respects_composition():
    rng = random.Random(4)
    phi = Automorphism(F3, [F3.word("ab"), F3.word("b"), F3.word("c")])
    psi = Automorphism(F3, [F3.word("a"), F3.word("bc"), F3.word("c")])
    comp = phi.compose(psi)
    for _ in range(40):
        w = Word(F3, [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(7)])
        assert comp.apply(w) == phi.apply(psi.apply(w))


def test_inverse_roundtrip_randomized():
    rng = random.Random(5)
    from outerspace.randomgen import random_automorphism
    for _ in range(20):
        phi, phi_inv_known = random_automorphism(rng, F3, 6)
        inv = phi.inverse()
        assert phi.compose(inv).is_identity()
        assert inv.compose(phi).is_identity()
        for _ in range(5):
            w = Word(F3, [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(8)])
            assert inv.apply(phi.apply(w)) == w


def test_non_automorphism_rejected():
    bad = Automorphism(F3, [F3.word("a"), F3.word("a"), F3.word("c")])
    with pytest.raises(ValueError):
        bad.inverse()


def test_rank_mixing_is_hard_error():
    F2 = FreeGroup(2)
    with pytest.raises(RankMismatchError):
        F3.word("a") * F2.word("b")


def test_letter_out_of_range():
    with pytest.raises(ValueError):
        Word(FreeGroup(2), [3])


def test_string_serialization():
    w = F3.word("aBc")
    assert parse_letters(str(w)) == list(w.letters)
    assert str(F3.identity()) == "1"
