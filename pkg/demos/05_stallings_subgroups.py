"""Stallings core graphs: membership, conjugacy, and canonical codes.

Folding the wedge of subdivided loops yields the core graph of a
subgroup; reading labels from the basepoint decides membership, and the
basepoint-free core is a canonical object for the conjugacy class.
"""

from outerspace import (FreeGroup, core_graph, contains_element,
                        conjugate_into, canonical_code)

F = FreeGroup(3)

H = core_graph([F.word("a"), F.word([2, 1, -2])], based=True)   # <a, bab^-1>
print("core of <a, b a b^-1>:", H)
print(H.to_dot())

for text in ("aaa", "ab", "baabaa"):
    w = F.word(text) if text != "baabaa" else F.word([2,1,1,-2,1,1])
    print(f"  {text} in H: {contains_element(H, F.word(text))}")

K1 = core_graph([F.word([2, 1, -2])], based=False)      # <b a b^-1>
K2 = core_graph([F.word("a")], based=False)
ok, morphism = conjugate_into(K1, K2)
print(f"\n<b a b^-1> conjugates into <a>: {ok} via vertex map {morphism}")

c1 = canonical_code(core_graph([F.word("ab")], based=False))
c2 = canonical_code(core_graph([F.word("ba")], based=False))
print(f"codes of <ab> and <ba> agree: {c1 == c2}")
