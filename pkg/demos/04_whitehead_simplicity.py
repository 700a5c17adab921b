"""Whitehead graphs and the simplicity decision.

A conjugacy class is simple when it lies in a proper free factor.
Whitehead's algorithm decides this: shorten greedily with Whitehead
automorphisms, then close the minimal level set under length-preserving
moves; the class is simple exactly when some minimal representative
omits a generator.  The Whitehead graph shows the obstruction: a
connected graph without cut points certifies non-simplicity.
"""

from outerspace import (FreeGroup, whitehead_graph, connectivity_report,
                        reduce_to_minimal, is_simple)
from outerspace.words import CyclicWord

F = FreeGroup(3)

for text in ("abc", "aabbcc", "abAB", "abacbc"):
    w = CyclicWord(F, F.word(text).letters)
    W = whitehead_graph(w)
    rep = connectivity_report(W)
    res = reduce_to_minimal(w)
    verdict = is_simple(w)
    print(f"{text:10s} graph: {str(rep):14s} minimal length {res.minimal_length}"
          f"  ({len(res.representatives)} minimal forms)  simple: {verdict}")

print()
w = CyclicWord(F, F.word("aabbcc").letters)
print("the Whitehead graph of a^2 b^2 c^2 (a single 6-cycle):")
print(whitehead_graph(w).to_dot())
