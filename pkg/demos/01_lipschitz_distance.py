"""Lipschitz distance between two marked roses, step by step.

The stretch factor of a map between marked metric graphs is controlled
by finitely many candidate loops: embedded circles, figure-eights and
barbells.  This script builds two roses, lists the candidates, evaluates
each ratio exactly, and confirms the asymmetry of the metric.
"""

from fractions import Fraction as Fr

from outerspace import FreeGroup, rose, candidates, stretch_factor, distance
from outerspace.lipschitz import class_of_loop

F = FreeGroup(3)
G = rose(F, [Fr(1, 3), Fr(1, 3), Fr(1, 3)])
H = rose(F, [Fr(1, 2), Fr(1, 4), Fr(1, 4)])

print("candidates of the unit rose:")
for cand in candidates(G):
    cls = class_of_loop(G, cand.edges)
    ratio = H.translation_length(cls) / cand.length_in(G)
    print(f"  {cand.shape:16s} {str(cls):6s} "
          f"l_G = {cand.length_in(G)}   l_H = {H.translation_length(cls)}   "
          f"ratio = {ratio}")

lam, wit = stretch_factor(G, H)
print(f"\nstretch G -> H: {lam}, witness {wit.shape} through {list(wit.edges)}")
lam_back, _ = stretch_factor(H, G)
print(f"stretch H -> G: {lam_back}  (the metric is asymmetric)")
print(f"normalized distances: {distance(G, H)} and {distance(H, G)}")
