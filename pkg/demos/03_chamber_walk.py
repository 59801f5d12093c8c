"""
Walking back to the nef chamber
===============================

Reflections in (-2)-classes tile the positive cone of a K3 surface. A walk
reflects a class in any root it pairs negatively with; each step lowers its
degree, and with enough roots it ends in the chamber of the marking H.
"""
import random

from conewalk.cones import chamber_walk, sufficient_root_degree
from conewalk.enumeration import root_set
from conewalk.lattice import reflect_in_root
from conewalk.surfaces import example_registry

M = example_registry("k3_rank3").model.lattice
L = M.space

# %%
# Scramble H by a few reflections, then walk back.
rng = random.Random(1)
gens = root_set(M, 9).roots
x = M.marking
for _ in range(4):
    x = reflect_in_root(L, rng.choice(gens), x)
D = sufficient_root_degree(M, x)
print("start", x, "needs roots up to degree", D)

res = chamber_walk(M, root_set(M, D).roots, x)
print("image", res.image, "after", res.length, "reflections")
assert res.image == M.marking
