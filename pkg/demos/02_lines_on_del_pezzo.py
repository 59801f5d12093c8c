"""
Lines on del Pezzo surfaces
===========================

A (-1)-curve on the blow-up of the plane at n general points has C^2 = -1
and <C, K> = -1. For n <= 8 there are finitely many; for n = 9 the count
keeps growing with the degree bound.
"""
from conewalk import RationalCone, dual_cone, extremal_rays
from conewalk.enumeration import minus_one_classes
from conewalk.surfaces import blowup_plane

# %%
for n in range(3, 9):
    S = blowup_plane(n)
    print(n, len(minus_one_classes(S.lattice, S.canonical_class, 1)))

# %%
# The 27 lines of a cubic surface span the cone of curves. Its dual is the
# nef cone.
S = blowup_plane(6)
lines = minus_one_classes(S.lattice, S.canonical_class, 1)
cone = RationalCone(S.space, tuple(lines))
print("extremal rays:", len(extremal_rays(cone)), " nef rays:", len(dual_cone(cone).generators))

# %%
# Nine points: infinitely many (-1)-curves, seen as a growing count.
S = blowup_plane(9)
print([len(minus_one_classes(S.lattice, S.canonical_class, d)) for d in (3, 6, 9, 12)])
