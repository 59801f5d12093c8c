"""
One isometry of each type
=========================

The characteristic polynomial decides the type exactly: a non-cyclotomic
factor means hyperbolic; otherwise the order separates elliptic from
parabolic.
"""
from conewalk.isometry import classify, eichler_transvection, reflection
from conewalk.surfaces import example_registry

M = example_registry("k3_rank3").model.lattice
L = M.space

# %%
print(classify(M, reflection(L, (0, 1, 0))))

# %%
# A transvection along the fiber class fixes that isotropic ray.
print(classify(M, eichler_transvection(L, (1, 0, 0), (0, 1, -1))))

# %%
# Two reflections whose mirrors do not meet inside the cone.
g = reflection(L, (4, 2, -1)) @ reflection(L, (0, 0, 1))
print(g.matrix)
print(classify(M, g))  # factor x^2 - 34x + 1, stretch factor 17 + 12 sqrt 2
