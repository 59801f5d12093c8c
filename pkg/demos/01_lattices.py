"""
Picard lattices and their invariants
====================================

A surface's Neron-Severi lattice with its intersection form is the basic
object here. We build three small ones and read off rank, signature,
determinant and parity, all in exact integer arithmetic.
"""
from conewalk import LatticeSpace, determinant, is_even, signature
from conewalk.surfaces import example_registry

# %%
# A K3 surface with an elliptic fibration P and two sections C1, C2.
L = LatticeSpace(((0, 1, 1), (1, -2, 0), (1, 0, -2)), ("P", "C1", "C2"))
print("signature", tuple(signature(L)), "det", determinant(L), "even", is_even(L))

# %%
# Every lattice in the registry is hyperbolic: exactly one positive direction.
for name in ("k3_rank3", "ex63_k3", "exe_abelian", "blowup6"):
    S = example_registry(name).model
    print(f"{name:12s} rank {S.space.rank}  signature {tuple(signature(S.space))}  "
          f"det {determinant(S.space)}")
