"""
Mordell-Weil ranks and the non-arithmeticity checklist
======================================================

For an elliptic K3 surface the Shioda-Tate formula gives the Mordell-Weil
rank from the Picard number and the reducible fibers. Combined with a few
more facts it decides whether a known criterion for a non-arithmetic
automorphism group applies.
"""
from conewalk.surfaces import FibrationData, check_nonarithmetic, example_registry, mordell_weil_rank

# %%
print("rank 3, no reducible fibers:", mordell_weil_rank(3))
print("rank 10, fibers with 2 and 3 components:", mordell_weil_rank(10, [2, 3]))

# %%
ex = example_registry("ex63_k3")
f1, f2 = ex.fibrations
rep = check_nonarithmetic(ex.model.space.rank, f1, f2, has_minus2_curve=True)
print(rep.verdict)
for name, ok in rep.checked_hypotheses:
    print(" ", "pass" if ok else "FAIL", name)

# %%
rep = check_nonarithmetic(3, FibrationData(), FibrationData(), True)
print(rep.verdict, rep.failed)
