"""Surface models: blow-ups of the plane, or given K3 / abelian Picard lattices.

Also home to the Shioda-Tate rank count, the hypothesis checker for
non-arithmetic automorphism groups of K3 surfaces, and a registry of worked
examples together with the values they are expected to reproduce.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .cones import RationalCone, dual_cone, extremal_rays, is_nef_against
from .enumeration import ClassQuery, MarkedLattice, classes_of_norm, minus_one_classes, root_set
from .lattice import (
    LatticeError,
    LatticeSpace,
    Vector,
    as_vector,
    determinant,
    inner_product,
    is_even,
    signature,
)

KINDS = ("blowup_plane", "k3", "abelian", "custom")


@dataclass(frozen=True)
class SurfaceModel:
    lattice: MarkedLattice
    canonical_class: Vector
    kind: str
    n_points: Optional[int] = None
    notes: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise LatticeError(f"unknown surface kind {self.kind!r}")
        k = as_vector(self.canonical_class)
        self.lattice.space._check(k)
        if self.kind in ("k3", "abelian") and any(k):
            raise LatticeError("K3 and abelian surfaces have numerically trivial K")
        if self.kind == "blowup_plane":
            n = self.lattice.rank - 1
            if self.lattice.space.gram != _blowup_gram(n) or k != (-3,) + (1,) * n:
                raise LatticeError("not the standard blow-up lattice")
        object.__setattr__(self, "canonical_class", k)

    @property
    def space(self) -> LatticeSpace:
        return self.lattice.space

    @property
    def anticanonical(self) -> Vector:
        return tuple(-c for c in self.canonical_class)


@dataclass(frozen=True)
class FibrationData:
    """An elliptic fibration seen through its fiber class.

    ``fiber_class`` may be omitted when only asserted geometric facts are
    fed to the hypothesis checker.
    """

    fiber_class: Optional[Vector] = None
    reducible_fiber_profiles: tuple[int, ...] = ()
    mw_rank_hint: Optional[int] = None

    def __post_init__(self):
        profiles = tuple(int(m) for m in self.reducible_fiber_profiles)
        if any(m < 1 for m in profiles):
            raise LatticeError("fiber component counts must be >= 1")
        object.__setattr__(self, "reducible_fiber_profiles", profiles)
        if self.fiber_class is not None:
            object.__setattr__(self, "fiber_class", as_vector(self.fiber_class))

    @property
    def all_fibers_irreducible(self) -> bool:
        return all(m == 1 for m in self.reducible_fiber_profiles)

    def validate(self, M: MarkedLattice) -> None:
        e = self.fiber_class
        if e is None:
            return
        if inner_product(M.space, e, e) != 0:
            raise LatticeError(f"fiber class {e} is not isotropic")
        if M.degree(e) <= 0:
            raise LatticeError(f"fiber class {e} must have positive degree")


@dataclass(frozen=True)
class NonArithReport:
    verdict: str
    checked_hypotheses: tuple[tuple[str, bool], ...]
    explanation: str

    @property
    def failed(self) -> list[str]:
        return [name for name, ok in self.checked_hypotheses if not ok]


def _blowup_gram(n: int):
    return tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(n + 1))
                 for i in range(n + 1))


def default_blowup_marking(n: int) -> Vector:
    """-K in the del Pezzo range, else (a, -1, ..., -1) with the least a >= 3, a^2 > n."""
    if n <= 8:
        return (3,) + (-1,) * n
    a = max(3, math.isqrt(n) + 1)
    return (a,) + (-1,) * n


def blowup_plane(n: int, marking: Optional[Sequence[int]] = None) -> SurfaceModel:
    """Blow-up of the plane at n points, basis (H, E_1, ..., E_n)."""
    if n < 0:
        raise LatticeError("number of points must be nonnegative")
    L = LatticeSpace(_blowup_gram(n), ("H",) + tuple(f"E{i}" for i in range(1, n + 1)))
    h = default_blowup_marking(n) if marking is None else as_vector(marking)
    return SurfaceModel(MarkedLattice(L, h), (-3,) + (1,) * n, "blowup_plane", n_points=n)


def mordell_weil_rank(picard_rank: int, profiles: Sequence[int] = ()) -> int:
    """Shioda-Tate: rho - 2 - sum over reducible fibers of (components - 1)."""
    if picard_rank < 2:
        raise LatticeError("an elliptic surface has Picard number at least 2")
    if any(m < 1 for m in profiles):
        raise LatticeError("fiber component counts must be >= 1")
    r = picard_rank - 2 - sum(m - 1 for m in profiles)
    if r < 0:
        raise LatticeError(
            f"inconsistent fiber data: rank {picard_rank} - 2 - {sum(m - 1 for m in profiles)} < 0"
        )
    return r


HYPOTHESES = (
    "Picard number at least 4",
    "first fibration has no reducible fibers",
    "second fibration has positive Mordell-Weil rank",
    "contains a (-2)-curve",
)


def check_nonarithmetic(picard_rank: int, fib1: FibrationData, fib2: FibrationData,
                        has_minus2_curve: bool) -> NonArithReport:
    """Evaluate the lattice-level hypotheses of the non-arithmeticity criterion."""
    e1, e2 = fib1.fiber_class, fib2.fiber_class
    if e1 is not None and e2 is not None:
        if len(e1) != len(e2):
            raise LatticeError("fiber classes live in different lattices")
        if all(e1[i] * e2[j] == e1[j] * e2[i] for i in range(len(e1)) for j in range(len(e1))):
            raise LatticeError("the two fiber classes span the same ray")
    if fib2.mw_rank_hint is not None:
        mw2 = fib2.mw_rank_hint
        mw2_text = "asserted positive" if mw2 > 0 else "asserted zero"
    else:
        try:
            mw2 = mordell_weil_rank(picard_rank, fib2.reducible_fiber_profiles)
        except LatticeError:
            mw2 = 0
        mw2_text = f"Shioda-Tate rank {mw2}"
    checks = (
        (HYPOTHESES[0], picard_rank >= 4),
        (HYPOTHESES[1], fib1.all_fibers_irreducible),
        (HYPOTHESES[2], mw2 > 0),
        (HYPOTHESES[3], bool(has_minus2_curve)),
    )
    ok = all(v for _, v in checks)
    if ok:
        text = ("the corollary's hypotheses hold: first fibration has Mordell-Weil "
                f"rank {picard_rank - 2}; second fibration: {mw2_text}")
    else:
        text = "inconclusive; failed: " + "; ".join(n for n, v in checks if not v)
    return NonArithReport("criteria_met" if ok else "inconclusive", checks, text)


def verify_anticanonical_decomposition(S: SurfaceModel,
                                       parts: Sequence[tuple[Sequence[int], Fraction | int]]) -> bool:
    if not parts:
        raise LatticeError("decomposition needs at least one part")
    total = [Fraction(0)] * S.space.rank
    for v, a in parts:
        a = Fraction(a)
        for i, c in enumerate(v):
            total[i] += a * c
    return tuple(total) == tuple(Fraction(c) for c in S.anticanonical)


# --- the dual Hesse configuration ----------------------------------------------

# Points [1, z^i, z^j] (i, j mod 3) in slots 1..9 as 3*i + j + 1, then [1,0,0],
# [0,1,0], [0,0,1] in slots 10, 11, 12.
def hesse_incidence() -> tuple[tuple[int, ...], ...]:
    """The 9 lines as sets of point indices 1..12.

    y = z^k x meets [1, z^k, z^j] and [0,0,1]; z = z^k x meets [1, z^i, z^k]
    and [0,1,0]; z = z^k y meets [1, z^i, z^(i+k)] and [1,0,0].
    """
    def pt(i, j):
        return 3 * (i % 3) + (j % 3) + 1

    lines = []
    for k in range(3):
        lines.append(tuple(sorted([pt(k, j) for j in range(3)] + [12])))
    for k in range(3):
        lines.append(tuple(sorted([pt(i, k) for i in range(3)] + [11])))
    for k in range(3):
        lines.append(tuple(sorted([pt(i, i + k) for i in range(3)] + [10])))
    return tuple(lines)


def hesse_line_classes() -> list[Vector]:
    lines = []
    for pts in hesse_incidence():
        v = [1] + [0] * 12
        for p in pts:
            v[p] = -1
        lines.append(tuple(v))
    return lines


# --- registry --------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    label: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass(frozen=True)
class Example:
    name: str
    model: SurfaceModel
    expected: dict
    fibrations: tuple[FibrationData, ...] = ()
    checks: Callable[["Example"], list[Check]] = field(default=lambda ex: [], repr=False)

    def verify(self) -> list[Check]:
        return _common_checks(self) + self.checks(self)


def _common_checks(ex: Example) -> list[Check]:
    L = ex.model.space
    out = []
    if "gram" in ex.expected:
        out.append(Check("gram", ex.expected["gram"], L.gram))
    out.append(Check("signature", (1, L.rank - 1), tuple(signature(L))))
    if "determinant" in ex.expected:
        out.append(Check("determinant", ex.expected["determinant"], determinant(L)))
    if "even" in ex.expected:
        out.append(Check("even", ex.expected["even"], is_even(L)))
    return out


def _k3_rank3_checks(ex: Example) -> list[Check]:
    M = ex.model.lattice
    L = M.space
    e = ex.fibrations[0].fiber_class
    sections = [(0, 1, 0), (0, 0, 1)]
    iso_deg, root_deg = ex.expected["isotropic_search"]
    roots = root_set(M, root_deg).roots
    isotropic = classes_of_norm(M, ClassQuery(0, iso_deg, primitive_only=True))
    nef_iso = [v for v in isotropic if is_nef_against(v, roots, L)]
    return [
        Check("nef isotropic rays", ex.expected["nef_isotropic"], nef_iso),
        Check("basis roots are sections", [1, 1], [inner_product(L, e, c) for c in sections]),
        Check("Mordell-Weil rank", ex.expected["mw_rank"], mordell_weil_rank(L.rank)),
    ]


def _ex63_checks(ex: Example) -> list[Check]:
    L = ex.model.space
    f1, f2 = ex.fibrations
    rep = check_nonarithmetic(L.rank, f1, f2, has_minus2_curve=True)
    return [
        Check("fiber classes isotropic", [0, 0],
              [inner_product(L, f.fiber_class, f.fiber_class) for f in ex.fibrations]),
        Check("E1, F2 are roots", [-2, -2],
              [inner_product(L, r, r) for r in ((0, 0, 1, 0), (0, 0, 0, 1))]),
        Check("Mordell-Weil rank of each fibration", [2, 2],
              [mordell_weil_rank(L.rank, f.reducible_fiber_profiles) for f in ex.fibrations]),
        Check("non-arithmeticity hypotheses", ex.expected["nonarith"], rep.verdict),
    ]


def _blowup6_checks(ex: Example) -> list[Check]:
    S = ex.model
    lines = minus_one_classes(S.lattice, S.canonical_class, 9)
    rays = extremal_rays(RationalCone(S.space, tuple(lines)))
    return [
        Check("(-1)-classes", ex.expected["minus_one_classes"], len(lines)),
        Check("extremal rays of the cone of lines", ex.expected["minus_one_classes"],
              len(rays) if isinstance(rays, tuple) else None),
        Check("(-K)^2", ex.expected["anticanonical_degree"],
              inner_product(S.space, S.anticanonical, S.anticanonical)),
    ]


def _cubics_checks(ex: Example) -> list[Check]:
    S = ex.model
    f = ex.fibrations[0]
    return [
        Check("(-K)^2", 0, inner_product(S.space, S.anticanonical, S.anticanonical)),
        Check("Mordell-Weil rank", ex.expected["mw_rank"],
              mordell_weil_rank(S.space.rank, f.reducible_fiber_profiles)),
    ]


def _hesse_checks(ex: Example) -> list[Check]:
    S = ex.model
    L = S.space
    lines = hesse_line_classes()
    gram = [[inner_product(L, a, b) for b in lines] for a in lines]
    off = sorted({gram[i][j] for i in range(9) for j in range(9) if i != j})
    contracted = LatticeSpace(tuple(tuple(r) for r in gram))  # nondegenerate, so independent
    return [
        Check("line self-intersections", [-3] * 9, [gram[i][i] for i in range(9)]),
        Check("lines pairwise disjoint", [0], off),
        Check("sum (1/3) L_i = -K", True,
              verify_anticanonical_decomposition(S, [(v, Fraction(1, 3)) for v in lines])),
        Check("rho(Y) after contracting the lines", ex.expected["rho_Y"], L.rank - contracted.rank),
    ]


def _blowup1_checks(ex: Example) -> list[Check]:
    S = ex.model
    L = S.space
    curves = RationalCone(L, ((0, 1), (1, -1)))
    rays = extremal_rays(curves)
    nef = dual_cone(curves)
    return [
        Check("extremal curve rays", ex.expected["curve_rays"], list(rays)),
        Check("nef rays", ex.expected["nef_rays"], sorted(nef.generators)),
    ]


def _build_registry() -> dict[str, Callable[[], Example]]:
    def k3_rank3():
        L = LatticeSpace(((0, 1, 1), (1, -2, 0), (1, 0, -2)), ("P", "C1", "C2"))
        M = MarkedLattice(L, (3, 1, 1))
        return Example(
            "k3_rank3",
            SurfaceModel(M, (0, 0, 0), "k3", notes="rank-3 K3 with a unique elliptic fibration"),
            {"gram": L.gram, "determinant": 4, "even": True, "nef_isotropic": [(1, 0, 0)],
             "isotropic_search": (6, 24), "mw_rank": 1},
            (FibrationData((1, 0, 0)),),
            _k3_rank3_checks,
        )

    def ex63_k3():
        L = LatticeSpace(((0, 2, 1, 1), (2, 0, 1, 1), (1, 1, -2, 0), (1, 1, 0, -2)),
                         ("pi*O(1,0)", "pi*O(0,1)", "E1", "F2"))
        M = MarkedLattice(L, (1, 1, 0, 0))
        return Example(
            "ex63_k3",
            SurfaceModel(M, (0, 0, 0, 0), "k3", notes="double cover of P1xP1 branched in a (4,4) curve"),
            {"gram": L.gram, "determinant": -32, "even": True, "nonarith": "criteria_met"},
            (FibrationData((1, 0, 0, 0)), FibrationData((0, 1, 0, 0))),
            _ex63_checks,
        )

    def exe_abelian():
        L = LatticeSpace(((0, 1, 1), (1, 0, 1), (1, 1, 0)), ("Ex0", "0xE", "Delta"))
        M = MarkedLattice(L, (1, 1, 1))
        return Example(
            "exe_abelian",
            SurfaceModel(M, (0, 0, 0), "abelian", notes="E x E, E without complex multiplication"),
            {"gram": L.gram, "determinant": 2, "even": True},
        )

    def blowup6():
        return Example("blowup6", blowup_plane(6),
                       {"minus_one_classes": 27, "anticanonical_degree": 3},
                       checks=_blowup6_checks)

    def blowup9_cubics():
        S = blowup_plane(9)
        return Example("blowup9_cubics", S, {"mw_rank": 8},
                       (FibrationData(S.anticanonical),), _cubics_checks)

    def hesse12():
        return Example("hesse12", blowup_plane(12), {"rho_Y": 4, "line_norm": -3},
                       checks=_hesse_checks)

    def blowup1():
        return Example("blowup1", blowup_plane(1),
                       {"curve_rays": [(0, 1), (1, -1)], "nef_rays": [(1, -1), (1, 0)]},
                       checks=_blowup1_checks)

    return {f.__name__: f for f in (k3_rank3, ex63_k3, exe_abelian, blowup6,
                                     blowup9_cubics, hesse12, blowup1)}


_REGISTRY = _build_registry()
EXAMPLE_NAMES = tuple(_REGISTRY)


def example_registry(name: str) -> Example:
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise KeyError(f"unknown example {name!r}; valid names: {', '.join(EXAMPLE_NAMES)}") from None
