"""Exhaustive enumeration of lattice classes of a given norm and bounded degree.

Every search is reduced to a definite one: fixing the degree ``<v, H>`` (and
any extra linear constraints) cuts out an affine translate of a sublattice of
``H``-perp, which is negative definite because ``<H, H> > 0`` and the ambient
form has signature (1, n). Points of prescribed norm on that translate are
found with a Fincke-Pohst style depth-first search in exact arithmetic.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .lattice import (
    LatticeError,
    LatticeSpace,
    Vector,
    as_vector,
    content,
    inner_product,
    lll_gram,
    signature,
    solve_integral,
)


@dataclass(frozen=True)
class MarkedLattice:
    """A lattice with a marking ``H`` of positive norm."""

    space: LatticeSpace
    marking: Vector

    def __post_init__(self):
        h = as_vector(self.marking)
        self.space._check(h)
        if inner_product(self.space, h, h) <= 0:
            raise LatticeError(f"marking {h} must have positive norm")
        object.__setattr__(self, "marking", h)

    @property
    def rank(self) -> int:
        return self.space.rank

    def degree(self, v: Sequence[int]) -> int:
        return inner_product(self.space, v, self.marking)


@dataclass(frozen=True)
class ClassQuery:
    target_norm: int
    max_degree: int
    primitive_only: bool = False
    extra_linear_constraints: tuple[tuple[Vector, int], ...] = ()

    def __post_init__(self):
        if self.max_degree < 0:
            raise LatticeError("max_degree must be nonnegative")
        cons = tuple((as_vector(v), int(val)) for v, val in self.extra_linear_constraints)
        object.__setattr__(self, "extra_linear_constraints", cons)


@dataclass(frozen=True)
class RootSet:
    """Roots of bounded degree, split by the sign of their degree.

    ``roots`` all have ``<r, H> > 0``; ``through_marking`` holds the roots
    orthogonal to ``H`` (both signs). A nonempty ``through_marking`` means the
    marking sits on a mirror and cannot orient a chamber.
    """

    roots: tuple[Vector, ...]
    through_marking: tuple[Vector, ...]
    max_degree: int

    @property
    def marking_on_mirror(self) -> bool:
        return bool(self.through_marking)


# --- definite search ---------------------------------------------------------

def _ldl(q: Sequence[Sequence[Fraction]]):
    """Q(x) = sum_i d[i] * (x_i + sum_{j>i} m[i][j] x_j)^2."""
    n = len(q)
    a = [[Fraction(c) for c in row] for row in q]
    d = [Fraction(0)] * n
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise LatticeError("form is not positive definite")
        for j in range(i + 1, n):
            m[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= m[i][j] * m[i][k] * d[i]
                a[k][j] = a[j][k]
    return d, m


def _points_on_ellipsoid(q, center, value) -> Iterator[tuple[int, ...]]:
    """All integer w with (w - c)^T Q (w - c) == value, Q positive definite."""
    n = len(q)
    value = Fraction(value)
    if value < 0:
        return
    d, m = _ldl(q)
    c = [Fraction(x) for x in center]
    w = [0] * n
    y = [Fraction(0)] * n  # y_i = w_i - c_i

    def rec(i, budget):
        if i < 0:
            if budget == 0:
                yield tuple(w)
            return
        shift = sum((m[i][j] * y[j] for j in range(i + 1, n)), Fraction(0))
        mid = c[i] - shift
        rad = math.sqrt(float(budget / d[i]))
        lo = math.floor(float(mid) - rad) - 1
        hi = math.ceil(float(mid) + rad) + 1
        for wi in range(lo, hi + 1):
            t = wi - mid
            rest = budget - d[i] * t * t
            if rest < 0:
                continue
            w[i] = wi
            y[i] = wi - c[i]
            yield from rec(i - 1, rest)
        y[i] = Fraction(0)

    yield from rec(n - 1, value)


def short_vectors_definite(gram_neg: LatticeSpace, target_norm: int) -> list[Vector]:
    """All vectors of norm ``target_norm`` in a negative definite lattice."""
    if target_norm >= 0:
        raise LatticeError("target norm must be negative")
    if signature(gram_neg).negative != gram_neg.rank:
        raise LatticeError("lattice is not negative definite")
    q = [[-c for c in row] for row in gram_neg.gram]
    t = lll_gram(q)
    qr = [[sum(t[a][i] * q[a][b] * t[b][j] for a in range(len(q)) for b in range(len(q)))
           for j in range(len(q))] for i in range(len(q))]
    out = []
    for w in _points_on_ellipsoid(qr, [0] * len(q), -target_norm):
        out.append(tuple(sum(t[i][j] * w[j] for j in range(len(w))) for i in range(len(t))))
    return sorted(out)


# --- fibered search over the degree ------------------------------------------

def _fiber(M: MarkedLattice, q: ClassQuery, d: int) -> list[Vector]:
    L = M.space
    n = L.rank
    rows = [L.dual_row(M.marking)] + [L.dual_row(v) for v, _ in q.extra_linear_constraints]
    rhs = [d] + [val for _, val in q.extra_linear_constraints]
    sol = solve_integral(rows, rhs, n)
    if sol is None:
        return []
    v0, basis = sol
    target = q.target_norm
    if not basis:
        return [v0] if inner_product(L, v0, v0) == target and any(v0) else []
    # with A = -<B_i, B_j> (positive definite) and beta_i = <B_i, v0>:
    # norm(v0 + B w) = c0 + 2 beta.w - w^T A w
    #               = c0 + z^T A z - (w - z)^T A (w - z),   A z = beta
    A = [[-inner_product(L, bi, bj) for bj in basis] for bi in basis]
    t = lll_gram(A)
    k = len(basis)
    basis = [tuple(sum(t[j][i] * basis[j][r] for j in range(k)) for r in range(n)) for i in range(k)]
    A = [[-inner_product(L, bi, bj) for bj in basis] for bi in basis]
    beta = [inner_product(L, bi, v0) for bi in basis]
    z = _solve_rational(A, beta)
    za = sum(z[i] * A[i][j] * z[j] for i in range(k) for j in range(k))
    value = inner_product(L, v0, v0) + za - target
    out = []
    for w in _points_on_ellipsoid(A, z, value):
        v = tuple(v0[r] + sum(w[i] * basis[i][r] for i in range(k)) for r in range(n))
        if not any(v):
            continue
        if q.primitive_only and content(v) != 1:
            continue
        out.append(v)
    return sorted(out)


def _solve_rational(A, rhs) -> list[Fraction]:
    n = len(A)
    a = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(A, rhs)]
    for col in range(n):
        p = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[p] = a[p], a[col]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col] / a[col][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _workers() -> int:
    env = os.environ.get("CONEWALK_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def classes_of_norm(M: MarkedLattice, q: ClassQuery) -> list[Vector]:
    """All nonzero v with v.v = target, 0 <= <v, H> <= max_degree and the
    extra constraints, ordered by degree and then lexicographically."""
    degrees = range(q.max_degree + 1)
    workers = min(_workers(), len(degrees))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            fibers = list(ex.map(lambda d: _fiber(M, q, d), degrees))
    else:
        fibers = [_fiber(M, q, d) for d in degrees]
    return [v for fib in fibers for v in fib]


def root_set(M: MarkedLattice, max_degree: int) -> RootSet:
    found = classes_of_norm(M, ClassQuery(-2, max_degree))
    pos = tuple(r for r in found if M.degree(r) > 0)
    zero = tuple(r for r in found if M.degree(r) == 0)
    return RootSet(pos, zero, max_degree)


def minus_one_classes(M: MarkedLattice, canonical: Sequence[int], max_degree: int) -> list[Vector]:
    """Classes with C.C = -1 and K.C = -1, the numerical (-1)-curves."""
    return classes_of_norm(
        M, ClassQuery(-1, max_degree, extra_linear_constraints=((as_vector(canonical), -1),))
    )
