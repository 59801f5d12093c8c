"""Integral isometries of hyperbolic lattices and their classification.

An isometry preserving the positive cone acts on hyperbolic space. Its
characteristic polynomial has unit constant term, so by Kronecker every root lies on the unit circle exactly
when every irreducible factor is cyclotomic. That gives an exact test:

* some factor is not cyclotomic            -> hyperbolic
* all factors cyclotomic, finite order      -> elliptic
* all factors cyclotomic, infinite order    -> parabolic
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence, Union

import sympy

from .enumeration import MarkedLattice
from .lattice import (
    LatticeError,
    LatticeSpace,
    Matrix,
    Vector,
    as_matrix,
    identity,
    inner_product,
    integer_kernel,
    matmul,
    matvec,
    primitive,
    reflection_matrix,
    transpose,
)

Poly = tuple[int, ...]  # coefficients, constant term first


@dataclass(frozen=True)
class LatticeIsometry:
    """Integer matrix acting on column vectors with ``m^T G m = G``."""

    space: LatticeSpace
    matrix: Matrix

    def __post_init__(self):
        m = as_matrix(self.matrix)
        n = self.space.rank
        if len(m) != n or any(len(row) != n for row in m):
            raise LatticeError(f"isometry must be a {n}x{n} matrix")
        lhs = matmul(matmul(transpose(m), self.space.gram), m)
        for i in range(n):
            for j in range(n):
                if lhs[i][j] != self.space.gram[i][j]:
                    raise LatticeError(
                        f"matrix does not preserve the form: (m^T G m)[{i}][{j}] = "
                        f"{lhs[i][j]} != {self.space.gram[i][j]}"
                    )
        object.__setattr__(self, "matrix", m)

    def __call__(self, x: Sequence[int]) -> Vector:
        return matvec(self.matrix, x)

    def __matmul__(self, other: "LatticeIsometry") -> "LatticeIsometry":
        """``(g @ h)(x) = g(h(x))``."""
        return LatticeIsometry(self.space, matmul(self.matrix, other.matrix))

    def __pow__(self, k: int) -> "LatticeIsometry":
        return LatticeIsometry(self.space, _matpow(self.matrix, k))

    def is_identity(self) -> bool:
        return self.matrix == identity(self.space.rank)


@dataclass(frozen=True)
class IsometryKind:
    """Classification tag plus its certificate.

    elliptic: the finite order; parabolic: the fixed primitive isotropic
    vector; hyperbolic: a non-cyclotomic irreducible factor of the
    characteristic polynomial (coefficients, constant term first).
    """

    tag: str
    certificate: Union[int, Vector, Poly]


def make_isometry(L: LatticeSpace, m: Sequence[Sequence[int]]) -> LatticeIsometry:
    return LatticeIsometry(L, as_matrix(m))


def reflection(L: LatticeSpace, r: Sequence[int]) -> LatticeIsometry:
    return LatticeIsometry(L, reflection_matrix(L, r))


def preserves_positive_cone(M: MarkedLattice, g: LatticeIsometry) -> bool:
    return inner_product(M.space, g(M.marking), M.marking) > 0


# --- integer polynomials ---------------------------------------------------------

def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def _divmod_monic(p: Poly, d: Poly):
    p = list(p)
    q = [0] * max(len(p) - len(d) + 1, 1)
    for i in range(len(p) - len(d), -1, -1):
        c = p[i + len(d) - 1]
        q[i] = c
        if c:
            for j, dj in enumerate(d):
                p[i + j] -= c * dj
    return _trim(q), _trim(p[: len(d) - 1] or [0])


def characteristic_polynomial(m: Sequence[Sequence[int]]) -> Poly:
    """det(x I - m) by Faddeev-LeVerrier; the divisions by k are exact."""
    n = len(m)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        prod = matmul(m, mk) if k > 1 else [[0] * n for _ in range(n)]
        mk = [[prod[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)]
              for i in range(n)]
        am = matmul(m, mk)
        tr = sum(am[i][i] for i in range(n))
        assert tr % k == 0
        coeffs[n - k] = -tr // k
    return tuple(coeffs)


def _totient(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> Poly:
    """The m-th cyclotomic polynomial, by dividing x^m - 1 by its proper factors."""
    p = (-1,) + (0,) * (m - 1) + (1,)
    for d in range(1, m):
        if m % d == 0:
            p, r = _divmod_monic(p, cyclotomic(d))
            assert r == (0,)
    return p


@lru_cache(maxsize=None)
def cyclotomic_orders(degree: int) -> tuple[int, ...]:
    """All m with phi(m) <= degree; phi(m) >= sqrt(m / 2) bounds the search."""
    return tuple(m for m in range(1, 2 * degree * degree + 3) if _totient(m) <= degree)


def strip_cyclotomic(p: Poly) -> tuple[Poly, list[int]]:
    """Divide out every cyclotomic factor; returns (rest, orders with multiplicity)."""
    rest = _trim(p)
    found = []
    for m in cyclotomic_orders(max(len(rest) - 1, 1)):
        phi = cyclotomic(m)
        while len(rest) >= len(phi):
            q, r = _divmod_monic(rest, phi)
            if r != (0,):
                break
            rest = q
            found.append(m)
    return rest, found


def is_cyclotomic(p: Poly) -> bool:
    """True for an irreducible integer polynomial dividing some x^m - 1."""
    p = _trim(p)
    d = len(p) - 1
    return any(cyclotomic(m) == p for m in cyclotomic_orders(max(d, 1)) if _totient(m) == d)


def _irreducible_factors(p: Poly) -> list[Poly]:
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(p)), x, domain="ZZ")
    _, factors = poly.factor_list()
    return [tuple(int(c) for c in reversed(f.all_coeffs())) for f, _ in factors]


# --- orders and classification -------------------------------------------------

def _matpow(m: Matrix, k: int) -> Matrix:
    if k < 0:
        raise ValueError("negative power")
    result = identity(len(m))
    base = m
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def _lcm(nums):
    out = 1
    for a in nums:
        out = out * a // gcd(out, a)
    return out


def order_bound(rank: int) -> int:
    return _lcm(cyclotomic_orders(rank))


def order(g: LatticeIsometry) -> Optional[int]:
    """Least N with g^N = 1, or None when g has infinite order."""
    rest, _ = strip_cyclotomic(characteristic_polynomial(g.matrix))
    if len(rest) > 1:
        return None
    n = g.space.rank
    bound = order_bound(n)
    one = identity(n)
    if _matpow(g.matrix, bound) != one:
        return None
    N = bound
    for p in sympy.primefactors(bound):
        while N % p == 0 and _matpow(g.matrix, N // p) == one:
            N //= p
    return N


def classify(M: MarkedLattice, g: LatticeIsometry) -> IsometryKind:
    if not preserves_positive_cone(M, g):
        raise LatticeError("isometry swaps the two components of the positive cone")
    rest, _ = strip_cyclotomic(characteristic_polynomial(g.matrix))
    if len(rest) > 1:
        factor = next(f for f in _irreducible_factors(rest) if len(f) > 1)
        return IsometryKind("hyperbolic", factor)
    N = order(g)
    if N is not None:
        return IsometryKind("elliptic", N)
    return IsometryKind("parabolic", _fixed_isotropic(M, g))


def _fixed_isotropic(M: MarkedLattice, g: LatticeIsometry) -> Vector:
    L = M.space
    n = L.rank
    gm = g.matrix
    rows = [[gm[i][j] - (i == j) for j in range(n)] for i in range(n)]
    fixed = integer_kernel(rows, n)
    # the form on the fixed lattice is negative semidefinite with a rank-one radical
    gram = [[inner_product(L, a, b) for b in fixed] for a in fixed]
    radical = integer_kernel(gram, len(fixed))
    if len(radical) != 1:
        raise LatticeError("fixed lattice does not have a rank-one radical")
    v = primitive([sum(c * b[k] for c, b in zip(radical[0], fixed)) for k in range(n)])
    if M.degree(v) < 0:
        v = tuple(-c for c in v)
    return v


def parabolic_fixed_ray(M: MarkedLattice, g: LatticeIsometry) -> Vector:
    kind = classify(M, g)
    if kind.tag != "parabolic":
        raise LatticeError(f"isometry is {kind.tag}, not parabolic")
    return kind.certificate


def eichler_transvection(L: LatticeSpace, e: Sequence[int], a: Sequence[int]) -> LatticeIsometry:
    """x -> x + <x,e> a - <x,a> e - (a.a / 2) <x,e> e, for isotropic e orthogonal to a."""
    if inner_product(L, e, e) != 0 or inner_product(L, e, a) != 0:
        raise LatticeError("need e isotropic and orthogonal to a")
    aa = inner_product(L, a, a)
    if aa % 2:
        raise LatticeError("a.a must be even for an integral transvection")
    n = L.rank
    ge, ga = L.dual_row(e), L.dual_row(a)
    cols = []
    for j in range(n):
        # image of the basis vector e_j: <e_j, e> = ge[j], <e_j, a> = ga[j]
        cols.append([int(i == j) + ge[j] * a[i] - ga[j] * e[i] - (aa // 2) * ge[j] * e[i]
                     for i in range(n)])
    return LatticeIsometry(L, transpose(cols))
