"""Exact linear algebra for integral symmetric bilinear forms.

Vectors are plain tuples of Python ints in the lattice basis; Gram matrices
are tuples of tuples. Nothing in this module touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Optional, Sequence

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]


class LatticeError(ValueError):
    """Invalid lattice data (shape, symmetry, degeneracy, precondition)."""


def as_vector(v: Sequence[int]) -> Vector:
    return tuple(int(c) for c in v)


def as_matrix(m: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(c) for c in row) for row in m)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(col) for col in zip(*a))


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def content(v: Sequence[int]) -> int:
    g = 0
    for c in v:
        g = gcd(g, c)
    return g


def primitive(v: Sequence[int]) -> Vector:
    """Divide out the gcd of the coordinates (sign is kept)."""
    g = content(v)
    if g == 0:
        raise LatticeError("zero vector has no primitive representative")
    return tuple(c // g for c in v)


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


def bareiss_determinant(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; every intermediate stays integral."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class LatticeSpace:
    """A free Z-module with a nondegenerate integral symmetric form."""

    gram: Matrix
    labels: Optional[tuple[str, ...]] = None
    _det: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        g = as_matrix(self.gram)
        n = len(g)
        if n == 0:
            raise LatticeError("rank must be positive")
        if any(len(row) != n for row in g):
            raise LatticeError("gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if g[i][j] != g[j][i]:
                    raise LatticeError(f"gram matrix not symmetric at ({i}, {j})")
        det = bareiss_determinant(g)
        if det == 0:
            raise LatticeError("gram matrix is degenerate (determinant 0)")
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != n:
                raise LatticeError("labels must match the rank")
            object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "_det", det)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        return inner_product(self, x, y)

    def norm(self, x: Sequence[int]) -> int:
        return inner_product(self, x, x)

    def dual_row(self, x: Sequence[int]) -> Vector:
        """Coefficients of the linear form y -> <x, y>."""
        self._check(x)
        return matvec(self.gram, x)

    def _check(self, *vs: Sequence[int]) -> None:
        for v in vs:
            if len(v) != self.rank:
                raise LatticeError(
                    f"vector of length {len(v)} in a lattice of rank {self.rank}"
                )


class Signature(NamedTuple):
    positive: int
    negative: int


def inner_product(L: LatticeSpace, x: Sequence[int], y: Sequence[int]) -> int:
    L._check(x, y)
    g = L.gram
    return sum(xi * sum(gij * yj for gij, yj in zip(g[i], y)) for i, xi in enumerate(x) if xi)


def _congruence_diagonal(gram: Sequence[Sequence[int]]) -> list[Fraction]:
    """Diagonal entries of a symmetric congruence reduction over Q."""
    a = [[Fraction(c) for c in row] for row in gram]
    n = len(a)
    diag = []
    active = list(range(n))
    while active:
        p = next((i for i in active if a[i][i] != 0), None)
        if p is None:
            pair = next(
                ((i, j) for i in active for j in active if i != j and a[i][j] != 0), None
            )
            if pair is None:
                diag.extend(Fraction(0) for _ in active)
                break
            i, j = pair
            # e_i <- e_i + e_j: the new diagonal entry is 2*a[i][j] != 0
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            p = i
        piv = a[p][p]
        active.remove(p)
        for i in active:
            f = a[i][p] / piv
            if f:
                for k in active:
                    a[i][k] -= f * a[p][k]
        for i in active:
            a[i][p] = a[p][i] = Fraction(0)
        diag.append(piv)
    return diag


def signature(L: LatticeSpace | Sequence[Sequence[int]]) -> Signature:
    gram = L.gram if isinstance(L, LatticeSpace) else L
    d = _congruence_diagonal(gram)
    return Signature(sum(1 for x in d if x > 0), sum(1 for x in d if x < 0))


def determinant(L: LatticeSpace | Sequence[Sequence[int]]) -> int:
    if isinstance(L, LatticeSpace):
        return L._det
    return bareiss_determinant(L)


def is_even(L: LatticeSpace) -> bool:
    return all(L.gram[i][i] % 2 == 0 for i in range(L.rank))


def reflect_in_root(L: LatticeSpace, r: Sequence[int], x: Sequence[int]) -> Vector:
    """Reflection s_r(x) = x + <x, r> r in a root r of norm -2."""
    if inner_product(L, r, r) != -2:
        raise LatticeError(f"{tuple(r)} is not a root (norm {inner_product(L, r, r)})")
    c = inner_product(L, x, r)
    return tuple(xi + c * ri for xi, ri in zip(x, r))


def reflection_matrix(L: LatticeSpace, r: Sequence[int]) -> Matrix:
    """Matrix of s_r acting on column coordinate vectors: I + r (G r)^T."""
    if inner_product(L, r, r) != -2:
        raise LatticeError(f"{tuple(r)} is not a root")
    gr = L.dual_row(r)
    n = L.rank
    return tuple(tuple(int(i == j) + r[i] * gr[j] for j in range(n)) for i in range(n))


# --- integer row/column reduction -------------------------------------------

def column_echelon(rows: Sequence[Sequence[int]], ncols: int):
    """Unimodular column reduction.

    Returns ``(E, U, pivots)`` with ``A U = E``; ``pivots`` lists ``(row, col)``
    with ``E[row][col] > 0`` and zeros to the right of each pivot in its row.
    Columns ``len(pivots):`` of ``U`` form a saturated basis of the integer
    kernel of ``A``.
    """
    a = [list(r) for r in rows]
    u = [list(r) for r in identity(ncols)]

    def colop(j, k, q):  # col_j -= q * col_k
        for row in a:
            row[j] -= q * row[k]
        for row in u:
            row[j] -= q * row[k]

    def swap(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in u:
            row[j], row[k] = row[k], row[j]

    def negate(j):
        for row in a:
            row[j] = -row[j]
        for row in u:
            row[j] = -row[j]

    pivots = []
    c = 0
    for i in range(len(a)):
        if c >= ncols:
            break
        while True:
            nz = [j for j in range(c, ncols) if a[i][j] != 0]
            if not nz:
                break
            k = min(nz, key=lambda j: abs(a[i][j]))
            if k != c:
                swap(k, c)
            done = True
            for j in range(c + 1, ncols):
                if a[i][j]:
                    colop(j, c, a[i][j] // a[i][c])
                    if a[i][j]:
                        done = False
            if done:
                break
        if c < ncols and a[i][c] != 0:
            if a[i][c] < 0:
                negate(c)
            pivots.append((i, c))
            c += 1
    return a, u, pivots


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Saturated integral basis of {x in Z^n : A x = 0}."""
    _, u, piv = column_echelon(rows, ncols)
    r = len(piv)
    return [tuple(u[i][j] for i in range(ncols)) for j in range(r, ncols)]


def solve_integral(rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int):
    """One integer solution of ``A x = b`` plus a kernel basis, or None."""
    e, u, piv = column_echelon(rows, ncols)
    y = [0] * ncols
    pivot_of_row = dict(piv)
    for i in range(len(rows)):
        s = sum(e[i][j] * y[j] for j in range(ncols))
        if i in pivot_of_row:
            c = pivot_of_row[i]
            q, rem = divmod(rhs[i] - s, e[i][c])
            if rem:
                return None
            y[c] = q
        elif s != rhs[i]:
            return None
    x = tuple(sum(u[i][j] * y[j] for j in range(ncols)) for i in range(ncols))
    r = len(piv)
    kernel = [tuple(u[i][j] for i in range(ncols)) for j in range(r, ncols)]
    return x, kernel


def orthogonal_complement(L: LatticeSpace, v: Sequence[int]):
    """Saturated basis of v-perp and its induced Gram matrix.

    The Gram matrix is returned as a plain matrix: when v is isotropic the
    complement contains v and the induced form is degenerate.
    """
    v = as_vector(v)
    L._check(v)
    if not any(v):
        raise LatticeError("orthogonal complement of the zero vector")
    basis = integer_kernel([L.dual_row(v)], L.rank)
    gram = tuple(tuple(inner_product(L, b, c) for c in basis) for b in basis)
    return basis, gram


# --- LLL on a positive definite Gram matrix ---------------------------------

def lll_gram(q: Sequence[Sequence[int | Fraction]], delta: Fraction = Fraction(3, 4)):
    """LLL-reduce a positive definite Gram matrix.

    Returns the unimodular transform ``T`` (basis vectors as columns) so that
    ``T^T Q T`` is LLL-reduced.
    """
    n = len(q)
    g = [[Fraction(c) for c in row] for row in q]
    t = [[int(i == j) for j in range(n)] for i in range(n)]

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bn = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = g[i][j] - sum(mu[j][k] * mu[i][k] * bn[k] for k in range(j))
                mu[i][j] = s / bn[j]
            bn[i] = g[i][i] - sum(mu[i][k] ** 2 * bn[k] for k in range(i))
        return mu, bn

    def add(i, j, c):  # b_i -= c * b_j
        for row in t:
            row[i] -= c * row[j]
        for k in range(n):
            g[i][k] -= c * g[j][k]
        for k in range(n):
            g[k][i] -= c * g[k][j]

    def swap(i, j):
        for row in t:
            row[i], row[j] = row[j], row[i]
        g[i], g[j] = g[j], g[i]
        for row in g:
            row[i], row[j] = row[j], row[i]

    k = 1
    mu, bn = gso()
    while k < n:
        for j in range(k - 1, -1, -1):
            c = round(mu[k][j])
            if c:
                add(k, j, c)
                mu, bn = gso()
        if bn[k] >= (delta - mu[k][k - 1] ** 2) * bn[k - 1]:
            k += 1
        else:
            swap(k, k - 1)
            mu, bn = gso()
            k = max(k - 1, 1)
    return t
