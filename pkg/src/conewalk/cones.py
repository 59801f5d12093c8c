"""Chamber walks and exact cone duality, built on positive-cone and nef tests.

Duality always uses the lattice form itself: on a surface divisors and
1-cycles live in the same space, so the dual of a cone C is
``{y : <y, g> >= 0 for every generator g}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .enumeration import MarkedLattice
from .lattice import (
    LatticeError,
    LatticeSpace,
    Vector,
    as_vector,
    dot,
    inner_product,
    is_primitive,
    primitive,
    reflect_in_root,
)


@dataclass(frozen=True)
class RationalCone:
    """Closed convex cone spanned by primitive integral generators.

    ``lineality`` is a basis of the largest linear subspace in the cone; each
    lineality vector ``l`` also appears in ``generators`` as the pair
    ``l, -l``. A cone is pointed exactly when ``lineality`` is empty.
    """

    ambient: LatticeSpace
    generators: tuple[Vector, ...]
    lineality: tuple[Vector, ...] = ()

    def __post_init__(self):
        gens = []
        seen = set()
        for g in self.generators:
            g = as_vector(g)
            self.ambient._check(g)
            if not any(g):
                raise LatticeError("cone generator is the zero vector")
            g = primitive(g)
            if g not in seen:
                seen.add(g)
                gens.append(g)
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "lineality", tuple(as_vector(v) for v in self.lineality))

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    def contains(self, x: Sequence[int]) -> bool:
        """Exact membership through the inequality description of the cone."""
        lin, normals = _double_description([self.ambient.dual_row(g) for g in self.generators],
                                           self.ambient.rank)
        # normals/lin are in "dual coordinates" y with <y, g> >= 0; x in C iff
        # <x, y> >= 0 for all dual rays and <x, l> = 0 for dual lineality.
        L = self.ambient
        return (all(inner_product(L, x, y) >= 0 for y in normals)
                and all(inner_product(L, x, l) == 0 for l in lin))


@dataclass(frozen=True)
class ChamberWalkResult:
    image: Vector
    word: tuple[Vector, ...]

    @property
    def length(self) -> int:
        return len(self.word)


@dataclass(frozen=True)
class NefCheck:
    nef: bool
    violator: Optional[Vector] = None

    def __bool__(self):
        return self.nef


def in_positive_cone(M: MarkedLattice, x: Sequence[int], strict: bool = False) -> bool:
    n = inner_product(M.space, x, x)
    d = M.degree(x)
    if strict:
        return n > 0 and d > 0
    return n >= 0 and d >= 0


def is_nef_against(x: Sequence[int], curve_classes: Iterable[Sequence[int]],
                   L: LatticeSpace) -> NefCheck:
    for c in curve_classes:
        if inner_product(L, x, c) < 0:
            return NefCheck(False, as_vector(c))
    return NefCheck(True)


def _steepest(L, roots, x):
    best = None
    for r in roots:
        p = inner_product(L, r, x)
        if p < 0 and (best is None or (p, r) < best):
            best = (p, r)
    return None if best is None else best[1]


def _first(L, roots, x):
    return next((r for r in roots if inner_product(L, r, x) < 0), None)


WALK_POLICIES = {"steepest": _steepest, "first": _first}


def chamber_walk(M: MarkedLattice, roots: Sequence[Sequence[int]], x: Sequence[int],
                 policy: str = "steepest") -> ChamberWalkResult:
    """Reflect ``x`` in roots it pairs negatively with until none is left.

    Every step lowers the positive integer ``<x, H>``, so the walk ends. With
    ``policy="steepest"`` the root of most negative pairing is used (ties go
    to the lexicographically smallest root); ``"first"`` takes the first
    violated root in list order.
    """
    L = M.space
    x = as_vector(x)
    if not in_positive_cone(M, x, strict=True):
        raise LatticeError(f"{x} is not in the open positive cone")
    roots = [as_vector(r) for r in roots]
    for r in roots:
        if inner_product(L, r, r) != -2:
            raise LatticeError(f"{r} is not a root")
        if M.degree(r) <= 0:
            raise LatticeError(f"root {r} has <r, H> <= 0; the marking is on or beyond its mirror")
    pick = WALK_POLICIES[policy]
    word = []
    while True:
        r = pick(L, roots, x)
        if r is None:
            return ChamberWalkResult(x, tuple(word))
        x = reflect_in_root(L, r, x)
        word.append(r)


def sufficient_root_degree(M: MarkedLattice, x: Sequence[int]) -> int:
    """Degree bound making a walk from ``x`` land in the true chamber of H.

    A wall separating ``x`` from ``H`` lies within hyperbolic distance
    ``dist(x, H)`` of ``H``, and a root wall at distance ``t`` from ``H`` has
    degree ``sqrt(2 H.H) sinh(t)``. Hence walls that can ever separate the
    walk from ``H`` have degree at most
    ``sqrt(2 ((x.H)^2 - x.x H.H) / x.x)``.
    """
    xx = inner_product(M.space, x, x)
    if xx <= 0 or M.degree(x) <= 0:
        raise LatticeError("bound needs x in the open positive cone")
    xh = M.degree(x)
    hh = inner_product(M.space, M.marking, M.marking)
    num = 2 * (xh * xh - xx * hh)
    return math.isqrt(num // xx)


# --- double description ------------------------------------------------------

def _prim(v):
    g = 0
    for c in v:
        g = math.gcd(g, c)
    return tuple(c // g for c in v) if g > 1 else tuple(v)


def _double_description(rows: Sequence[Sequence[int]], dim: int):
    """Generators of ``{y in Q^dim : a . y >= 0 for a in rows}``.

    Returns ``(lineality_basis, rays)`` with primitive integral vectors and
    the rays forming the minimal generating set modulo the lineality space.
    Constraints are inserted in the given order; adjacency uses the
    combinatorial test on tight-constraint sets (bitmasks).
    """
    lin = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[Vector] = []
    masks: list[int] = []
    for idx, a in enumerate(rows):
        a = tuple(a)
        bit = 1 << idx
        if not any(a):
            masks = [z | bit for z in masks]
            continue
        vals = [dot(a, l) for l in lin]
        k = next((i for i, v in enumerate(vals) if v != 0), None)
        if k is not None:
            l0 = lin[k] if vals[k] > 0 else tuple(-c for c in lin[k])
            al0 = abs(vals[k])
            lin = [_prim(tuple(al0 * c - v * c0 for c, c0 in zip(l, l0))) if v else l
                   for i, (l, v) in enumerate(zip(lin, vals)) if i != k]
            for j, r in enumerate(rays):
                ar = dot(a, r)
                if ar:
                    rays[j] = _prim(tuple(al0 * c - ar * c0 for c, c0 in zip(r, l0)))
                masks[j] |= bit
            # l0 was lineality, so it is tight on every earlier constraint
            rays.append(_prim(l0))
            masks.append(bit - 1)
            continue
        side = [dot(a, r) for r in rays]
        new_rays, new_masks = [], []
        for r, z, s in zip(rays, masks, side):
            if s >= 0:
                new_rays.append(r)
                new_masks.append(z | bit if s == 0 else z)
        pos = [i for i, s in enumerate(side) if s > 0]
        neg = [i for i, s in enumerate(side) if s < 0]
        for i in pos:
            for j in neg:
                common = masks[i] & masks[j]
                if any(z & common == common for t, z in enumerate(masks) if t != i and t != j):
                    continue
                sp, sn = side[i], side[j]
                new_rays.append(_prim(tuple(sp * cn - sn * cp for cp, cn in zip(rays[i], rays[j]))))
                new_masks.append(common | bit)
        rays, masks = new_rays, new_masks
    return lin, rays


def dual_cone(C: RationalCone) -> RationalCone:
    """``{y : <y, g> >= 0 for all generators g}`` by exact double description."""
    L = C.ambient
    lin, rays = _double_description([L.dual_row(g) for g in C.generators], L.rank)
    lin = [_orient(l) for l in lin]
    gens = tuple(sorted(set(rays))) + tuple(v for l in lin for v in (l, tuple(-c for c in l)))
    return RationalCone(L, gens, tuple(lin))


def _orient(v: Vector) -> Vector:
    for c in v:
        if c:
            return v if c > 0 else tuple(-x for x in v)
    return v


@dataclass(frozen=True)
class NonPointed:
    """Result variant for extremal rays of a cone containing a line."""

    lineality: tuple[Vector, ...]
    rays: tuple[Vector, ...]


def extremal_rays(C: RationalCone) -> tuple[Vector, ...] | NonPointed:
    """Minimal generating set of a pointed cone, in sorted order."""
    L = C.ambient
    dlin, drays = _double_description([L.dual_row(g) for g in C.generators], L.rank)
    rows = [L.dual_row(y) for y in drays]
    for l in dlin:
        row = L.dual_row(l)
        rows.append(row)
        rows.append(tuple(-c for c in row))
    lin, rays = _double_description(rows, L.rank)
    if lin:
        return NonPointed(tuple(_orient(l) for l in lin), tuple(sorted(rays)))
    return tuple(sorted(rays))


def cone_of(L: LatticeSpace, generators: Iterable[Sequence[int]]) -> RationalCone:
    return RationalCone(L, tuple(as_vector(g) for g in generators))


__all__ = [
    "RationalCone", "ChamberWalkResult", "NefCheck", "NonPointed", "in_positive_cone",
    "is_nef_against", "chamber_walk", "sufficient_root_degree", "dual_cone",
    "extremal_rays", "cone_of", "WALK_POLICIES", "is_primitive",
]
