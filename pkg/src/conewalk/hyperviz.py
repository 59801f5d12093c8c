"""Poincare disk pictures of rank-3 positive cones.

This is the only module that uses floating point. The frame is built once
by exact Gram-Schmidt starting from the marking, so the marking sits at the
centre of the disk, and only then converted to floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence

from .cones import in_positive_cone
from .enumeration import MarkedLattice, root_set
from .lattice import LatticeError, Vector, as_vector, inner_product, integer_kernel, primitive

DISK_TOL = 1e-9


@dataclass(frozen=True)
class Wall:
    root: Vector
    endpoints: tuple[tuple[float, float], tuple[float, float]]
    center: Optional[tuple[float, float]]  # None for a diameter
    radius: Optional[float]


@dataclass(frozen=True)
class DiskScene:
    walls: tuple[Wall, ...] = ()
    rays: tuple[tuple[str, tuple[float, float]], ...] = ()
    chamber_hint: Optional[tuple[tuple[float, float], ...]] = None

    def __post_init__(self):
        pts = [p for _, p in self.rays] + [q for w in self.walls for q in w.endpoints]
        pts += list(self.chamber_hint or ())
        for p in pts:
            if math.hypot(*p) > 1 + DISK_TOL:
                raise LatticeError(f"scene point {p} lies outside the closed unit disk")


def _frame(M: MarkedLattice):
    """Exact orthogonal basis (H, f1, f2) with <f_i, f_i> < 0."""
    if M.rank != 3:
        raise LatticeError("disk pictures need a rank-3 lattice")
    L = M.space
    basis = [tuple(Fraction(c) for c in M.marking)]
    for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        v = [Fraction(c) for c in e]
        for b in basis:
            c = _pair(L, v, b) / _pair(L, b, b)
            v = [x - c * y for x, y in zip(v, b)]
        if any(v) and _pair(L, v, v) != 0:
            basis.append(tuple(v))
        if len(basis) == 3:
            break
    return basis


def _pair(L, x, y) -> Fraction:
    g = L.gram
    return sum((Fraction(x[i]) * g[i][j] * y[j] for i in range(3) for j in range(3)), Fraction(0))


@dataclass
class _Projector:
    M: MarkedLattice
    frame: list = field(init=False)
    scales: list = field(init=False)

    def __post_init__(self):
        self.frame = _frame(self.M)
        self.scales = [math.sqrt(abs(float(_pair(self.M.space, b, b)))) for b in self.frame]

    def coords(self, x) -> tuple[float, float, float]:
        """Orthonormal coordinates X with x.x = X0^2 - X1^2 - X2^2."""
        L = self.M.space
        out = []
        for b, s in zip(self.frame, self.scales):
            out.append(float(_pair(L, x, b)) / s)
        # X_i = <x, b_i> / |b_i|, with <b_i, b_i> = -s^2 for i > 0
        return out[0], out[1], out[2]

    def point(self, x) -> tuple[float, float]:
        L = self.M.space
        n = inner_product(L, x, x)
        if not any(x) or not in_positive_cone(self.M, x):
            raise LatticeError(f"{tuple(x)} is not a nonzero class in the closed positive cone")
        X0, X1, X2 = self.coords(x)
        # divide by sqrt(x.x) (hyperboloid) then project from (-1, 0, 0)
        denom = X0 + math.sqrt(n)
        return X1 / denom, X2 / denom

    def wall(self, r) -> Wall:
        R0, R1, R2 = self.coords(r)
        # <x, r> = X0 R0 - X1 R1 - X2 R2; ideal points u satisfy u.(R1, R2) = R0
        rr = math.hypot(R1, R2)
        nx, ny = R1 / rr, R2 / rr
        c = R0 / rr
        s = math.sqrt(max(0.0, 1 - c * c))
        u = (c * nx - s * ny, c * ny + s * nx)
        v = (c * nx + s * ny, c * ny - s * nx)
        if abs(R0) < 1e-15 * rr:
            return Wall(tuple(r), (u, v), None, None)
        center = (R1 / R0, R2 / R0)
        radius = math.sqrt(max(0.0, (R1 * R1 + R2 * R2) / (R0 * R0) - 1))
        return Wall(tuple(r), (u, v), center, radius)


def disk_point(M: MarkedLattice, x: Sequence[int]) -> tuple[float, float]:
    return _Projector(M).point(as_vector(x))


def wall_geodesic(M: MarkedLattice, r: Sequence[int]) -> Wall:
    return _Projector(M).wall(as_vector(r))


def distance_to_wall(wall: Wall, p: tuple[float, float]) -> float:
    """Euclidean distance in the disk from p to the circle or line of the wall."""
    if wall.center is None:
        (ux, uy), _ = wall.endpoints
        return abs(p[0] * uy - p[1] * ux)
    return abs(math.hypot(p[0] - wall.center[0], p[1] - wall.center[1]) - wall.radius)


def _cone_vertex(M: MarkedLattice, r1, r2) -> Optional[Vector]:
    L = M.space
    k = integer_kernel([L.dual_row(r1), L.dual_row(r2)], 3)
    if len(k) != 1:
        return None
    v = primitive(k[0])
    if M.degree(v) < 0:
        v = tuple(-c for c in v)
    return v if in_positive_cone(M, v) and any(v) else None


def build_scene(M: MarkedLattice, max_degree: int, extra_rays: Sequence[tuple[str, Sequence[int]]] = ()) -> DiskScene:
    """Walls of all roots up to ``max_degree`` plus labelled points.

    Labelled points are the marking plus any ``extra_rays``. Every vertex where
    two walls meet inside the closed positive cone is labelled too. Points nef against all
    the roots outline ``chamber_hint``.
    """
    rs = root_set(M, max_degree)
    if rs.marking_on_mirror:
        raise LatticeError("marking lies on a mirror")
    proj = _Projector(M)
    walls = tuple(proj.wall(r) for r in rs.roots)
    L = M.space
    rays = [("H", proj.point(M.marking))]
    chamber = []
    for label, x in extra_rays:
        x = as_vector(x)
        rays.append((label, proj.point(x)))
        if all(inner_product(L, x, r) >= 0 for r in rs.roots):
            chamber.append(proj.point(x))
    vertices = []
    for r1, r2 in combinations(rs.roots, 2):
        v = _cone_vertex(M, r1, r2)
        if v is not None and v not in vertices:
            vertices.append(v)
    for v in sorted(vertices):
        rays.append((",".join(map(str, v)), proj.point(v)))
        if all(inner_product(L, v, r) >= 0 for r in rs.roots):
            chamber.append(proj.point(v))
    hint = None
    if len(chamber) >= 3:
        cx = sum(p[0] for p in chamber) / len(chamber)
        cy = sum(p[1] for p in chamber) / len(chamber)
        hint = tuple(sorted(chamber, key=lambda p: math.atan2(p[1] - cy, p[0] - cx)))
    return DiskScene(walls, tuple(rays), hint)


def _f(x: float) -> str:
    s = f"{x:.9f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def svg_document(scene: DiskScene) -> str:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'viewBox="-1.05 -1.05 2.1 2.1" width="600" height="600">',
    ]
    if scene.chamber_hint:
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in scene.chamber_hint)
        out.append(f'<polygon class="chamber" points="{pts}" fill="#dde8f6" stroke="none"/>')
    out.append('<circle class="boundary" cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="0.006"/>')
    for w in scene.walls:
        (ux, uy), (vx, vy) = w.endpoints
        label = ",".join(map(str, w.root))
        if w.center is None:
            d = f"M {_f(ux)} {_f(uy)} L {_f(vx)} {_f(vy)}"
        else:
            cx, cy = w.center
            cross = (ux - cx) * (vy - cy) - (uy - cy) * (vx - cx)
            sweep = 1 if cross > 0 else 0
            d = (f"M {_f(ux)} {_f(uy)} A {_f(w.radius)} {_f(w.radius)} 0 0 {sweep} "
                 f"{_f(vx)} {_f(vy)}")
        out.append(f'<path class="wall" data-root="{label}" d="{d}" fill="none" '
                   'stroke="#b03030" stroke-width="0.006"/>')
    for label, (x, y) in scene.rays:
        out.append(f'<circle class="ray" data-label="{label}" cx="{_f(x)}" cy="{_f(y)}" '
                   'r="0.012" fill="#203080"/>')
        out.append(f'<text x="{_f(x + 0.02)}" y="{_f(y - 0.02)}" font-size="0.045">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_scene(scene: DiskScene, path: str | Path) -> str:
    doc = svg_document(scene)
    Path(path).write_text(doc, encoding="utf-8")
    return doc
