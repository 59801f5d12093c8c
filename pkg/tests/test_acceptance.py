"""Exit criteria, one test each, with pinned tolerances and time limits.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; either
way one PASS/FAIL line per criterion is printed at the end.
"""
from __future__ import annotations

import contextlib
import io
import math
import random
import re
import time
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest
import sympy

import oracles
from _criteria import criterion
from conewalk import cli
from conewalk.cones import RationalCone, chamber_walk, dual_cone, extremal_rays, sufficient_root_degree
from conewalk.enumeration import minus_one_classes, root_set
from conewalk.isometry import classify, eichler_transvection, make_isometry, reflection
from conewalk.lattice import LatticeSpace, inner_product, is_even, reflect_in_root, signature
from conewalk.surfaces import (
    EXAMPLE_NAMES,
    HYPOTHESES,
    FibrationData,
    blowup_plane,
    check_nonarithmetic,
    example_registry,
    hesse_line_classes,
    mordell_weil_rank,
    verify_anticanonical_decomposition,
)

pytestmark = pytest.mark.acceptance

EXACT_DISK = 1e-9
ARC_TOL = 1e-6
PROBE_TOL = 1e-6


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli.main(list(argv))
    return code, out.getvalue(), err.getvalue()


def k3():
    return example_registry("k3_rank3").model.lattice


# --- 1 -------------------------------------------------------------------------

@criterion(1, "determinant certificate for ex63_k3")
def test_c01_determinant_certificate():
    t0 = time.perf_counter()
    code, out, _ = run_cli("example", "ex63_k3", "--verify")
    dt = time.perf_counter() - t0
    assert code == 0, out
    assert re.search(r"^determinant: -32 ✓$", out, re.M), out
    assert oracles.sympy_det(example_registry("ex63_k3").model.space.gram) == -32
    assert dt < 1.0, f"took {dt:.2f} s"
    return "determinant -32"


# --- 2 -------------------------------------------------------------------------

@criterion(2, "27 lines on the cubic surface")
def test_c02_twenty_seven_lines():
    S = blowup_plane(6)
    t0 = time.perf_counter()
    found = minus_one_classes(S.lattice, S.canonical_class, 1)
    dt = time.perf_counter() - t0
    oracle = oracles.box_scan(S.space.gram, S.lattice.marking, -1, 1, [(S.canonical_class, -1)])
    assert len(oracle) == 27
    assert sorted(found) == oracle
    assert dt < 5.0, f"took {dt:.2f} s"
    return "27 classes = box-scan oracle"


# --- 3 -------------------------------------------------------------------------

@criterion(3, "del Pezzo ladder")
def test_c03_del_pezzo_ladder():
    t0 = time.perf_counter()
    counts = {}
    for n, golden in ((7, 56), (8, 240)):
        S = blowup_plane(n)
        found = minus_one_classes(S.lattice, S.canonical_class, 1)
        oracle = oracles.blowup_classes(n, -1, -1, oracles.del_pezzo_a_range(n, -1, -1))
        assert len(oracle) == golden
        assert sorted(found) == oracle
        counts[n] = len(found)
    S = blowup_plane(9)
    ladder = []
    for bound in (3, 6, 9, 12):
        found = minus_one_classes(S.lattice, S.canonical_class, bound)
        # degree a + 1 for the marking (4, -1, ..., -1) on these classes
        oracle = [v for v in oracles.blowup_classes(9, -1, -1, range(-1, bound))
                  if 0 <= inner_product(S.space, v, S.lattice.marking) <= bound]
        assert sorted(found) == oracle
        ladder.append(len(found))
    dt = time.perf_counter() - t0
    assert all(a < b for a, b in zip(ladder, ladder[1:])), ladder
    assert dt < 60.0, f"took {dt:.2f} s"
    return f"n=7: {counts[7]}, n=8: {counts[8]}, n=9 ladder {ladder}"


# --- 4 -------------------------------------------------------------------------

@criterion(4, "signature and evenness of registry lattices")
def test_c04_signature_evenness():
    t0 = time.perf_counter()
    for name in EXAMPLE_NAMES:
        S = example_registry(name).model
        L = S.space
        assert tuple(signature(L)) == (1, L.rank - 1), name
        assert oracles.eigen_signature(L.gram) == (1, L.rank - 1), name
        if S.kind == "k3":
            assert is_even(L), name
    dt = time.perf_counter() - t0
    assert dt < 1.0, f"took {dt:.2f} s"
    return f"{len(EXAMPLE_NAMES)} lattices"


# --- 5 and 6 -------------------------------------------------------------------

WALK_INPUTS = 1000
WALK_SEED = 20240611
# Inputs are kept when the root degree needed for an exact walk is at most
# this; all roots up to it are enumerated once.
WALK_ROOT_DEGREE = 200


def walk_inputs():
    M = k3()
    L = M.space
    gens = root_set(M, 9).roots
    rng = random.Random(WALK_SEED)
    xs = []
    while len(xs) < WALK_INPUTS:
        x = M.marking
        for _ in range(rng.randint(1, 6)):
            x = reflect_in_root(L, rng.choice(gens), x)
        if sufficient_root_degree(M, x) <= WALK_ROOT_DEGREE:
            xs.append(x)
    return xs


@pytest.fixture(scope="module")
def walk_suite():
    t0 = time.perf_counter()
    M = k3()
    xs = walk_inputs()
    roots = root_set(M, WALK_ROOT_DEGREE).roots
    steep = [chamber_walk(M, roots, x, "steepest") for x in xs]
    return M, xs, roots, steep, time.perf_counter() - t0


@criterion(5, "chamber-walk soundness")
def test_c05_chamber_walk(walk_suite):
    M, xs, roots, results, setup = walk_suite
    L = M.space
    t0 = time.perf_counter()
    moved = 0
    for x, res in zip(xs, results):
        assert sufficient_root_degree(M, x) <= WALK_ROOT_DEGREE
        y = x
        for r in res.word:
            z = reflect_in_root(L, r, y)
            assert inner_product(L, z, z) == inner_product(L, y, y)
            assert M.degree(z) < M.degree(y)
            y = z
        assert y == res.image
        assert all(inner_product(L, res.image, r) >= 0 for r in roots)
        assert res.image == M.marking, (x, res.image)
        moved += x != M.marking
    dt = setup + time.perf_counter() - t0
    assert dt < 30.0, f"took {dt:.2f} s"
    return (f"{len(xs)} inputs ({moved} distinct from H), {len(roots)} roots, all return H, "
            f"{dt:.2f} s with setup")


@criterion(6, "walk policy independence")
def test_c06_policy_independence(walk_suite):
    M, xs, roots, steep, _ = walk_suite
    first = [chamber_walk(M, roots, x, "first") for x in xs]
    assert [a.image for a in steep] == [b.image for b in first]
    differ = sum(a.word != b.word for a, b in zip(steep, first))
    return f"{len(xs)} identical images, {differ} with different words"


# --- 7 -------------------------------------------------------------------------

CONE_LATTICES = (
    ((1, 0), (0, -1)),
    ((0, 1), (1, 0)),
    ((2, 1), (1, -3)),
    ((0, 1, 1), (1, -2, 0), (1, 0, -2)),
    ((1, 0, 0), (0, -1, 0), (0, 0, -1)),
    ((0, 1, 1), (1, 0, 1), (1, 1, 0)),
    ((2, 1, 0), (1, 2, 1), (0, 1, 3)),
    ((0, 2, 1, 1), (2, 0, 1, 1), (1, 1, -2, 0), (1, 1, 0, -2)),
    ((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1)),
    ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)),
)


def random_cone(rng):
    gram = rng.choice(CONE_LATTICES)
    n = len(gram)
    while True:
        f = [rng.randint(-2, 2) for _ in range(n)]
        if any(f):
            break
    gens = []
    while len(gens) < n + rng.randint(0, 3):
        g = tuple(rng.randint(-3, 3) for _ in range(n))
        if sum(a * b for a, b in zip(f, g)) > 0:
            gens.append(g)
    if sympy.Matrix(gens).rank() < n:
        return random_cone(rng)
    return gram, gens


def _prim(v):
    g = math.gcd(*v)
    return tuple(c // g for c in v)


@criterion(7, "duality involution")
def test_c07_duality():
    rng = random.Random(7)
    cones = [random_cone(rng) for _ in range(200)]
    t0 = time.perf_counter()
    results = []
    for gram, gens in cones:
        C = RationalCone(LatticeSpace(gram), tuple(gens))
        D = dual_cone(C)
        DD = dual_cone(D)
        results.append((D, DD, extremal_rays(C)))
    dt = time.perf_counter() - t0
    for (gram, gens), (D, DD, ext) in zip(cones, results):
        assert D.is_pointed and DD.is_pointed
        assert sorted(D.generators) == oracles.brute_force_dual_rays(gram, gens)
        assert sorted(DD.generators) == oracles.brute_force_extremal(gram, gens)
        assert sorted(DD.generators) == list(ext)
    S = blowup_plane(1)
    curves = RationalCone(S.space, ((0, 1), (1, -1)))
    rays = extremal_rays(curves)
    assert list(rays) == [(0, 1), (1, -1)]
    nef = dual_cone(curves)
    H, E = (1, 0), (0, 1)
    assert sorted(nef.generators) == sorted([H, (H[0] - E[0], H[1] - E[1])])
    assert dt < 30.0, f"took {dt:.2f} s"
    return "200 random cones agree with the facet oracle; blowup1 has 2 rays, nef {H, H-E}"


# --- 8 -------------------------------------------------------------------------

@criterion(8, "isometry trichotomy")
def test_c08_trichotomy():
    t0 = time.perf_counter()
    M = k3()
    L = M.space
    ident = make_isometry(L, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert (classify(M, ident).tag, classify(M, ident).certificate) == ("elliptic", 1)
    for r in root_set(M, 50).roots:
        kind = classify(M, reflection(L, r))
        assert (kind.tag, kind.certificate) == ("elliptic", 2), r
        assert abs(oracles.spectral_radius(reflection(L, r).matrix) - 1) < PROBE_TOL
    eich = eichler_transvection(L, (1, 0, 0), (0, 1, -1))
    kind = classify(M, eich)
    assert (kind.tag, kind.certificate) == ("parabolic", (1, 0, 0))
    assert abs(oracles.spectral_radius(eich.matrix) - 1) < PROBE_TOL
    assert abs(oracles.spectral_radius(ident.matrix) - 1) < PROBE_TOL
    g = reflection(L, (4, 2, -1)) @ reflection(L, (0, 0, 1))
    kind = classify(M, g)
    assert kind.tag == "hyperbolic"
    cert = kind.certificate
    assert cert == (1, -34, 1)
    lam = oracles.largest_real_root(cert)
    assert oracles.spectral_radius(g.matrix) > 1 + PROBE_TOL
    assert abs(oracles.spectral_radius(g.matrix) - lam) < PROBE_TOL * lam
    assert abs(lam - (17 + 12 * math.sqrt(2))) < PROBE_TOL
    dt = time.perf_counter() - t0
    assert dt < 5.0, f"took {dt:.2f} s"
    return f"hyperbolic certificate x^2 - 34x + 1, spectral radius {lam:.6f}"


# --- 9 -------------------------------------------------------------------------

@criterion(9, "Shioda-Tate ranks")
def test_c09_shioda_tate():
    t0 = time.perf_counter()
    code, out, _ = run_cli("mw-rank", "--rho", "3")
    assert code == 0 and out.strip() == "1"
    for rho in range(2, 14):
        assert mordell_weil_rank(rho, []) == rho - 2
    assert mordell_weil_rank(10, [2, 3]) == 10 - 2 - (1 + 2) == 5
    code, out, _ = run_cli("mw-rank", "--rho", "10", "--profiles", "2,3")
    assert code == 0 and out.strip() == "5"
    dt = time.perf_counter() - t0
    assert dt < 1.0, f"took {dt:.2f} s"
    return ""


# --- 10 ------------------------------------------------------------------------

@criterion(10, "non-arithmeticity hypothesis checker")
def test_c10_nonarith():
    t0 = time.perf_counter()
    L = example_registry("ex63_k3").model.space
    f1 = FibrationData((1, 0, 0, 0))
    f2 = FibrationData((0, 1, 0, 0))
    rho = L.rank
    assert rho == 4
    rep = check_nonarithmetic(rho, f1, f2, True)
    assert rep.verdict == "criteria_met" and rep.failed == []
    assert "the corollary's hypotheses hold" in rep.explanation
    negations = {
        HYPOTHESES[0]: (3, f1, f2, True),
        HYPOTHESES[1]: (rho, FibrationData((1, 0, 0, 0), (2,)), f2, True),
        HYPOTHESES[2]: (rho, f1, FibrationData((0, 1, 0, 0), (3,)), True),
        HYPOTHESES[3]: (rho, f1, f2, False),
    }
    for name, args in negations.items():
        rep = check_nonarithmetic(*args)
        assert rep.verdict == "inconclusive", name
        assert rep.failed == [name]
        assert name in rep.explanation
    dt = time.perf_counter() - t0
    assert dt < 1.0, f"took {dt:.2f} s"
    return "criteria_met, and each single negation is inconclusive"


# --- 11 ------------------------------------------------------------------------

@criterion(11, "Hesse identity")
def test_c11_hesse():
    t0 = time.perf_counter()
    S = example_registry("hesse12").model
    L = S.space
    lines = hesse_line_classes()
    assert len(lines) == 9
    for i, a in enumerate(lines):
        for j, b in enumerate(lines):
            assert inner_product(L, a, b) == (-3 if i == j else 0)
    third = Fraction(1, 3)
    assert verify_anticanonical_decomposition(S, [(v, third) for v in lines])
    assert oracles.frac_sum([(v, third) for v in lines]) == list(S.anticanonical)
    dt = time.perf_counter() - t0
    assert dt < 1.0, f"took {dt:.2f} s"
    return "sum (1/3) L_i = -K, L_i^2 = -3, pairwise 0"


# --- 12 ------------------------------------------------------------------------

ARC = re.compile(r"M (\S+) (\S+) A (\S+) \S+ 0 0 ([01]) (\S+) (\S+)$")


def arc_center(x1, y1, r, sweep, x2, y2):
    """Centre of an SVG arc with large-arc flag 0 and equal radii."""
    mx, my = (x1 - x2) / 2, (y1 - y2) / 2
    d2 = mx * mx + my * my
    coef = math.sqrt(max(0.0, (r * r - d2) / d2))
    if sweep == 0:  # equal flags take the negative root
        coef = -coef
    return coef * my + (x1 + x2) / 2, -coef * mx + (y1 + y2) / 2


def on_drawn_arc(p, x1, y1, x2, y2, cx, cy, sweep):
    a1 = math.atan2(y1 - cy, x1 - cx)
    a2 = math.atan2(y2 - cy, x2 - cx)
    ap = math.atan2(p[1] - cy, p[0] - cx)
    span = (a2 - a1) % (2 * math.pi) if sweep else (a1 - a2) % (2 * math.pi)
    off = (ap - a1) % (2 * math.pi) if sweep else (a1 - ap) % (2 * math.pi)
    return off <= span + 1e-9


def orthogonal_points(M, r, count=3, box=6):
    """Small primitive classes in the open positive cone orthogonal to r."""
    L = M.space
    pts = []
    rng = range(-box, box + 1)
    for v in ((a, b, c) for a in rng for b in rng for c in rng):
        if (any(v) and math.gcd(*v) == 1 and inner_product(L, v, r) == 0
                and inner_product(L, v, v) > 0 and M.degree(v) > 0):
            pts.append(v)
    pts.sort(key=lambda v: (M.degree(v), v))
    return pts[:count]


@criterion(12, "Poincare disk figure")
def test_c12_figure(tmp_path):
    M = k3()
    roots = root_set(M, 6).roots
    extra = ["P=1,0,0"]
    for r in roots:
        extra += [f"{','.join(map(str, v))}={','.join(map(str, v))}" for v in orthogonal_points(M, r)]
    out = tmp_path / "k3.svg"
    args = ["render", "k3_rank3", "--max-degree", "6", "--out", str(out)]
    for e in extra:
        args += ["--ray", e]
    t0 = time.perf_counter()
    code, _, err = run_cli(*args)
    dt = time.perf_counter() - t0
    assert code == 0, err
    tree = ET.parse(out)
    ns = "{http://www.w3.org/2000/svg}"
    assert tree.getroot().tag == ns + "svg"
    points = {}
    for c in tree.getroot().iter(ns + "circle"):
        if c.get("class") == "ray":
            points[c.get("data-label")] = (float(c.get("cx")), float(c.get("cy")))
    assert abs(math.hypot(*points["P"]) - 1) < EXACT_DISK
    walls = [p for p in tree.getroot().iter(ns + "path") if p.get("class") == "wall"]
    assert sorted(tuple(map(int, w.get("data-root").split(","))) for w in walls) == sorted(roots)
    checked = 0
    for w in walls:
        r = tuple(map(int, w.get("data-root").split(",")))
        m = ARC.match(w.get("d"))
        assert m, w.get("d")
        x1, y1, rad, sweep, x2, y2 = (float(m.group(1)), float(m.group(2)), float(m.group(3)),
                                       int(m.group(4)), float(m.group(5)), float(m.group(6)))
        assert abs(math.hypot(x1, y1) - 1) < ARC_TOL and abs(math.hypot(x2, y2) - 1) < ARC_TOL
        cx, cy = arc_center(x1, y1, rad, sweep, x2, y2)
        ortho = [lab for lab in points if lab not in ("H", "P")
                 and inner_product(M.space, tuple(map(int, lab.split(","))), r) == 0]
        assert len(ortho) >= 2, r
        for lab in ortho:
            p = points[lab]
            assert abs(math.hypot(p[0] - cx, p[1] - cy) - rad) < ARC_TOL, (r, lab)
            assert on_drawn_arc(p, x1, y1, x2, y2, cx, cy, sweep), (r, lab)
            checked += 1
    assert dt < 5.0, f"took {dt:.2f} s"
    return f"{len(walls)} walls, {checked} orthogonal points on their arcs"


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
