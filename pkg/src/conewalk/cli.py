"""Command line front end.

Lattices are read from JSON descriptors::

    {"gram": [[0, 1, 1], [1, -2, 0], [1, 0, -2]],
     "labels": ["P", "C1", "C2"], "marking": [3, 1, 1], "canonical": [0, 0, 0]}

Wherever a descriptor file is expected, a registry name such as ``k3_rank3``
is accepted as well. Exit codes: 0 success, 1 verification mismatch,
2 input error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .cones import (
    NonPointed,
    RationalCone,
    chamber_walk,
    dual_cone,
    extremal_rays,
    sufficient_root_degree,
)
from .enumeration import ClassQuery, MarkedLattice, classes_of_norm, root_set
from .hyperviz import build_scene, render_scene
from .isometry import classify, make_isometry
from .lattice import LatticeError, LatticeSpace, determinant, is_even, signature
from .surfaces import (
    EXAMPLE_NAMES,
    FibrationData,
    check_nonarithmetic,
    example_registry,
    mordell_weil_rank,
)

JS_SAFE = 2 ** 53


class InputError(Exception):
    pass


# --- descriptors -----------------------------------------------------------------

def _int(x) -> int:
    if isinstance(x, bool):
        raise InputError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str) and re.fullmatch(r"-?\d+", x.strip()):
        return int(x)
    raise InputError(f"expected an integer, got {x!r}")


def encode_int(n: int):
    return str(n) if abs(n) > JS_SAFE else n


def _encode(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return encode_int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


def parse_descriptor(data: dict) -> dict:
    """Validate a descriptor; returns dict with LatticeSpace and optional vectors."""
    if not isinstance(data, dict) or "gram" not in data:
        raise InputError("descriptor must be an object with a 'gram' entry")
    gram = data["gram"]
    if not isinstance(gram, list) or not gram or not all(isinstance(r, list) for r in gram):
        raise InputError("'gram' must be a nonempty list of rows")
    gram = [[_int(c) for c in row] for row in gram]
    try:
        L = LatticeSpace(tuple(tuple(r) for r in gram), data.get("labels"))
    except LatticeError as exc:
        raise InputError(str(exc)) from None
    out = {"space": L, "marking": None, "canonical": None}
    for key in ("marking", "canonical"):
        if data.get(key) is not None:
            v = tuple(_int(c) for c in data[key])
            if len(v) != L.rank:
                raise InputError(f"'{key}' has length {len(v)}, expected rank {L.rank}")
            out[key] = v
    if out["marking"] is not None and L.norm(out["marking"]) <= 0:
        raise InputError("marking must have positive norm")
    return out


def descriptor_of(L: LatticeSpace, marking=None, canonical=None) -> dict:
    d = {"gram": [list(r) for r in L.gram]}
    if L.labels is not None:
        d["labels"] = list(L.labels)
    if marking is not None:
        d["marking"] = list(marking)
    if canonical is not None:
        d["canonical"] = list(canonical)
    return _encode(d)


def load(source: str) -> dict:
    path = Path(source)
    if not path.exists() and source in EXAMPLE_NAMES:
        S = example_registry(source).model
        return {"space": S.space, "marking": S.lattice.marking, "canonical": S.canonical_class}
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise InputError(f"no such descriptor file or example name: {source}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {source}: {exc.msg} (line {exc.lineno})") from None
    return parse_descriptor(data)


def _marked(desc: dict) -> MarkedLattice:
    if desc["marking"] is None:
        raise InputError("descriptor needs a 'marking' for this command")
    return MarkedLattice(desc["space"], desc["marking"])


def parse_vector(text: str) -> tuple[int, ...]:
    t = text.strip().strip("()[]")
    try:
        return tuple(int(c) for c in t.split(",") if c.strip())
    except ValueError:
        raise InputError(f"cannot parse vector {text!r}") from None


def parse_vectors(items: Sequence[str]) -> list[tuple[int, ...]]:
    out = []
    for item in items:
        for part in item.split(";"):
            if part.strip():
                out.append(parse_vector(part))
    return out


def _fmt(v) -> str:
    return "(" + ", ".join(str(c) for c in v) + ")"


# --- commands --------------------------------------------------------------------

def cmd_info(args):
    d = load(args.file)
    L = d["space"]
    sig = signature(L)
    res = {"rank": L.rank, "signature": [sig.positive, sig.negative],
           "determinant": determinant(L), "even": is_even(L),
           "descriptor": descriptor_of(L, d["marking"], d["canonical"])}
    if args.json:
        return res, 0
    lines = [f"rank: {L.rank}", f"signature: ({sig.positive}, {sig.negative})",
             f"determinant: {determinant(L)}", f"even: {str(is_even(L)).lower()}"]
    return lines, 0


def cmd_classes(args):
    d = load(args.file)
    M = _marked(d)
    cons = []
    for c in args.constraint or []:
        if "=" not in c:
            raise InputError(f"constraint {c!r} must look like vec=value")
        lhs, rhs = c.rsplit("=", 1)
        if lhs.strip() == "K":
            if d["canonical"] is None:
                raise InputError("constraint uses K but the descriptor has no 'canonical'")
            vec = d["canonical"]
        else:
            vec = parse_vector(lhs)
        if len(vec) != M.rank:
            raise InputError(f"constraint vector has length {len(vec)}, expected {M.rank}")
        cons.append((vec, _int(rhs)))
    if args.max_degree < 0:
        raise InputError("--max-degree must be nonnegative")
    found = classes_of_norm(M, ClassQuery(args.norm, args.max_degree, args.primitive, tuple(cons)))
    if args.json:
        return {"norm": args.norm, "max_degree": args.max_degree, "count": len(found),
                "classes": [list(v) for v in found]}, 0
    lines = [f"# {len(found)} classes of norm {args.norm} with 0 <= degree <= {args.max_degree}"]
    lines += [f"{M.degree(v)}\t{_fmt(v)}" for v in found]
    return lines, 0


def cmd_walk(args):
    d = load(args.file)
    M = _marked(d)
    x = parse_vector(args.vector)
    if len(x) != M.rank:
        raise InputError(f"vector has length {len(x)}, expected {M.rank}")
    rs = root_set(M, args.max_degree)
    if rs.marking_on_mirror:
        raise InputError(f"marking lies on the mirror of root {_fmt(rs.through_marking[0])}")
    res = chamber_walk(M, rs.roots, x)
    need = sufficient_root_degree(M, x)
    caveat = f"nef against roots of degree <= {args.max_degree}"
    exact = args.max_degree >= need
    if args.json:
        return {"image": list(res.image), "word": [list(r) for r in res.word],
                "length": res.length, "max_degree": args.max_degree,
                "sufficient_degree": need, "exact": exact, "caveat": caveat}, 0
    lines = [f"image: {_fmt(res.image)}", f"length: {res.length}",
             "word: " + " ".join(_fmt(r) for r in res.word), f"note: {caveat}",
             f"sufficient degree for an exact result: {need} "
             f"({'met' if exact else 'not met'})"]
    return lines, 0


def _cone(args):
    d = load(args.file)
    gens = parse_vectors(args.generators)
    L = d["space"]
    if not gens:
        raise InputError("no generators given")
    for g in gens:
        if len(g) != L.rank:
            raise InputError(f"generator {_fmt(g)} has length {len(g)}, expected {L.rank}")
        if not any(g):
            raise InputError("zero generator")
    return RationalCone(L, tuple(gens))


def cmd_dual(args):
    C = dual_cone(_cone(args))
    rays = [g for g in C.generators if g not in C.lineality
            and tuple(-c for c in g) not in C.lineality]
    if args.json:
        return {"rays": [list(g) for g in rays], "lineality": [list(v) for v in C.lineality]}, 0
    lines = [f"ray: {_fmt(g)}" for g in rays]
    lines += [f"lineality: {_fmt(v)}" for v in C.lineality]
    return lines, 0


def cmd_rays(args):
    res = extremal_rays(_cone(args))
    if isinstance(res, NonPointed):
        if args.json:
            return {"pointed": False, "lineality": [list(v) for v in res.lineality],
                    "rays": [list(v) for v in res.rays]}, 0
        return (["not pointed"] + [f"lineality: {_fmt(v)}" for v in res.lineality]
                + [f"ray: {_fmt(v)}" for v in res.rays]), 0
    if args.json:
        return {"pointed": True, "rays": [list(v) for v in res]}, 0
    return [f"ray: {_fmt(v)}" for v in res], 0


def cmd_classify(args):
    d = load(args.file)
    M = _marked(d)
    rows = parse_vectors([args.matrix])
    g = make_isometry(M.space, rows)
    kind = classify(M, g)
    cert = kind.certificate
    if args.json:
        return {"kind": kind.tag, "certificate": list(cert) if isinstance(cert, tuple) else cert}, 0
    if kind.tag == "elliptic":
        text = f"order {cert}"
    elif kind.tag == "parabolic":
        text = f"fixed isotropic ray {_fmt(cert)}"
    else:
        text = "non-cyclotomic factor " + _poly(cert)
    return [f"kind: {kind.tag}", f"certificate: {text}"], 0


def _poly(p) -> str:
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        coef = str(abs(c)) if (abs(c) != 1 or k == 0) else ""
        sign = "-" if c < 0 else "+"
        terms.append((sign, coef + ("*" if coef and mono else "") + mono))
    s = "".join(f" {sg} {t}" for sg, t in terms).strip()
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def cmd_mw_rank(args):
    profiles = [_int(m) for m in args.profiles.split(",") if m.strip()] if args.profiles else []
    r = mordell_weil_rank(args.rho, profiles)
    return ({"mw_rank": r}, 0) if args.json else ([str(r)], 0)


def cmd_nonarith(args):
    fib1 = FibrationData(reducible_fiber_profiles=() if args.fib1_irreducible else (2,))
    fib2 = FibrationData(mw_rank_hint=1 if args.fib2_mw_positive else 0)
    rep = check_nonarithmetic(args.rho, fib1, fib2, args.has_minus2)
    if args.json:
        return {"verdict": rep.verdict,
                "hypotheses": [{"name": n, "pass": ok} for n, ok in rep.checked_hypotheses],
                "explanation": rep.explanation}, 0
    lines = [f"verdict: {rep.verdict}"]
    lines += [f"{'pass' if ok else 'FAIL'}: {n}" for n, ok in rep.checked_hypotheses]
    lines.append(rep.explanation)
    return lines, 0


def cmd_example(args):
    if args.name not in EXAMPLE_NAMES:
        raise InputError(f"unknown example {args.name!r}; valid names: {', '.join(EXAMPLE_NAMES)}")
    ex = example_registry(args.name)
    S = ex.model
    desc = descriptor_of(S.space, S.lattice.marking, S.canonical_class)
    checks = ex.verify() if args.verify else []
    failed = any(not c.ok for c in checks)
    if args.json:
        res = {"name": ex.name, "kind": S.kind, "descriptor": desc}
        if args.verify:
            res["checks"] = [{"label": c.label, "expected": _encode(c.expected),
                              "actual": _encode(c.actual), "ok": c.ok} for c in checks]
        return res, int(failed)
    lines = [f"example: {ex.name} ({S.kind})", f"gram: {json.dumps(desc['gram'])}",
             f"marking: {_fmt(S.lattice.marking)}", f"canonical: {_fmt(S.canonical_class)}"]
    for c in checks:
        mark = "✓" if c.ok else f"✗ (expected {_show(c.expected)})"
        lines.append(f"{c.label}: {_show(c.actual)} {mark}")
    return lines, int(failed)


def _show(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, tuple) and all(isinstance(c, int) for c in v):
        return _fmt(v)
    if isinstance(v, (list, tuple)):
        return json.dumps(_encode(v))
    return str(v)


def cmd_render(args):
    d = load(args.file)
    M = _marked(d)
    if M.rank != 3:
        raise InputError("render supports rank-3 lattices only")
    extra = []
    for lab_vec in args.ray or []:
        label, _, vec = lab_vec.partition("=")
        extra.append((label, parse_vector(vec)))
    scene = build_scene(M, args.max_degree, extra)
    try:
        render_scene(scene, args.out)
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc.strerror}") from None
    if args.json:
        return {"out": str(args.out), "walls": len(scene.walls), "points": len(scene.rays)}, 0
    return [f"wrote {args.out}: {len(scene.walls)} walls, {len(scene.rays)} points"], 0


# --- parser ----------------------------------------------------------------------

_NEG = re.compile(r"^-\d[\d,;\s]*$")


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        self._negative_number_matcher = _NEG

    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    p = _Parser(prog="conewalk", description="Cone and lattice computations for surfaces.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("info", parents=[common], help="rank, signature, determinant, evenness")
    s.add_argument("file")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("classes", parents=[common], help="classes of given norm and bounded degree")
    s.add_argument("file")
    s.add_argument("--norm", type=int, required=True)
    s.add_argument("--max-degree", type=int, required=True)
    s.add_argument("--primitive", action="store_true")
    s.add_argument("--constraint", action="append", metavar="VEC=VAL",
                   help="extra pairing condition; VEC may be K for the canonical class")
    s.set_defaults(func=cmd_classes)

    s = sub.add_parser("walk", parents=[common], help="chamber walk towards the marking")
    s.add_argument("file")
    s.add_argument("--vector", required=True)
    s.add_argument("--max-degree", type=int, required=True)
    s.set_defaults(func=cmd_walk)

    for name, func, text in (("dual", cmd_dual, "dual cone"), ("rays", cmd_rays, "extremal rays")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("file")
        s.add_argument("--generators", nargs="+", required=True,
                       help="vectors separated by ';' or given as separate arguments")
        s.set_defaults(func=func)

    s = sub.add_parser("classify", parents=[common], help="elliptic / parabolic / hyperbolic")
    s.add_argument("file")
    s.add_argument("--matrix", required=True, help="rows separated by ';'")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("mw-rank", parents=[common], help="Shioda-Tate Mordell-Weil rank")
    s.add_argument("--rho", type=int, required=True)
    s.add_argument("--profiles", default="", help="component counts of reducible fibers")
    s.set_defaults(func=cmd_mw_rank)

    s = sub.add_parser("nonarith", parents=[common], help="non-arithmeticity hypothesis check")
    s.add_argument("--rho", type=int, required=True)
    s.add_argument("--fib1-irreducible", action="store_true")
    s.add_argument("--fib2-mw-positive", action="store_true")
    s.add_argument("--has-minus2", action="store_true")
    s.set_defaults(func=cmd_nonarith)

    s = sub.add_parser("example", parents=[common], help="registry of worked examples")
    s.add_argument("name")
    s.add_argument("--verify", action="store_true")
    s.set_defaults(func=cmd_example)

    s = sub.add_parser("render", parents=[common], help="SVG of walls in the Poincare disk")
    s.add_argument("file")
    s.add_argument("--max-degree", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--ray", action="append", metavar="LABEL=VEC", help="extra labelled class")
    s.set_defaults(func=cmd_render)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise InputError("missing subcommand")
        result, code = args.func(args)
    except (InputError, LatticeError, KeyError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"conewalk: error: {msg}", file=sys.stderr)
        return 2
    if isinstance(result, dict):
        print(json.dumps(_encode(result), sort_keys=True))
    else:
        print("\n".join(result))
    return code


if __name__ == "__main__":
    sys.exit(main())
