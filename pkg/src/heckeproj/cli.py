"""heckeproj command line: verify, catalog, search, rmatrix, bounds.

stdout carries JSON only.  Exit codes: 0 pass, 1 fail, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields

import numpy as np

from . import catalog
from .braid import baxterize_check, build_R, relation_check, tl_relation_check
from .errors import HeckeProjError
from .frame import to_projection
from .hecke import (
    SOLUTION_TOL,
    TEMPERLEY_LIEB,
    TL_TOL,
    bounds_pass,
    check_bounds,
    classify,
    q_from_Q,
)
from .projection import EMBED_CAP, VALIDATE_TOL
from .search import SearchConfig, config_to_json, minimize
from .serialize import (
    MalformedInput,
    clean_floats,
    frame_from_json,
    frame_to_json,
    matrix_to_json,
    projection_from_json,
    projection_to_json,
    rmatrix_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
RELATION_TOL = 1e-9
CATALOG_NAMES = ("trivial", "n2r2", "n3r3", "n3r4", "tl-rank1", "ref-R")
RMATRIX_SOURCES = ("gl_q11", "free_fermion", "n2r2", "n3r3", "n3r4", "tl-rank1", "file")


def _emit(obj) -> None:
    json.dump(clean_floats(obj), sys.stdout, indent=2, allow_nan=False)
    sys.stdout.write("\n")


def _read_json(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON in {path}: {exc}") from exc


def _load_projection(d, validate_tol: float):
    if not isinstance(d, dict):
        raise MalformedInput("top-level JSON must be an object with 'mat' or 'mats'")
    # catalog output wraps the entity
    for key in ("frame", "projection"):
        if key in d and isinstance(d[key], dict):
            d = d[key]
            break
    if "mats" in d:
        return to_projection(frame_from_json(d)), "frame"
    if "mat" in d:
        return projection_from_json(d, tol=validate_tol), "projection"
    raise MalformedInput("input needs a 'mat' (projection) or 'mats' (frame) field")


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


# ---------------------------------------------------------------------------
# verbs


def run_verify(args) -> int:
    p, kind = _load_projection(_read_json(args.input), args.validate_tol)
    report = classify(p, solution_tol=args.tol, tl_tol=args.tl_tol)
    out = report.to_json()
    out["input_kind"] = kind
    out["tolerances"] = {"solution": args.tol, "tl": args.tl_tol, "validate": args.validate_tol}
    _emit(out)
    return EXIT_OK if report.is_solution else EXIT_FAIL


def _catalog_entry(args) -> catalog.CatalogEntry:
    name = args.name
    if name == "trivial":
        return catalog.trivial(args.n, args.which)
    if name == "n2r2":
        return catalog.n2r2_family(args.a, args.b, args.alpha, args.beta)
    if name == "n3r3":
        return catalog.n3r3(args.a, args.b, args.alpha, args.beta)
    if name == "n3r4":
        if args.z is None:
            raise MalformedInput("n3r4 needs --z z1 z2 z3 z4")
        return catalog.n3r4(*args.z)
    if name == "tl-rank1":
        if args.weights:
            return catalog.tl_rank1(args.n, args.weights)
        return catalog.tl_rank1_equal(args.n)
    raise MalformedInput(f"unknown catalog entry {name!r}")


def _reference_case(family: str, args):
    """(projection, q, reference matrix) for the two closed-form n = r = 2 families."""
    if family == "gl_q11":
        if args.b <= 0:
            raise MalformedInput("b: reference R needs b > 0")
        entry = catalog.gl_q11(args.b, args.beta)
        ref = catalog.reference_R("gl_q11", b=args.b, beta=args.beta)
        return entry.to_projection(), complex(args.b), ref
    q = 2.0 if args.q is None else args.q
    if q <= 0:
        raise MalformedInput("q: reference R needs q > 0")
    entry = catalog.free_fermion(catalog.free_fermion_a(q), args.alpha)
    ref = catalog.reference_R("free_fermion", q=q, alpha=args.alpha)
    return entry.to_projection(), complex(q), ref


def run_catalog(args) -> int:
    if args.name == "ref-R":
        p, q, ref = _reference_case(args.family, args)
        R = build_R(p, q)
        dev = float(np.max(np.abs(R.mat - ref)))
        _emit({
            "name": "ref-R",
            "family": args.family,
            "q": [q.real, q.imag],
            "mat": matrix_to_json(ref),
            "build_R_deviation": dev,
        })
        return EXIT_OK if dev < args.tol else EXIT_FAIL

    entry = _catalog_entry(args)
    p = entry.to_projection()
    report = classify(p)
    out = {
        "name": entry.name,
        "params": {k: (complex(v) if isinstance(v, complex) else v) for k, v in entry.params.items()},
        "expected": {"Q": entry.expected_Q, "k": entry.expected_k, "class": entry.expected_class},
        "report": report.to_json(),
    }
    if entry.frame is not None:
        out["frame"] = frame_to_json(entry.frame)
    else:
        out["projection"] = projection_to_json(p)
    ok = report.cls == entry.expected_class
    if ok and entry.is_solution and entry.expected_k is not None:
        ok = report.k == entry.expected_k
        if report.Q == report.Q:
            ok = ok and abs(report.Q - entry.expected_Q) <= args.tol * max(1.0, entry.expected_Q)
    out["matches_expected"] = ok
    _emit(out)
    return EXIT_OK if ok else EXIT_FAIL


def run_search(args) -> int:
    raw = _read_json(args.config)
    if not isinstance(raw, dict):
        raise MalformedInput("search config must be a JSON object")
    known = {f.name for f in fields(SearchConfig)}
    for key in raw:
        if key not in known:
            raise MalformedInput(f"{key}: unknown search config field")
    for key in ("n", "r"):
        if key not in raw:
            raise MalformedInput(f"{key}: required search config field is missing")
    if args.workers is not None:
        raw["workers"] = args.workers
    config = SearchConfig(**raw)
    result = minimize(config)
    out = result.to_json()
    out["config"] = config_to_json(config)
    _emit(out)
    return EXIT_OK if result.converged else EXIT_FAIL


def _rmatrix_source(args):
    src = args.source
    if src == "file":
        if args.input is None:
            raise MalformedInput("input: 'rmatrix file' needs --input PATH")
        return _load_projection(_read_json(args.input), VALIDATE_TOL)[0], None, None
    if src in ("gl_q11", "free_fermion"):
        return _reference_case(src, args)
    args.name = src
    return _catalog_entry(args).to_projection(), None, None


def run_rmatrix(args) -> int:
    if args.strands < 3:
        raise MalformedInput("strands: need at least 3")
    p, q, ref = _rmatrix_source(args)
    if p.n**args.strands > EMBED_CAP:
        raise MalformedInput(f"strands: n^strands = {p.n ** args.strands} exceeds {EMBED_CAP}")
    report = classify(p)
    if not report.is_solution or report.r in (0, p.n * p.n):
        _emit({"report": report.to_json(), "error": "projection is not a nontrivial solution"})
        return EXIT_FAIL
    if args.q is not None and args.source != "free_fermion":
        q = complex(args.q)
    if q is None:
        q = q_from_Q(report.Q)
    R = build_R(p, q)
    rel = relation_check(R, args.strands)
    tl = tl_relation_check(p, report.Q, args.strands) if report.cls == TEMPERLEY_LIEB else None

    grid = np.linspace(0.5, 2.0, args.grid)
    bax = max(baxterize_check(R, lam, mu) for lam in grid for mu in grid)
    ref_dev = None if ref is None else float(np.max(np.abs(R.mat - ref)))

    checks = list(rel) + [bax] + ([tl] if tl is not None else []) + ([ref_dev] if ref_dev is not None else [])
    ok = all(v < args.tol for v in checks)
    _emit({
        "R": rmatrix_to_json(R),
        "report": report.to_json(),
        "strands": args.strands,
        "residuals": rel._asdict(),
        "tl_residual": tl,
        "baxterize_max": bax,
        "baxterize_grid": grid.tolist(),
        "reference_deviation": ref_dev,
        "tol": args.tol,
        "ok": ok,
    })
    return EXIT_OK if ok else EXIT_FAIL


def run_bounds(args) -> int:
    if args.n < 2 or not 1 <= args.r <= args.n * args.n - 1 or args.k < 0 or args.Q <= 0:
        raise MalformedInput("bounds: need n >= 2, 1 <= r <= n^2 - 1, k >= 0, Q > 0")
    flags = check_bounds(args.n, args.r, args.k, args.Q, args.tl)
    ok = bounds_pass(flags)
    _emit({"n": args.n, "r": args.r, "k": args.k, "Q": args.Q, "is_tl": args.tl, "flags": flags, "pass": ok})
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def _add_family_params(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--n", type=int, default=2, help="local dimension (trivial, tl-rank1)")
    sp.add_argument("--which", choices=("zero", "identity"), default="identity")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--b", type=float, default=2.0)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--beta", type=float, default=0.0)
    sp.add_argument("--q", type=float, default=None, help="free_fermion deformation / R-matrix q")
    sp.add_argument("--z", type=_complex_arg, nargs=4, metavar="Z", help="n3r4 parameters")
    sp.add_argument("--weights", type=float, nargs="+", help="tl-rank1 weights")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckeproj", description="Verify and search projection solutions of the Hecke relations."
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("verify", help="classify a projection or frame JSON")
    sp.add_argument("input", help="JSON file, or '-' for stdin")
    sp.add_argument("--tol", type=float, default=SOLUTION_TOL, help="Hecke residual threshold")
    sp.add_argument("--tl-tol", type=float, default=TL_TOL)
    sp.add_argument("--validate-tol", type=float, default=VALIDATE_TOL)
    sp.set_defaults(func=run_verify)

    sp = sub.add_parser("catalog", help="emit a catalogue entry with its verification")
    sp.add_argument("name", choices=CATALOG_NAMES)
    sp.add_argument("--family", choices=("gl_q11", "free_fermion"), default="gl_q11")
    _add_family_params(sp)
    sp.add_argument("--tol", type=float, default=1e-9, help="relative Q tolerance / R deviation")
    sp.set_defaults(func=run_catalog)

    sp = sub.add_parser("search", help="multi-start minimisation from a config JSON")
    sp.add_argument("config", help="JSON file, or '-' for stdin")
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(func=run_search)

    sp = sub.add_parser("rmatrix", help="build R = qI - QP and check braid relations")
    sp.add_argument("source", choices=RMATRIX_SOURCES)
    sp.add_argument("--input", help="projection/frame JSON for source 'file'")
    _add_family_params(sp)
    sp.add_argument("--strands", type=int, default=3)
    sp.add_argument("--grid", type=int, default=5, help="points per axis of the spectral grid")
    sp.add_argument("--tol", type=float, default=RELATION_TOL)
    sp.set_defaults(func=run_rmatrix)

    sp = sub.add_parser("bounds", help="evaluate the parameter constraints")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--Q", type=float, required=True)
    sp.add_argument("--tl", action="store_true", help="treat as a Temperley-Lieb solution")
    sp.set_defaults(func=run_bounds)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HeckeProjError, ValueError, TypeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
