"""Command-line front end.

Every ``verify`` subcommand, ``spectrum`` and ``poly xell --format json``
print one JSON report on stdout and a short summary on stderr.  Exit status:
0 all checks pass, 1 some check failed, 2 usage or parameter error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np
from gmpy2 import mpq

from . import __version__, checks, numerics, systems
from .checks import Check, fmt_q, run_tasks, to_rational
from .systems import ConstraintError, Params, SystemKind

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "inputs", "checks", "tool_version", "elapsed_ms"],
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "residual", "detail"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "skip"]},
                    "residual": {
                        "oneOf": [{"type": "number"}, {"enum": ["exact-zero", "not-computed"]}]
                    },
                    "detail": {"type": "string"},
                },
            },
        },
        "tool_version": {"type": "string"},
        "elapsed_ms": {"type": "integer", "minimum": 0},
        "data": {"type": "object"},
    },
}

SYSTEMS = [k.value for k in SystemKind]


class UsageError(Exception):
    pass


# ------------------------------------------------------------ arg types
def rational(text: str):
    try:
        return to_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def grid_spec(text: str) -> numerics.Grid:
    try:
        lo, hi, n = text.split(",")
        return numerics.Grid(float(lo), float(hi), int(n))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--grid expects lo,hi,N ({exc})") from None


def _common(p: argparse.ArgumentParser):
    p.add_argument("--jobs", type=int, default=None,
                   help="worker threads (default: $XELL_JOBS, else logical cores)")
    p.add_argument("--rng-seed", type=int, default=0, help="seed for parameter draws")


def _system_args(p: argparse.ArgumentParser, n: str | None = None):
    p.add_argument("--system", required=True, choices=SYSTEMS)
    p.add_argument("--ell", type=int, required=True)
    if n:
        p.add_argument(n, type=int, required=True)
    p.add_argument("--g", type=rational, required=True)
    p.add_argument("--h", type=rational, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xell", description="Exact and numerical checks for exceptional Laguerre and Jacobi polynomials.")
    parser.add_argument("--version", action="version", version=f"xell {__version__}")
    top = parser.add_subparsers(dest="command", required=True)

    verify = top.add_parser("verify", help="run verification checks")
    vsub = verify.add_subparsers(dest="what", required=True)

    p = vsub.add_parser("lemmas", help="the four linear Laguerre/Jacobi lemmas")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--family", choices=["laguerre", "jacobi", "all"], default="all")
    _common(p)

    p = vsub.add_parser("cubic", help="cubic identities in products of three polynomials")
    p.add_argument("--family", choices=["laguerre", "jacobi"], required=True)
    p.add_argument("--ell-max", type=int, required=True)
    p.add_argument("--mode", choices=["symbolic", "grid", "both"], default="symbolic")
    _common(p)

    p = vsub.add_parser("shape", help="shape invariance of the deformed system")
    _system_args(p)
    p.add_argument("--seeds", type=int, default=0, help="extra random admissible parameter draws")
    _common(p)

    p = vsub.add_parser("orthogonality", help="quadrature Gram matrix")
    _system_args(p, "--n-max")
    _common(p)

    p = vsub.add_parser("zeros", help="exact zero counts of P_{ell,n}")
    _system_args(p, "--n-max")
    _common(p)

    p = vsub.add_parser("ode", help="differential equation of xi_ell")
    _system_args(p)
    _common(p)

    p = vsub.add_parser("limit", help="Jacobi -> Laguerre limit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=rational, required=True)
    p.add_argument("--beta-start", type=rational, required=True)
    _common(p)

    p = vsub.add_parser("all", help="the acceptance suite")
    p.add_argument("--quick", action="store_true", help="reduced ranges")
    _common(p)

    poly = top.add_parser("poly", help="emit exact polynomials")
    psub = poly.add_subparsers(dest="what", required=True)
    p = psub.add_parser("xell", help="coefficients of P_{ell,n} in eta")
    _system_args(p, "--n")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    _common(p)

    p = top.add_parser("potential", help="x,U_ell(x) samples as CSV")
    _system_args(p)
    p.add_argument("--samples", type=int, required=True)
    _common(p)

    p = top.add_parser("spectrum", help="finite-difference levels vs closed form")
    _system_args(p)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--grid", type=grid_spec, default=None, help="lo,hi,N")
    _common(p)
    return parser


# ------------------------------------------------------------- helpers
def _jobs(args) -> int:
    if args.jobs is not None:
        jobs = args.jobs
    elif os.environ.get("XELL_JOBS"):
        try:
            jobs = int(os.environ["XELL_JOBS"])
        except ValueError:
            raise UsageError(f"XELL_JOBS must be an integer, got {os.environ['XELL_JOBS']!r}")
    else:
        jobs = os.cpu_count() or 1
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return jobs


def _system(args, n: int | None = None) -> tuple[SystemKind, Params]:
    kind = SystemKind.parse(args.system)
    if kind is not SystemKind.RADIAL and args.h is None:
        raise UsageError(f"--h is required for {kind.value}")
    if args.ell < 0:
        raise UsageError("--ell must be >= 0")
    params = Params.of(args.g, None if kind is SystemKind.RADIAL else args.h)
    systems.check_params(kind, params, args.ell, n if kind is SystemKind.HYP else None)
    return kind, params


def _inputs(args) -> dict:
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in ("command", "what"):
            continue
        if isinstance(val, numerics.Grid):
            val = f"{val.x_lo},{val.x_hi},{val.points}"
        elif val is not None and not isinstance(val, (bool, int, str, float)):
            val = fmt_q(val)
        out[key.replace("_", "-")] = val
    return out


def emit(command: str, inputs: dict, results: list[Check], started: float, data=None) -> int:
    report = {
        "command": command,
        "inputs": inputs,
        "checks": [c.to_json() for c in sorted(results, key=lambda c: c.name)],
        "tool_version": __version__,
        "elapsed_ms": int(round((time.perf_counter() - started) * 1000)),
    }
    if data is not None:
        report["data"] = data
    json.dump(report, sys.stdout, indent=2, allow_nan=False)
    sys.stdout.write("\n")
    failed = [c for c in results if c.status == "fail"]
    counts = {s: sum(c.status == s for c in results) for s in ("pass", "fail", "skip")}
    print(f"{command}: {counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped "
          f"in {report['elapsed_ms']} ms", file=sys.stderr)
    for c in failed:
        print(f"  FAIL {c.name}: {c.detail}", file=sys.stderr)
    return 1 if failed else 0


def _csv(header, rows):
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


# ------------------------------------------------------------ commands
def _verify(args, started) -> int:
    jobs = _jobs(args)
    what = args.what
    if getattr(args, "n_max", 0) < 0 or getattr(args, "ell_max", 0) < 0:
        raise UsageError("ranges must be non-negative")
    if what == "lemmas":
        tasks = checks.lemma_tasks(args.n_max, args.family)
    elif what == "cubic":
        tasks = checks.cubic_tasks(args.family, args.ell_max, args.mode)
    elif what == "shape":
        kind, params = _system(args)
        if args.ell < 1:
            raise UsageError("shape invariance needs --ell >= 1")
        extra = checks.draws(kind, args.seeds, args.rng_seed, args.ell) if args.seeds else []
        tasks = checks.shape_tasks(kind, args.ell, [params] + extra)
    elif what == "orthogonality":
        kind, params = _system(args, args.n_max)
        tasks = checks.orthogonality_tasks(kind, args.ell, args.n_max, params)
    elif what == "zeros":
        kind, params = _system(args, args.n_max)
        tasks = checks.zeros_tasks(kind, args.ell, args.n_max, params)
    elif what == "ode":
        kind, params = _system(args)
        tasks = checks.ode_tasks(kind, [args.ell], params)
    elif what == "limit":
        if args.beta_start <= 0 or args.n < 0:
            raise UsageError("--beta-start must be positive and --n >= 0")
        tasks = checks.limit_tasks(args.n, args.alpha, args.beta_start)
    else:
        return _verify_all(args, jobs, started)
    return emit(f"verify {what}", _inputs(args), run_tasks(tasks, jobs), started)


def _verify_all(args, jobs, started) -> int:
    results = []
    for crit in checks.CRITERIA:
        t0 = time.perf_counter()
        got = run_tasks(checks.acceptance_tasks(crit, args.quick, args.rng_seed), jobs)
        ok = all(c.passed for c in got)
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {crit.number:2d}: {crit.title} "
              f"({len(got)} checks, {time.perf_counter() - t0:.1f} s)", file=sys.stderr)
        results += got
    return emit("verify all", _inputs(args), results, started)


def _poly(args, started) -> int:
    if args.n < 0:
        raise UsageError("--n must be >= 0")
    kind, params = _system(args)
    p = systems.xell_poly(kind, args.ell, args.n, params)
    coeffs = [mpq(c) for c in p.poly.coeffs]
    if args.format == "csv":
        _csv(["power", "numerator", "denominator"],
             [(k, int(c.numerator), int(c.denominator)) for k, c in enumerate(coeffs)])
        print(f"poly xell: degree {p.degree} in eta", file=sys.stderr)
        return 0
    expected = args.ell + args.n
    deg_ok = p.degree == expected
    results = [Check("degree", "pass" if deg_ok else "fail", "exact-zero" if deg_ok else float(p.degree),
                     f"degree {p.degree}, expected ell + n = {expected}")]
    data = {"variable": "eta", "degree": p.degree, "coefficients": [fmt_q(c) for c in coeffs]}
    return emit("poly xell", _inputs(args), results, started, data)


def _potential(args, started) -> int:
    kind, params = _system(args)
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    xs = checks.interior_samples(kind, args.samples)
    if kind is SystemKind.RADIAL:
        xs = np.linspace(0, 6.0, args.samples + 2)[1:-1]
    us = systems.deformed_potential(kind, args.ell, params, xs)
    _csv(["x", "U"], [(repr(float(x)), repr(float(u))) for x, u in zip(xs, us)])
    print(f"potential: {args.samples} samples of U_{args.ell} for {kind.value}", file=sys.stderr)
    return 0


def _spectrum(args, started) -> int:
    if args.levels < 1:
        raise UsageError("--levels must be >= 1")
    kind, params = _system(args, args.levels - 1)
    grid = args.grid or numerics.default_grid(kind, args.ell, params, args.levels)
    try:
        vals = numerics.fd_spectrum(kind, args.ell, params, grid, args.levels)
    except numerics.GridTooCoarseError as exc:
        fail = Check(f"spectrum/{kind.value}/grid", "fail", "not-computed", str(exc))
        return emit("spectrum", _inputs(args), [fail], started)
    exact = numerics.closed_form_levels(kind, args.ell, params, args.levels)
    results = checks.spectrum_checks(kind, args.ell, params, vals)
    data = {
        "grid": {"x_lo": grid.x_lo, "x_hi": grid.x_hi, "points": grid.points},
        "levels": [{"n": n, "numeric": float(v), "closed_form": e}
                   for n, (v, e) in enumerate(zip(vals, exact))],
    }
    return emit("spectrum", _inputs(args), results, started, data)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    handler = {"verify": _verify, "poly": _poly, "potential": _potential, "spectrum": _spectrum}
    try:
        return handler[args.command](args, started)
    except (UsageError, ConstraintError) as exc:
        print(f"xell: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # remaining ValueErrors come from argument values the library rejects
        print(f"xell: error: {exc}", file=sys.stderr)
        return 2
