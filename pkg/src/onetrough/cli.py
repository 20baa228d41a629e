"""Command-line interface: ``python -m onetrough <subcommand> ...``.

Exit codes: 0 success, 2 invalid arguments, 3 domain error, 4 numerical
failure (including a failed wave verification).  Errors are reported on
stderr as a JSON record ``{code, message, context}``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .counting import count_levels, theorem_check
from .errors import DomainError, TroughError
from .export import (
    convert_xi,
    dumps,
    fmt,
    grid_sidecar,
    profile_csv,
    profile_header,
    read_region,
    region_csv,
)
from .scanner import GridSpec, audit_bounds, boundary_curves, scan
from .shooting import shoot
from .svg import PlotKind, PlotSpec, render, sample_L
from .transcendental import (
    C_MAX,
    C_MIN,
    P_MAX,
    P_MIN,
    admissible_window,
    eval_L,
    make_params,
    theta_min,
)
from .wave import build_wave, verify_wave

OUTPUT_DIR_ENV = "ONETROUGH_OUTPUT_DIR"
SUBCOMMANDS = ("theta-min", "eval-l", "count", "wave", "scan", "bounds", "verify")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_point(sp, need_p=True):
    sp.add_argument("--c", type=float, required=True, help="wave speed in (0, sqrt 2)")
    if need_p:
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--p", type=float, help="asymmetry ratio in (0, 1)")
        g.add_argument("--xi", type=float, help="b/a, converted via xi = p c^4 / 4")


def _add_output(sp, formats=("json", "csv", "svg"), default="json"):
    sp.add_argument("--format", choices=formats, default=default)
    sp.add_argument("--output", "-o", help="output file (default: stdout or $%s)" % OUTPUT_DIR_ENV)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="onetrough", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    sp = sub.add_parser("theta-min", help="theta_min(c), one value or a curve")
    sp.add_argument("--c", type=float, help="single wave speed; omit for a curve")
    sp.add_argument("--n", type=int, default=200, help="curve resolution")
    sp.add_argument("--oracle", action="store_true", help="also run the shooting oracle")
    _add_output(sp)

    sp = sub.add_parser("eval-l", help="counting function L on the admissible window")
    _add_point(sp)
    sp.add_argument("--theta", type=float, action="append", help="evaluation point (repeatable)")
    sp.add_argument("--n", type=int, default=400, help="samples per branch when --theta is absent")
    _add_output(sp)

    sp = sub.add_parser("count", help="number of even one-troughed waves at (c, p)")
    _add_point(sp)
    _add_output(sp, ("json", "csv"))

    sp = sub.add_parser("wave", help="explicit profile for level k")
    _add_point(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, default=1001, help="number of profile records")
    sp.add_argument("--t-min", type=float)
    sp.add_argument("--t-max", type=float)
    sp.add_argument("--a", type=float, default=1.0, help="stiffness for physical metadata")
    _add_output(sp, default="csv")

    sp = sub.add_parser("scan", help="region map over the (c, p) plane")
    d = GridSpec()
    sp.add_argument("--c-min", type=float, default=d.c_min)
    sp.add_argument("--c-max", type=float, default=d.c_max)
    sp.add_argument("--c-step", type=float, default=d.c_step)
    sp.add_argument("--p-min", type=float, default=d.p_min)
    sp.add_argument("--p-max", type=float, default=d.p_max)
    sp.add_argument("--p-step", type=float, default=d.p_step)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--from-csv", help="render an existing map (needs its .csv.json sidecar)")
    sp.add_argument("--overlay", action="append", default=[], help="(c, value) CSV curve to draw")
    sp.add_argument("--curves", action="store_true", help="draw boundary curves on the SVG")
    _add_output(sp, default="csv")

    sp = sub.add_parser("bounds", help="six-solution check and boundary curves")
    sp.add_argument("--n", type=int, default=1000, help="c grid size for sup L_s")
    sp.add_argument("--c-min", type=float, default=0.01)
    sp.add_argument("--c-max", type=float, default=1.40)
    sp.add_argument("--c-step", type=float, default=0.01, help="curve sampling step")
    sp.add_argument("--overlay", action="append", default=[])
    _add_output(sp)

    sp = sub.add_parser("verify", help="build and verify every wave at (c, p)")
    _add_point(sp)
    sp.add_argument("--k", type=int, action="append", help="restrict to these levels")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--n-samples", type=int, default=10_000)
    _add_output(sp, ("json", "csv"))
    return parser


# -- validation


def _check_c(c):
    if c is None or not (C_MIN <= c <= C_MAX):
        raise UsageError(f"--c={c} outside the admissible range [{C_MIN}, {C_MAX:.6f}] within (0, sqrt 2)")


def _resolve_p(args) -> float:
    if getattr(args, "xi", None) is not None:
        try:
            p = convert_xi(args.c, args.xi, "xi->p")
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
    else:
        p = args.p
    if not (P_MIN <= p <= P_MAX):
        raise UsageError(f"p={p} outside the admissible range [{P_MIN}, {P_MAX}] within (0, 1)")
    return p


def validate(args) -> None:
    """Reject out-of-domain numbers before any computation."""
    cmd = args.subcommand
    if cmd in ("eval-l", "count", "wave", "verify"):
        _check_c(args.c)
        args.p = _resolve_p(args)
    if cmd == "theta-min":
        if args.c is not None:
            _check_c(args.c)
        if args.n < 2:
            raise UsageError("--n must be >= 2")
    if cmd == "wave":
        if args.k < 1:
            raise UsageError("--k must be a positive integer")
        if args.a <= 0:
            raise UsageError("--a must be positive")
        if args.n < 2:
            raise UsageError("--n must be >= 2")
    if cmd == "scan" and not args.from_csv:
        try:
            GridSpec(args.c_min, args.c_max, args.c_step, args.p_min, args.p_max, args.p_step)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
    if cmd == "bounds":
        for c in (args.c_min, args.c_max):
            _check_c(c)
        if args.n < 0 or args.c_step <= 0:
            raise UsageError("--n must be >= 0 and --c-step > 0")
    for path in getattr(args, "overlay", []) or []:
        if not Path(path).exists():
            raise UsageError(f"overlay file {path} not found")


# -- output


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("output",)}


def _envelope(args, result) -> str:
    return dumps({"version": __version__, "config": _config(args), "result": result})


def _target(args) -> Path | None:
    if args.output:
        return Path(args.output)
    outdir = os.environ.get(OUTPUT_DIR_ENV)
    if outdir:
        return Path(outdir) / f"{args.subcommand}.{args.format}"
    return None


def _emit(args, text: str, stdout) -> Path | None:
    path = _target(args)
    if path is None:
        stdout.write(text)
        return None
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def _csv_rows(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) if not isinstance(v, str) else v for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def sidecar_path(csv_path) -> Path:
    """Grid metadata lives next to a region CSV as ``<name>.csv.json``."""
    return Path(str(csv_path) + ".json")


# -- subcommands


def cmd_theta_min(args, stdout):
    if args.c is not None:
        sol = theta_min(args.c)
        result = {"c": args.c, "theta_min": sol.theta_min, "t_star": sol.t_star, "residual": sol.residual}
        if args.oracle:
            sh = shoot(args.c)
            result["oracle_theta_min"] = sh.theta_min
            result["oracle_t_star"] = sh.t_star
        cs, ths = [args.c], [sol.theta_min]
    else:
        cs = list(np.linspace(C_MIN, 1.40, args.n))
        ths = [theta_min(c).theta_min for c in cs]
        result = {"c": cs, "theta_min": ths}
    if args.format == "json":
        return _envelope(args, result)
    if args.format == "csv":
        return _csv_rows(("c", "theta_min"), zip(cs, ths))
    return render(PlotSpec(PlotKind.THETA_MIN_CURVE), (cs, ths))


def cmd_eval_l(args, stdout):
    prm = make_params(args.c, args.p)
    if args.format == "svg":
        return render(PlotSpec(PlotKind.L_VS_THETA), sample_L(prm, args.n))
    if args.theta:
        rows = [(t, eval_L(prm, t)) for t in args.theta]
    else:
        graph = sample_L(prm, args.n)
        rows = [(t, v) for th, vals in graph.branches for t, v in zip(th, vals)]
    if args.format == "csv":
        return _csv_rows(("theta", "L"), rows)
    win = admissible_window(prm)
    return _envelope(
        args,
        {
            "params": prm,
            "window": win,
            "theta": [r[0] for r in rows],
            "L": [r[1] for r in rows],
        },
    )


def _count_payload(res):
    return {
        "params": res.params,
        "count": res.count,
        "levels": res.levels,
        "lemma_bound": res.lemma_bound,
        "window_empty": res.window_empty,
        "window": res.window,
        "candidates": list(res.candidates),
    }


def cmd_count(args, stdout):
    res = count_levels(make_params(args.c, args.p))
    if args.format == "csv":
        return _csv_rows(
            ("k", "theta", "branch", "residual"),
            [(cd.k, cd.theta, cd.branch, cd.residual) for cd in res.candidates],
        )
    return _envelope(args, _count_payload(res))


def _find(res, k):
    for cand in res.candidates:
        if cand.k == k:
            return cand
    raise DomainError(f"no even one-troughed wave with k={k}; available levels {res.levels}")


def cmd_wave(args, stdout):
    prm = make_params(args.c, args.p)
    res = count_levels(prm)
    prof = build_wave(prm, _find(res, args.k))
    report = verify_wave(prof)
    window = None
    if args.t_min is not None or args.t_max is not None:
        lo, hi = prof.window()
        window = (args.t_min if args.t_min is not None else lo, args.t_max if args.t_max is not None else hi)
    if args.format == "svg":
        plot = PlotSpec(PlotKind.WAVE_PROFILE, x_range=window)
        return render(plot, [prof])
    extra = {"a": fmt(args.a), "b": fmt(prm.xi * args.a), "speed": fmt(args.a ** 0.25 * prm.c),
             "verified": str(report.passed).lower(), "version": __version__}
    if args.format == "csv":
        return profile_csv(prof, args.n, window, extra)
    t, z, dz = prof.samples(args.n, window)
    return _envelope(
        args,
        {"header": profile_header(prof), "verification": report, "t": t, "z": z, "zprime": dz},
    )


def cmd_scan(args, stdout):
    if args.from_csv:
        csv_path = Path(args.from_csv)
        region = read_region(csv_path.read_text(), sidecar_path(csv_path).read_text())
    else:
        spec = GridSpec(args.c_min, args.c_max, args.c_step, args.p_min, args.p_max, args.p_step)
        region = scan(spec, workers=args.workers)
    if args.format == "svg":
        plot = PlotSpec(PlotKind.REGION_MAP, overlays=tuple(args.overlay))
        data = (region, boundary_curves(region.spec)) if args.curves else region
        return render(plot, data)
    if args.format == "csv":
        path = _target(args)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            sidecar_path(path).write_text(grid_sidecar(region.spec, __version__))
        return region_csv(region)
    counts = region.counts()
    return _envelope(
        args,
        {
            "grid": region.spec,
            "shape": list(region.spec.shape),
            "max_count": int(counts.max()),
            "violations": audit_bounds(region),
            "cells": [cell for cell in region.iter_cells()],
        },
    )


def cmd_bounds(args, stdout):
    grid = np.linspace(args.c_min, args.c_max, args.n) if args.n else []
    report = theorem_check(grid)
    spec = GridSpec(args.c_min, args.c_max, args.c_step, P_MIN, P_MAX, 0.5)
    curves = boundary_curves(spec)
    if args.format == "svg":
        return render(PlotSpec(PlotKind.BOUND_CURVES, overlays=tuple(args.overlay)), curves)
    if args.format == "csv":
        rows = [(name, c, p) for name, pts in curves.curves.items() for c, p in pts]
        return _csv_rows(("curve", "c", "p"), rows)
    return _envelope(
        args,
        {
            "max_L_sup": report.max_sup,
            "argmax_c": report.argmax_c,
            "passed": report.passed,
            "curves": curves.curves,
        },
    )


def cmd_verify(args, stdout):
    prm = make_params(args.c, args.p)
    res = count_levels(prm)
    cands = res.candidates if not args.k else [_find(res, k) for k in args.k]
    reports = [(cand, verify_wave(build_wave(prm, cand), args.tol, args.n_samples)) for cand in cands]
    args._failed = not all(r.passed for _, r in reports)
    if args.format == "csv":
        rows = [
            (cand.k, cand.theta, r.junction_residuals, r.ode_residual, r.trough_count,
             r.wiggle_count, r.decay_ok, r.passed)
            for cand, r in reports
        ]
        return _csv_rows(
            ("k", "theta", "junction_residual", "ode_residual", "trough_count",
             "wiggle_count", "decay_ok", "pass"),
            rows,
        )
    return _envelope(
        args,
        {"count": res.count, "reports": [{"k": cand.k, "theta": cand.theta, **_asdict(r)} for cand, r in reports]},
    )


def _asdict(r):
    from dataclasses import asdict

    return asdict(r)


HANDLERS = {
    "theta-min": cmd_theta_min,
    "eval-l": cmd_eval_l,
    "count": cmd_count,
    "wave": cmd_wave,
    "scan": cmd_scan,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
}


def _fail(code: int, message: str, context, stderr) -> int:
    stderr.write(json.dumps({"code": code, "message": message, "context": context}) + "\n")
    return code


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        validate(args)
    except UsageError as exc:
        return _fail(2, str(exc), {"argv": argv}, stderr)
    context = {"subcommand": args.subcommand, "argv": argv}
    try:
        text = HANDLERS[args.subcommand](args, stdout)
    except DomainError as exc:
        return _fail(3, str(exc), context, stderr)
    except (TroughError, ArithmeticError) as exc:
        return _fail(4, str(exc), context, stderr)
    _emit(args, text, stdout)
    if getattr(args, "_failed", False):
        return _fail(4, "wave verification failed", context, stderr)
    return 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
