#!/usr/bin/env python3
"""Regenerate the figure set as SVG plus the CSV/JSON data behind each plot.

    python3 scripts/reproduce_figures.py --out figures/
"""

import argparse
import logging
from pathlib import Path

import numpy as np

from onetrough import (
    GridSpec,
    boundary_curves,
    build_wave,
    count_levels,
    make_params,
    scan,
    theta_min,
    theta_min_oracle,
    verify_wave,
)
from onetrough.export import dumps, grid_sidecar, profile_csv, region_csv
from onetrough.svg import PlotKind, PlotSpec, render, sample_L

log = logging.getLogger("figures")


def theta_min_figure(out: Path, n: int):
    cs = np.linspace(0.02, 1.40, n)
    ths = [theta_min(c).theta_min for c in cs]
    (out / "theta_min.svg").write_text(render(PlotSpec(PlotKind.THETA_MIN_CURVE), (cs, ths)))
    # oracle spot check on a sparse subset
    sub = cs[:: max(1, n // 10)]
    worst = max(abs(theta_min(c).theta_min - theta_min_oracle(c)) for c in sub)
    log.info("theta_min curve: %d points, oracle max diff %.2e", n, worst)


def region_figure(out: Path, spec: GridSpec, workers: int, name: str):
    region = scan(spec, workers=workers)
    (out / f"{name}.csv").write_text(region_csv(region))
    (out / f"{name}.csv.json").write_text(grid_sidecar(spec, "figures"))
    curves = boundary_curves(spec)
    (out / f"{name}.svg").write_text(render(PlotSpec(PlotKind.REGION_MAP), (region, curves)))
    (out / "bounds.svg").write_text(render(PlotSpec(PlotKind.BOUND_CURVES), curves))
    log.info("%s: shape %s, max count %d", name, spec.shape, region.counts().max())


def L_figures(out: Path):
    for tag, (c, p) in {"five": (0.61005, 0.00065), "zero": (0.99, 0.4)}.items():
        graph = sample_L(make_params(c, p), 600)
        (out / f"L_{tag}.svg").write_text(render(PlotSpec(PlotKind.L_VS_THETA), graph))
        log.info("L(theta) at c=%g p=%g written", c, p)


def wave_figures(out: Path, n: int):
    prm = make_params(0.61005, 0.00065)
    res = count_levels(prm)
    profiles = []
    summary = []
    for cand in res.candidates:
        prof = build_wave(prm, cand)
        rep = verify_wave(prof)
        profiles.append(prof)
        summary.append({"k": cand.k, "theta": cand.theta, "report": rep})
        (out / f"wave_k{cand.k}.csv").write_text(profile_csv(prof, n))
        (out / f"wave_k{cand.k}.svg").write_text(render(PlotSpec(PlotKind.WAVE_PROFILE), [prof]))
    (out / "waves.svg").write_text(render(PlotSpec(PlotKind.WAVE_PROFILE), profiles))
    (out / "waves.json").write_text(dumps(summary))
    log.info("waves: levels %s, all verified: %s", res.levels, all(s["report"].passed for s in summary))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("figures"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--full", action="store_true", help="use the default fine grid for the region map")
    ap.add_argument("--n", type=int, default=1001, help="samples per wave profile")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args.out.mkdir(parents=True, exist_ok=True)

    theta_min_figure(args.out, 200)
    spec = GridSpec() if args.full else GridSpec.from_counts(100, 100)
    region_figure(args.out, spec, args.workers, "region")
    L_figures(args.out)
    wave_figures(args.out, args.n)


if __name__ == "__main__":
    main()
