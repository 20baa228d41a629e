#!/usr/bin/env python3
"""Scan a (c, p) rectangle, audit the lemma bounds and tabulate the count histogram.

    python3 scripts/scan_plane.py --grid coarse
    python3 scripts/scan_plane.py --grid default --workers 8 --out scan/
"""

import argparse
import collections
import time
from pathlib import Path

from onetrough import GridSpec, audit_bounds, p0, scan
from onetrough.export import grid_sidecar, region_csv

GRIDS = {
    "coarse": GridSpec.coarse,
    "default": GridSpec,
    "100x100": lambda: GridSpec.from_counts(100, 100),
    # five-solution cells only show up for p below about 1e-3
    "small-p": lambda: GridSpec(0.02, 1.40, 0.01, 0.0001, 0.005, 0.0001),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", choices=sorted(GRIDS), default="coarse")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, help="directory for region CSV + sidecar")
    args = ap.parse_args()

    spec = GRIDS[args.grid]()
    t0 = time.perf_counter()
    region = scan(spec, workers=args.workers)
    dt = time.perf_counter() - t0

    hist = collections.Counter(cell.count for cell in region.iter_cells())
    kinds = collections.Counter(cell.classification.value for cell in region.iter_cells())
    strip = [c for c in region.iter_cells() if c.p > 0.64 and c.p > p0(c.c)]
    print(f"grid {args.grid}: {spec.shape[0]} x {spec.shape[1]} cells in {dt:.2f}s")
    print("count histogram:", dict(sorted(hist.items())))
    print("classifications:", dict(sorted(kinds.items())))
    print("bound violations:", len(audit_bounds(region)))
    print(f"p > 0.64, p > p0 strip: {len(strip)} cells, nonzero {sum(c.count != 0 for c in strip)}")
    top = max(region.iter_cells(), key=lambda c: c.count)
    print(f"max count {top.count} first at c={top.c:.4f} p={top.p:.5f} levels={list(top.levels)}")

    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / f"{args.grid}.csv").write_text(region_csv(region))
        (args.out / f"{args.grid}.csv.json").write_text(grid_sidecar(spec, "scan_plane"))


if __name__ == "__main__":
    main()
