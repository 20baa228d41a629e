"""CSV/JSON serialization with fixed, reproducible number formatting.

JSON floats use Python's shortest round-trip repr; CSV floats use 17
significant digits in scientific notation.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import DomainError
from .scanner import CellResult, Classification, GridSpec, RegionMap
from .transcendental import ModelParams
from .wave import WaveProfile

PROFILE_HEADER = ("c", "p", "xi", "k", "theta", "t1", "A", "B", "gamma", "delta")
REGION_COLUMNS = ("c", "p", "count", "bound", "classification", "levels")


def fmt(x) -> str:
    """CSV number: ints verbatim, floats with 17 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.16e}"


def convert_xi(c: float, value: float, direction: str) -> float:
    """``xi = p c^4 / 4`` in either direction ("p->xi" or "xi->p")."""
    c4 = float(c) ** 4
    if not (0.0 < c < math.sqrt(2.0)):
        raise DomainError(f"c={c!r} outside (0, sqrt(2))")
    if direction in ("p->xi", "p2xi"):
        if not (0.0 < value < 1.0):
            raise DomainError(f"p={value!r} outside (0, 1)")
        return value * c4 / 4.0
    if direction in ("xi->p", "xi2p"):
        if not (0.0 < value < c4 / 4.0):
            raise DomainError(f"xi={value!r} outside (0, c^4/4)")
        return 4.0 * value / c4
    raise ValueError(f"unknown direction {direction!r}")


def to_jsonable(obj):
    """Recursively turn dataclasses, enums and numpy values into JSON types."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(payload) -> str:
    return json.dumps(to_jsonable(payload), indent=2) + "\n"


# -- wave profiles


def profile_header(profile: WaveProfile) -> dict[str, float]:
    prm = profile.params
    return {
        "c": prm.c, "p": prm.p, "xi": prm.xi, "k": profile.k, "theta": profile.theta,
        "t1": profile.t1, "A": profile.A, "B": profile.B,
        "gamma": profile.gamma, "delta": profile.delta,
    }


def profile_csv(profile: WaveProfile, n: int = 1001, window=None, extra: dict | None = None) -> str:
    """Records ``(t, z, zprime)`` preceded by ``#``-prefixed metadata lines."""
    t, z, dz = profile.samples(n, window)
    lines = [f"# {k}={fmt(v)}" for k, v in profile_header(profile).items()]
    for k, v in (extra or {}).items():
        lines.append(f"# {k}={v}")
    lines.append("t,z,zprime")
    lines.extend(f"{fmt(a)},{fmt(b)},{fmt(d)}" for a, b, d in zip(t, z, dz))
    return "\n".join(lines) + "\n"


def read_profile_csv(text: str) -> tuple[dict[str, str], np.ndarray]:
    meta, rows = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            meta[key] = val
        elif line and not line.startswith("t,"):
            rows.append([float(v) for v in line.split(",")])
    return meta, np.array(rows)


# -- region maps


def region_csv(region: RegionMap) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REGION_COLUMNS)
    for cell in region.iter_cells():
        writer.writerow(
            [fmt(cell.c), fmt(cell.p), cell.count, cell.bound, cell.classification.value,
             ";".join(str(k) for k in cell.levels)]
        )
    return buf.getvalue()


def grid_sidecar(spec: GridSpec, version: str) -> str:
    return dumps({"version": version, "grid": spec, "shape": list(spec.shape)})


def read_region(csv_text: str, sidecar_text: str) -> RegionMap:
    """Inverse of ``region_csv`` + ``grid_sidecar``."""
    spec = GridSpec(**json.loads(sidecar_text)["grid"])
    nc, npp = spec.shape
    rows = list(csv.DictReader(io.StringIO(csv_text)))
    if len(rows) != nc * npp:
        raise ValueError(f"expected {nc * npp} rows, got {len(rows)}")
    cells = []
    for i in range(nc):
        col = []
        for row in rows[i * npp : (i + 1) * npp]:
            levels = tuple(int(k) for k in row["levels"].split(";") if k)
            col.append(
                CellResult(
                    float(row["c"]), float(row["p"]), int(row["count"]), int(row["bound"]),
                    Classification(row["classification"]), levels,
                )
            )
        cells.append(col)
    return RegionMap(spec, cells)


def read_curve_csv(path: str | Path) -> list[tuple[float, float]]:
    """Two-column ``(c, value)`` file, e.g. an externally computed beta* curve."""
    pts = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace(";", ",").split(",")
        try:
            pts.append((float(parts[0]), float(parts[1])))
        except ValueError:
            continue  # header row
    return pts


def params_record(params: ModelParams) -> dict:
    return to_jsonable(params)
