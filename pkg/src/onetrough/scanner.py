"""Grid scan of the (c, p) plane: counts, lemma bounds and region boundaries."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .counting import count_levels, lemma_bound, p0, p_threshold
from .errors import DomainError, TroughError
from .transcendental import (
    C_MAX,
    C_MIN,
    P_MAX,
    P_MIN,
    ModelParams,
    make_params,
    theta_discontinuities,
    theta_min,
)


class Classification(str, enum.Enum):
    EMPTY_WINDOW = "EMPTY_WINDOW"
    ZERO = "ZERO"
    N_SOLUTIONS = "N_SOLUTIONS"
    FAILED = "FAILED"


def _nodes(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


@dataclass(frozen=True)
class GridSpec:
    c_min: float = 0.02
    c_max: float = 1.40
    c_step: float = 0.005
    p_min: float = 0.002
    p_max: float = 0.998
    p_step: float = 0.002

    def __post_init__(self):
        if self.c_step <= 0 or self.p_step <= 0:
            raise DomainError("grid steps must be positive")
        if not (C_MIN <= self.c_min <= self.c_max <= C_MAX):
            raise DomainError(f"c range [{self.c_min}, {self.c_max}] outside guarded domain")
        if not (P_MIN <= self.p_min <= self.p_max <= P_MAX):
            raise DomainError(f"p range [{self.p_min}, {self.p_max}] outside guarded domain")

    @classmethod
    def from_counts(cls, nc: int, np_: int, c_range=(0.02, 1.40), p_range=(0.005, 0.995)):
        """Grid with ``nc`` x ``np_`` nodes spanning the given closed ranges."""
        c_step = (c_range[1] - c_range[0]) / max(nc - 1, 1)
        p_step = (p_range[1] - p_range[0]) / max(np_ - 1, 1)
        return cls(c_range[0], c_range[1], c_step, p_range[0], p_range[1], p_step)

    @classmethod
    def coarse(cls):
        return cls(0.05, 1.40, 0.05, 0.02, 0.98, 0.02)

    def c_values(self) -> np.ndarray:
        return _nodes(self.c_min, self.c_max, self.c_step)

    def p_values(self) -> np.ndarray:
        return _nodes(self.p_min, self.p_max, self.p_step)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.c_values()), len(self.p_values())


@dataclass(frozen=True)
class CellResult:
    c: float
    p: float
    count: int
    bound: int
    classification: Classification
    levels: tuple[int, ...] = ()
    error: str | None = None


@dataclass
class RegionMap:
    spec: GridSpec
    cells: list[list[CellResult]]  # cells[i][j] at (c_i, p_j)

    def counts(self) -> np.ndarray:
        """Count matrix indexed [c, p]; failed cells are -1."""
        out = np.full(self.spec.shape, -1, dtype=int)
        for i, col in enumerate(self.cells):
            for j, cell in enumerate(col):
                if cell.classification is not Classification.FAILED:
                    out[i, j] = cell.count
        return out

    def iter_cells(self):
        for col in self.cells:
            yield from col


def classify_cell(params: ModelParams, tm=None) -> CellResult:
    try:
        res = count_levels(params, tm)
    except TroughError as exc:
        return CellResult(
            params.c, params.p, -1, lemma_bound(params), Classification.FAILED, (), str(exc)
        )
    if res.window_empty:
        cls = Classification.EMPTY_WINDOW
    elif res.count == 0:
        cls = Classification.ZERO
    else:
        cls = Classification.N_SOLUTIONS
    return CellResult(params.c, params.p, res.count, res.lemma_bound, cls, tuple(res.levels))


def scan_column(c: float, ps) -> list[CellResult]:
    """All cells of one grid column; theta_min(c) is solved once and reused."""
    try:
        tm = theta_min(c)
    except TroughError as exc:
        return [
            CellResult(c, p, -1, -1, Classification.FAILED, (), str(exc)) for p in ps
        ]
    return [classify_cell(make_params(c, p), tm) for p in ps]


def scan(spec: GridSpec, workers: int = 1) -> RegionMap:
    """Classify every grid node; with ``workers > 1`` columns run in a process pool."""
    cs = [float(c) for c in spec.c_values()]
    ps = [float(p) for p in spec.p_values()]
    if workers > 1 and len(cs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(scan_column, cs, [ps] * len(cs)))
    else:
        cells = [scan_column(c, ps) for c in cs]
    return RegionMap(spec, cells)


def audit_bounds(region: RegionMap) -> list[CellResult]:
    """Cells whose count exceeds the lemma bound or six; expected empty."""
    return [
        cell
        for cell in region.iter_cells()
        if cell.classification is not Classification.FAILED
        and (cell.count > cell.bound or cell.count > 6)
    ]


@dataclass
class CurveSet:
    curves: dict[str, list[tuple[float, float]]] = field(default_factory=dict)


def _bisect(f, lo: float, hi: float, iters: int = 200) -> float:
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _locus(c: float, target: float, which: int) -> float | None:
    """p in the guarded range with ``theta_which(c, p) = target``, if any."""
    lo = P_MIN
    if which == 0:
        # theta1 is negative (and increasing in p) only above p0
        lo = max(P_MIN, p0(c) + 1e-12)
        if lo >= P_MAX:
            return None

    def g(p):
        return theta_discontinuities(make_params(c, p))[which] - target

    glo, ghi = g(lo), g(P_MAX)
    if (glo < 0) == (ghi < 0):
        return None
    return _bisect(g, lo, P_MAX)


def boundary_curves(spec: GridSpec, ks=range(2, 7)) -> CurveSet:
    """Sampled curves: p0, the p_k strip levels, theta_min = theta1 and theta_min = theta2."""
    cs = [float(c) for c in spec.c_values()]
    out = CurveSet()
    out.curves["p0"] = [(c, p0(c)) for c in cs if 0.0 < p0(c) < 1.0]
    for k in ks:
        out.curves[f"p{k}"] = [(spec.c_min, p_threshold(k)), (spec.c_max, p_threshold(k))]
    split, empty = [], []
    for c in cs:
        tm = theta_min(c).theta_min
        p1 = _locus(c, tm, 0)
        if p1 is not None:
            split.append((c, p1))
        p2 = _locus(c, tm, 1)
        if p2 is not None:
            empty.append((c, p2))
    out.curves["theta_min=theta1"] = split
    out.curves["theta_min=theta2"] = empty
    return out
