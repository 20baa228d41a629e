"""Native SVG rendering of the L graphs, region maps, profiles and curves."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from html import escape

import numpy as np

from .counting import p0
from .errors import DiscontinuityError
from .scanner import Classification, CurveSet, RegionMap
from .transcendental import ModelParams, ThetaWindow, admissible_window, eval_L
from .wave import WaveProfile

# counts 0..6
PALETTE = ("#f7f7f7", "#c6dbef", "#6baed6", "#2171b5", "#74c476", "#fd8d3c", "#a50f15")
EMPTY_COLOR = "#ff9f1c"
FAILED_COLOR = "#808080"
LINE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf")


class PlotKind(str, enum.Enum):
    L_VS_THETA = "L_vs_theta"
    REGION_MAP = "region_map"
    WAVE_PROFILE = "wave_profile"
    THETA_MIN_CURVE = "theta_min_curve"
    BOUND_CURVES = "bound_curves"


@dataclass(frozen=True)
class PlotSpec:
    kind: PlotKind
    x_range: tuple[float, float] | None = None
    y_range: tuple[float, float] | None = None
    overlays: tuple[str, ...] = ()
    title: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", PlotKind(self.kind))
        for rng in (self.x_range, self.y_range):
            if rng is not None and not (
                math.isfinite(rng[0]) and math.isfinite(rng[1]) and rng[0] < rng[1]
            ):
                raise ValueError(f"axis range {rng} must be finite and ordered")


@dataclass
class LGraph:
    """Samples of L on each continuity branch of the window."""

    params: ModelParams
    window: ThetaWindow
    branches: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)


def sample_L(params: ModelParams, n: int = 400) -> LGraph:
    window = admissible_window(params)
    graph = LGraph(params, window)
    for a, b in window.branches:
        # open interval: stay a hair away from the poles
        eps = 1e-9 * max(1.0, abs(b - a))
        th = np.linspace(a + eps, b - eps, n)
        vals = []
        for t in th:
            try:
                vals.append(eval_L(params, t))
            except DiscontinuityError:
                vals.append(np.nan)
        graph.branches.append((th, np.array(vals)))
    return graph


def _n(x: float) -> str:
    return f"{x:.2f}"


class Canvas:
    """Minimal SVG writer with a single data-to-pixel mapping."""

    def __init__(self, width=640, height=420, margin=(60, 20, 30, 50)):
        self.width, self.height = width, height
        self.left, self.right, self.top, self.bottom = margin
        self.parts: list[str] = []
        self.xr = (0.0, 1.0)
        self.yr = (0.0, 1.0)

    def set_ranges(self, xr, yr):
        self.xr = (float(xr[0]), float(xr[1]))
        self.yr = (float(yr[0]), float(yr[1]))

    def px(self, x):
        w = self.width - self.left - self.right
        return self.left + (x - self.xr[0]) / (self.xr[1] - self.xr[0]) * w

    def py(self, y):
        h = self.height - self.top - self.bottom
        return self.top + (self.yr[1] - y) / (self.yr[1] - self.yr[0]) * h

    def add(self, s: str):
        self.parts.append(s)

    def rect(self, x0, y0, x1, y1, fill):
        ax, bx = sorted((self.px(x0), self.px(x1)))
        ay, by = sorted((self.py(y0), self.py(y1)))
        self.add(
            f'<rect x="{_n(ax)}" y="{_n(ay)}" width="{_n(bx - ax)}" height="{_n(by - ay)}" '
            f'fill="{fill}" stroke="none"/>'
        )

    def line(self, x0, y0, x1, y1, stroke="#000", width=1.0, dash=None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.add(
            f'<line x1="{_n(self.px(x0))}" y1="{_n(self.py(y0))}" x2="{_n(self.px(x1))}" '
            f'y2="{_n(self.py(y1))}" stroke="{stroke}" stroke-width="{width}"{d}/>'
        )

    def polyline(self, xs, ys, stroke="#000", width=1.5, dash=None):
        """Draw finite runs of ``(xs, ys)``; NaNs break the line."""
        run = []
        for x, y in zip(xs, ys):
            if math.isfinite(x) and math.isfinite(y):
                run.append(f"{_n(self.px(x))},{_n(self.py(y))}")
            elif run:
                self._emit(run, stroke, width, dash)
                run = []
        if run:
            self._emit(run, stroke, width, dash)

    def _emit(self, pts, stroke, width, dash):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.add(
            f'<polyline points="{" ".join(pts)}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width}"{d}/>'
        )

    def text(self, x, y, s, size=11, anchor="middle", raw=False):
        xx, yy = (x, y) if raw else (self.px(x), self.py(y))
        self.add(
            f'<text x="{_n(xx)}" y="{_n(yy)}" font-size="{size}" font-family="sans-serif" '
            f'text-anchor="{anchor}">{escape(s)}</text>'
        )

    def axes(self, xlabel="", ylabel="", title="", nticks=5):
        x0, x1 = self.xr
        y0, y1 = self.yr
        self.line(x0, y0, x1, y0)
        self.line(x0, y0, x0, y1)
        for v in _ticks(x0, x1, nticks):
            self.line(v, y0, v, y0 - 0.015 * (y1 - y0))
            self.text(self.px(v), self.py(y0) + 14, _label(v), size=10, raw=True)
        for v in _ticks(y0, y1, nticks):
            self.line(x0, v, x0 + 0.012 * (x1 - x0), v)
            self.text(self.px(x0) - 5, self.py(v) + 4, _label(v), size=10, anchor="end", raw=True)
        if xlabel:
            self.text(self.width / 2, self.height - 8, xlabel, raw=True)
        if ylabel:
            self.text(14, self.height / 2, ylabel, raw=True)
        if title:
            self.text(self.width / 2, 14, title, size=12, raw=True)

    def document(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">'
        )
        bg = f'<rect x="0" y="0" width="{self.width}" height="{self.height}" fill="#ffffff"/>'
        return "\n".join([head, bg, *self.parts, "</svg>"]) + "\n"


def _ticks(lo, hi, n):
    span = hi - lo
    raw = span / max(n, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step - 1e-9) * step
    out = []
    v = start
    while v <= hi + 1e-9 * span:
        out.append(0.0 if abs(v) < 1e-12 * span else v)
        v += step
    return out


def _label(v):
    return f"{v:.4g}"


def _pad(lo, hi, frac=0.05):
    if hi == lo:
        return lo - 1.0, hi + 1.0
    d = (hi - lo) * frac
    return lo - d, hi + d


# -- individual plots


def _render_L(plot: PlotSpec, graph: LGraph) -> str:
    cv = Canvas()
    w = graph.window
    ys = np.concatenate([v for _, v in graph.branches]) if graph.branches else np.array([0.0, 1.0])
    ys = ys[np.isfinite(ys)]
    xr = plot.x_range or _pad(w.theta_min, w.theta2, 0.02)
    yr = plot.y_range or (min(0.0, float(ys.min())), math.ceil(float(ys.max())) + 0.5)
    cv.set_ranges(xr, yr)
    for k in range(max(1, math.ceil(yr[0])), math.floor(yr[1]) + 1):
        cv.line(xr[0], k, xr[1], k, stroke="#bbbbbb", width=0.8)
    for th, label in ((w.theta1, "theta1"), (w.theta2, "theta2"), (w.theta_min, "theta_min")):
        if xr[0] <= th <= xr[1]:
            cv.line(th, yr[0], th, yr[1], stroke="#888888", width=0.8, dash="4,3")
            cv.text(th, yr[1] - 0.03 * (yr[1] - yr[0]), label, size=9)
    for th, vals in graph.branches:
        cv.polyline(th, vals, stroke=LINE_COLORS[0])
    prm = graph.params
    title = plot.title or f"L(theta), c={prm.c:g}, p={prm.p:g}"
    cv.axes("theta", "L", title)
    return cv.document()


def _legend(cv: Canvas, entries, x, y):
    for i, (color, label) in enumerate(entries):
        yy = y + 16 * i
        cv.add(f'<rect x="{_n(x)}" y="{_n(yy)}" width="12" height="12" fill="{color}" stroke="#333"/>')
        cv.text(x + 16, yy + 10, label, size=10, anchor="start", raw=True)


def _overlay_curves(cv: Canvas, plot: PlotSpec):
    from .export import read_curve_csv

    for i, path in enumerate(plot.overlays):
        pts = read_curve_csv(path)
        if pts:
            xs, ys = zip(*pts)
            cv.polyline(xs, ys, stroke="#ff7f0e", width=1.5, dash="6,3")


def _draw_curveset(cv: Canvas, curves: CurveSet):
    styles = {
        "p0": ("#555555", None),
        "theta_min=theta1": ("#000000", None),
        "theta_min=theta2": ("#ff9f1c", None),
    }
    for name, pts in curves.curves.items():
        if not pts:
            continue
        color, dash = styles.get(name, ("#999999", "3,3"))
        xs, ys = zip(*pts)
        cv.polyline(xs, ys, stroke=color, width=1.2, dash=dash)
        cv.text(xs[-1], ys[-1], name, size=9, anchor="end")


def _render_region(plot: PlotSpec, region: RegionMap, curves: CurveSet | None = None) -> str:
    cv = Canvas(width=760, height=480, margin=(60, 140, 30, 50))
    spec = region.spec
    xr = plot.x_range or (spec.c_min, spec.c_max + spec.c_step)
    yr = plot.y_range or (spec.p_min, spec.p_max + spec.p_step)
    cv.set_ranges(xr, yr)
    for cell in region.iter_cells():
        if cell.classification is Classification.FAILED:
            color = FAILED_COLOR
        elif cell.classification is Classification.EMPTY_WINDOW:
            color = EMPTY_COLOR
        else:
            color = PALETTE[min(cell.count, 6)]
        # lower-left node convention
        cv.rect(cell.c, cell.p, cell.c + spec.c_step, cell.p + spec.p_step, color)
    if curves is not None:
        _draw_curveset(cv, curves)
    _overlay_curves(cv, plot)
    cv.axes("c", "p", plot.title or "number of even one-troughed waves")
    entries = [(PALETTE[k], f"{k} solutions") for k in range(7)]
    entries += [(EMPTY_COLOR, "empty window"), (FAILED_COLOR, "failed")]
    _legend(cv, entries, cv.width - cv.right + 12, cv.top + 10)
    return cv.document()


def _render_profiles(plot: PlotSpec, profiles) -> str:
    profiles = list(profiles)
    panel_h = 220
    cv = Canvas(width=640, height=panel_h * len(profiles))
    for i, prof in enumerate(profiles):
        cv.top = i * panel_h + 24
        cv.bottom = cv.height - (i + 1) * panel_h + 30
        lo, hi = plot.x_range or prof.window()
        t = np.linspace(lo, hi, 2001)
        z = prof(t)
        yr = plot.y_range or _pad(float(z.min()), max(float(z.max()), 0.0))
        cv.set_ranges((lo, hi), yr)
        cv.line(lo, -1.0, hi, -1.0, stroke="#bbbbbb", width=0.8, dash="4,3")
        cv.polyline(t, z, stroke=LINE_COLORS[i % len(LINE_COLORS)])
        x0, y0 = cv.xr[0], cv.yr[0]
        cv.line(cv.xr[0], y0, cv.xr[1], y0)
        cv.line(x0, cv.yr[0], x0, cv.yr[1])
        for v in _ticks(*cv.xr, 6):
            cv.text(cv.px(v), cv.py(y0) + 14, _label(v), size=10, raw=True)
        for v in _ticks(*cv.yr, 4):
            cv.text(cv.px(x0) - 5, cv.py(v) + 4, _label(v), size=10, anchor="end", raw=True)
        cv.text(cv.width / 2, cv.top - 8, f"k={prof.k}, theta={prof.theta:.6g}", size=11, raw=True)
    return cv.document()


def _render_theta_min(plot: PlotSpec, data) -> str:
    cs, ths = (np.asarray(v, dtype=float) for v in data)
    cv = Canvas()
    cv.set_ranges(plot.x_range or (0.0, math.sqrt(2.0)), plot.y_range or _pad(float(ths.min()), 0.0))
    cv.polyline(cs, ths, stroke=LINE_COLORS[0])
    cv.axes("c", "theta_min", plot.title or "theta_min(c)")
    return cv.document()


def _render_bounds(plot: PlotSpec, curves: CurveSet) -> str:
    cv = Canvas(width=640, height=420)
    cv.set_ranges(plot.x_range or (0.0, math.sqrt(2.0)), plot.y_range or (0.0, 1.0))
    cs = np.linspace(1.0, math.sqrt(2.0), 200)
    cv.polyline(cs, [p0(c) for c in cs], stroke="#555555")
    _draw_curveset(cv, curves)
    _overlay_curves(cv, plot)
    cv.axes("c", "p", plot.title or "strip thresholds and window boundaries")
    return cv.document()


def render(plot: PlotSpec, data) -> str:
    """Standalone SVG document for ``plot`` built from ``data``.

    Data per kind: LGraph, RegionMap or (RegionMap, CurveSet), a sequence of
    WaveProfile, a ``(c_values, theta_min_values)`` pair, or a CurveSet.
    """
    kind = plot.kind
    if kind is PlotKind.L_VS_THETA and isinstance(data, LGraph):
        return _render_L(plot, data)
    if kind is PlotKind.REGION_MAP:
        if isinstance(data, RegionMap):
            return _render_region(plot, data)
        if isinstance(data, tuple) and len(data) == 2 and isinstance(data[0], RegionMap):
            return _render_region(plot, data[0], data[1])
    if kind is PlotKind.WAVE_PROFILE:
        if isinstance(data, WaveProfile):
            data = [data]
        if isinstance(data, (list, tuple)) and data and all(isinstance(d, WaveProfile) for d in data):
            return _render_profiles(plot, data)
    if kind is PlotKind.THETA_MIN_CURVE and isinstance(data, tuple) and len(data) == 2:
        return _render_theta_min(plot, data)
    if kind is PlotKind.BOUND_CURVES and isinstance(data, CurveSet):
        return _render_bounds(plot, data)
    raise TypeError(f"data of type {type(data).__name__} does not match plot kind {kind.value}")
