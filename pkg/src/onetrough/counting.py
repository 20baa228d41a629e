"""Counting integer-level crossings of L and the theoretical upper bounds."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import LevelNotBracketedError, NumericalError
from .transcendental import (
    Endpoint,
    ModelParams,
    ThetaMinSolution,
    ThetaWindow,
    admissible_window,
    check_c,
    eval_L,
    eval_L_limit,
    eval_L_sup,
)

log = logging.getLogger(__name__)

TIE_BAND = 1e-9
ROOT_TOL = 1e-10
MAX_SOLUTIONS = 6


@dataclass(frozen=True)
class SolutionCandidate:
    k: int
    theta: float
    branch: int
    residual: float


@dataclass(frozen=True)
class CountResult:
    params: ModelParams
    candidates: tuple[SolutionCandidate, ...]
    count: int
    lemma_bound: int
    window_empty: bool
    window: ThetaWindow | None = None

    @property
    def levels(self) -> list[int]:
        return [cand.k for cand in self.candidates]


def branch_limits(params: ModelParams, window: ThetaWindow, branch: int) -> tuple[float, float]:
    """``(L(left+), L(right-))`` for one continuity branch of the window."""
    if window.split:
        left = (Endpoint.THETA_MIN_PLUS, Endpoint.THETA1_PLUS)[branch]
        right = (Endpoint.THETA1_MINUS, Endpoint.THETA2_MINUS)[branch]
    else:
        left, right = Endpoint.THETA_MIN_PLUS, Endpoint.THETA2_MINUS
    return eval_L_limit(params, left, window), eval_L_limit(params, right, window)


def levels_between(upper: float, lower: float) -> list[int]:
    """Positive integers strictly between ``lower`` and ``upper``, ties excluded."""
    ks = range(max(1, math.floor(lower) + 1), math.ceil(upper))
    return [k for k in ks if k - lower > TIE_BAND and upper - k > TIE_BAND]


def solve_level(
    params: ModelParams,
    k: int,
    branch: tuple[float, float],
    limits: tuple[float, float] | None = None,
    index: int = 0,
    rng: np.random.Generator | None = None,
) -> SolutionCandidate:
    """Root of ``L(theta) = k`` on an open branch by monotone bisection.

    ``limits`` are the one-sided values ``(L(a+), L(b-))``; they define the
    bracket test.  With ``rng`` the split point is drawn uniformly from the
    middle half instead of the midpoint (used to check root uniqueness).
    ``index`` is recorded as the candidate's branch number.
    """
    a, b = branch
    if limits is None:
        limits = _limits_for(params, branch)
    up, down = limits
    if not (down < k < up):
        raise LevelNotBracketedError(
            f"k={k} not inside ({down:.12g}, {up:.12g}) on branch ({a:.6g}, {b:.6g})"
        )
    lo, hi = a, b
    while True:
        frac = 0.5 if rng is None else rng.uniform(0.25, 0.75)
        mid = lo + frac * (hi - lo)
        if not (lo < mid < hi):
            mid = 0.5 * (lo + hi)
            if not (lo < mid < hi):
                break
        if eval_L(params, mid) > k:
            lo = mid
        else:
            hi = mid
    best = min(
        (t for t in (lo, hi) if a < t < b),
        key=lambda t: abs(eval_L(params, t) - k),
    )
    res = abs(eval_L(params, best) - k)
    if res > ROOT_TOL:
        raise NumericalError(f"level k={k}: residual {res:.3e} after bisection")
    return SolutionCandidate(k, best, index, res)


def _limits_for(params: ModelParams, branch: tuple[float, float]) -> tuple[float, float]:
    # branch supplied without its limits: recover from the window geometry
    window = admissible_window(params)
    for i, br in enumerate(window.branches):
        if br == tuple(branch):
            return branch_limits(params, window, i)
    raise ValueError(f"{branch} is not a branch of the admissible window")


def count_levels(
    params: ModelParams, tm: ThetaMinSolution | None = None
) -> CountResult:
    """Number of even one-troughed waves at ``params`` with their roots theta_k."""
    bound = lemma_bound(params)
    window = admissible_window(params, tm)
    if window.empty:
        return CountResult(params, (), 0, bound, True, window)
    cands = []
    for i, br in enumerate(window.branches):
        limits = branch_limits(params, window, i)
        for k in levels_between(*limits):
            cands.append(solve_level(params, k, br, limits, index=i))
    if len(cands) > MAX_SOLUTIONS:
        raise NumericalError(
            f"{len(cands)} crossings at c={params.c}, p={params.p}: contradicts the 6-solution bound"
        )
    if len(cands) == MAX_SOLUTIONS:
        log.warning("six solutions at c=%r p=%r", params.c, params.p)
    return CountResult(params, tuple(cands), len(cands), bound, False, window)


def p0(c: float) -> float:
    """``4 (c^2 - 1) / c^4``: theta1 < 0 exactly when p > p0."""
    return 4.0 * (c * c - 1.0) / c ** 4


def p_threshold(k: int) -> float:
    """``p_k = 1 - ((k^2-1)/(k^2+1))^2``; p > p_k iff kappa2/kappa1 < k."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return 1.0 - ((k * k - 1.0) / (k * k + 1.0)) ** 2


def lemma_bound(params: ModelParams) -> int:
    """Upper bound on the count from the kappa ratio, capped at 6."""
    k = math.floor(params.ratio) + 1
    if params.p >= p0(params.c):
        bound = 2 * (math.ceil(k / 2) - 1)
    else:
        bound = math.ceil((k + 1) / 2) - 1
    return min(bound, MAX_SOLUTIONS)


@dataclass
class TheoremReport:
    max_sup: float
    argmax_c: float | None
    passed: bool
    values: list[float] = field(default_factory=list)


def theorem_check(c_grid) -> TheoremReport:
    """Maximum of L_s over ``c_grid``; the six-solution bound needs it below 7."""
    cs = [check_c(c) for c in c_grid]
    if not cs:
        return TheoremReport(-math.inf, None, True, [])
    vals = [eval_L_sup(c) for c in cs]
    i = int(np.argmax(vals))
    return TheoremReport(vals[i], cs[i], vals[i] < 7.0, vals)
