"""Closed-form constants, the theta_min equation and the counting function L.

Conventions: ``c`` is the rescaled wave speed in (0, sqrt(2)), ``p`` the
asymmetry ratio in (0, 1) with ``xi = p c^4 / 4``.  Throughout,
``sqrt(2 - c^2) == 2 * lam``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DiscontinuityError, DomainError, NumericalError

SQRT2 = math.sqrt(2.0)

# Guarded domain for public entry points.
C_MIN = 0.01
C_MAX = SQRT2 - 0.01
P_MIN = 1e-6
P_MAX = 1.0 - 1e-6

# arctan denominators smaller than this are treated as poles
DENOM_GUARD = 1e-12

THETA_BRACKET = (-100.0, -1e-3)
THETA_SCAN_POINTS = 400


def check_c(c: float) -> float:
    c = float(c)
    if not (C_MIN <= c <= C_MAX):
        raise DomainError(f"c={c!r} outside guarded domain [{C_MIN}, {C_MAX:.6f}]")
    return c


def check_p(p: float) -> float:
    p = float(p)
    if not (P_MIN <= p <= P_MAX):
        raise DomainError(f"p={p!r} outside guarded domain [{P_MIN}, {P_MAX}]")
    return p


def linear_rates(c: float) -> tuple[float, float]:
    """Decay rate and frequency ``(lam, omega)`` of the outer linear ODE."""
    c = float(c)
    if not (0.0 < c < SQRT2):
        raise DomainError(f"c={c!r} outside (0, sqrt(2))")
    return math.sqrt(2.0 - c * c) / 2.0, math.sqrt(2.0 + c * c) / 2.0


@dataclass(frozen=True)
class ModelParams:
    c: float
    p: float
    xi: float
    lam: float
    omega: float
    kappa1: float
    kappa2: float

    @property
    def q(self) -> float:
        """``sqrt(2 - c^2)``, recurring in the junction data."""
        return 2.0 * self.lam

    @property
    def ratio(self) -> float:
        return self.kappa2 / self.kappa1


def make_params(c: float, p: float) -> ModelParams:
    """Validate ``(c, p)`` and derive ``xi``, the rates and the inner frequencies."""
    c = check_c(c)
    p = check_p(p)
    lam, omega = linear_rates(c)
    s = math.sqrt(1.0 - p)
    c2 = c * c
    return ModelParams(
        c=c,
        p=p,
        xi=p * c2 * c2 / 4.0,
        lam=lam,
        omega=omega,
        kappa1=math.sqrt(c2 * (1.0 - s) / 2.0),
        kappa2=math.sqrt(c2 * (1.0 + s) / 2.0),
    )


# --------------------------------------------------------------------------
# theta_min


@dataclass(frozen=True)
class ThetaMinSolution:
    theta_min: float
    t_star: float
    residual: float


def _t_star(theta: float, lam: float, omega: float) -> float:
    return (1.5 * math.pi - math.atan((lam * theta + 1.0) / (omega * theta))) / omega


def theta_min_residual(theta: float, c: float) -> float:
    """``F(theta) = exp(2 lam t*(theta)) - theta^2 - 2 lam theta - 1``."""
    lam, omega = linear_rates(c)
    ts = _t_star(theta, lam, omega)
    return math.exp(2.0 * lam * ts) - theta * theta - 2.0 * lam * theta - 1.0


def theta_min(c: float, tol: float = 1e-12) -> ThetaMinSolution:
    """Steepest admissible junction slope for wave speed ``c``.

    Coarse scan of ``F`` on ``THETA_BRACKET`` followed by bisection. Bisection
    runs until the bracket stops shrinking; ``tol`` bounds ``|F|`` at the root
    (the scale of F is O(theta^2), so a relative floor is applied as well).
    """
    c = check_c(c)
    lam, omega = linear_rates(c)
    grid = np.linspace(*THETA_BRACKET, THETA_SCAN_POINTS)
    vals = [theta_min_residual(t, c) for t in grid]
    lo = hi = None
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            lo = hi = grid[i]
            break
        if (vals[i] < 0.0) != (vals[i + 1] < 0.0):
            lo, hi = float(grid[i]), float(grid[i + 1])
            flo = vals[i]
            break
    if lo is None:
        raise NumericalError(
            f"theta_min: no sign change of F on {THETA_BRACKET} for c={c}"
        )
    if lo != hi:
        while True:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            fm = theta_min_residual(mid, c)
            if fm == 0.0:
                lo = hi = mid
                break
            if (fm < 0.0) == (flo < 0.0):
                lo, flo = mid, fm
            else:
                hi = mid
    root = lo if abs(theta_min_residual(lo, c)) <= abs(theta_min_residual(hi, c)) else hi
    res = abs(theta_min_residual(root, c))
    # F ~ theta^2 near the root, so one ulp in theta moves F by ~ 4 eps theta^2
    if res > max(tol, 16 * np.finfo(float).eps * root * root):
        raise NumericalError(f"theta_min: residual {res:.3e} above tolerance at c={c}")
    return ThetaMinSolution(theta_min=root, t_star=_t_star(root, lam, omega), residual=res)


# --------------------------------------------------------------------------
# window


def theta_discontinuities(params: ModelParams) -> tuple[float, float]:
    """Poles ``(theta1, theta2)`` of the two arctan arguments in L."""
    c2 = params.c ** 2
    cs = c2 * math.sqrt(1.0 - params.p)
    q = params.q
    den1 = 2.0 - c2 - cs
    # p == p0: theta1 has escaped to -inf, the p > p0 side of the limit
    theta1 = -2.0 * q / den1 if den1 != 0.0 else -math.inf
    return theta1, -2.0 * q / (2.0 - c2 + cs)


@dataclass(frozen=True)
class ThetaWindow:
    theta_min: float
    theta1: float
    theta2: float
    branches: tuple[tuple[float, float], ...]
    empty: bool

    @property
    def split(self) -> bool:
        return len(self.branches) == 2


def admissible_window(
    params: ModelParams, tm: ThetaMinSolution | None = None
) -> ThetaWindow:
    """Admissible slope interval ``(theta_min, theta2)`` split at an interior theta1.

    ``tm`` lets a caller reuse a theta_min computed for the same ``c``.
    """
    if tm is None:
        tm = theta_min(params.c)
    lo = tm.theta_min
    t1, t2 = theta_discontinuities(params)
    if lo >= t2:
        return ThetaWindow(lo, t1, t2, (), True)
    if lo < t1 < t2:
        branches = ((lo, t1), (t1, t2))
    else:
        branches = ((lo, t2),)
    return ThetaWindow(lo, t1, t2, branches, False)


# --------------------------------------------------------------------------
# L and its limits


def _terms(params: ModelParams, theta: float):
    """Numerators and denominators of the two arctan arguments, xi factored out.

    First term (prefactor 1/pi) has the pole theta1, second (prefactor
    k2/(k1 pi)) has the pole theta2.  Uses ``kappa1^2 kappa2^2 = xi``.
    """
    c2 = params.c ** 2
    k1, k2, q = params.kappa1, params.kappa2, params.q
    base = 1.0 + theta * q
    tail = q + theta * (1.0 - c2)
    n1 = k2 * base - 1.0 / k2
    d1 = theta * k1 * k1 + tail
    n2 = k1 * base - 1.0 / k1
    d2 = theta * k2 * k2 + tail
    return n1, d1, n2, d2


def _offset(params: ModelParams) -> float:
    return 0.5 * (1.0 + params.ratio)


def eval_L(params: ModelParams, theta: float) -> float:
    """Counting function L(c, p, theta); integer levels k give even waves."""
    n1, d1, n2, d2 = _terms(params, theta)
    if abs(d1) < DENOM_GUARD or abs(d2) < DENOM_GUARD:
        raise DiscontinuityError(f"L evaluated at a discontinuity (theta={theta!r})")
    return (
        _offset(params)
        + math.atan(n1 / d1) / math.pi
        - params.ratio * math.atan(n2 / d2) / math.pi
    )


class Endpoint(enum.Enum):
    THETA_MIN_PLUS = "theta_min+"
    THETA1_MINUS = "theta1-"
    THETA1_PLUS = "theta1+"
    THETA2_MINUS = "theta2-"


def _pole_limit(numer: float, slope: float, side: int) -> float:
    # side = -1 approaching from the left, +1 from the right
    if abs(numer) < DENOM_GUARD:
        raise DiscontinuityError("numerator and denominator vanish together")
    return math.copysign(1.0, numer) * math.copysign(1.0, slope) * side * math.pi / 2.0


def eval_L_limit(
    params: ModelParams, endpoint: Endpoint | str, window: ThetaWindow | None = None
) -> float:
    """One-sided limit of L at a window endpoint or at theta1.

    At a pole the offending arctan is replaced by +-pi/2 exactly.
    """
    endpoint = Endpoint(endpoint)
    if endpoint is Endpoint.THETA_MIN_PLUS:
        tm = window.theta_min if window is not None else theta_min(params.c).theta_min
        return eval_L(params, tm)

    t1, t2 = theta_discontinuities(params)
    c2 = params.c ** 2
    k1, k2 = params.kappa1, params.kappa2
    if endpoint is Endpoint.THETA2_MINUS:
        n1, d1, n2, _ = _terms(params, t2)
        a2 = _pole_limit(n2, k2 * k2 + 1.0 - c2, -1)
        return _offset(params) + math.atan(n1 / d1) / math.pi - params.ratio * a2 / math.pi
    side = -1 if endpoint is Endpoint.THETA1_MINUS else 1
    n1, _, n2, d2 = _terms(params, t1)
    a1 = _pole_limit(n1, k1 * k1 + 1.0 - c2, side)
    return _offset(params) + a1 / math.pi - params.ratio * math.atan(n2 / d2) / math.pi


def eval_L_tilde(c: float, theta: float) -> float:
    """Pointwise limit of L(c, p, theta) as p -> 0.

    ``1/2 + arctan((c^2 - 1 + c^2 theta q) / (c (q + theta (1 - c^2)))) / pi
    - c (q + theta) / pi`` with ``q = sqrt(2 - c^2)``.  The pole sits at
    ``theta = -q / (1 - c^2)``, the p -> 0 position of theta1.
    """
    c = check_c(c)
    c2 = c * c
    q = math.sqrt(2.0 - c2)
    den = c * (q + theta * (1.0 - c2))
    if abs(den) < DENOM_GUARD:
        raise DiscontinuityError(f"L_tilde evaluated at its pole (theta={theta!r})")
    num = c2 - 1.0 + c2 * theta * q
    return 0.5 + math.atan(num / den) / math.pi - c * (q + theta) / math.pi


def eval_L_sup(c: float) -> float:
    """Upper envelope ``L_s(c) = 1 - c (sqrt(2 - c^2) + theta_min(c)) / pi``."""
    c = check_c(c)
    return 1.0 - c * (math.sqrt(2.0 - c * c) + theta_min(c).theta_min) / math.pi
