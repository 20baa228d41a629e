"""Explicit even one-troughed waves from a root of L(theta) = k.

The wave is ``A e^{lam t} cos(omega t + B)`` for ``t <= t1``, the two-cosine
inner solution on ``[t1, -t1]`` and the mirrored outer part beyond ``-t1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .counting import SolutionCandidate
from .errors import ConsistencyError, DiscontinuityError, DomainError, NumericalError
from .transcendental import DENOM_GUARD, ModelParams, _terms

MATCH_TOL = 1e-7
CLOSED_FORM_RTOL = 1e-8
DEAD_BAND = 1e-12


def junction_time(params: ModelParams, theta: float) -> float:
    """Negative time ``t1`` where outer and inner pieces are glued, in (-pi/k1, 0)."""
    _, _, n2, d2 = _terms(params, theta)
    if abs(d2) < DENOM_GUARD:
        raise DiscontinuityError(f"junction time at the theta2 pole (theta={theta!r})")
    k1 = params.kappa1
    t1 = (math.atan(n2 / d2) - math.pi / 2.0) / k1
    if not (-math.pi / k1 < t1 < 0.0):
        raise NumericalError(f"t1={t1!r} outside (-pi/kappa1, 0)")
    return t1


def junction_data(params: ModelParams, theta: float) -> tuple[float, float, float, float]:
    """``(z, z', z'', z''')`` of the outer solution at the junction."""
    q = params.q
    return -1.0, theta, 1.0 + theta * q, q + theta * (1.0 - params.c ** 2)


def closed_form_squares(params: ModelParams, theta: float) -> tuple[float, float]:
    """Closed-form ``gamma^2`` and ``delta^2`` as functions of theta alone."""
    c2, xi = params.c ** 2, params.xi
    disc = c2 * c2 - 4.0 * xi
    r = math.sqrt(disc)
    g2 = (xi - 1.0) * (c2 + r + 2.0 * theta ** 2 * xi) / (xi * disc * (r - c2))
    d2 = (xi - 1.0) * (r - c2 - 2.0 * theta ** 2 * xi) / (xi * disc * (c2 + r))
    return g2, d2


def _matching_residuals(params, theta, t1, gamma, delta):
    k1, k2 = params.kappa1, params.kappa2
    _, _, z2, z3 = junction_data(params, theta)
    c1, c2 = math.cos(k1 * t1), math.cos(k2 * t1)
    s1, s2 = math.sin(k1 * t1), math.sin(k2 * t1)
    r17 = -gamma * k1 ** 2 * c1 - delta * k2 ** 2 * c2 - z2
    r18 = gamma * k1 ** 3 * s1 + delta * k2 ** 3 * s2 - z3
    return r17, r18


def recover_inner(
    params: ModelParams, theta: float, check: bool = True
) -> tuple[float, float, float]:
    """Inner amplitudes ``(gamma, delta)`` and junction time ``t1`` for a root theta.

    Value and slope matching give a 2x2 linear system; curvature and third
    derivative matching are then consistency checks that hold only when
    theta solves L = k.
    """
    t1 = junction_time(params, theta)
    k1, k2, xi = params.kappa1, params.kappa2, params.xi
    mat = np.array(
        [
            [math.cos(k1 * t1), math.cos(k2 * t1)],
            [-k1 * math.sin(k1 * t1), -k2 * math.sin(k2 * t1)],
        ]
    )
    rhs = np.array([-1.0 - (1.0 - xi) / xi, theta])
    if abs(np.linalg.det(mat)) < 1e-14 * np.abs(mat).max() ** 2:
        raise NumericalError("singular matching system")
    gamma, delta = (float(v) for v in np.linalg.solve(mat, rhs))
    if check:
        r17, r18 = _matching_residuals(params, theta, t1, gamma, delta)
        if max(abs(r17), abs(r18)) > MATCH_TOL:
            raise ConsistencyError(
                f"matching residuals ({r17:.3e}, {r18:.3e}) at theta={theta!r}"
            )
        g2, d2 = closed_form_squares(params, theta)
        if (
            abs(gamma ** 2 - g2) > CLOSED_FORM_RTOL * abs(g2)
            or abs(delta ** 2 - d2) > CLOSED_FORM_RTOL * abs(d2)
        ):
            raise ConsistencyError("inner amplitudes disagree with closed forms")
    return gamma, delta, t1


def recover_outer(params: ModelParams, theta: float, t1: float) -> tuple[float, float]:
    """``(A, B)`` with ``z1(t1) = -1`` and ``z1'(t1) = theta``; A > 0, B in (-pi, pi]."""
    if not t1 < 0.0:
        raise DomainError("t1 must be negative")
    lam, omega = params.lam, params.omega
    sin_part = -(lam + theta) / omega
    amp = math.hypot(1.0, sin_part)
    phase = math.atan2(sin_part, -1.0)
    b = math.remainder(phase - omega * t1, 2.0 * math.pi)
    if b <= -math.pi:
        b += 2.0 * math.pi
    return amp * math.exp(-lam * t1), b


@dataclass(frozen=True)
class WaveProfile:
    params: ModelParams
    k: int
    theta: float
    t1: float
    A: float
    B: float
    gamma: float
    delta: float

    def outer(self, t, order: int = 0):
        """Derivative of the decaying piece ``A e^{lam t} cos(omega t + B)``."""
        mu = complex(self.params.lam, self.params.omega)
        t = np.asarray(t, dtype=float)
        amp = self.A * np.exp(1j * self.B) * mu ** order
        return np.real(amp * np.exp(mu * t))

    def inner(self, t, order: int = 0):
        """Derivative of ``gamma cos(k1 t) + delta cos(k2 t) + (1 - xi)/xi``."""
        t = np.asarray(t, dtype=float)
        k1, k2 = self.params.kappa1, self.params.kappa2
        shift = order * math.pi / 2.0
        val = self.gamma * k1 ** order * np.cos(k1 * t + shift) + self.delta * k2 ** order * np.cos(
            k2 * t + shift
        )
        if order == 0:
            val = val + (1.0 - self.params.xi) / self.params.xi
        return val

    def __call__(self, t, order: int = 0):
        """``z`` or one of its first four derivatives; even by construction."""
        t = np.asarray(t, dtype=float)
        s = np.abs(t)
        inside = s <= -self.t1
        sign = np.where(t < 0, -1.0, 1.0) ** order
        # the outer piece lives on t <= t1; reflect |t| onto it
        val = np.where(inside, self.inner(s, order), self.outer(-s, order))
        # d^n/dt^n f(|t|) = sign(t)^n f^(n)(|t|); outer(-s) needs (-1)^n more
        out_sign = np.where(inside, 1.0, (-1.0) ** order)
        return sign * out_sign * val

    def derivatives(self, t):
        return tuple(self(t, n) for n in range(4))

    def window(self) -> tuple[float, float]:
        """Sampling interval reaching ten decay lengths past both junctions."""
        span = 10.0 / self.params.lam - self.t1
        return -span, span

    def samples(self, n: int = 1001, window: tuple[float, float] | None = None):
        lo, hi = window if window is not None else self.window()
        t = np.linspace(lo, hi, n)
        return t, self(t), self(t, 1)


def build_wave(params: ModelParams, candidate: SolutionCandidate, check: bool = True) -> WaveProfile:
    gamma, delta, t1 = recover_inner(params, candidate.theta, check=check)
    a, b = recover_outer(params, candidate.theta, t1)
    return WaveProfile(params, candidate.k, candidate.theta, t1, a, b, gamma, delta)


@dataclass(frozen=True)
class VerificationReport:
    junction_residuals: float
    ode_residual: float
    trough_count: int
    wiggle_count: int
    decay_ok: bool
    passed: bool


def ode_residual(profile: WaveProfile, t) -> np.ndarray:
    z = profile(t)
    z2 = profile(t, 2)
    z4 = profile(t, 4)
    xi, c2 = profile.params.xi, profile.params.c ** 2
    w = z + 1.0
    return z4 + c2 * z2 + np.maximum(w, 0.0) - xi * np.maximum(-w, 0.0) - 1.0


def _signs(values) -> np.ndarray:
    s = np.zeros(len(values), dtype=int)
    s[values > DEAD_BAND] = 1
    s[values < -DEAD_BAND] = -1
    return s[s != 0]


def count_troughs(z) -> int:
    """Maximal runs of ``z < -1`` in a sampled profile."""
    s = _signs(np.asarray(z) + 1.0)
    if s.size == 0:
        return 0
    starts = np.count_nonzero((s[1:] == -1) & (s[:-1] == 1))
    return int(starts + (s[0] == -1))


def count_wiggles(z, dz) -> int:
    """Local maxima (z' from + to -) among samples with ``z <= -1``."""
    z = np.asarray(z)
    dz = np.asarray(dz)
    mask = z <= -1.0
    keep = np.nonzero(mask & (np.abs(dz) > DEAD_BAND))[0]
    count = 0
    for i, j in zip(keep[:-1], keep[1:]):
        if dz[i] > 0 and dz[j] < 0 and np.all(mask[i : j + 1]):
            count += 1
    return count


def verify_wave(profile: WaveProfile, tol: float = 1e-6, n_samples: int = 10_000) -> VerificationReport:
    """Check C3 gluing, the piecewise ODE, one trough and decay on sampled points."""
    jr = 0.0
    for t in (profile.t1, -profile.t1):
        for order in range(4):
            left = profile.outer(t, order) if t < 0 else (-1) ** order * profile.outer(-t, order)
            right = profile.inner(t, order)
            jr = max(jr, abs(float(left - right)))
    lo, hi = profile.window()
    t = np.linspace(lo, hi, n_samples)
    res = float(np.max(np.abs(ode_residual(profile, t))))
    z = profile(t)
    troughs = count_troughs(z)
    wiggles = count_wiggles(z, profile(t, 1))
    # amplitude of the outer envelope at the junction, not the bare A
    bound = 10.0 * math.exp(-10.0) * abs(profile.A) * math.exp(profile.params.lam * profile.t1)
    decay_ok = bool(abs(profile(lo)) <= bound and abs(profile(hi)) <= bound)
    passed = jr <= tol and res <= tol and troughs == 1 and decay_ok
    return VerificationReport(jr, res, troughs, wiggles, decay_ok, passed)


@dataclass(frozen=True)
class PhysicalWave:
    """Beam deflection ``u(x, tau) = (z(a^{1/4} x - c a^{1/2} tau) + 1) / a``."""

    profile: WaveProfile
    a: float

    @property
    def b(self) -> float:
        return self.profile.params.xi * self.a

    @property
    def speed(self) -> float:
        return self.a ** 0.25 * self.profile.params.c

    def argument(self, x, tau):
        return self.a ** 0.25 * np.asarray(x) - self.profile.params.c * math.sqrt(self.a) * np.asarray(tau)

    def u(self, x, tau=0.0):
        return (self.profile(self.argument(x, tau)) + 1.0) / self.a

    def u_x(self, x, tau=0.0, order: int = 1):
        """Analytic x-derivative of order <= 4."""
        return self.a ** (order / 4.0) * self.profile(self.argument(x, tau), order) / self.a


def to_physical(profile: WaveProfile, a: float) -> PhysicalWave:
    if not a > 0:
        raise DomainError("stiffness a must be positive")
    return PhysicalWave(profile, float(a))
