"""Shooting oracle for theta_min: classical RK4 on z'''' + c^2 z'' + z = 0.

Starts on the decaying-at-minus-infinity manifold at the point where
``z = -1, z' = 0`` and integrates forward to the next downward crossing of
``z = -1``; the slope there is theta_min.  Shares nothing with the
transcendental solver except the ODE itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .transcendental import check_c

BLOCK = 1024


def system_matrix(c: float) -> np.ndarray:
    """First-order form of ``z'''' + c^2 z'' + z = 0`` for ``(z, z', z'', z''')``."""
    a = np.zeros((4, 4))
    a[0, 1] = a[1, 2] = a[2, 3] = 1.0
    a[3, 0] = -1.0
    a[3, 2] = -c * c
    return a


def rk4_increment(a: np.ndarray, h: float) -> np.ndarray:
    """Increment matrix ``D`` of one classical RK4 step: ``y_{n+1} = y_n + D y_n``.

    The stages are the textbook k1..k4 applied to every basis vector; for a
    linear autonomous system this is the exact propagator of the scheme.  The
    identity is kept out so that ``D = O(h)`` retains full relative precision.
    """
    eye = np.eye(a.shape[0])
    k1 = a @ eye
    k2 = a @ (eye + 0.5 * h * k1)
    k3 = a @ (eye + 0.5 * h * k2)
    k4 = a @ (eye + h * k3)
    return h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True)
class ShootingResult:
    theta_min: float
    t_star: float
    steps: int


def shoot(c: float, step: float = 1e-4) -> ShootingResult:
    c = check_c(c)
    omega = math.sqrt(2.0 + c * c) / 2.0
    t_end = 4.0 * math.pi / omega
    a = system_matrix(c)
    d = rk4_increment(a, step)

    # (I + D)^j = I + excess[j]; carried without the identity for precision
    excess = np.empty((BLOCK + 1, 4, 4))
    excess[0] = 0.0
    for j in range(1, BLOCK + 1):
        excess[j] = excess[j - 1] + d + d @ excess[j - 1]
    jump = excess[BLOCK]
    excess = excess[:BLOCK]

    y = np.array([-1.0, 0.0, 1.0, math.sqrt(2.0 - c * c)])
    n0 = 0
    while n0 * step < t_end:
        states = y + excess @ y
        g = states[:, 0] + 1.0
        if n0 == 0:
            g[0] = 1.0  # starting point sits exactly on z = -1
        idx = np.nonzero(g <= 0.0)[0]
        if idx.size:
            # idx[0] >= 1: block starts are checked before entering a block
            j = int(idx[0])
            return _polish(a, states[j - 1], n0 + j - 1, step)
        y_next = y + jump @ y
        if y_next[0] + 1.0 <= 0.0:
            return _polish(a, states[-1], n0 + BLOCK - 1, step)
        y = y_next
        n0 += BLOCK
    raise NumericalError(f"no crossing of z=-1 within t < 4 pi / omega for c={c}")


def _polish(a: np.ndarray, y: np.ndarray, n: int, step: float) -> ShootingResult:
    """Bisect a partial RK4 step from ``y`` (at ``t = n*step``) onto ``z = -1``."""
    lo, hi = 0.0, step
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        z = y[0] + rk4_increment(a, mid)[0] @ y
        if z + 1.0 > 0.0:
            lo = mid
        else:
            hi = mid
    s = 0.5 * (lo + hi)
    state = y + rk4_increment(a, s) @ y
    return ShootingResult(theta_min=float(state[1]), t_star=n * step + s, steps=n + 1)


def theta_min_oracle(c: float, step: float = 1e-4) -> float:
    """theta_min from direct integration; independent check on the root solver."""
    return shoot(c, step).theta_min
