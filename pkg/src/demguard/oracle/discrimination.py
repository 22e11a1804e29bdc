"""Two independent routes to the optimal guessing probability for Eve's
probe states |0> and cos(phi)|0> + sin(phi)|1>."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..mathcore import check_probability

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _check(prior0: float, phi: float) -> None:
    check_probability(prior0, "prior0")
    if math.isnan(phi) or not (0.0 <= phi <= math.pi / 2 + 1e-15):
        raise DomainError(f"phi must lie in [0, pi/2], got {phi!r}")


def projective_success(prior0: float, phi: float, theta):
    """Success probability of the projective measurement
    {(cos t, sin t), (-sin t, cos t)} guessing bit 0 on the first outcome."""
    theta = np.asarray(theta, dtype=float)
    return prior0 * np.cos(theta) ** 2 + (1.0 - prior0) * np.sin(phi - theta) ** 2


def discriminate_brute_force(prior0: float, phi: float, grid_points: int = 1000) -> tuple[float, float]:
    """Sweep the measurement angle over [0, pi) and refine the best grid cell
    by golden-section search. Returns ``(p_best, theta_best)``."""
    _check(prior0, phi)
    if grid_points < 3:
        raise DomainError("grid_points must be at least 3")
    step = math.pi / grid_points
    thetas = np.arange(grid_points) * step
    values = projective_success(prior0, phi, thetas)
    k = int(np.argmax(values))

    f = lambda t: float(projective_success(prior0, phi, t))
    a, b = thetas[k] - step, thetas[k] + step
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(100):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    best_t, best_p = (c, fc) if fc > fd else (d, fd)
    if values[k] > best_p:
        best_t, best_p = float(thetas[k]), float(values[k])
    return best_p, best_t % math.pi


def helstrom_states(prior0: float, rho0: np.ndarray, rho1: np.ndarray) -> float:
    """1/2 (1 + || p0 rho0 - p1 rho1 ||_1) for arbitrary density matrices."""
    gamma = prior0 * np.asarray(rho0) - (1.0 - prior0) * np.asarray(rho1)
    return 0.5 * (1.0 + float(np.sum(np.abs(np.linalg.eigvalsh(gamma)))))


def helstrom_bound(prior0: float, phi: float) -> float:
    """Helstrom success probability for the two pure probe states.

    Uses the closed-form eigenvalues of the 2x2 Hermitian operator
    p0 rho0 - p1 rho1: (a+d)/2 +- sqrt(((a-d)/2)^2 + |b|^2).
    """
    _check(prior0, phi)
    p1 = 1.0 - prior0
    xi1 = np.array([math.cos(phi), math.sin(phi)])
    gamma = prior0 * np.diag([1.0, 0.0]) - p1 * np.outer(xi1, xi1)
    a, b, d = gamma[0, 0], gamma[0, 1], gamma[1, 1]
    mean = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), b)
    return 0.5 * (1.0 + abs(mean + radius) + abs(mean - radius))
