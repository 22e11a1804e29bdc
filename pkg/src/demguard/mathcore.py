"""Scalar numerics shared by the analytic modules: binary entropy, its
inverse on [0, 1/2], and a bracketing bisection root finder."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, NoRootError

DEFAULT_TOL = 1e-10
BOUNDARY_GUARD = 1e-12


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if not self.tol > 0:
            raise DomainError(f"bracket tolerance must be positive, got {self.tol}")


def clamp_probability(x: float, name: str = "probability") -> float:
    """Snap ``x`` onto [0, 1] if it is within rounding noise of the range.

    Anything further out is a real error in the caller's formula.
    """
    if 0.0 <= x <= 1.0:
        return x
    if -BOUNDARY_GUARD <= x < 0.0:
        return 0.0
    if 1.0 < x <= 1.0 + BOUNDARY_GUARD:
        return 1.0
    raise DomainError(f"{name} must lie in [0, 1], got {x!r}")


def check_probability(x: float, name: str = "probability") -> float:
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {x!r}")
    return float(x)


def _xlog2x(x: float) -> float:
    return 0.0 if x == 0.0 else x * math.log2(x)


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0."""
    if math.isnan(x) or not (0.0 <= x <= 1.0):
        raise DomainError(f"binary entropy argument must lie in [0, 1], got {x!r}")
    # evaluate on the smaller of x, 1-x so that h(x) == h(1-x) bit for bit
    y = min(x, 1.0 - x)
    # log1p keeps full relative accuracy for small y
    return -_xlog2x(y) - (1.0 - y) * math.log1p(-y) / math.log(2.0)


def binary_entropy_inverse(y: float, tol: float = 1e-14) -> float:
    """Return the x in [0, 1/2] with h(x) = y."""
    if math.isnan(y) or not (0.0 <= y <= 1.0):
        raise DomainError(f"entropy value must lie in [0, 1], got {y!r}")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    return find_root(lambda x: binary_entropy(x) - y, Bracket(0.0, 0.5, tol))


def find_root(f: Callable[[float], float], bracket: Bracket) -> float:
    """Bisection on a sign-change bracket.

    Terminates when the bracket is narrower than ``bracket.tol`` (or when a
    midpoint hits an exact zero) and returns the midpoint. The endpoints
    kept at termination always straddle the root.
    """
    lo, hi = float(bracket.lo), float(bracket.hi)
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise NoRootError(
            f"no sign change on [{lo}, {hi}]: f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}"
        )
    # 200 halvings exhaust double precision on any finite bracket
    for _ in range(200):
        if hi - lo <= bracket.tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def grid(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive arithmetic grid, computed by index to avoid drift."""
    if step <= 0 or hi < lo:
        raise DomainError(f"invalid grid {lo}:{hi}:{step}")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + i * step, 12) for i in range(n + 1)]
