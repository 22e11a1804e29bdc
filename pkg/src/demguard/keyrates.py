"""Proof-side lower bounds on the secure key rate.

All rates are asymptotic and in bits per raw-key detection. Entropies of
amplified error rates ``e/eta`` are evaluated with the argument clamped to
1/2, which keeps the bound valid (the bracket ``1 - h`` is then 0) where the
printed formula would otherwise leave the entropy undefined.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Literal

from .errors import DomainError, NoRootError
from .mathcore import Bracket, binary_entropy, check_probability, find_root

ProofModel = Literal["general", "single_photon_eve"]

ETA_FLOOR = 1e-6
BOUNDARY_TOL = 1e-6


class SideConditionWarning(UserWarning):
    """eta_Z * Q_X >= Q_Z (or the X-basis mirror); the bound may be loose."""


def _check_eta(eta: float, name: str = "eta") -> float:
    if math.isnan(eta) or not (0.0 < eta <= 1.0):
        raise DomainError(f"{name} must lie in (0, 1], got {eta!r}")
    return float(eta)


def _clamped_entropy(x: float) -> float:
    return binary_entropy(min(x, 0.5))


@dataclass(frozen=True)
class RateInputs:
    e_z: float
    e_x: float
    q_z: float
    q_x: float
    q1_x: float
    q1_z: float
    e1_x: float
    e1_z: float
    eta_z: float
    eta_x: float

    def __post_init__(self):
        for name in ("e_z", "e_x", "q_z", "q_x", "q1_x", "q1_z", "e1_x", "e1_z"):
            check_probability(getattr(self, name), name)
        _check_eta(self.eta_z, "eta_z")
        _check_eta(self.eta_x, "eta_x")

    def side_condition_violations(self) -> list[str]:
        out = []
        if self.eta_z * self.q_x >= self.q_z:
            out.append("eta_z*Q_X >= Q_Z")
        if self.eta_x * self.q_z >= self.q_x:
            out.append("eta_x*Q_Z >= Q_X")
        return out

    @classmethod
    def symmetric(cls, qber: float, eta: float, q1: float = 1.0, detect: float = 1.0) -> "RateInputs":
        """Basis-symmetric inputs with equal error rates for all photon numbers."""
        return cls(qber, qber, detect, detect, q1, q1, qber, qber, eta, eta)


@dataclass(frozen=True)
class RateReport:
    rate_z: float
    rate_x: float
    e_star_x: float
    e_star_z: float


def koashi_rate(uncertainty_fraction: float, e_z: float) -> float:
    """1 - H/(N Q_Z) - h(E_Z)."""
    check_probability(uncertainty_fraction, "uncertainty_fraction")
    return 1.0 - uncertainty_fraction - binary_entropy(check_probability(e_z, "e_z"))


def error_amplification_bound(e1: float, eta: float) -> float:
    """Worst-case single-photon error rate after the virtual filter.

    The filter only removes detections, so at most all lost events were
    correct ones: e* <= e / (eta (1 - e) + e).
    """
    e1 = check_probability(e1, "e1")
    if e1 > 0.5:
        raise DomainError(f"single-photon error rate must not exceed 1/2, got {e1}")
    eta = _check_eta(eta)
    if e1 == 0.0:
        return 0.0
    return e1 / (eta * (1.0 - e1) + e1)


def secure_rate(inputs: RateInputs, tight: bool = False) -> RateReport:
    """Decoy-state rates for raw keys from the Z and the X basis.

    With ``tight=True`` the amplified error rate uses e/(eta(1-e)+e)
    instead of the simpler e/eta inside the entropy.
    """
    for msg in inputs.side_condition_violations():
        warnings.warn(f"side condition violated: {msg}", SideConditionWarning, stacklevel=2)
    if inputs.q_z == 0.0 or inputs.q_x == 0.0:
        raise ZeroDivisionError("detection fractions Q_Z and Q_X must be nonzero")

    e_star_x = error_amplification_bound(inputs.e1_x, inputs.eta_z)
    e_star_z = error_amplification_bound(inputs.e1_z, inputs.eta_x)
    if tight:
        arg_x, arg_z = e_star_x, e_star_z
    else:
        arg_x = inputs.e1_x / inputs.eta_z
        arg_z = inputs.e1_z / inputs.eta_x

    rate_z = -binary_entropy(inputs.e_z) + inputs.eta_z * inputs.q1_x * (inputs.q_x / inputs.q_z) * (
        1.0 - _clamped_entropy(arg_x)
    )
    rate_x = -binary_entropy(inputs.e_x) + inputs.eta_x * inputs.q1_z * (inputs.q_z / inputs.q_x) * (
        1.0 - _clamped_entropy(arg_z)
    )
    return RateReport(rate_z=rate_z, rate_x=rate_x, e_star_x=e_star_x, e_star_z=e_star_z)


def _check_qber(qber: float) -> float:
    qber = check_probability(qber, "qber")
    if qber > 0.5:
        raise DomainError(f"qber must not exceed 1/2, got {qber}")
    return qber


def simplified_rate(qber: float, eta: float) -> float:
    """Single-photon source, basis-symmetric: -h(E) + eta [1 - h(E/eta)]."""
    qber = _check_qber(qber)
    eta = _check_eta(eta)
    return -binary_entropy(qber) + eta * (1.0 - _clamped_entropy(qber / eta))


def single_photon_eve_rate(qber: float, eta: float) -> float:
    """As ``simplified_rate`` when Eve is restricted to single photons."""
    qber = _check_qber(qber)
    eta = _check_eta(eta)
    h = binary_entropy(qber)
    return -h + eta * (1.0 - h)


def proof_boundary(model: ProofModel, qber: float, tol: float = BOUNDARY_TOL) -> float:
    """Smallest eta for which the bound still certifies key at this QBER."""
    qber = _check_qber(qber)
    if model == "single_photon_eve":
        h = binary_entropy(qber)
        if h >= 0.5:
            raise NoRootError(f"single-photon bound certifies no key at E={qber}")
        return h / (1.0 - h)
    if model == "general":
        try:
            return find_root(lambda eta: simplified_rate(qber, eta), Bracket(ETA_FLOOR, 1.0, tol))
        except NoRootError as exc:
            raise NoRootError(f"general bound certifies no key at E={qber}") from exc
    raise DomainError(f"unknown proof model {model!r}")


def proof_region(model: ProofModel, qber_grid: Iterable[float]) -> list[tuple[float, float | None]]:
    out = []
    for e in qber_grid:
        if not (0.0 < e < 0.5):
            raise DomainError(f"grid values must lie in (0, 1/2), got {e}")
        try:
            eta = proof_boundary(model, e)
        except NoRootError:
            eta = None
        if eta is not None and eta > 1.0:
            eta = None
        out.append((e, eta))
    return out
