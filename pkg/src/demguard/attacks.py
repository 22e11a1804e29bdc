"""Individual attacks on BB84 receivers with detector efficiency mismatch.

Two attacks are evaluated, both under a symmetric mismatch ratio ``eta``
(the worst efficiency ratio Eve can reach for either bit value):

* the combined attack, which hits a fraction of the bits with a faked-states
  intercept-resend and the rest with a pure time-shift;
* the improved individual attack, where Eve runs the optimal probe attack
  and additionally time-shifts every pulse, so that after Bob announces
  receipt she discriminates her probe states with biased priors.

Rates are in bits per sifted detection; a negative rate means the attack
leaves Alice and Bob without secret key.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .errors import DomainError, InfeasibleAttackError, NoRootError
from .mathcore import Bracket, binary_entropy, check_probability, clamp_probability, find_root

AttackKind = Literal["combined", "improved", "pure_faked_states"]

ETA_FLOOR = 1e-6
BOUNDARY_TOL = 1e-6


@dataclass(frozen=True)
class AttackReport:
    qber: float
    attacked_fraction: float
    mutual_ab: float
    mutual_ae: float
    rate: float
    success_prob: float | None = None


@dataclass(frozen=True)
class DiscriminationProblem:
    """Two pure probe states |0> and cos(phi)|0> + sin(phi)|1> with priors."""

    prior0: float
    prior1: float
    overlap_angle: float

    def __post_init__(self):
        check_probability(self.prior0, "prior0")
        check_probability(self.prior1, "prior1")
        if abs(self.prior0 + self.prior1 - 1.0) > 1e-12:
            raise DomainError("priors must sum to 1")
        if not (0.0 <= self.overlap_angle <= math.pi / 2 + 1e-15):
            raise DomainError(f"overlap angle must lie in [0, pi/2], got {self.overlap_angle}")

    @classmethod
    def from_attack(cls, eta: float, qber: float) -> "DiscriminationProblem":
        eta = _check_eta(eta)
        return cls(1.0 / (1.0 + eta), eta / (1.0 + eta), probe_angle(qber))


def _check_eta(eta: float) -> float:
    if math.isnan(eta) or not (0.0 < eta <= 1.0):
        raise DomainError(f"mismatch ratio eta must lie in (0, 1], got {eta!r}")
    return float(eta)


def attack_eta(eta0: Sequence[float], eta1: Sequence[float]) -> float:
    """Reduce two efficiency curves to the scalar mismatch seen by the attacks.

    ``max(min_t eta1/eta0, min_t eta0/eta1)``: the smallest ratio Eve can
    still pick for both bit values. Samples where both detectors are blind
    are skipped since Eve gains nothing by timing pulses there.
    """
    if len(eta0) != len(eta1) or len(eta0) == 0:
        raise DomainError("efficiency curves must be nonempty and of equal length")
    r10, r01 = math.inf, math.inf
    for a, b in zip(eta0, eta1):
        if a < 0 or b < 0:
            raise DomainError("efficiencies must be non-negative")
        if a == 0 and b == 0:
            continue
        r10 = min(r10, b / a if a > 0 else math.inf)
        r01 = min(r01, a / b if b > 0 else math.inf)
    if math.isinf(r10) and math.isinf(r01):
        raise DomainError("curves carry no usable sample")
    return min(1.0, max(r10, r01))


def probe_angle(qber: float) -> float:
    """Angle between Eve's probe states: cos(phi) = 1 - 2E."""
    qber = check_probability(qber, "qber")
    if qber > 0.5:
        raise DomainError(f"qber must not exceed 1/2, got {qber}")
    return math.acos(1.0 - 2.0 * qber)


def faked_states_qber(eta: float) -> float:
    eta = _check_eta(eta)
    return 2.0 * eta / (1.0 + 3.0 * eta)


def timeshift_mutual_info(eta: float) -> float:
    eta = _check_eta(eta)
    return 1.0 - binary_entropy(eta / (1.0 + eta))


def _combined_rate(eta: float, qber: float) -> float:
    # unchecked closed form; callers enforce feasibility
    h_ts = binary_entropy(eta / (1.0 + eta))
    return qber + h_ts * (1.0 - (1.0 + 3.0 * eta) * qber / (2.0 * eta)) - binary_entropy(qber)


def combined_attack(eta: float, qber: float) -> AttackReport:
    """Faked-states on a fraction r = E/E_fs of the bits, time-shift on the rest."""
    eta = _check_eta(eta)
    qber = check_probability(qber, "qber")
    e_fs = faked_states_qber(eta)
    if qber > e_fs:
        raise InfeasibleAttackError(
            f"combined attack cannot reach E={qber} at eta={eta}: "
            f"faked-states QBER is only {e_fs:.6f}"
        )
    r = min(1.0, qber * (1.0 + 3.0 * eta) / (2.0 * eta))
    if qber == e_fs:
        r = 1.0
    h_ts = binary_entropy(eta / (1.0 + eta))
    mutual_ae = 1.0 - qber - h_ts * (1.0 - r)
    mutual_ab = 1.0 - binary_entropy(qber)
    return AttackReport(
        qber=qber,
        attacked_fraction=r,
        mutual_ab=mutual_ab,
        mutual_ae=mutual_ae,
        rate=mutual_ab - mutual_ae,
    )


def optimal_success_probability(eta: float, qber: float) -> float:
    """Eve's probability of guessing Alice's bit with the time-shifted probe.

    Closed form of the optimal projective measurement on the two probe
    states with priors 1/(1+eta) and eta/(1+eta).
    """
    eta = _check_eta(eta)
    phi = probe_angle(qber)
    # atan2 equals arctan here (denominator >= 0) and resolves 0/0 at eta=1, E=0
    half = 0.5 * math.atan2(math.sin(2.0 * phi), 1.0 / eta - math.cos(2.0 * phi))
    p0 = 1.0 / (1.0 + eta)
    p1 = eta / (1.0 + eta)
    return clamp_probability(p0 * math.cos(half) ** 2 + p1 * math.sin(phi + half) ** 2)


def improved_attack_rate(eta: float, qber: float) -> AttackReport:
    p = optimal_success_probability(eta, qber)
    mutual_ab = 1.0 - binary_entropy(qber)
    mutual_ae = 1.0 - binary_entropy(p)
    return AttackReport(
        qber=qber,
        attacked_fraction=1.0,
        mutual_ab=mutual_ab,
        mutual_ae=mutual_ae,
        rate=mutual_ab - mutual_ae,
        success_prob=p,
    )


def _rate_fn(kind: str, qber: float):
    if kind == "combined":
        return lambda eta: _combined_rate(eta, qber)
    if kind == "improved":
        return lambda eta: improved_attack_rate(eta, qber).rate
    raise DomainError(f"unknown attack kind {kind!r}")


def attack_boundary(kind: AttackKind, qber: float, tol: float = BOUNDARY_TOL) -> float:
    """Mismatch ratio at which the attack's key rate crosses zero at fixed QBER.

    Below the returned eta the attack leaves no secret key. For the
    combined attack the search starts where the attack first becomes
    feasible (r = 1); for ``pure_faked_states`` it is the eta whose
    faked-states QBER equals ``qber``.
    """
    qber = check_probability(qber, "qber")
    if not (0.0 < qber < 0.5):
        raise DomainError(f"boundary search needs 0 < E < 1/2, got {qber}")
    if kind == "pure_faked_states":
        return qber / (2.0 - 3.0 * qber)
    lo = ETA_FLOOR
    if kind == "combined":
        lo = max(lo, qber / (2.0 - 3.0 * qber))
    try:
        return find_root(_rate_fn(kind, qber), Bracket(lo, 1.0, tol))
    except NoRootError as exc:
        raise NoRootError(f"{kind} attack rate has no zero on eta in [{lo:.3g}, 1] at E={qber}") from exc


def attack_qber_boundary(kind: AttackKind, eta: float, tol: float = BOUNDARY_TOL) -> float:
    """QBER at which the attack rate crosses zero at fixed eta."""
    eta = _check_eta(eta)
    if kind == "pure_faked_states":
        return faked_states_qber(eta)
    if kind == "combined":
        hi = faked_states_qber(eta)
        f = lambda e: _combined_rate(eta, e)
    elif kind == "improved":
        hi = 0.5
        f = lambda e: improved_attack_rate(eta, e).rate
    else:
        raise DomainError(f"unknown attack kind {kind!r}")
    return find_root(f, Bracket(1e-12, hi, tol))


def attack_crossover(inner_tol: float = 1e-6, outer_tol: float = 1e-4,
                     bracket: tuple[float, float] = (0.05, 0.5)) -> float:
    """Eta where the combined and improved boundary curves intersect.

    Below it the combined attack breaks security at lower QBER.
    """
    def gap(eta):
        return (attack_qber_boundary("combined", eta, inner_tol)
                - attack_qber_boundary("improved", eta, inner_tol))

    return find_root(gap, Bracket(bracket[0], bracket[1], outer_tol))


def attack_region(kind: AttackKind, qber_grid: Iterable[float]) -> list[tuple[float, float | None]]:
    """Boundary samples (E, eta*) for plotting; ``None`` where no root exists."""
    out = []
    for e in qber_grid:
        try:
            out.append((e, attack_boundary(kind, e)))
        except NoRootError:
            out.append((e, None))
    return out
