"""Monte Carlo simulation of the faked-states and time-shift attacks.

Single-photon BB84 against a receiver whose two detectors, at the timing
Eve picks, have efficiencies 1 and ``eta``. Dark counts are not modelled
(in the security analysis they are attributed to Eve anyway). Counts refer
to the sifted key: rounds where Alice's and Bob's bases agree.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..mathcore import binary_entropy
from .rng import CounterRNG

CHUNK = 1 << 18


def _binomial_stderr(k: int, n: int) -> float:
    if n == 0:
        return math.nan
    q = k / n
    return math.sqrt(q * (1.0 - q) / n)


@dataclass(frozen=True)
class SimStats:
    """Outcome counts of one simulation run.

    ``stderr`` is the binomial standard error of ``qber_estimate``. For the
    faked-states attack ``informed`` counts detections where Eve measured
    in Alice's basis and so knows her bit with certainty; in every other
    detection Eve knows nothing, which makes ``informed / detected`` an
    estimate of Eve's mutual information. For the time-shift attack
    ``favored`` counts detections whose bit matches the detector Eve left
    at full efficiency.
    """

    trials: int
    sifted: int
    detected: int
    errors: int
    qber_estimate: float
    stderr: float
    seed: int
    posterior_estimate: float | None = None
    mutual_info_estimate: float | None = None
    informed: int | None = None
    favored: int | None = None

    @property
    def detection_fraction(self) -> float:
        return self.detected / self.sifted if self.sifted else math.nan

    @property
    def detection_stderr(self) -> float:
        return _binomial_stderr(self.detected, self.sifted)

    @property
    def informed_stderr(self) -> float:
        return _binomial_stderr(self.informed or 0, self.detected)

    @property
    def posterior_stderr(self) -> float:
        return _binomial_stderr(self.favored or 0, self.detected)


def _check(eta: float, trials: int) -> None:
    if math.isnan(eta) or not (0.0 < eta <= 1.0):
        raise DomainError(f"eta must lie in (0, 1], got {eta!r}")
    if int(trials) < 1:
        raise DomainError(f"trials must be at least 1, got {trials}")


def resolve_clicks(click0: np.ndarray, click1: np.ndarray, coin: np.ndarray):
    """Bob's bit from the two detector clicks; double clicks get a fair coin.

    Returns ``(detected, bit)``; ``bit`` is meaningless where not detected.
    """
    detected = click0 | click1
    bit = np.where(click0 & click1, coin < 0.5, click1).astype(np.int8)
    return detected, bit


def _faked_states_chunk(rng: CounterRNG, eta: float, start: int, stop: int) -> np.ndarray:
    u = rng.uniforms(np.arange(start, stop, dtype=np.uint64), 8)
    a_bit = (u[:, 0] < 0.5).astype(np.int8)
    a_basis = u[:, 1] < 0.5
    e_basis = u[:, 2] < 0.5
    e_bit = np.where(e_basis == a_basis, a_bit, (u[:, 3] < 0.5)).astype(np.int8)
    b_basis = u[:, 4] < 0.5

    # Eve resends the opposite bit in the opposite basis at a timing where the
    # detector for her own result is fully efficient and the other one is at eta
    sent_basis = ~e_basis
    sent_bit = 1 - e_bit
    outcome = np.where(b_basis == sent_basis, sent_bit, (u[:, 5] < 0.5)).astype(np.int8)
    eff = np.where(outcome == e_bit, 1.0, eta)
    fires = u[:, 6] < eff
    click0 = fires & (outcome == 0)
    click1 = fires & (outcome == 1)
    detected, b_bit = resolve_clicks(click0, click1, u[:, 7])

    sifted = a_basis == b_basis
    det = sifted & detected
    return np.array([
        int(np.count_nonzero(sifted)),
        int(np.count_nonzero(det)),
        int(np.count_nonzero(det & (b_bit != a_bit))),
        int(np.count_nonzero(det & (e_basis == a_basis))),
    ], dtype=np.int64)


def _time_shift_chunk(rng: CounterRNG, eta: float, start: int, stop: int) -> np.ndarray:
    u = rng.uniforms(np.arange(start, stop, dtype=np.uint64), 7)
    a_bit = (u[:, 0] < 0.5).astype(np.int8)
    a_basis = u[:, 1] < 0.5
    b_basis = u[:, 2] < 0.5
    favored = (u[:, 3] < 0.5).astype(np.int8)

    # no disturbance: in the matching basis Bob's outcome is Alice's bit
    outcome = np.where(a_basis == b_basis, a_bit, (u[:, 4] < 0.5)).astype(np.int8)
    eff = np.where(outcome == favored, 1.0, eta)
    fires = u[:, 5] < eff
    detected, b_bit = resolve_clicks(fires & (outcome == 0), fires & (outcome == 1), u[:, 6])

    sifted = a_basis == b_basis
    det = sifted & detected
    return np.array([
        int(np.count_nonzero(sifted)),
        int(np.count_nonzero(det)),
        int(np.count_nonzero(det & (b_bit != a_bit))),
        int(np.count_nonzero(det & (a_bit == favored))),
    ], dtype=np.int64)


def _run(chunk_fn, eta: float, trials: int, seed: int, workers: int, chunk: int) -> np.ndarray:
    rng = CounterRNG(seed)
    ranges = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
    if workers <= 1 or len(ranges) == 1:
        parts = [chunk_fn(rng, eta, s, e) for s, e in ranges]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda r: chunk_fn(rng, eta, *r), ranges))
    return np.sum(parts, axis=0)


def simulate_faked_states(eta: float, trials: int, seed: int, workers: int = 1,
                          chunk: int = CHUNK) -> SimStats:
    _check(eta, trials)
    trials = int(trials)
    sifted, detected, errors, informed = (int(v) for v in _run(
        _faked_states_chunk, eta, trials, seed, workers, chunk))
    q = errors / detected if detected else math.nan
    return SimStats(
        trials=trials,
        sifted=sifted,
        detected=detected,
        errors=errors,
        qber_estimate=q,
        stderr=_binomial_stderr(errors, detected),
        seed=int(seed),
        mutual_info_estimate=informed / detected if detected else None,
        informed=informed,
    )


def simulate_time_shift(eta: float, trials: int, seed: int, workers: int = 1,
                        chunk: int = CHUNK) -> SimStats:
    _check(eta, trials)
    trials = int(trials)
    sifted, detected, errors, favored = (int(v) for v in _run(
        _time_shift_chunk, eta, trials, seed, workers, chunk))
    posterior = favored / detected if detected else None
    return SimStats(
        trials=trials,
        sifted=sifted,
        detected=detected,
        errors=errors,
        qber_estimate=errors / detected if detected else math.nan,
        stderr=_binomial_stderr(errors, detected),
        seed=int(seed),
        posterior_estimate=posterior,
        mutual_info_estimate=None if posterior is None else 1.0 - binary_entropy(posterior),
        favored=favored,
    )
