"""Counter-based random numbers.

Every draw is a pure function of ``(seed, trial, slot)``, hashed with the
SplitMix64 finaliser. A trial therefore sees the same numbers whichever
worker evaluates it and in whatever order, so Monte Carlo runs can be split
into arbitrary index ranges and merged by adding counts.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = np.uint64(30), np.uint64(27), np.uint64(31), np.uint64(11)
_TO_UNIT = 1.0 / float(1 << 53)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


class CounterRNG:
    def __init__(self, seed: int):
        seed = int(seed)
        if not (0 <= seed < 2**64):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self._key = _mix64(np.array([seed], dtype=np.uint64))[0]

    def stream_keys(self, trials: np.ndarray) -> np.ndarray:
        t = np.asarray(trials, dtype=np.uint64)
        return _mix64(self._key ^ ((t + np.uint64(1)) * _GOLDEN))

    def uniforms(self, trials: np.ndarray, n_slots: int) -> np.ndarray:
        """Array of shape ``(len(trials), n_slots)`` with values in [0, 1)."""
        keys = self.stream_keys(trials)[:, None]
        slots = (np.arange(n_slots, dtype=np.uint64) + np.uint64(1))[None, :]
        words = _mix64(keys + slots * _GOLDEN)
        return (words >> _S11).astype(np.float64) * _TO_UNIT
