"""Vacuum-measurement redundancy on truncated Fock spaces.

For any operation F that maps the all-mode vacuum to itself, measuring
"vacuum or not" before F leaves the outcome statistics and the output
branches of a vacuum measurement after F unchanged. This module checks that
numerically on random input states and on a deliberately vacuum-violating
counterexample, which shows the check can fail.

The truncation keeps all states with at most ``cutoff`` photons in total.
Beamsplitters conserve total photon number, so for them the truncation is
exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Literal

import numpy as np
from scipy.linalg import expm

from ..errors import DomainError

OpKind = Literal["number_preserving_unitary", "loss_to_ancilla", "vacuum_violating_test"]
MAX_DIM = 10_000


@dataclass(frozen=True)
class FockSpace:
    n_modes: int
    cutoff: int

    def __post_init__(self):
        if self.n_modes < 1 or self.cutoff < 1:
            raise DomainError("need n_modes >= 1 and cutoff >= 1")
        if math.comb(self.cutoff + self.n_modes, self.n_modes) > MAX_DIM:
            raise DomainError(
                f"truncated Fock space with {self.n_modes} modes and cutoff {self.cutoff} "
                f"exceeds {MAX_DIM} dimensions"
            )

    @cached_property
    def basis(self) -> list[tuple[int, ...]]:
        """Occupation tuples ordered by total photon number; index 0 is vacuum."""
        states = [s for s in itertools.product(range(self.cutoff + 1), repeat=self.n_modes)
                  if sum(s) <= self.cutoff]
        return sorted(states, key=lambda s: (sum(s), tuple(-x for x in s)))

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {s: i for i, s in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def sector(self, n: int) -> np.ndarray:
        return np.array([i for i, s in enumerate(self.basis) if sum(s) == n])

    def annihilation(self, mode: int) -> np.ndarray:
        a = np.zeros((self.dim, self.dim))
        for j, s in enumerate(self.basis):
            if s[mode] > 0:
                t = list(s)
                t[mode] -= 1
                a[self.index[tuple(t)], j] = math.sqrt(s[mode])
        return a


def _sector_expm(space: FockSpace, generator: np.ndarray) -> np.ndarray:
    # generator conserves photon number: exponentiate sector by sector so the
    # vacuum column comes out exactly as e_0
    u = np.zeros((space.dim, space.dim), dtype=complex)
    for n in range(space.cutoff + 1):
        idx = space.sector(n)
        u[np.ix_(idx, idx)] = expm(generator[np.ix_(idx, idx)])
    return u


def beamsplitter(space: FockSpace, m1: int, m2: int, theta: float, phase: float = 0.0) -> np.ndarray:
    """exp(theta (e^{i phase} a1^dag a2 - h.c.)) on the truncated space."""
    a1 = space.annihilation(m1)
    a2 = space.annihilation(m2)
    g = np.exp(1j * phase) * a1.T @ a2
    return _sector_expm(space, theta * (g - g.conj().T))


def polar_unitary(m: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(m)
    return u @ vh


def truncated_displacement(space: FockSpace, alpha: float, mode: int = 0, pad: int = 6) -> np.ndarray:
    """Displacement on ``mode`` computed in a larger space, cut down to ``space``
    and made unitary again by polar projection. It moves vacuum weight into
    the one-photon states."""
    big = FockSpace(space.n_modes, space.cutoff + pad)
    a = big.annihilation(mode)
    d_big = expm(alpha * (a.T - a))
    keep = np.array([big.index[s] for s in space.basis])
    return polar_unitary(d_big[np.ix_(keep, keep)].astype(complex))


@dataclass(frozen=True)
class FockOpSpec:
    """Quantum operation on ``n_modes`` modes.

    parameters by kind:
      number_preserving_unitary: beamsplitter angles between neighbouring
        modes (default pi/5 each), applied in order;
      loss_to_ancilla: one transmissivity in [0, 1], applied to every mode
        through its own beamsplitter to a traced-out ancilla;
      vacuum_violating_test: displacement strength on mode 0.
    """

    n_modes: int
    cutoff: int
    kind: OpKind
    parameters: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.cutoff < 1 or self.n_modes < 1:
            raise DomainError("need n_modes >= 1 and cutoff >= 1")
        if self.kind == "loss_to_ancilla":
            if len(self.parameters) != 1 or not (0.0 <= self.parameters[0] <= 1.0):
                raise DomainError("loss_to_ancilla needs one transmissivity in [0, 1]")
        elif self.kind == "number_preserving_unitary":
            if self.parameters and len(self.parameters) != self.n_modes - 1:
                raise DomainError("need one mixing angle per neighbouring mode pair")
        elif self.kind == "vacuum_violating_test":
            if len(self.parameters) > 1:
                raise DomainError("vacuum_violating_test takes one displacement strength")
        else:
            raise DomainError(f"unknown operation kind {self.kind!r}")


def build_operation(spec: FockOpSpec) -> tuple[FockSpace, Callable[[np.ndarray], np.ndarray]]:
    """Return the system space and F as a map on its density matrices."""
    space = FockSpace(spec.n_modes, spec.cutoff)

    if spec.kind == "number_preserving_unitary":
        angles = spec.parameters or (math.pi / 5,) * (spec.n_modes - 1)
        u = np.eye(space.dim, dtype=complex)
        for k, theta in enumerate(angles):
            u = beamsplitter(space, k, k + 1, theta, phase=0.3 * (k + 1)) @ u
        return space, lambda rho: u @ rho @ u.conj().T

    if spec.kind == "vacuum_violating_test":
        alpha = spec.parameters[0] if spec.parameters else 0.4
        u = truncated_displacement(space, alpha)
        return space, lambda rho: u @ rho @ u.conj().T

    # loss: system modes 0..n-1, ancilla k+n paired with mode k
    n = spec.n_modes
    joint = FockSpace(2 * n, spec.cutoff)
    theta = math.acos(math.sqrt(spec.parameters[0]))
    u = np.eye(joint.dim, dtype=complex)
    for k in range(n):
        u = beamsplitter(joint, k, k + n, theta) @ u
    embed = np.array([joint.index[s + (0,) * n] for s in space.basis])
    # Kraus operators K_a = <a_anc| U |., 0_anc>, one per ancilla occupation
    kraus = []
    for anc in sorted({s[n:] for s in joint.basis}):
        k = np.zeros((space.dim, space.dim), dtype=complex)
        for i, s in enumerate(space.basis):
            j = joint.index.get(s + anc)
            if j is not None:
                k[i, :] = u[j, embed]
        kraus.append(k)

    def apply(rho):
        return sum(k @ rho @ k.conj().T for k in kraus)

    return space, apply


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    d = a - b
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (d + d.conj().T)))))


def vacuum_measurement_deviation(apply, dim: int, rho: np.ndarray) -> float:
    """Largest change in the post-F vacuum measurement caused by an earlier,
    unrecorded vacuum measurement on the input state ``rho``."""
    p = np.zeros((dim, dim))
    p[0, 0] = 1.0
    q = np.eye(dim) - p
    dephased = p @ rho @ p + q @ rho @ q
    out, out_d = apply(rho), apply(dephased)
    prob_dev = abs(out[0, 0].real - out_d[0, 0].real)
    branch_dev = _trace_distance(q @ out @ q, q @ out_d @ q)
    return max(prob_dev, branch_dev)


def verify_vacuum_commutation(spec: FockOpSpec, n_states: int = 100, seed=None) -> float:
    """Max deviation over ``n_states`` random input states.

    Should be at rounding level whenever F fixes the vacuum.
    """
    if n_states < 1:
        raise DomainError("n_states must be at least 1")
    space, apply = build_operation(spec)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_states):
        rho = random_density_matrix(space.dim, rng)
        worst = max(worst, vacuum_measurement_deviation(apply, space.dim, rho))
    return worst
