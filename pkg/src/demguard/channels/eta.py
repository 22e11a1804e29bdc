"""Extraction of the mismatch parameters eta_Z, eta_X from receiver models.

Three descriptions of Bob's receiver are supported:

* sampled efficiency curves per mode label ``t``, bit value and basis;
* a block transfer-matrix model ``(C0, C1)`` with no mixing between the
  modes of different logical bits;
* efficiency curves plus per-mode unitary misalignments.

For measured data with bounded inter-mode coupling there is also a
conservative lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, NamedTuple, Sequence

import numpy as np

from ..errors import DomainError, SingularMatrixError
from .linalg import as_complex_matrix, matrix_inverse, svd

CurveMode = Literal["basis_independent", "general"]

BASIS_MATCH_TOL = 1e-9
UNITARY_TOL = 1e-10


class EfficiencySample(NamedTuple):
    t: float
    eta_z0: float
    eta_z1: float
    eta_x0: float
    eta_x1: float


@dataclass(frozen=True)
class EfficiencyCurve:
    """Detection efficiencies sampled at discrete mode labels.

    Efficiencies need not be normalised to 1; only ratios matter.
    """

    samples: tuple[EfficiencySample, ...]

    def __post_init__(self):
        if len(self.samples) == 0:
            raise DomainError("efficiency curve needs at least one sample")
        for s in self.samples:
            vals = s[1:]
            if any(not math.isfinite(v) for v in vals):
                raise DomainError(f"non-finite efficiency at t={s.t}")
            if any(v < 0 for v in vals):
                raise DomainError(f"negative efficiency at t={s.t}")

    @classmethod
    def from_columns(cls, t, eta_z0, eta_z1, eta_x0=None, eta_x1=None) -> "EfficiencyCurve":
        """Build a curve from column sequences; X columns default to Z."""
        eta_x0 = eta_z0 if eta_x0 is None else eta_x0
        eta_x1 = eta_z1 if eta_x1 is None else eta_x1
        cols = [list(t), list(eta_z0), list(eta_z1), list(eta_x0), list(eta_x1)]
        if len({len(c) for c in cols}) != 1:
            raise DomainError("efficiency columns differ in length")
        return cls(tuple(EfficiencySample(*map(float, row)) for row in zip(*cols)))

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.samples], dtype=float)

    @property
    def z(self) -> np.ndarray:
        return np.stack([self.column("eta_z0"), self.column("eta_z1")], axis=1)

    @property
    def x(self) -> np.ndarray:
        return np.stack([self.column("eta_x0"), self.column("eta_x1")], axis=1)

    def bases_agree(self, tol: float = BASIS_MATCH_TOL) -> bool:
        return bool(np.max(np.abs(self.z - self.x)) <= tol)


@dataclass(frozen=True)
class BlockModel:
    c0: np.ndarray
    c1: np.ndarray

    def __post_init__(self):
        c0 = as_complex_matrix(self.c0)
        c1 = as_complex_matrix(self.c1)
        if c0.shape[0] != c0.shape[1] or c0.shape != c1.shape:
            raise DomainError(f"blocks must be square and equal in size, got {c0.shape} and {c1.shape}")
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)

    @property
    def n(self) -> int:
        return self.c0.shape[0]


@dataclass(frozen=True)
class MisalignmentModel:
    curve: EfficiencyCurve
    v_blocks_z: tuple[np.ndarray, ...]
    v_blocks_x: tuple[np.ndarray, ...]

    def __post_init__(self):
        n = len(self.curve.samples)
        for name in ("v_blocks_z", "v_blocks_x"):
            blocks = tuple(as_complex_matrix(b) for b in getattr(self, name))
            if len(blocks) != n:
                raise DomainError(f"{name} needs one 2x2 block per sample ({n}), got {len(blocks)}")
            for j, b in enumerate(blocks):
                if b.shape != (2, 2):
                    raise DomainError(f"{name}[{j}] is not 2x2")
                if np.max(np.abs(b.conj().T @ b - np.eye(2))) > UNITARY_TOL:
                    raise DomainError(f"{name}[{j}] is not unitary")
            object.__setattr__(self, name, blocks)


class BlockEta(NamedTuple):
    eta: float
    no_key: bool


def _pair_ratio_min(pairs: np.ndarray) -> float:
    """min over rows of min(a/b, b/a); a blind detector gives 0."""
    a, b = pairs[:, 0], pairs[:, 1]
    hi = np.maximum(a, b)
    lo = np.minimum(a, b)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(hi > 0, lo / np.where(hi > 0, hi, 1.0), 0.0)
    return float(np.min(ratio))


def eta_from_curves(curve: EfficiencyCurve, mode: CurveMode = "basis_independent") -> tuple[float, float]:
    """Return ``(eta_z, eta_x)``.

    ``basis_independent`` assumes both bases share the same efficiencies and
    no coupling between mode labels; per label the larger efficiency is
    absorbed into the common loss and the worst remaining ratio is kept.
    ``general`` allows coupling between labels and basis-dependent curves:
    the smallest efficiency of a basis over the largest efficiency of either.
    """
    if mode == "basis_independent":
        if not curve.bases_agree():
            raise DomainError("Z and X efficiency columns differ; use mode='general'")
        eta = _pair_ratio_min(curve.z)
        return eta, eta
    if mode == "general":
        z, x = curve.z, curve.x
        top = max(float(z.max()), float(x.max()))
        if top == 0.0:
            return 0.0, 0.0
        return float(z.min()) / top, float(x.min()) / top
    raise DomainError(f"unknown mode {mode!r}")


def factor_common_loss(curve: EfficiencyCurve) -> tuple[np.ndarray, EfficiencyCurve]:
    """Split off the per-label loss common to both detectors.

    The common factor is the larger Z efficiency at each label; the residual
    curve is the original divided by it (all four columns), so the better
    detector sits at efficiency 1. Labels where both Z detectors are blind
    keep a residual of 0.
    """
    common = curve.z.max(axis=1)
    safe = np.where(common > 0, common, 1.0)
    scale = np.where(common > 0, 1.0 / safe, 0.0)
    rows = []
    for s, k in zip(curve.samples, scale):
        rows.append(EfficiencySample(s.t, s.eta_z0 * k, s.eta_z1 * k, s.eta_x0 * k, s.eta_x1 * k))
    return common, EfficiencyCurve(tuple(rows))


def eta_from_misalignment(model: MisalignmentModel) -> tuple[float, float]:
    """Mismatch with per-label unitary misalignments.

    Without coupling between labels the unitaries can be absorbed and drop
    out entirely; the answer depends only on the efficiency curve.
    """
    mode: CurveMode = "basis_independent" if model.curve.bases_agree() else "general"
    return eta_from_curves(model.curve, mode)


def eta_lower_bound_measured(efficiencies: Iterable[float], delta: float) -> float:
    """Certified eta from measured efficiencies when each mode leaks at most
    ``delta`` of its power into the others: (min - delta) / (max + delta)."""
    eff = np.asarray(list(efficiencies), dtype=float)
    if eff.size == 0:
        raise DomainError("need at least one efficiency measurement")
    if np.any(eff < 0) or not np.all(np.isfinite(eff)):
        raise DomainError("efficiencies must be finite and non-negative")
    if not (delta >= 0 and math.isfinite(delta)):
        raise DomainError(f"coupling delta must be a finite non-negative number, got {delta}")
    top = float(eff.max()) + delta
    if top == 0.0:
        return 0.0
    return max(0.0, (float(eff.min()) - delta) / top)


def eta_from_blocks(model: BlockModel) -> BlockEta:
    """Mismatch of a block model from the singular values of C0 C1^-1.

    sqrt(eta) = min(min s, min 1/s). A singular block means some
    superposition of modes is never detected for one bit value, so no key
    can be certified; that case returns ``BlockEta(0.0, no_key=True)``.
    """
    try:
        matrix_inverse(model.c0)
        c1_inv = matrix_inverse(model.c1)
    except SingularMatrixError:
        return BlockEta(0.0, True)
    _, s, _ = svd(model.c0 @ c1_inv)
    root = min(float(s[-1]), 1.0 / float(s[0]))
    eta = min(1.0, root * root)
    return BlockEta(eta, eta == 0.0)


def _golden_min(f, lo: float, hi: float, iters: int = 40) -> tuple[float, float]:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def _min_ratio(num: np.ndarray, den: np.ndarray, starts: np.ndarray, iterations: int) -> float:
    """Minimise psi^H num psi / psi^H den psi by coordinate golden-section
    search over the real and imaginary parts of psi."""
    n = num.shape[0]
    q_num = np.einsum("ki,ij,kj->k", starts.conj(), num, starts).real
    q_den = np.einsum("ki,ij,kj->k", starts.conj(), den, starts).real
    best = int(np.argmin(q_num / q_den))
    psi = starts[best] / np.linalg.norm(starts[best])
    value = float(q_num[best] / q_den[best])
    directions = [np.eye(n, dtype=complex)[k] * ph for ph in (1.0, 1.0j) for k in range(n)]
    width = 1.0
    for _ in range(iterations):
        moved = 0.0
        for d in directions:
            # along psi + tau d both quadratic forms are quadratics in tau
            a_n = float(np.vdot(psi, num @ psi).real)
            b_n = float(np.vdot(d, num @ psi).real)
            c_n = float(np.vdot(d, num @ d).real)
            a_d = float(np.vdot(psi, den @ psi).real)
            b_d = float(np.vdot(d, den @ psi).real)
            c_d = float(np.vdot(d, den @ d).real)

            def along(tau):
                return (a_n + 2 * b_n * tau + c_n * tau * tau) / (a_d + 2 * b_d * tau + c_d * tau * tau)

            tau, f_tau = _golden_min(along, -width, width)
            if f_tau < value:
                psi = psi + tau * d
                psi = psi / np.linalg.norm(psi)
                value = f_tau
                moved = max(moved, abs(tau))
        width = min(1.0, 4.0 * moved) if moved > 0.0 else width / 4.0
        if width < 1e-10:
            break
    return value


def eta_brute_force(model: BlockModel, n_samples: int = 2000, seed=None, iterations: int = 200) -> float:
    """Mismatch as the worst detection-probability ratio over input states.

    Samples ``n_samples`` random superpositions psi of the modes of one bit
    value, keeps the best for each of the two ratios
    psi^H C0^H C0 psi / psi^H C1^H C1 psi and its reciprocal, then polishes
    both. Every returned value is attained by an actual psi, so the
    estimate approaches the exact minimum from above.
    """
    if n_samples < 1:
        raise DomainError("n_samples must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    a0 = model.c0.conj().T @ model.c0
    a1 = model.c1.conj().T @ model.c1
    try:
        matrix_inverse(model.c0)
        matrix_inverse(model.c1)
    except SingularMatrixError:
        return 0.0
    n = model.n
    starts = rng.normal(size=(n_samples, n)) + 1j * rng.normal(size=(n_samples, n))
    r01 = _min_ratio(a0, a1, starts, iterations)
    r10 = _min_ratio(a1, a0, starts, iterations)
    return min(1.0, r01, r10)
