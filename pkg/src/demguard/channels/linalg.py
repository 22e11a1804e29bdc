"""Small dense complex linear algebra.

Matrices in this package are a few modes across (rarely more than a few
dozen), so the routines favour accuracy and transparency over speed:
one-sided Jacobi for the SVD, cyclic Jacobi for Hermitian spectra and
Gauss-Jordan elimination for inverses.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConvergenceError, DomainError, SingularMatrixError

MAX_SWEEPS = 100
JACOBI_TOL = 1e-14
HERMITIAN_TOL = 1e-10
SINGULAR_TOL = 1e-12


def as_complex_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DomainError(f"expected a nonempty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


def _complete_orthonormal(u: np.ndarray, have: np.ndarray) -> np.ndarray:
    """Replace the columns of ``u`` not flagged in ``have`` with unit vectors
    orthogonal to everything already present (modified Gram-Schmidt)."""
    m = u.shape[0]
    basis = [u[:, j] for j in range(u.shape[1]) if have[j]]
    candidates = iter(np.eye(m, dtype=complex))
    for j in range(u.shape[1]):
        if have[j]:
            continue
        for e in candidates:
            w = e.copy()
            for _ in range(2):
                for b in basis:
                    w -= np.vdot(b, w) * b
            nrm = np.linalg.norm(w)
            if nrm > 1e-8:
                u[:, j] = w / nrm
                basis.append(u[:, j])
                break
    return u


def _jacobi_tall(a: np.ndarray):
    m, n = a.shape
    w = a.copy()
    v = np.eye(n, dtype=complex)
    norm_a = np.linalg.norm(a)
    floor = (JACOBI_TOL * norm_a) ** 2
    for _ in range(MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                wp, wq = w[:, p], w[:, q]
                alpha = np.vdot(wp, wp).real
                beta = np.vdot(wq, wq).real
                gamma = np.vdot(wp, wq)
                g = abs(gamma)
                if g <= JACOBI_TOL * math.sqrt(alpha * beta) or g <= floor:
                    continue
                rotated = True
                phase = np.conj(gamma / g)
                zeta = (beta - alpha) / (2.0 * g)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                wq = wq * phase
                w[:, p], w[:, q] = c * wp - s * wq, s * wp + c * wq
                vp, vq = v[:, p], v[:, q] * phase
                v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
        if not rotated:
            break
    else:
        raise ConvergenceError(f"Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")

    s = np.linalg.norm(w, axis=0)
    order = np.argsort(-s, kind="stable")
    s, w, v = s[order], w[:, order], v[:, order]
    u = np.zeros((m, m), dtype=complex)
    # numerically null columns carry no direction; complete u instead
    have = np.zeros(m, dtype=bool)
    if s[0] > 0:
        have[:n] = s > 1e-15 * max(m, n) * s[0]
    u[:, have] = w[:, have[:n]] / s[have[:n]]
    if not np.all(have):
        u = _complete_orthonormal(u, have)
    return u, s, v.conj().T


def svd(a):
    """Full singular value decomposition of an m x n matrix.

    Returns unitary ``u`` (m x m) and ``v`` (n x n) and the min(m, n)
    singular values ``s`` in descending order, with
    ``a = u[:, :k] @ diag(s) @ v[:k]``.
    """
    a = as_complex_matrix(a)
    m, n = a.shape
    if m >= n:
        return _jacobi_tall(a)
    u, s, vh = _jacobi_tall(a.conj().T)
    return vh.conj().T, s, u.conj().T


def hermitian_eigenvalues(a) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, descending, by cyclic Jacobi."""
    a = as_complex_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.conj().T)) > HERMITIAN_TOL * scale:
        raise DomainError("matrix is not Hermitian within tolerance")
    a = 0.5 * (a + a.conj().T)
    norm_a = np.linalg.norm(a)
    for _ in range(MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= JACOBI_TOL * norm_a or norm_a == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = abs(a[p, q])
                if g <= 1e-17 * norm_a or g == 0.0:
                    continue
                phase = np.conj(a[p, q] / g)
                zeta = (a[q, q].real - a[p, p].real) / (2.0 * g)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                j2 = np.array([[c, s], [-s * phase, c * phase]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j2
                a[idx, :] = j2.conj().T @ a[idx, :]
    else:
        raise ConvergenceError(f"Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps")
    return np.sort(np.diag(a).real)[::-1]


def matrix_inverse(a) -> np.ndarray:
    """Gauss-Jordan inverse with partial pivoting.

    Raises ``SingularMatrixError`` once a pivot drops below 1e-12 times the
    largest row norm of ``a``.
    """
    a = as_complex_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    threshold = SINGULAR_TOL * float(np.max(np.linalg.norm(a, axis=1)))
    aug = np.hstack([a, np.eye(n, dtype=complex)])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        if abs(aug[piv, col]) <= threshold:
            raise SingularMatrixError(f"matrix is singular to working precision (column {col})")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col] /= aug[col, col]
        others = np.arange(n) != col
        aug[others] -= np.outer(aug[others, col], aug[col])
    return aug[:, n:]
