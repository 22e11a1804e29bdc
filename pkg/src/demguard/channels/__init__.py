"""Receiver transfer-matrix models and mismatch-parameter extraction."""

from .eta import (
    BlockEta,
    BlockModel,
    EfficiencyCurve,
    EfficiencySample,
    MisalignmentModel,
    eta_brute_force,
    eta_from_blocks,
    eta_from_curves,
    eta_from_misalignment,
    eta_lower_bound_measured,
    factor_common_loss,
)
from .linalg import hermitian_eigenvalues, matrix_inverse, svd

__all__ = [
    "BlockEta",
    "BlockModel",
    "EfficiencyCurve",
    "EfficiencySample",
    "MisalignmentModel",
    "eta_brute_force",
    "eta_from_blocks",
    "eta_from_curves",
    "eta_from_misalignment",
    "eta_lower_bound_measured",
    "factor_common_loss",
    "hermitian_eigenvalues",
    "matrix_inverse",
    "svd",
]
