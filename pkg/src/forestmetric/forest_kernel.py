"""Relative forest accessibility matrix ``Q = (I + alpha L)^-1``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .checks import ValidationReport
from .errors import DomainError, ForestMetricError
from .graph_model import WeightedMultigraph, build_laplacian

DEFAULT_TOL = 1e-9
LARGE_ALPHA = 1e8


@dataclass(frozen=True)
class AccessibilityMatrix:
    """Accessibility matrix ``q`` computed at parameter ``alpha``.

    Symmetric, entrywise nonnegative, rows and columns summing to one.
    """

    q: np.ndarray
    alpha: float

    @property
    def n(self) -> int:
        return self.q.shape[0]

    def __getitem__(self, ij):
        """1-based entry access: ``Q[i, j]`` is the accessibility of ``j`` from ``i``."""
        i, j = ij
        return self.q[i - 1, j - 1]


def accessibility_matrix(g: WeightedMultigraph, alpha: float, laplacian=None) -> AccessibilityMatrix:
    """Solve ``(I + alpha L) Q = I`` by Cholesky factorization.

    ``I + alpha L`` is symmetric positive definite for every ``alpha > 0``,
    so the factorization exists; a failure is reported as an internal error
    carrying the condition estimate.  ``laplacian`` may be passed to skip
    rebuilding it.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    alpha = float(alpha)
    lap = build_laplacian(g) if laplacian is None else laplacian
    n = lap.shape[0]
    if n == 0:
        return AccessibilityMatrix(np.zeros((0, 0)), alpha)
    system = np.eye(n) + alpha * lap
    try:
        factor = la.cho_factor(system, lower=True, check_finite=True)
    except la.LinAlgError as exc:
        raise ForestMetricError(
            f"Cholesky factorization of I + alpha L failed (cond ~ {np.linalg.cond(system):.3e})"
        ) from exc
    q = la.cho_solve(factor, np.eye(n))
    q = 0.5 * (q + q.T)
    return AccessibilityMatrix(q, alpha)


def validate_doubly_stochastic(q, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Measure symmetry defect, minimum entry and worst row/column-sum defect.

    Accepts an :class:`AccessibilityMatrix` or a bare square array.  Passes
    when all three are within ``tol``.  For ``alpha >= 1e8`` a conditioning
    warning is attached instead of refusing.
    """
    alpha = getattr(q, "alpha", None)
    arr = np.asarray(getattr(q, "q", q), dtype=float)
    if arr.size == 0:
        return ValidationReport(True, {"symmetry": 0.0, "min_entry": 0.0, "row_sum": 0.0})
    symmetry = float(np.max(np.abs(arr - arr.T)))
    min_entry = float(arr.min())
    row_sum = float(max(np.max(np.abs(arr.sum(axis=1) - 1)), np.max(np.abs(arr.sum(axis=0) - 1))))
    passed = symmetry <= tol and min_entry >= -tol and row_sum <= tol
    report = ValidationReport(
        passed, {"symmetry": symmetry, "min_entry": min_entry, "row_sum": row_sum}
    )
    if alpha is not None and alpha >= LARGE_ALPHA:
        report.warnings.append(
            f"alpha={alpha:g} is large; I + alpha L is ill-conditioned and defects may exceed tol"
        )
    if not passed:
        report.detail = (
            f"symmetry defect {symmetry:.3e}, min entry {min_entry:.3e}, "
            f"row-sum defect {row_sum:.3e} (tol {tol:g})"
        )
    return report


def residual(g: WeightedMultigraph, q: AccessibilityMatrix) -> float:
    """``max |(I + alpha L) Q - I|``."""
    lap = build_laplacian(g)
    n = lap.shape[0]
    return float(np.max(np.abs((np.eye(n) + q.alpha * lap) @ q.q - np.eye(n)))) if n else 0.0
