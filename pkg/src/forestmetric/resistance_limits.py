"""Resistance distance and the small/large-alpha behaviour of the forest metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .checks import ValidationReport
from .errors import DomainError, PropertyViolation
from .forest_kernel import accessibility_matrix
from .graph_model import ComponentPartition, WeightedMultigraph, alpha_extension, build_laplacian, components
from .metrics import adjusted_forest_distance_matrix, forest_distance_matrix


@dataclass(frozen=True)
class ExtendedDistanceMatrix:
    """Distances on the extended real line.

    ``finite`` holds the real entries (0 where the distance is infinite);
    ``infinite`` marks the cross-component pairs.  Use :meth:`as_array` for
    a float array carrying ``inf``.
    """

    finite: np.ndarray
    infinite: np.ndarray
    kind: str = "resistance"

    @property
    def n(self) -> int:
        return self.finite.shape[0]

    def __getitem__(self, ij):
        i, j = ij
        return np.inf if self.infinite[i - 1, j - 1] else float(self.finite[i - 1, j - 1])

    def as_array(self) -> np.ndarray:
        return np.where(self.infinite, np.inf, self.finite)

    def to_wire(self, fmt=float) -> list:
        """Nested lists with the string ``"inf"`` for infinite entries."""
        return [
            ["inf" if inf else fmt(x) for x, inf in zip(row, irow)]
            for row, irow in zip(self.finite, self.infinite)
        ]


def laplacian_pseudoinverse(lap: np.ndarray, parts: ComponentPartition) -> np.ndarray:
    """Moore-Penrose inverse of ``lap``, one block per component.

    For a component of size ``m`` with Laplacian block ``L_c``,
    ``L_c^+ = (L_c + J/m)^-1 - J/m``; blocks between components are zero.
    """
    n = lap.shape[0]
    pinv = np.zeros((n, n))
    for c in range(parts.count):
        idx = parts.members(c)
        m = len(idx)
        shift = np.full((m, m), 1.0 / m)
        block = np.linalg.solve(lap[np.ix_(idx, idx)] + shift, np.eye(m)) - shift
        pinv[np.ix_(idx, idx)] = 0.5 * (block + block.T)
    return pinv


def penrose_defects(lap: np.ndarray, pinv: np.ndarray) -> dict:
    """Defects of ``L L+ L = L``, ``L+ L L+ = L+`` and symmetry of ``L L+`` and ``L+ L``."""
    lp = lap @ pinv
    pl = pinv @ lap
    return {
        "LPL": float(np.max(np.abs(lp @ lap - lap))),
        "PLP": float(np.max(np.abs(pl @ pinv - pinv))),
        "LP_sym": float(np.max(np.abs(lp - lp.T))),
        "PL_sym": float(np.max(np.abs(pl - pl.T))),
    }


def resistance_distance_matrix(g: WeightedMultigraph) -> ExtendedDistanceMatrix:
    """``l+_ii + l+_jj - l+_ij - l+_ji`` within components, ``+inf`` across."""
    parts = components(g)
    pinv = laplacian_pseudoinverse(build_laplacian(g), parts)
    diag = np.diag(pinv)
    r = diag[:, None] + diag[None, :] - pinv - pinv.T
    same = parts.same_component_mask()
    r = np.where(same, r, 0.0)
    np.fill_diagonal(r, 0.0)
    return ExtendedDistanceMatrix(r, ~same)


def limit_forest_distance(g: WeightedMultigraph, parts: ComponentPartition | None = None) -> np.ndarray:
    """``lim_{alpha -> inf} d^alpha``: 0 within components, ``(1/|V_i| + 1/|V_j|)/2`` across."""
    parts = components(g) if parts is None else parts
    inv = 1.0 / parts.sizes[parts.assignment]
    return np.where(parts.same_component_mask(), 0.0, 0.5 * (inv[:, None] + inv[None, :]))


@dataclass(frozen=True)
class ConvergenceRecord:
    """One grid point; field names match the JSON report schema."""

    alpha: float
    max_defect_d: float
    max_defect_rho: float
    theta_cross_max: float | None = None
    rel_defect_rho: float | None = None

    def to_dict(self) -> dict:
        out = {
            "alpha": self.alpha,
            "max_defect_d": self.max_defect_d,
            "max_defect_rho": self.max_defect_rho,
            "theta_cross_max": self.theta_cross_max,
        }
        if self.rel_defect_rho is not None:
            out["rel_defect_rho"] = self.rel_defect_rho
        return out


@dataclass(frozen=True)
class ConvergenceReport:
    direction: str
    records: tuple
    monotone: bool

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "monotone": self.monotone,
            "records": [r.to_dict() for r in self.records],
        }


def _monotone_decay(values) -> bool:
    vals = [v for v in values if v is not None]
    return all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))


def limit_small_alpha(g: WeightedMultigraph, alpha_grid) -> ConvergenceReport:
    """Distance of ``d^alpha`` from the discrete metric along a decreasing grid.

    ``max_defect_rho`` is ``max rho^alpha``, the distance of ``rho^alpha``
    from its limit, the zero function.
    """
    grid = [float(a) for a in alpha_grid]
    if any(a <= 0 for a in grid) or any(b >= a for a, b in zip(grid, grid[1:])):
        raise DomainError("alpha grid must be positive and strictly decreasing")
    discrete = 1.0 - np.eye(g.n)
    records = []
    for a in grid:
        q = accessibility_matrix(g, a)
        d = forest_distance_matrix(q).d
        rho = adjusted_forest_distance_matrix(q).d
        records.append(
            ConvergenceRecord(
                a,
                float(np.max(np.abs(d - discrete))) if g.n else 0.0,
                float(np.max(rho)) if g.n else 0.0,
            )
        )
    return ConvergenceReport("small", tuple(records), _monotone_decay([r.max_defect_d for r in records]))


def limit_large_alpha(g: WeightedMultigraph, alpha_grid) -> ConvergenceReport:
    """Convergence of ``rho^alpha`` to resistance and of ``d^alpha`` to its limit along an increasing grid.

    ``max_defect_rho`` runs over distinct pairs in the same component;
    ``max_defect_d`` over all pairs; ``theta_cross_max`` is the largest
    cumulative weight between vertices of different components (None when
    the graph is connected).
    """
    grid = [float(a) for a in alpha_grid]
    if any(a <= 0 for a in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("alpha grid must be positive and strictly increasing")
    parts = components(g)
    res = resistance_distance_matrix(g)
    within = ~res.infinite & ~np.eye(g.n, dtype=bool)
    cross = res.infinite
    d_inf = limit_forest_distance(g, parts)
    records = []
    for a in grid:
        q = accessibility_matrix(g, a)
        d = forest_distance_matrix(q).d
        rho = adjusted_forest_distance_matrix(q).d
        gap = np.abs(rho - res.finite)[within]
        rel = (gap / res.finite[within]) if gap.size else gap
        theta = None
        if cross.any():
            theta = float(np.max(1.0 / rho[cross] - 1.0 / (2.0 * a)))
        records.append(
            ConvergenceRecord(
                a,
                float(np.max(np.abs(d - d_inf))) if g.n else 0.0,
                float(gap.max()) if gap.size else 0.0,
                theta,
                float(rel.max()) if rel.size else 0.0,
            )
        )
    return ConvergenceReport(
        "large",
        tuple(records),
        _monotone_decay([r.max_defect_rho for r in records]) and _monotone_decay([r.max_defect_d for r in records]),
    )


def alpha_extension_identity_check(
    g: WeightedMultigraph, alpha: float, tol: float = 1e-8, strict: bool = True
) -> ValidationReport:
    """Resistance on the alpha-extension, restricted to ``g``'s vertices, against ``2 d^alpha``."""
    ext = alpha_extension(g, alpha)
    res = resistance_distance_matrix(ext)
    if res.infinite.any():
        raise PropertyViolation("alpha-extension came out disconnected")
    n = g.n
    r = res.finite[:n, :n]
    d = forest_distance_matrix(accessibility_matrix(g, alpha)).d
    defect = float(np.max(np.abs(r - 2.0 * d))) if n else 0.0
    passed = defect <= tol
    report = ValidationReport(
        passed,
        {"alpha": float(alpha), "max_defect": defect},
        detail="" if passed else f"extension identity defect {defect:.3e} exceeds {tol:g}",
    )
    if strict and not passed:
        raise PropertyViolation(report.detail)
    return report
