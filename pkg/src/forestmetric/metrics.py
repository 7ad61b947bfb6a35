"""Forest distances, cumulative connection weight, profiles and upper bounds."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .checks import ValidationReport
from .errors import DomainError
from .forest_kernel import DEFAULT_TOL, AccessibilityMatrix
from .graph_model import WeightedMultigraph, build_laplacian

FOREST = "forest"
ADJUSTED = "adjusted_forest"
TRIANGLE_CHECK_LIMIT = 200


@dataclass(frozen=True)
class DistanceMatrix:
    """Forest (``kind='forest'``) or adjusted forest distance matrix at ``alpha``."""

    d: np.ndarray
    kind: str
    alpha: float

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def __getitem__(self, ij):
        i, j = ij
        return self.d[i - 1, j - 1]


@dataclass(frozen=True)
class ProfileVector:
    """``tau`` (distance) or ``pi`` (accessibility) profile anchored at the pair ``(k, t)``.

    ``values[i - 1]`` belongs to vertex ``i``.
    """

    values: np.ndarray
    k: int
    t: int
    kind: str

    def __getitem__(self, i):
        return self.values[i - 1]


def _check_pair(k, t, n):
    if k == t:
        raise DomainError(f"anchor vertices must differ, got k = t = {k}")
    for v in (k, t):
        if not 1 <= v <= n:
            raise DomainError(f"vertex {v} outside 1..{n}")


def _gram_distance(q: np.ndarray) -> np.ndarray:
    diag = np.diag(q)
    s = diag[:, None] + diag[None, :] - q - q.T
    np.fill_diagonal(s, 0.0)
    return s


def forest_distance_matrix(q: AccessibilityMatrix) -> DistanceMatrix:
    """``d_ij = (q_ii + q_jj - q_ij - q_ji) / 2``."""
    return DistanceMatrix(0.5 * _gram_distance(q.q), FOREST, q.alpha)


def adjusted_forest_distance_matrix(q: AccessibilityMatrix) -> DistanceMatrix:
    """``rho_ij = alpha (q_ii + q_jj - q_ij - q_ji)``.

    Computed as ``2 alpha * d`` from the same forest distance array so that
    ``rho == 2 * alpha * d`` holds bit for bit.
    """
    d = forest_distance_matrix(q).d
    return DistanceMatrix((2.0 * q.alpha) * d, ADJUSTED, q.alpha)


def _require_adjusted(rho: DistanceMatrix):
    if rho.kind != ADJUSTED:
        raise DomainError(f"expected an adjusted forest distance matrix, got kind={rho.kind!r}")


def cumulative_weight(rho: DistanceMatrix, i: int, j: int) -> float:
    """Cumulative weight of connections ``1/rho_ij - 1/(2 alpha)`` for distinct ``i, j``."""
    _require_adjusted(rho)
    if i == j:
        raise DomainError("cumulative weight is defined only for distinct vertices")
    _check_pair(i, j, rho.n)
    return 1.0 / rho[i, j] - 1.0 / (2.0 * rho.alpha)


def cumulative_weight_matrix(rho: DistanceMatrix) -> np.ndarray:
    """All cumulative weights; the diagonal is NaN (undefined)."""
    _require_adjusted(rho)
    with np.errstate(divide="ignore"):
        theta = 1.0 / rho.d - 1.0 / (2.0 * rho.alpha)
    np.fill_diagonal(theta, np.nan)
    return theta


def tau_profile(d: DistanceMatrix, k: int, t: int) -> ProfileVector:
    """``tau_i = d_ik - d_it`` for every vertex ``i``."""
    _check_pair(k, t, d.n)
    return ProfileVector(d.d[:, k - 1] - d.d[:, t - 1], k, t, "tau")


def pi_profile(q: AccessibilityMatrix, k: int, t: int) -> ProfileVector:
    """``pi_i = q_ik - q_it`` for every vertex ``i``."""
    _check_pair(k, t, q.n)
    return ProfileVector(q.q[:, k - 1] - q.q[:, t - 1], k, t, "pi")


def diameter(d: DistanceMatrix) -> float:
    """Largest pairwise distance; 0 for graphs with fewer than two vertices."""
    if d.n < 2:
        return 0.0
    return float(np.max(d.d))


def algebraic_connectivity(lap: np.ndarray) -> float:
    """Second-smallest Laplacian eigenvalue (full symmetric eigensolve)."""
    lap = np.asarray(lap, dtype=float)
    if lap.shape[0] < 2:
        raise DomainError("algebraic connectivity needs at least two vertices")
    return float(np.linalg.eigvalsh(lap)[1])


def profile_identities(q: AccessibilityMatrix, d: DistanceMatrix, k: int, t: int) -> dict:
    """Worst defects of the three linear tau/pi identities for the anchor ``(k, t)``.

    Keys: ``distpi`` (``2 d_kt = pi_k - pi_t``), ``taupi``
    (``2 tau_i = (pi_k - pi_i) + (pi_t - pi_i)``) and ``scales``
    (``tau_i - tau_j = pi_j - pi_i`` over all ``i, j``).
    """
    tau = tau_profile(d, k, t).values
    pi = pi_profile(q, k, t).values
    pk, pt = pi[k - 1], pi[t - 1]
    return {
        "distpi": abs(2 * d[k, t] - (pk - pt)),
        "taupi": float(np.max(np.abs(2 * tau - ((pk - pi) + (pt - pi))))),
        "scales": float(np.max(np.abs((tau[:, None] - tau[None, :]) - (pi[None, :] - pi[:, None])))),
    }


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------


@dataclass
class BoundsReport:
    """Slacks (bound minus value) of the five upper bounds over off-diagonal pairs.

    ``slacks[name]`` is an n x n array with NaN on the diagonal.  Names:
    ``d_le_1``, ``rho_le_2alpha``, ``d_connectivity``, ``d_pair_weight``,
    ``rho_pair_weight``.
    """

    alpha: float
    algebraic_connectivity: float
    slacks: dict = field(default_factory=dict)
    tol: float = DEFAULT_TOL

    def min_slack(self, name: str) -> float:
        s = self.slacks[name]
        return float(np.nanmin(s)) if np.any(~np.isnan(s)) else np.inf

    def holds(self, name: str) -> bool:
        return self.min_slack(name) >= -self.tol

    @property
    def passed(self) -> bool:
        return all(self.holds(name) for name in self.slacks)

    def tight_pairs(self, name: str, tol: float | None = None) -> list[tuple[int, int]]:
        """1-based pairs ``i < j`` at which the bound is attained within ``tol``."""
        tol = self.tol if tol is None else tol
        s = self.slacks[name]
        return [(i + 1, j + 1) for i, j in zip(*np.nonzero(np.abs(s) <= tol)) if i < j]

    def summary(self) -> dict:
        return {name: self.min_slack(name) for name in self.slacks}


def bounds_report(
    g: WeightedMultigraph,
    q: AccessibilityMatrix,
    d: DistanceMatrix,
    rho: DistanceMatrix,
    tol: float = DEFAULT_TOL,
) -> BoundsReport:
    alpha = q.alpha
    if not (d.alpha == rho.alpha == alpha):
        raise DomainError("q, d and rho must be computed at the same alpha")
    n = g.n
    a = algebraic_connectivity(build_laplacian(g)) if n >= 2 else 0.0
    eps = g.pair_weight_matrix()
    slacks = {
        "d_le_1": 1.0 - d.d,
        "rho_le_2alpha": 2.0 * alpha - rho.d,
        "d_connectivity": 1.0 / (1.0 + alpha * max(a, 0.0)) - d.d,
        "d_pair_weight": 1.0 / (1.0 + 2.0 * alpha * eps) - d.d,
        "rho_pair_weight": 1.0 / (eps + 1.0 / (2.0 * alpha)) - rho.d,
    }
    for s in slacks.values():
        np.fill_diagonal(s, np.nan)
    return BoundsReport(alpha, a, slacks, tol)


# ---------------------------------------------------------------------------
# Metric axioms
# ---------------------------------------------------------------------------


def verify_metric_axioms(d, tol: float = DEFAULT_TOL, *, allow_large: bool = False) -> ValidationReport:
    """Nonnegativity, zero diagonal, symmetry and all triangle inequalities.

    Accepts a :class:`DistanceMatrix` or an array that may contain ``inf``
    (resistance across components).  The triangle check is O(n^3) and is
    refused above 200 vertices unless ``allow_large`` is set.  The worst
    triangle violation is reported as the 1-based triple ``(i, k, j)`` with
    ``d_ij > d_ik + d_kj``.
    """
    arr = np.asarray(getattr(d, "d", d), dtype=float)
    n = arr.shape[0]
    if n > TRIANGLE_CHECK_LIMIT and not allow_large:
        raise DomainError(
            f"triangle check on n={n} > {TRIANGLE_CHECK_LIMIT} vertices needs allow_large=True"
        )
    finite = np.isfinite(arr)
    min_entry = float(np.min(arr)) if n else 0.0
    diag = float(np.max(np.abs(np.diag(arr)))) if n else 0.0
    with np.errstate(invalid="ignore"):
        sym = np.where(~finite & ~finite.T, 0.0, np.abs(arr - arr.T))
    symmetry = float(np.max(sym)) if n else 0.0

    worst, triple = 0.0, None
    for k in range(n):
        through = arr[:, k][:, None] + arr[k, :][None, :]
        with np.errstate(invalid="ignore"):
            excess = np.where(np.isinf(through), -np.inf, arr - through)
        idx = np.unravel_index(np.argmax(excess), excess.shape)
        if excess[idx] > worst:
            worst = float(excess[idx])
            triple = (int(idx[0]) + 1, k + 1, int(idx[1]) + 1)

    measures = {
        "min_entry": min_entry,
        "diagonal": diag,
        "symmetry": symmetry,
        "triangle": worst,
        "worst_triple": triple,
    }
    passed = min_entry >= -tol and diag <= tol and symmetry <= tol and worst <= tol
    detail = ""
    if not passed:
        parts = []
        if min_entry < -tol:
            parts.append(f"negative entry {min_entry:.3e}")
        if diag > tol:
            parts.append(f"nonzero diagonal {diag:.3e}")
        if symmetry > tol:
            parts.append(f"asymmetry {symmetry:.3e}")
        if worst > tol:
            i, k, j = triple
            parts.append(f"triangle violated: d[{i},{j}] exceeds d[{i},{k}] + d[{k},{j}] by {worst:.3e}")
        detail = "; ".join(parts)
    return ValidationReport(passed, measures, detail=detail)
