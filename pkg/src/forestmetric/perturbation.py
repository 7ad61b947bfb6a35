"""Single-edge perturbations: O(n^2) closed-form increments of Q, d and rho.

Changing the total ``(k, t)`` weight by ``eps`` is a rank-one update of
``I + alpha L``; the closed forms below read the stored matrices only and
never refactor the linear system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .checks import ValidationReport
from .errors import DomainError, NumericalGuardError, PropertyViolation
from .forest_kernel import AccessibilityMatrix, accessibility_matrix
from .graph_model import WeightedMultigraph
from .metrics import (
    ADJUSTED,
    DistanceMatrix,
    adjusted_forest_distance_matrix,
    forest_distance_matrix,
)

RECOMPUTE_TOL = 1e-8
IDENTITY_TOL = 1e-9
DENOMINATOR_GUARD = 1e-14
DEGENERATE = 1e-12


@dataclass(frozen=True)
class EdgeDelta:
    """Change ``eps`` (nonzero) of the total weight between ``k`` and ``t``."""

    k: int
    t: int
    eps: float

    def __post_init__(self):
        if self.k == self.t:
            raise DomainError("edge endpoints must differ")
        if self.eps == 0:
            raise DomainError("eps must be nonzero")

    def reversed(self) -> EdgeDelta:
        return EdgeDelta(self.k, self.t, -self.eps)


@dataclass(frozen=True)
class ForestState:
    """``Q``, ``d`` and ``rho`` of one graph at one ``alpha``."""

    q: AccessibilityMatrix
    d: DistanceMatrix
    rho: DistanceMatrix

    @classmethod
    def of(cls, g: WeightedMultigraph, alpha: float) -> ForestState:
        return cls.from_q(accessibility_matrix(g, alpha))

    @classmethod
    def from_q(cls, q: AccessibilityMatrix) -> ForestState:
        return cls(q, forest_distance_matrix(q), adjusted_forest_distance_matrix(q))

    @property
    def alpha(self) -> float:
        return self.q.alpha


@dataclass(frozen=True)
class PerturbationResult:
    """Predicted increments; ``ratio`` is the common profile ratio ``1 / (1 + eps rho_kt)``."""

    dq: np.ndarray
    dd: np.ndarray
    drho: np.ndarray
    ratio: float


def apply_edge_delta(g: WeightedMultigraph, delta: EdgeDelta, *, new_edge: bool = False) -> WeightedMultigraph:
    """Graph that differs from ``g`` in the ``(k, t)`` edge only.

    A positive ``eps`` is added to the first existing ``(k, t)`` edge, or
    becomes a new edge if there is none (or ``new_edge`` is set).  A negative
    ``eps`` removes ``|eps|`` of the aggregate ``(k, t)`` weight: edges are
    consumed in order, an exact match is dropped whole, and a remainder is
    left on the last edge touched.

    Raises
    ------
    DomainError
        If the removal exceeds the available ``(k, t)`` weight, or a vertex is
        out of range.
    """
    k, t = sorted((delta.k, delta.t))
    if not (1 <= k and t <= g.n):
        raise DomainError(f"edge ({delta.k}, {delta.t}) outside 1..{g.n}")
    eps = delta.eps
    edges = list(g.edges)
    on_pair = [idx for idx, (u, v, _) in enumerate(edges) if (u, v) == (k, t)]

    if eps > 0:
        if on_pair and not new_edge:
            idx = on_pair[0]
            u, v, w = edges[idx]
            edges[idx] = (u, v, w + eps)
        else:
            edges.append((k, t, eps))
        return WeightedMultigraph(g.n, tuple(edges), g.hidden_source)

    remove = -eps
    total = sum((edges[idx][2] for idx in on_pair), 0)
    if remove > total and not _close(remove, total):
        raise DomainError(
            f"cannot remove weight {remove} from pair ({k}, {t}) carrying only {total}"
        )
    exact = [idx for idx in on_pair if _close(edges[idx][2], remove)]
    if exact:
        del edges[exact[0]]
        return WeightedMultigraph(g.n, tuple(edges), g.hidden_source)
    drop = set()
    for idx in on_pair:
        u, v, w = edges[idx]
        if remove >= w or _close(remove, w):
            drop.add(idx)
            remove -= w
            if remove <= 0 or _close(remove, 0):
                break
        else:
            edges[idx] = (u, v, w - remove)
            break
    edges = [e for idx, e in enumerate(edges) if idx not in drop]
    return WeightedMultigraph(g.n, tuple(edges), g.hidden_source)


def _close(a, b) -> bool:
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    return abs(float(a) - float(b)) <= 1e-12 * max(1.0, abs(float(a)), abs(float(b)))


def _denominator(rho_kt: float, eps: float) -> float:
    den = rho_kt + 1.0 / eps
    if abs(den) < DENOMINATOR_GUARD:
        # unreachable for a valid delta: 1/rho'_kt = 1/rho_kt + eps is finite and nonzero
        raise NumericalGuardError(f"rho_kt + 1/eps = {den:.3e}; the delta is not valid for this graph")
    return den


def predict_q_increment(q: AccessibilityMatrix, rho: DistanceMatrix, delta: EdgeDelta) -> np.ndarray:
    """``dq_ij = alpha (q_ik - q_it)(q_jt - q_jk) / (rho_kt + 1/eps)``."""
    if rho.kind != ADJUSTED:
        raise DomainError("rho must be an adjusted forest distance matrix")
    k, t = delta.k - 1, delta.t - 1
    eps = float(delta.eps)
    pi = q.q[:, k] - q.q[:, t]
    return -(q.alpha / _denominator(rho.d[k, t], eps)) * np.outer(pi, pi)


def predict_rho_increment(rho: DistanceMatrix, delta: EdgeDelta) -> np.ndarray:
    """``drho_ij = -(rho_ik - rho_it + rho_jt - rho_jk)^2 / (4 (rho_kt + 1/eps))``.

    Uses nothing but ``rho`` and ``eps``; ``alpha`` does not enter.
    """
    if rho.kind != ADJUSTED:
        raise DomainError("rho must be an adjusted forest distance matrix")
    k, t = delta.k - 1, delta.t - 1
    eps = float(delta.eps)
    s = rho.d[:, k] - rho.d[:, t]
    diff = s[:, None] - s[None, :]
    return -(diff * diff) / (4.0 * _denominator(rho.d[k, t], eps))


def predict(state: ForestState, delta: EdgeDelta) -> PerturbationResult:
    dq = predict_q_increment(state.q, state.rho, delta)
    drho = predict_rho_increment(state.rho, delta)
    rho_kt = state.rho[delta.k, delta.t]
    return PerturbationResult(dq, drho / (2.0 * state.alpha), drho, 1.0 / (1.0 + float(delta.eps) * rho_kt))


def update_state(state: ForestState, delta: EdgeDelta) -> ForestState:
    """State of the perturbed graph via the O(n^2) fast path."""
    q_new = state.q.q + predict_q_increment(state.q, state.rho, delta)
    return ForestState.from_q(AccessibilityMatrix(q_new, state.alpha))


# ---------------------------------------------------------------------------
# Identity checks on (before, after) pairs
# ---------------------------------------------------------------------------


def _finish(report: ValidationReport, strict: bool) -> ValidationReport:
    if strict and not report.passed:
        raise PropertyViolation(report.detail)
    return report


def endpoint_reciprocal_identity(
    rho: DistanceMatrix, rho_after: DistanceMatrix, delta: EdgeDelta, tol: float = IDENTITY_TOL
) -> ValidationReport:
    """``|1/rho'_kt - 1/rho_kt - eps| <= tol``; for ``eps == 1`` also ``drho_kt = -rho_kt rho'_kt``."""
    if rho.alpha != rho_after.alpha:
        raise DomainError("both matrices must be computed at the same alpha")
    r, r2 = rho[delta.k, delta.t], rho_after[delta.k, delta.t]
    eps = float(delta.eps)
    measures = {"reciprocal": abs(1.0 / r2 - 1.0 / r - eps)}
    if eps == 1:
        measures["unit_increment"] = abs((r2 - r) + r * r2)
    passed = all(v <= tol for v in measures.values())
    detail = "" if passed else f"endpoint identity defects {measures} exceed {tol:g}"
    return ValidationReport(passed, measures, detail=detail)


@dataclass(frozen=True)
class RatioChain:
    """Common ratio ``d'_kt / d_kt`` with the worst defect of every link in the chain.

    ``skipped_tau`` / ``skipped_pi`` count vertices where the profile entry
    vanishes and the quotient is undefined.
    """

    ratio: float
    defects: dict
    skipped_tau: int
    skipped_pi: int


def profile_ratio(
    before: ForestState,
    after: ForestState,
    k: int,
    t: int,
    eps: float | None = None,
    tol: float = IDENTITY_TOL,
) -> RatioChain:
    """Verify that every profile ratio equals ``d'_kt / d_kt`` and return it.

    Each quotient ``x'/x`` is checked in the cross-multiplied form
    ``|x' - r x| <= tol``, which also covers vertices where ``x`` vanishes.
    With ``eps`` given, ``r = 1/(1 + eps rho_kt) = 1 - eps rho'_kt`` is
    checked too.

    Raises
    ------
    PropertyViolation
        If any link of the chain disagrees beyond ``tol``.
    """
    r = after.d[k, t] / before.d[k, t]
    tau = before.d.d[:, k - 1] - before.d.d[:, t - 1]
    tau2 = after.d.d[:, k - 1] - after.d.d[:, t - 1]
    pi = before.q.q[:, k - 1] - before.q.q[:, t - 1]
    pi2 = after.q.q[:, k - 1] - after.q.q[:, t - 1]
    defects = {
        "tau": float(np.max(np.abs(tau2 - r * tau))),
        "pi": float(np.max(np.abs(pi2 - r * pi))),
        "rho": abs(after.rho[k, t] / before.rho[k, t] - r),
    }
    if eps is not None:
        eps = float(eps)
        defects["closed_form"] = abs(1.0 / (1.0 + eps * before.rho[k, t]) - r)
        defects["primed_form"] = abs(1.0 - eps * after.rho[k, t] - r)
    bad = {name: v for name, v in defects.items() if v > tol}
    if bad:
        raise PropertyViolation(f"profile ratio chain broken (ratio {r:.12g}): {bad}")
    return RatioChain(
        r,
        defects,
        int(np.sum(np.abs(tau) <= DEGENERATE)),
        int(np.sum(np.abs(pi) <= DEGENERATE)),
    )


def proportionality_check(
    before: ForestState, after: ForestState, k: int, t: int, tol: float = IDENTITY_TOL, strict: bool = True
) -> ValidationReport:
    """Profiles scaled by ``d_kt`` are invariant under the ``(k, t)`` change."""
    def scaled(state):
        d, q = state.d.d, state.q.q
        dkt = d[k - 1, t - 1]
        return (d[:, k - 1] - d[:, t - 1]) / dkt, (q[:, k - 1] - q[:, t - 1]) / dkt

    tau, pi = scaled(before)
    tau2, pi2 = scaled(after)
    measures = {"tau": float(np.max(np.abs(tau2 - tau))), "pi": float(np.max(np.abs(pi2 - pi)))}
    passed = all(v <= tol for v in measures.values())
    detail = "" if passed else f"proportionality defects {measures} exceed {tol:g}"
    return _finish(ValidationReport(passed, measures, detail=detail), strict)


def increment_formulas_check(
    before: ForestState, after: ForestState, delta: EdgeDelta, tol: float = IDENTITY_TOL, strict: bool = True
) -> ValidationReport:
    """Compare the observed increments of ``q`` and ``d`` with their profile forms.

    Two forms for ``dq_ij`` (unprimed and primed profiles) and four for
    ``2 dd_ij`` (tau/pi, unprimed/primed).
    """
    k, t = delta.k, delta.t
    alpha, eps = before.alpha, float(delta.eps)
    d_kt, d2_kt = before.d[k, t], after.d[k, t]
    fwd, back = d2_kt / d_kt, d_kt / d2_kt

    def profiles(state):
        d, q = state.d.d, state.q.q
        return d[:, k - 1] - d[:, t - 1], q[:, k - 1] - q[:, t - 1]

    tau, pi = profiles(before)
    tau2, pi2 = profiles(after)
    dq = after.q.q - before.q.q
    dd2 = 2.0 * (after.d.d - before.d.d)

    def sqdiff(x):
        diff = x[:, None] - x[None, :]
        return diff * diff

    c = alpha * eps
    forms = {
        "dq_unprimed": -c * np.outer(pi, pi) * fwd - dq,
        "dq_primed": -c * np.outer(pi2, pi2) * back - dq,
        "dd_tau_unprimed": -c * sqdiff(tau) * fwd - dd2,
        "dd_tau_primed": -c * sqdiff(tau2) * back - dd2,
        "dd_pi_unprimed": -c * sqdiff(pi) * fwd - dd2,
        "dd_pi_primed": -c * sqdiff(pi2) * back - dd2,
    }
    measures = {name: float(np.max(np.abs(err))) for name, err in forms.items()}
    passed = all(v <= tol for v in measures.values())
    detail = "" if passed else f"increment-form defects {measures} exceed {tol:g}"
    return _finish(ValidationReport(passed, measures, detail=detail), strict)


def reciprocity_metamorphic_check(
    g: WeightedMultigraph, delta: EdgeDelta, alpha: float, tol: float = 1e-10, strict: bool = True
) -> ValidationReport:
    """Apply ``delta`` and then its reverse; everything must return to the start.

    Also checks that the increments predicted on ``G`` for ``eps`` and on
    ``G'`` for ``-eps`` cancel.
    """
    s0 = ForestState.of(g, alpha)
    g1 = apply_edge_delta(g, delta)
    s1 = ForestState.of(g1, alpha)
    back = delta.reversed()
    s2 = ForestState.of(apply_edge_delta(g1, back), alpha)
    p01, p12 = predict(s0, delta), predict(s1, back)
    measures = {
        "q": float(np.max(np.abs(s2.q.q - s0.q.q))),
        "d": float(np.max(np.abs(s2.d.d - s0.d.d))),
        "rho": float(np.max(np.abs(s2.rho.d - s0.rho.d))),
        "dq_compose": float(np.max(np.abs(p01.dq + p12.dq))),
        "drho_compose": float(np.max(np.abs(p01.drho + p12.drho))),
    }
    passed = all(v <= tol for v in measures.values())
    detail = "" if passed else f"round-trip defects {measures} exceed {tol:g}"
    return _finish(ValidationReport(passed, measures, detail=detail), strict)


def recompute_defects(g: WeightedMultigraph, delta: EdgeDelta, alpha: float) -> dict:
    """Worst gaps between predicted and recomputed increments of ``Q`` and ``rho``."""
    before = ForestState.of(g, alpha)
    after = ForestState.of(apply_edge_delta(g, delta), alpha)
    pred = predict(before, delta)
    return {
        "q": float(np.max(np.abs(pred.dq - (after.q.q - before.q.q)))),
        "rho": float(np.max(np.abs(pred.drho - (after.rho.d - before.rho.d)))),
        "d": float(np.max(np.abs(pred.dd - (after.d.d - before.d.d)))),
    }
