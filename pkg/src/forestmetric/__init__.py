"""Forest metrics of weighted multigraphs.

Relative forest accessibility ``Q = (I + alpha L)^-1``, forest and adjusted
forest distances, cumulative connection weights, closed-form single-edge
updates, a brute-force rooted-forest oracle and resistance-distance limits.
"""

from .checks import ValidationReport
from .errors import (
    DomainError,
    ForestMetricError,
    NumericalGuardError,
    ParseError,
    PropertyViolation,
    SizeGuardError,
)
from .forest_kernel import AccessibilityMatrix, accessibility_matrix, validate_doubly_stochastic
from .graph_model import (
    ComponentPartition,
    WeightedMultigraph,
    alpha_extension,
    alpha_scale,
    build_laplacian,
    components,
    parse_edge_list,
    read_edge_list,
)
from .metrics import (
    BoundsReport,
    DistanceMatrix,
    ProfileVector,
    adjusted_forest_distance_matrix,
    algebraic_connectivity,
    bounds_report,
    cumulative_weight,
    cumulative_weight_matrix,
    diameter,
    forest_distance_matrix,
    pi_profile,
    tau_profile,
    verify_metric_axioms,
)
from .perturbation import (
    EdgeDelta,
    ForestState,
    PerturbationResult,
    apply_edge_delta,
    predict,
    predict_q_increment,
    predict_rho_increment,
)
from .resistance_limits import (
    ExtendedDistanceMatrix,
    alpha_extension_identity_check,
    laplacian_pseudoinverse,
    limit_large_alpha,
    limit_small_alpha,
    resistance_distance_matrix,
)

__version__ = "0.1.0"
