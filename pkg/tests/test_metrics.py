import numpy as np
import pytest
from hypothesis import given, strategies as st

from forestmetric import DomainError
from forestmetric.forest_kernel import accessibility_matrix
from forestmetric.graph_model import WeightedMultigraph, build_laplacian, edgeless, path_graph
from forestmetric.metrics import (
    BoundsReport,
    adjusted_forest_distance_matrix,
    algebraic_connectivity,
    bounds_report,
    cumulative_weight,
    cumulative_weight_matrix,
    diameter,
    forest_distance_matrix,
    pi_profile,
    profile_identities,
    tau_profile,
    verify_metric_axioms,
)

from conftest import graph_from_seed

seeds = st.integers(0, 2**32 - 1)


def state(g, alpha):
    q = accessibility_matrix(g, alpha)
    return q, forest_distance_matrix(q), adjusted_forest_distance_matrix(q)


class TestDistances:
    def test_k2(self, k2):
        _, d, rho = state(k2, 1)
        assert d[1, 2] == pytest.approx(1 / 3, abs=1e-15)
        assert rho[1, 2] == pytest.approx(2 / 3, abs=1e-15)
        assert d.kind == "forest" and rho.kind == "adjusted_forest"

    def test_p3(self, p3):
        _, d, _ = state(p3, 1)
        assert d[1, 2] == pytest.approx(5 / 16, abs=1e-15)
        assert d[1, 3] == pytest.approx(1 / 2, abs=1e-15)
        assert d[2, 3] == pytest.approx(5 / 16, abs=1e-15)

    @pytest.mark.parametrize("alpha", [0.01, 1.0, 7.5])
    def test_isolated_pair(self, alpha):
        _, d, rho = state(edgeless(2), alpha)
        assert d[1, 2] == 1.0
        assert rho[1, 2] == 2 * alpha

    def test_k2_large_alpha(self, k2):
        # 2 alpha / (1 + 2 alpha)
        _, _, rho = state(k2, 1000)
        assert rho[1, 2] == pytest.approx(2000 / 2001, rel=1e-13)

    @given(seeds, st.floats(1e-2, 1e2))
    def test_rho_is_exactly_2alpha_d(self, seed, alpha):
        q, d, rho = state(graph_from_seed(seed, n_max=15), alpha)
        assert np.array_equal(rho.d, 2.0 * alpha * d.d)


class TestCumulativeWeight:
    def test_k2_equals_edge_weight(self, k2):
        _, _, rho = state(k2, 1)
        assert cumulative_weight(rho, 1, 2) == pytest.approx(1.0, abs=1e-14)

    def test_isolated_pair_zero(self):
        _, _, rho = state(edgeless(2), 3.0)
        assert cumulative_weight(rho, 1, 2) == 0.0

    def test_p3_indirect_pair_exceeds_pair_weight(self, p3):
        _, _, rho = state(p3, 1)
        theta = cumulative_weight(rho, 1, 3)
        assert theta == pytest.approx(0.5, abs=1e-14)
        assert theta > p3.pair_weight(1, 3)

    def test_same_vertex_rejected(self, k2):
        _, _, rho = state(k2, 1)
        with pytest.raises(DomainError):
            cumulative_weight(rho, 1, 1)

    def test_needs_adjusted_kind(self, k2):
        _, d, _ = state(k2, 1)
        with pytest.raises(DomainError):
            cumulative_weight(d, 1, 2)

    def test_matrix_diagonal_undefined(self, p3):
        theta = cumulative_weight_matrix(state(p3, 1)[2])
        assert np.all(np.isnan(np.diag(theta)))

    @given(seeds, st.sampled_from([0.1, 1.0, 10.0]))
    def test_additive_in_pair_weight(self, seed, alpha):
        g = graph_from_seed(seed, n_max=10, n_min=2, max_parallel=3)
        rho = state(g, alpha)[2]
        for i in range(1, g.n + 1):
            for j in range(i + 1, g.n + 1):
                rho0 = state(g.without_pair(i, j), alpha)[2]
                expected = cumulative_weight(rho0, i, j) + float(g.pair_weight(i, j))
                assert cumulative_weight(rho, i, j) == pytest.approx(expected, rel=1e-8, abs=1e-8)
                assert cumulative_weight(rho, i, j) >= float(g.pair_weight(i, j)) - 1e-9


class TestProfiles:
    def test_tau_p3(self, p3):
        _, d, _ = state(p3, 1)
        np.testing.assert_allclose(tau_profile(d, 1, 3).values, [-0.5, 0, 0.5], atol=1e-15)

    def test_pi_p3(self, p3):
        q, _, _ = state(p3, 1)
        np.testing.assert_allclose(pi_profile(q, 1, 3).values, [0.5, 0, -0.5], atol=1e-15)

    def test_tau_endpoints(self, p3):
        _, d, _ = state(p3, 0.7)
        tau = tau_profile(d, 1, 2)
        assert tau[2] == d[1, 2] == -tau[1]

    def test_midpoint_of_symmetric_pair(self):
        _, d, _ = state(path_graph(5), 1.3)
        assert tau_profile(d, 1, 5)[3] == pytest.approx(0, abs=1e-15)

    @pytest.mark.parametrize("fn", ["tau", "pi"])
    def test_equal_anchor_rejected(self, p3, fn):
        q, d, _ = state(p3, 1)
        with pytest.raises(DomainError):
            tau_profile(d, 2, 2) if fn == "tau" else pi_profile(q, 2, 2)

    @given(seeds, st.floats(1e-2, 1e2))
    def test_linear_identities(self, seed, alpha):
        g = graph_from_seed(seed, n_max=12, n_min=2)
        q, d, _ = state(g, alpha)
        for k in range(1, g.n + 1):
            for t in range(1, g.n + 1):
                if k != t:
                    assert max(profile_identities(q, d, k, t).values()) <= 1e-12


class TestDiameterAndConnectivity:
    def test_p3_diameter(self, p3):
        assert diameter(state(p3, 1)[1]) == pytest.approx(0.5)

    def test_isolated_pair_diameter(self):
        assert diameter(state(edgeless(2), 1)[1]) == 1.0

    def test_single_vertex(self):
        assert diameter(state(edgeless(1), 1)[1]) == 0.0

    def test_k2_connectivity(self, k2):
        assert algebraic_connectivity(build_laplacian(k2)) == pytest.approx(2.0)

    def test_p3_connectivity(self, p3):
        assert algebraic_connectivity(build_laplacian(p3)) == pytest.approx(1.0)

    def test_disconnected(self, k2_plus_isolated):
        assert algebraic_connectivity(build_laplacian(k2_plus_isolated)) == pytest.approx(0, abs=1e-14)

    def test_needs_two_vertices(self):
        with pytest.raises(DomainError):
            algebraic_connectivity(np.zeros((1, 1)))


class TestBounds:
    def test_k2_tight(self, k2):
        rep = bounds_report(k2, *state(k2, 1))
        assert rep.algebraic_connectivity == pytest.approx(2)
        assert rep.slacks["d_connectivity"][0, 1] == pytest.approx(0, abs=1e-15)
        assert rep.slacks["d_pair_weight"][0, 1] == pytest.approx(0, abs=1e-15)
        assert rep.slacks["rho_pair_weight"][0, 1] == pytest.approx(0, abs=1e-15)
        assert (1, 2) in rep.tight_pairs("d_connectivity")
        assert rep.passed

    def test_p3_strict(self, p3):
        rep = bounds_report(p3, *state(p3, 1))
        assert rep.slacks["d_pair_weight"][0, 1] == pytest.approx(1 / 3 - 5 / 16, abs=1e-15)
        assert rep.min_slack("d_pair_weight") > 0

    def test_isolated_pair_attains_trivial_bounds(self):
        rep = bounds_report(edgeless(2), *state(edgeless(2), 2.0))
        assert rep.slacks["d_le_1"][0, 1] == 0
        assert rep.slacks["rho_le_2alpha"][0, 1] == 0

    @given(seeds, st.sampled_from([0.1, 1.0, 10.0]))
    def test_all_bounds_hold(self, seed, alpha):
        g = graph_from_seed(seed, n_max=30, max_parallel=3)
        rep = bounds_report(g, *state(g, alpha))
        assert isinstance(rep, BoundsReport)
        assert rep.passed, rep.summary()

    @given(seeds, st.floats(1e-2, 1e2))
    def test_trivial_bounds_strict_unless_both_isolated(self, seed, alpha):
        g = graph_from_seed(seed, n_max=10, connected=False)
        _, d, rho = state(g, alpha)
        for i in range(1, g.n + 1):
            for j in range(i + 1, g.n + 1):
                if g.isolated(i) and g.isolated(j):
                    assert d[i, j] == 1.0 and rho[i, j] == 2 * alpha
                else:
                    assert d[i, j] < 1.0 and rho[i, j] < 2 * alpha

    def test_pair_weight_tight_iff_pair_is_isolated_from_rest(self):
        # 1-2 joined only to each other; 3-4-5 form a path
        g = WeightedMultigraph(5, ((1, 2, 2), (3, 4, 1), (4, 5, 1)))
        rep = bounds_report(g, *state(g, 1.0))
        tight = rep.tight_pairs("d_pair_weight", tol=1e-12)
        assert (1, 2) in tight
        assert (3, 4) not in tight and (4, 5) not in tight


class TestMetricAxioms:
    def test_p3_passes(self, p3):
        rep = verify_metric_axioms(state(p3, 1)[1])
        assert rep.passed

    def test_constructed_violation_names_triple(self):
        bad = np.array([[0, 1, 3], [1, 0, 1], [3, 1, 0]], dtype=float)
        rep = verify_metric_axioms(bad)
        assert not rep.passed
        assert rep.measures["worst_triple"] in {(1, 2, 3), (3, 2, 1)}
        assert "triangle" in rep.detail

    def test_infinite_entries_tolerated(self):
        inf = np.inf
        arr = np.array([[0, 1, inf], [1, 0, inf], [inf, inf, 0]])
        assert verify_metric_axioms(arr).passed

    def test_size_gate(self):
        with pytest.raises(DomainError):
            verify_metric_axioms(np.zeros((201, 201)))
        assert verify_metric_axioms(np.zeros((201, 201)), allow_large=True).passed

    @given(seeds, st.sampled_from([0.1, 1.0, 10.0]))
    def test_random_graphs(self, seed, alpha):
        g = graph_from_seed(seed, n_max=20)
        _, d, rho = state(g, alpha)
        assert verify_metric_axioms(d, 1e-9).passed
        assert verify_metric_axioms(rho, 1e-9).passed
