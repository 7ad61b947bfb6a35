import numpy as np
import pytest
from hypothesis import given, strategies as st

from forestmetric import DomainError
from forestmetric.forest_kernel import accessibility_matrix
from forestmetric.graph_model import (
    WeightedMultigraph,
    build_laplacian,
    complete_graph,
    components,
    edgeless,
    path_graph,
)
from forestmetric.metrics import adjusted_forest_distance_matrix, verify_metric_axioms
from forestmetric.resistance_limits import (
    alpha_extension_identity_check,
    laplacian_pseudoinverse,
    limit_forest_distance,
    limit_large_alpha,
    limit_small_alpha,
    penrose_defects,
    resistance_distance_matrix,
)

from conftest import graph_from_seed

seeds = st.integers(0, 2**32 - 1)


class TestPseudoinverse:
    def test_k2(self, k2):
        pinv = laplacian_pseudoinverse(build_laplacian(k2), components(k2))
        np.testing.assert_allclose(pinv, np.array([[1, -1], [-1, 1]]) / 4, atol=1e-15)

    def test_isolated_vertex(self):
        g = edgeless(1)
        assert laplacian_pseudoinverse(build_laplacian(g), components(g)).tolist() == [[0.0]]

    def test_cross_blocks_zero(self, k2_plus_isolated):
        g = k2_plus_isolated
        pinv = laplacian_pseudoinverse(build_laplacian(g), components(g))
        assert pinv[0, 2] == pinv[1, 2] == pinv[2, 2] == 0

    @given(seeds)
    def test_penrose_conditions_and_svd_crosscheck(self, seed):
        g = graph_from_seed(seed, n_max=20, rational=False)
        lap = build_laplacian(g)
        pinv = laplacian_pseudoinverse(lap, components(g))
        assert max(penrose_defects(lap, pinv).values()) <= 1e-9
        np.testing.assert_allclose(pinv, np.linalg.pinv(lap, hermitian=True), atol=1e-8)


class TestResistance:
    def test_k2(self, k2):
        assert resistance_distance_matrix(k2)[1, 2] == pytest.approx(1.0)

    def test_triangle(self, triangle):
        # one unit resistor in parallel with two in series
        assert resistance_distance_matrix(triangle)[1, 2] == pytest.approx(2 / 3)

    def test_cross_component_infinite(self, k2_plus_isolated):
        res = resistance_distance_matrix(k2_plus_isolated)
        assert res[1, 3] == np.inf and res[1, 2] == pytest.approx(1.0)
        assert res.infinite.tolist() == [[False, False, True], [False, False, True], [True, True, False]]
        assert res.finite[0, 2] == 0.0
        assert res.to_wire()[0][2] == "inf"

    def test_series_path(self):
        assert resistance_distance_matrix(path_graph(4, weight=2))[1, 4] == pytest.approx(1.5)

    @given(seeds)
    def test_metric_on_finite_entries(self, seed):
        g = graph_from_seed(seed, n_max=15)
        res = resistance_distance_matrix(g)
        assert verify_metric_axioms(res.as_array(), 1e-9).passed
        assert np.array_equal(res.infinite, ~components(g).same_component_mask())


class TestSmallAlpha:
    def test_k2(self, k2):
        rep = limit_small_alpha(k2, [1e-6])
        # d_12 = 1 / (1 + 2 alpha)
        assert rep.records[0].max_defect_d == pytest.approx(1 - 1 / (1 + 2e-6), rel=1e-6)
        assert rep.records[0].max_defect_d <= 3e-6

    def test_edgeless_exact(self):
        rep = limit_small_alpha(edgeless(3), [1.0, 0.5])
        assert all(r.max_defect_d == 0 for r in rep.records)

    def test_p3_linear_decay(self, p3):
        rep = limit_small_alpha(p3, [1e-2, 1e-4, 1e-6])
        defects = [r.max_defect_d for r in rep.records]
        assert rep.monotone
        assert defects[0] / defects[1] == pytest.approx(100, rel=0.05)
        assert defects[1] / defects[2] == pytest.approx(100, rel=0.01)

    def test_grid_order(self, p3):
        with pytest.raises(DomainError):
            limit_small_alpha(p3, [1e-3, 1e-2])


class TestLargeAlpha:
    def test_k2(self, k2):
        rep = limit_large_alpha(k2, [1, 10, 100, 1000])
        expected = [1 / 3, 1 / 21, 1 / 201, 1 / 2001]
        np.testing.assert_allclose([r.max_defect_rho for r in rep.records], expected, rtol=1e-9)
        assert rep.monotone
        assert rep.records[-1].theta_cross_max is None

    def test_disconnected_limit(self, k2_plus_isolated):
        d_inf = limit_forest_distance(k2_plus_isolated)
        assert d_inf[0, 2] == pytest.approx(0.75)
        assert d_inf[0, 1] == 0
        rep = limit_large_alpha(k2_plus_isolated, [1e2, 1e4, 1e6])
        assert rep.records[-1].max_defect_d < 1e-6
        thetas = [r.theta_cross_max for r in rep.records]
        assert thetas[0] > thetas[1] > thetas[2] > 0

    def test_connected_limit_is_zero(self):
        g = complete_graph(4)
        assert not limit_forest_distance(g).any()

    def test_grid_order(self, p3):
        with pytest.raises(DomainError):
            limit_large_alpha(p3, [10, 1])

    @given(seeds)
    def test_rho_increases_toward_resistance(self, seed):
        g = graph_from_seed(seed, n_max=10, connected=True)
        res = resistance_distance_matrix(g).finite
        prev = None
        for a in [0.1, 1.0, 10.0, 100.0]:
            rho = adjusted_forest_distance_matrix(accessibility_matrix(g, a)).d
            assert np.all(rho <= res + 1e-9)
            if prev is not None:
                assert np.all(rho >= prev - 1e-12)
            prev = rho


class TestExtensionIdentity:
    def test_k2(self, k2):
        rep = alpha_extension_identity_check(k2, 1.0)
        assert rep.passed

    def test_edgeless_pair(self):
        # path 1 - 0 - 2 of unit resistors: resistance 2 = 2 * d_12
        res = resistance_distance_matrix(WeightedMultigraph(3, ((1, 3, 1), (2, 3, 1))))
        assert res[1, 2] == pytest.approx(2)
        assert alpha_extension_identity_check(edgeless(2), 1.0).passed

    def test_p3(self, p3):
        from forestmetric.graph_model import alpha_extension

        assert resistance_distance_matrix(alpha_extension(p3, 1))[1, 3] == pytest.approx(1.0)
        assert alpha_extension_identity_check(p3, 1.0).passed

    @given(seeds, st.sampled_from([0.1, 1.0, 10.0]))
    def test_random(self, seed, alpha):
        g = graph_from_seed(seed, n_max=20)
        assert alpha_extension_identity_check(g, alpha, tol=1e-8).passed
