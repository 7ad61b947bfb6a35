import numpy as np
import pytest
from hypothesis import given, strategies as st

from forestmetric import DomainError
from forestmetric.forest_kernel import AccessibilityMatrix, accessibility_matrix, residual, validate_doubly_stochastic
from forestmetric.graph_model import components, edgeless

from conftest import graph_from_seed

seeds = st.integers(0, 2**32 - 1)


def test_k2_closed_form(k2):
    # inverse of [[2, -1], [-1, 2]]
    np.testing.assert_allclose(accessibility_matrix(k2, 1).q, np.array([[2, 1], [1, 2]]) / 3, atol=1e-15)


def test_p3_matches_forest_count(p3):
    # 8 rooted forests in P3; entries hand-enumerated
    np.testing.assert_allclose(
        accessibility_matrix(p3, 1).q, np.array([[5, 2, 1], [2, 4, 2], [1, 2, 5]]) / 8, atol=1e-15
    )


@pytest.mark.parametrize("alpha", [1e-3, 1, 1e3])
def test_edgeless_is_identity(alpha):
    np.testing.assert_array_equal(accessibility_matrix(edgeless(3), alpha).q, np.eye(3))


@pytest.mark.parametrize("alpha", [0, -2.5])
def test_alpha_domain(k2, alpha):
    with pytest.raises(DomainError, match="alpha must be positive"):
        accessibility_matrix(k2, alpha)


def test_one_based_indexing(p3):
    q = accessibility_matrix(p3, 1)
    assert q[1, 3] == pytest.approx(1 / 8)


class TestValidation:
    def test_k2_passes(self, k2):
        rep = validate_doubly_stochastic(accessibility_matrix(k2, 1))
        assert rep.passed
        assert rep.measures["row_sum"] == pytest.approx(0, abs=1e-15)

    def test_identity_passes(self):
        assert validate_doubly_stochastic(np.eye(4))

    def test_constructed_violation(self):
        rep = validate_doubly_stochastic(np.array([[0.9, 0.2], [0.2, 0.9]]))
        assert not rep.passed
        assert rep.measures["row_sum"] == pytest.approx(0.1)

    def test_negative_entry_fails(self):
        assert not validate_doubly_stochastic(np.array([[1.1, -0.1], [-0.1, 1.1]]))

    def test_large_alpha_warns_but_reports(self, p3):
        rep = validate_doubly_stochastic(accessibility_matrix(p3, 1e9), tol=1e-6)
        assert rep.warnings and "ill-conditioned" in rep.warnings[0]
        assert rep.passed


@given(seeds)
def test_solves_the_system(seed):
    g = graph_from_seed(seed, n_max=50, rational=False)
    assert residual(g, accessibility_matrix(g, 1.0)) <= 1e-9


@given(seeds, st.sampled_from([1e-3, 1.0, 1e3]))
def test_doubly_stochastic_and_symmetric(seed, alpha):
    g = graph_from_seed(seed, n_max=30, rational=False)
    assert validate_doubly_stochastic(accessibility_matrix(g, alpha), 1e-9)


@given(seeds, st.floats(1e-2, 1e2))
def test_diagonal_dominance(seed, alpha):
    q = accessibility_matrix(graph_from_seed(seed, n_max=20), alpha).q
    assert np.all(np.diag(q)[:, None] >= q - 1e-12)


@given(seeds)
def test_block_diagonal_when_disconnected(seed):
    g = graph_from_seed(seed, n_max=15, connected=False)
    q = accessibility_matrix(g, 2.0).q
    mask = components(g).same_component_mask()
    assert np.all(q[~mask] == 0) or np.max(np.abs(q[~mask])) <= 1e-15


def test_accessibility_matrix_is_value_object(k2):
    q = accessibility_matrix(k2, 1)
    assert isinstance(q, AccessibilityMatrix) and q.alpha == 1.0 and q.n == 2
