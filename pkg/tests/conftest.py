from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from forestmetric.graph_model import (
    WeightedMultigraph,
    complete_graph,
    disjoint_union,
    edgeless,
    path_graph,
    random_multigraph,
)

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def k2():
    return WeightedMultigraph(2, ((1, 2, 1),))


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def triangle():
    return complete_graph(3)


@pytest.fixture
def k2_plus_isolated():
    return disjoint_union(WeightedMultigraph(2, ((1, 2, 1),)), edgeless(1))


def graph_from_seed(seed, n_max=10, *, connected=None, rational=True, max_parallel=2, n_min=1):
    """Deterministic random multigraph keyed by an integer seed."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    if connected is None:
        connected = bool(rng.integers(0, 2))
    p = float(rng.uniform(0.1, 0.6))
    return random_multigraph(rng, n, p, connected=connected, rational=rational, max_parallel=max_parallel)


def frac_matrix(rows):
    return np.array([[float(Fraction(x)) for x in row] for row in rows])
