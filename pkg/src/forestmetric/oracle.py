"""Brute-force ground truth from explicit spanning rooted forests.

Everything here is exponential and meant for graphs with at most a dozen
vertices.  Weights and ``alpha`` are turned into :class:`~fractions.Fraction`
(floats exactly, via their binary value) so accessibilities and distances
come out as exact rationals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .checks import ValidationReport
from .errors import DomainError, SizeGuardError
from .graph_model import WeightedMultigraph, alpha_extension, alpha_scale

MAX_ENUMERATION_N = 12
MAX_BIJECTION_N = 10


@dataclass(frozen=True)
class RootedForest:
    """Spanning acyclic edge set with one root per tree.

    ``trees[c]`` is the sorted vertex tuple of the tree rooted at
    ``roots[c]``; trees are ordered by their smallest vertex.  ``edges`` holds
    ``(u, v, w)`` triples of the graph the forest was taken from.
    """

    edges: tuple
    roots: tuple
    trees: tuple
    weight: Fraction

    def tree_of(self, v: int) -> int:
        for c, tree in enumerate(self.trees):
            if v in tree:
                return c
        raise KeyError(v)

    def is_root(self, v: int) -> bool:
        return v in self.roots


@dataclass(frozen=True)
class ConnectionVerdict:
    forest: RootedForest
    source: int
    target: int
    successful: bool
    unsuccessful: bool


def exact(x) -> Fraction:
    """Exact rational value of an int, Fraction, float or decimal string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(float(x))


def _guard(g: WeightedMultigraph, limit: int = MAX_ENUMERATION_N):
    if g.n > limit:
        raise SizeGuardError(
            f"brute-force enumeration is limited to n <= {limit} vertices (graph has n={g.n}); "
            "use the linear-algebra kernel for larger graphs"
        )


def _edge_list(g: WeightedMultigraph, aggregate: bool):
    if aggregate:
        return [(u, v, exact(w)) for (u, v), w in g.aggregated().items()]
    return [(u, v, exact(w)) for u, v, w in g.edges]


def _find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


def _acyclic_subsets(n: int, edges: list):
    """Yield ``(mask, chosen, trees)`` for every acyclic edge subset, in increasing mask order.

    ``chosen`` lists edge indices; ``trees`` are the vertex tuples of the
    resulting components ordered by smallest vertex.  Bit ``e`` of ``mask``
    is edge ``e``; deciding the highest bit first (exclude before include)
    walks masks in numeric order, and a union-find copy prunes cycles.
    """
    m = len(edges)

    def rec(e, mask, chosen, parent):
        if e < 0:
            groups: dict[int, list[int]] = {}
            for v in range(1, n + 1):
                groups.setdefault(_find(parent, v), []).append(v)
            trees = sorted((tuple(vs) for vs in groups.values()), key=lambda vs: vs[0])
            yield mask, tuple(sorted(chosen)), tuple(trees)
            return
        yield from rec(e - 1, mask, chosen, parent)
        u, v, _ = edges[e]
        ru, rv = _find(parent, u), _find(parent, v)
        if ru != rv:
            parent2 = parent.copy()
            parent2[ru] = rv
            yield from rec(e - 1, mask | (1 << e), chosen + [e], parent2)

    yield from rec(m - 1, 0, [], list(range(n + 1)))


def enumerate_rooted_forests(
    g: WeightedMultigraph, *, aggregate: bool = True, limit: int = MAX_ENUMERATION_N
) -> list[RootedForest]:
    """Every spanning rooted forest of ``g`` with its exact weight.

    With ``aggregate`` (the default) parallel edges are merged into one edge
    carrying the summed weight first; forest weights are multilinear in the
    edge weights, so totals are unchanged.  Order: edge subsets by bitmask,
    then rootings as the lexicographic product over trees in vertex order.
    """
    _guard(g, limit)
    edges = _edge_list(g, aggregate)
    out = []
    for _, chosen, trees in _acyclic_subsets(g.n, edges):
        sub = tuple(edges[e] for e in chosen)
        weight = math.prod((w for _, _, w in sub), start=Fraction(1))
        for roots in itertools.product(*trees):
            out.append(RootedForest(sub, roots, trees, weight))
    return out


def connection_verdict(forest: RootedForest, source: int, target: int) -> ConnectionVerdict:
    """Classify ``forest`` as a successful or unsuccessful connection from ``source`` to ``target``.

    Successful: ``target`` lies in the tree rooted at ``source``.
    Unsuccessful: ``source`` is a root and ``target`` is outside its tree.
    A forest in which ``source`` is not a root is neither.
    """
    c = forest.tree_of(source)
    rooted_here = forest.roots[c] == source
    same_tree = target in forest.trees[c]
    return ConnectionVerdict(forest, source, target, rooted_here and same_tree, rooted_here and not same_tree)


def total_forest_weight(g: WeightedMultigraph, alpha=1) -> Fraction:
    return sum((f.weight for f in enumerate_rooted_forests(alpha_scale(g, exact(alpha)))), Fraction(0))


def forest_accessibility_exact(g: WeightedMultigraph, alpha, i: int, j: int) -> Fraction:
    """Share (by weight) of the rooted forests of ``G_alpha`` in which ``j`` is in the tree rooted at ``i``."""
    _check_vertices(g, i, j)
    forests = enumerate_rooted_forests(alpha_scale(g, _exact_alpha(alpha)))
    total = sum((f.weight for f in forests), Fraction(0))
    hit = sum((f.weight for f in forests if connection_verdict(f, i, j).successful), Fraction(0))
    return hit / total


def forest_distance_exact(g: WeightedMultigraph, alpha, i: int, j: int) -> Fraction:
    """``(q_ii + q_jj - q_ij - q_ji) / 2`` with every term counted exactly."""
    _check_vertices(g, i, j)
    if i == j:
        return Fraction(0)
    q = accessibility_matrix_exact(g, alpha)
    return (q[i - 1][i - 1] + q[j - 1][j - 1] - q[i - 1][j - 1] - q[j - 1][i - 1]) / 2


def accessibility_matrix_exact(g: WeightedMultigraph, alpha, *, aggregate: bool = True) -> list[list[Fraction]]:
    """The whole exact accessibility matrix (0-based nested lists) in one pass.

    Rooted forests sharing an edge set are counted together: with trees
    ``T_1..T_c``, the rootings that put ``i`` at the root of ``T`` number
    ``prod_{T' != T} |T'|``.
    """
    _guard(g)
    a = _exact_alpha(alpha)
    n = g.n
    edges = [(u, v, a * w) for u, v, w in _edge_list(g, aggregate)]
    num = [[Fraction(0)] * n for _ in range(n)]
    total = Fraction(0)
    for _, chosen, trees in _acyclic_subsets(n, edges):
        weight = math.prod((edges[e][2] for e in chosen), start=Fraction(1))
        rootings = math.prod(len(tr) for tr in trees)
        total += weight * rootings
        for tr in trees:
            share = weight * (rootings // len(tr))
            for r in tr:
                row = num[r - 1]
                for v in tr:
                    row[v - 1] += share
    return [[x / total for x in row] for row in num]


def _exact_alpha(alpha) -> Fraction:
    a = exact(alpha)
    if a <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return a


def _check_vertices(g, *vs):
    for v in vs:
        if not 1 <= v <= g.n:
            raise DomainError(f"vertex {v} outside 1..{g.n}")


# ---------------------------------------------------------------------------
# Stochastic connection model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Fraction of unsuccessful connections among ``samples`` trials, with binomial standard error."""

    estimate: float
    stderr: float
    samples: int
    seed: int

    def z_score(self, value: float) -> float:
        if self.stderr == 0:
            return 0.0 if self.estimate == value else math.inf
        return abs(self.estimate - value) / self.stderr


def simulate_connection_model(
    g: WeightedMultigraph, alpha, i: int, j: int, samples: int, seed: int
) -> MonteCarloEstimate:
    """Estimate the probability of an unsuccessful connection between ``i`` and ``j``.

    Each trial picks ``i`` or ``j`` as the source with probability 1/2, draws
    a spanning rooted forest of ``G_alpha`` with probability proportional to
    its weight, and records whether that forest is an unsuccessful
    connection from the source to the other vertex.  The expected value is
    the forest distance ``d_ij``.
    """
    if samples < 1:
        raise DomainError("samples must be at least 1")
    _check_vertices(g, i, j)
    if i == j:
        raise DomainError("the connection model needs two distinct vertices")
    forests = enumerate_rooted_forests(alpha_scale(g, _exact_alpha(alpha)))
    total = sum((f.weight for f in forests), Fraction(0))
    p = np.array([float(f.weight / total) for f in forests])
    p /= p.sum()
    fail_from = np.array(
        [[connection_verdict(f, i, j).unsuccessful, connection_verdict(f, j, i).unsuccessful] for f in forests]
    )
    rng = np.random.default_rng(seed)
    source = rng.integers(0, 2, size=samples)
    picked = rng.choice(len(forests), size=samples, p=p)
    outcomes = fail_from[picked, source]
    est = float(outcomes.mean())
    se = math.sqrt(est * (1.0 - est) / samples)
    return MonteCarloEstimate(est, se, samples, seed)


# ---------------------------------------------------------------------------
# Rooted forests of G  <->  spanning trees of the 1-extension
# ---------------------------------------------------------------------------


def enumerate_spanning_trees(g: WeightedMultigraph, *, limit: int = MAX_ENUMERATION_N + 1) -> list[tuple[tuple, Fraction]]:
    """Spanning trees of (aggregated) ``g`` as ``(edge tuple, exact weight)`` pairs."""
    _guard(g, limit)
    edges = _edge_list(g, True)
    out = []
    for _, chosen, trees in _acyclic_subsets(g.n, edges):
        if len(trees) == 1:
            sub = tuple(edges[e] for e in chosen)
            out.append((sub, math.prod((w for _, _, w in sub), start=Fraction(1))))
    return out


def forests_trees_bijection_check(g: WeightedMultigraph) -> ValidationReport:
    """Map each rooted forest of ``g`` to a spanning tree of its 1-extension and back.

    Forest ``F`` with roots ``r_1..r_c`` goes to ``F`` plus the edges
    ``(source, r_c)``.  The check confirms the image of every forest is a
    spanning tree of the extension with the same weight, that the map is
    injective and onto, and that counts and total weights agree.
    """
    _guard(g, MAX_BIJECTION_N)
    base = g.aggregate()
    ext = alpha_extension(base, 1)
    src = ext.hidden_source
    forests = enumerate_rooted_forests(base)
    trees = {frozenset((u, v) for u, v, _ in sub): w for sub, w in enumerate_spanning_trees(ext)}

    images = set()
    mismatched = 0
    for f in forests:
        key = frozenset([(u, v) for u, v, _ in f.edges] + [(r, src) for r in f.roots])
        if trees.get(key) != f.weight:
            mismatched += 1
        images.add(key)
    forest_total = sum((f.weight for f in forests), Fraction(0))
    tree_total = sum(trees.values(), Fraction(0))
    measures = {
        "forests": len(forests),
        "trees": len(trees),
        "forest_weight": forest_total,
        "tree_weight": tree_total,
        "mismatched": mismatched,
        "injective": len(images) == len(forests),
    }
    passed = (
        mismatched == 0
        and measures["injective"]
        and len(images) == len(trees)
        and forest_total == tree_total
    )
    detail = "" if passed else f"forest/tree correspondence failed: {measures}"
    return ValidationReport(passed, measures, detail=detail)
