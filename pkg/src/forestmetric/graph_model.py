"""Weighted undirected multigraphs: construction, edge-list I/O, Laplacians.

Vertices are labelled ``1..n`` in every public function that takes a vertex
argument; matrices are plain numpy arrays indexed from 0, so vertex ``v``
lives in row ``v - 1``.
"""

from __future__ import annotations

import io
import json
import os
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import TextIO

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DomainError, ParseError

Edge = tuple[int, int, Real]


@dataclass(frozen=True)
class WeightedMultigraph:
    """Undirected multigraph on vertices ``1..n`` with strictly positive weights.

    Parallel edges are kept as separate entries of ``edges``; each entry is
    stored with ``u < v``.  Weights may be ints, floats or Fractions; exact
    types are preserved so the brute-force oracle can work in rationals.

    ``hidden_source`` is set only on graphs produced by :func:`alpha_extension`
    and names the vertex that is reported as label 0.
    """

    n: int
    edges: tuple[Edge, ...] = ()
    hidden_source: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"vertex count must be a nonnegative integer, got {self.n!r}")
        normalized = []
        for e in self.edges:
            u, v, w = e
            if u == v:
                raise DomainError(f"loop forbidden at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise DomainError(f"edge ({u}, {v}) has a vertex outside 1..{self.n}")
            if not w > 0:
                raise DomainError(f"edge ({u}, {v}) has non-positive weight {w}")
            if u > v:
                u, v = v, u
            normalized.append((int(u), int(v), w))
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def m(self) -> int:
        return len(self.edges)

    def label(self, v: int) -> int:
        """External label of vertex ``v`` (the hidden source prints as 0)."""
        return 0 if v == self.hidden_source else v

    def aggregated(self) -> dict[tuple[int, int], Real]:
        """Total weight per unordered vertex pair, keys sorted."""
        acc: dict[tuple[int, int], Real] = defaultdict(int)
        for u, v, w in self.edges:
            acc[(u, v)] = acc[(u, v)] + w
        return dict(sorted(acc.items()))

    def aggregate(self) -> WeightedMultigraph:
        """Equivalent simple graph: one edge per adjacent pair carrying the summed weight."""
        edges = tuple((u, v, w) for (u, v), w in self.aggregated().items())
        return WeightedMultigraph(self.n, edges, self.hidden_source)

    def pair_weight(self, i: int, j: int) -> Real:
        """Total weight of all edges joining ``i`` and ``j`` (0 if none)."""
        a, b = min(i, j), max(i, j)
        return sum((w for u, v, w in self.edges if (u, v) == (a, b)), 0)

    def pair_weight_matrix(self) -> np.ndarray:
        """Symmetric n x n float matrix of total pair weights."""
        eps = np.zeros((self.n, self.n))
        for (u, v), w in self.aggregated().items():
            eps[u - 1, v - 1] = eps[v - 1, u - 1] = float(w)
        return eps

    def without_pair(self, i: int, j: int) -> WeightedMultigraph:
        """Copy with every edge between ``i`` and ``j`` removed."""
        a, b = min(i, j), max(i, j)
        return WeightedMultigraph(
            self.n, tuple(e for e in self.edges if (e[0], e[1]) != (a, b)), self.hidden_source
        )

    def isolated(self, v: int) -> bool:
        return all(v not in (a, b) for a, b, _ in self.edges)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": [[self.label(u), self.label(v), _json_weight(w)] for u, v, w in self.edges],
        }


def _json_weight(w):
    if isinstance(w, Fraction) and w.denominator != 1:
        return float(w)
    return int(w) if w == int(w) else float(w)


@dataclass(frozen=True)
class ComponentPartition:
    """Connected components. ``assignment[v - 1]`` is the component id of vertex ``v``."""

    assignment: np.ndarray
    sizes: np.ndarray

    @property
    def count(self) -> int:
        return len(self.sizes)

    def size_of(self, v: int) -> int:
        return int(self.sizes[self.assignment[v - 1]])

    def same(self, i: int, j: int) -> bool:
        return self.assignment[i - 1] == self.assignment[j - 1]

    def members(self, c: int) -> np.ndarray:
        """0-based indices of the vertices in component ``c``."""
        return np.flatnonzero(self.assignment == c)

    def same_component_mask(self) -> np.ndarray:
        return self.assignment[:, None] == self.assignment[None, :]


# ---------------------------------------------------------------------------
# Edge-list text format
# ---------------------------------------------------------------------------


def _parse_number(token: str, lineno: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad weight {token!r}", lineno) from None


def parse_edge_list(source: str | TextIO) -> WeightedMultigraph:
    """Parse the edge-list format.

    The first non-comment line is ``n=<int>``; every later non-blank line is
    ``u v w`` with 1-based integer vertices and a positive weight.  ``#``
    starts a comment.  Weights are read exactly (``0.1`` becomes
    ``Fraction(1, 10)``); ``3/2`` is accepted as well.

    Raises
    ------
    ParseError
        On a malformed line, a loop, a non-positive weight or a vertex label
        out of range.  The message names the offending line.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    n = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            key, sep, value = line.replace(" ", "").partition("=")
            if key != "n" or not sep:
                raise ParseError(f"expected header 'n=<int>', got {line!r}", lineno)
            try:
                n = int(value)
            except ValueError:
                raise ParseError(f"bad vertex count {value!r}", lineno) from None
            if n < 0:
                raise ParseError("vertex count must be nonnegative", lineno)
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'u v w', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"vertex labels must be integers, got {line!r}", lineno) from None
        w = _parse_number(parts[2], lineno)
        if u == v:
            raise ParseError("loop forbidden", lineno)
        if u < 1 or v < 1 or u > n or v > n:
            raise ParseError(f"vertex label out of range 1..{n}", lineno)
        if w <= 0:
            raise ParseError(f"non-positive weight {parts[2]}", lineno)
        edges.append((u, v, w.numerator if w.denominator == 1 else w))
    if n is None:
        raise ParseError("missing header 'n=<int>'")
    return WeightedMultigraph(n, tuple(edges))


def read_edge_list(path: str | os.PathLike) -> WeightedMultigraph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh)


def format_edge_list(g: WeightedMultigraph) -> str:
    lines = [f"n={g.n}"]
    lines += [f"{u} {v} {w}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def graph_to_json(g: WeightedMultigraph) -> str:
    return json.dumps(g.to_json_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# Matrices and structure
# ---------------------------------------------------------------------------


def build_laplacian(g: WeightedMultigraph) -> np.ndarray:
    """Weighted Laplacian ``L = D - A`` with parallel edges summed.

    Returns a dense float array; off-diagonal ``L[i, j]`` is minus the total
    weight of the ``(i+1, j+1)`` edges and each row sums to zero.
    """
    lap = -g.pair_weight_matrix()
    np.fill_diagonal(lap, -lap.sum(axis=1))
    return lap


def components(g: WeightedMultigraph) -> ComponentPartition:
    rows = [u - 1 for u, _, _ in g.edges]
    cols = [v - 1 for _, v, _ in g.edges]
    adj = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))
    count, labels = connected_components(adj, directed=False)
    return ComponentPartition(labels, np.bincount(labels, minlength=count))


def _check_alpha(alpha) -> None:
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")


def alpha_scale(g: WeightedMultigraph, alpha) -> WeightedMultigraph:
    """``G_alpha``: same edges, every weight multiplied by ``alpha``."""
    _check_alpha(alpha)
    return WeightedMultigraph(g.n, tuple((u, v, alpha * w) for u, v, w in g.edges), g.hidden_source)


def alpha_extension(g: WeightedMultigraph, alpha) -> WeightedMultigraph:
    """Scale ``g`` by ``alpha`` and join a new hidden source to every vertex by a unit edge.

    The result has ``n + 1`` vertices; the hidden source is vertex ``n + 1``
    internally and carries external label 0.
    """
    _check_alpha(alpha)
    src = g.n + 1
    scaled = [(u, v, alpha * w) for u, v, w in g.edges]
    spokes = [(i, src, 1) for i in range(1, g.n + 1)]
    return WeightedMultigraph(g.n + 1, tuple(scaled + spokes), hidden_source=src)


def is_laplacian(lap: np.ndarray, tol: float = 1e-9) -> bool:
    off = lap - np.diag(np.diag(lap))
    return (
        np.allclose(lap, lap.T, atol=tol, rtol=0)
        and bool(np.all(off <= tol))
        and bool(np.all(np.abs(lap.sum(axis=1)) <= tol))
    )


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def random_multigraph(
    rng: np.random.Generator,
    n: int,
    p: float = 0.4,
    *,
    connected: bool = False,
    rational: bool = True,
    max_parallel: int = 1,
    weight_range: tuple[float, float] = (0.25, 4.0),
) -> WeightedMultigraph:
    """Erdos-Renyi style multigraph with random positive weights.

    With ``connected=True`` a random spanning tree is laid down first.
    Rational weights are small fractions ``a/b`` (b <= 4); otherwise floats
    drawn uniformly from ``weight_range``.
    """
    lo, hi = weight_range

    def weight():
        if rational:
            b = int(rng.integers(1, 5))
            a = int(rng.integers(max(1, int(np.ceil(lo * b))), int(hi * b) + 1))
            return Fraction(a, b)
        return float(rng.uniform(lo, hi))

    edges: list[Edge] = []
    if connected and n > 1:
        order = rng.permutation(n) + 1
        for idx in range(1, n):
            parent = order[int(rng.integers(0, idx))]
            edges.append((int(order[idx]), int(parent), weight()))
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < p:
                for _ in range(int(rng.integers(1, max_parallel + 1))):
                    edges.append((u, v, weight()))
    return WeightedMultigraph(n, tuple(edges))


def edgeless(n: int) -> WeightedMultigraph:
    return WeightedMultigraph(n, ())


def path_graph(n: int, weight=1) -> WeightedMultigraph:
    return WeightedMultigraph(n, tuple((i, i + 1, weight) for i in range(1, n)))


def complete_graph(n: int, weight=1) -> WeightedMultigraph:
    return WeightedMultigraph(
        n, tuple((i, j, weight) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    )


def disjoint_union(*graphs: WeightedMultigraph) -> WeightedMultigraph:
    edges: list[Edge] = []
    offset = 0
    for h in graphs:
        edges += [(u + offset, v + offset, w) for u, v, w in h.edges]
        offset += h.n
    return WeightedMultigraph(offset, tuple(edges))
