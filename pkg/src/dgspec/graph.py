"""Dense weighted signed digraphs.

Weights are stored in an ``n x n`` matrix where ``weights[i, j]`` is the
weight of the directed edge ``j -> i``.  Every operator in the package uses
this single orientation, so the in-degree of ``i`` is the ``i``-th row sum.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

ZERO_RTOL = 1e-12


class GraphError(ValueError):
    """Invalid graph construction or invalid vertex selection."""


def zero_tol(weights: np.ndarray) -> float:
    """Scale-aware cutoff below which a degree or weight sum counts as zero."""
    scale = float(np.max(np.abs(weights))) if weights.size else 0.0
    return ZERO_RTOL * max(1.0, scale)


@dataclass(frozen=True, eq=False)
class Graph:
    weights: np.ndarray
    allow_loops: bool = True

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise GraphError(f"weights must be a non-empty square matrix, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise GraphError("weights must be finite")
        if not self.allow_loops and np.any(np.diag(w) != 0):
            raise GraphError("loops present but allow_loops is False")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.allow_loops == other.allow_loops and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.n, self.weights.tobytes(), self.allow_loops))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.num_edges})"

    @property
    def num_edges(self) -> int:
        return int(np.count_nonzero(self.weights))

    @property
    def zero_tol(self) -> float:
        return zero_tol(self.weights)

    @property
    def d_in(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    @property
    def d_out(self) -> np.ndarray:
        return self.weights.sum(axis=0)

    @property
    def has_loops(self) -> bool:
        return bool(np.any(np.diag(self.weights) != 0))

    @property
    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.weights, self.weights.T))

    @property
    def is_nonnegative(self) -> bool:
        return bool(np.all(self.weights >= 0))

    def edges(self) -> list[tuple[int, int, float]]:
        """Edges as ``(src, dst, weight)`` in row-major order of the weight matrix."""
        dst, src = np.nonzero(self.weights)
        return [(int(j), int(i), float(self.weights[i, j])) for i, j in zip(dst, src)]

    def reachable_pattern(self) -> np.ndarray:
        """Boolean adjacency ``A[j, i]`` meaning an edge ``j -> i`` exists."""
        return (self.weights != 0).T


@dataclass(frozen=True)
class DegreeProfile:
    d_in: np.ndarray
    d_out: np.ndarray
    v_r: tuple[int, ...]
    balanced: bool


@dataclass(frozen=True)
class VertexClass:
    isolated: np.ndarray
    quasi_isolated: np.ndarray


def degrees(g: Graph, tol: float | None = None) -> DegreeProfile:
    tol = g.zero_tol if tol is None else tol
    d_in, d_out = g.d_in, g.d_out
    v_r = tuple(int(i) for i in np.flatnonzero(np.abs(d_in) > tol))
    balanced = bool(np.all(np.abs(d_in - d_out) <= tol))
    return DegreeProfile(d_in=d_in, d_out=d_out, v_r=v_r, balanced=balanced)


def vertex_classes(g: Graph, tol: float | None = None) -> VertexClass:
    tol = g.zero_tol if tol is None else tol
    isolated = np.all(g.weights == 0, axis=1)
    quasi = np.abs(g.d_in) <= tol
    return VertexClass(isolated=isolated, quasi_isolated=quasi)


def quasi_isolated_mask(g: Graph) -> np.ndarray:
    return np.abs(g.d_in) <= g.zero_tol


def v_r(g: Graph) -> np.ndarray:
    """Indices of vertices that are not quasi-isolated."""
    return np.flatnonzero(~quasi_isolated_mask(g))


def is_balanced(g: Graph) -> bool:
    return degrees(g).balanced


# -- construction ----------------------------------------------------------

def from_edge_list(edges: Iterable[Sequence], n: int | None = None,
                   allow_loops: bool = True) -> Graph:
    """Build a graph from ``(src, dst, weight)`` triples.

    ``n`` defaults to one more than the largest vertex id.  Duplicate
    ``(src, dst)`` pairs are rejected rather than merged.
    """
    edges = [(int(s), int(d), float(w)) for s, d, w in edges]
    if n is None:
        n = 1 + max((max(s, d) for s, d, _ in edges), default=0)
    w = np.zeros((n, n))
    seen = set()
    for s, d, weight in edges:
        if not (0 <= s < n and 0 <= d < n):
            raise GraphError(f"edge ({s}, {d}) has a vertex outside [0, {n})")
        if (s, d) in seen:
            raise GraphError(f"duplicate edge ({s}, {d})")
        if not np.isfinite(weight):
            raise GraphError(f"non-finite weight on edge ({s}, {d})")
        seen.add((s, d))
        w[d, s] = weight
    return Graph(w, allow_loops=allow_loops)


def from_matrix(weights, allow_loops: bool = True) -> Graph:
    return Graph(np.asarray(weights, dtype=float), allow_loops=allow_loops)


# -- transforms ------------------------------------------------------------

def reverse(g: Graph) -> Graph:
    return Graph(g.weights.T, allow_loops=g.allow_loops)


def underlying(g: Graph) -> Graph:
    """Undirected graph with antiparallel weights summed and loops doubled."""
    return Graph(g.weights + g.weights.T, allow_loops=g.allow_loops)


def associated_positive(g: Graph) -> Graph:
    return Graph(np.abs(g.weights), allow_loops=g.allow_loops)


def associated_negative(g: Graph) -> Graph:
    return Graph(-np.abs(g.weights), allow_loops=g.allow_loops)


def scaled(g: Graph, c: float) -> Graph:
    return Graph(c * g.weights, allow_loops=g.allow_loops)


def _vertex_array(g: Graph, vs) -> np.ndarray:
    vs = np.asarray(sorted(set(int(v) for v in vs)), dtype=int)
    if vs.size == 0:
        raise GraphError("vertex set must be nonempty")
    if vs[0] < 0 or vs[-1] >= g.n:
        raise GraphError(f"vertex set must lie in [0, {g.n})")
    return vs


def induced_subgraph(g: Graph, vs) -> Graph:
    """Restriction of the weight matrix to ``vs`` (sorted, densely reindexed)."""
    idx = _vertex_array(g, vs)
    return Graph(g.weights[np.ix_(idx, idx)], allow_loops=g.allow_loops)


def _outside_weights(g: Graph, vs) -> np.ndarray:
    idx = _vertex_array(g, vs)
    outside = np.setdiff1d(np.arange(g.n), idx)
    return g.weights[np.ix_(idx, outside)]


def is_isolated_subgraph(g: Graph, vs) -> bool:
    """No member of ``vs`` receives weight from outside ``vs``."""
    return not np.any(_outside_weights(g, vs) != 0)


def is_quasi_isolated_subgraph(g: Graph, vs) -> bool:
    """Incoming weight from outside ``vs`` sums to zero at every member."""
    return bool(np.all(np.abs(_outside_weights(g, vs).sum(axis=1)) <= g.zero_tol))


def disjoint_union(*graphs: Graph) -> Graph:
    n = sum(h.n for h in graphs)
    w = np.zeros((n, n))
    at = 0
    for h in graphs:
        w[at:at + h.n, at:at + h.n] = h.weights
        at += h.n
    return Graph(w, allow_loops=all(h.allow_loops for h in graphs))


# -- small named graphs ----------------------------------------------------

def directed_cycle(n: int, weight: float = 1.0) -> Graph:
    return from_edge_list([(i, (i + 1) % n, weight) for i in range(n)], n=n)


def directed_path(n: int, weight: float = 1.0) -> Graph:
    return from_edge_list([(i, i + 1, weight) for i in range(n - 1)], n=n)


def complete_graph(n: int, weight: float = 1.0) -> Graph:
    w = weight * (np.ones((n, n)) - np.eye(n))
    return Graph(w)


def undirected_cycle(n: int, weight: float = 1.0) -> Graph:
    return underlying(directed_cycle(n, weight)) if n > 2 else complete_graph(2, weight)
