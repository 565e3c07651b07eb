"""Strongly connected components and the Frobenius normal form ordering."""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .graph import Graph, is_isolated_subgraph, is_quasi_isolated_subgraph, quasi_isolated_mask


def _successors(pattern: np.ndarray) -> list[list[int]]:
    return [list(np.flatnonzero(row)) for row in pattern]


def scc_of_pattern(pattern: np.ndarray) -> list[list[int]]:
    """Tarjan's algorithm, iterative.  ``pattern[u, v]`` means an arc ``u -> v``.

    Components come out in reverse topological order of the condensation
    (a component is emitted after every component it can reach).
    """
    n = pattern.shape[0]
    succ = _successors(pattern)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            if pos < len(succ[v]):
                work[-1] = (v, pos + 1)
                w = succ[v][pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def scc(g: Graph) -> list[list[int]]:
    """Strongly connected components of ``g`` as sorted vertex lists."""
    comps = scc_of_pattern(g.reachable_pattern())
    return sorted(comps, key=lambda c: c[0])


def _ordered_components(pattern: np.ndarray) -> list[list[int]]:
    """Components ordered so every arc between components points backwards.

    An arc ``C_a -> C_b`` forces ``C_b`` before ``C_a``; among the components
    that are ready, the one holding the smallest vertex id goes first.
    """
    comps = scc_of_pattern(pattern)
    comp_of = np.empty(pattern.shape[0], dtype=int)
    for c, vs in enumerate(comps):
        comp_of[vs] = c
    m = len(comps)
    targets = [set() for _ in range(m)]  # components that must precede c
    sources = [set() for _ in range(m)]
    us, vs_ = np.nonzero(pattern)
    for u, v in zip(us, vs_):
        a, b = comp_of[u], comp_of[v]
        if a != b:
            targets[a].add(b)
            sources[b].add(a)
    pending = [len(t) for t in targets]
    heap = [(comps[c][0], c) for c in range(m) if pending[c] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, c = heapq.heappop(heap)
        order.append(comps[c])
        for a in sources[c]:
            pending[a] -= 1
            if pending[a] == 0:
                heapq.heappush(heap, (comps[a][0], a))
    return order


@dataclass(frozen=True)
class FrobeniusForm:
    components: list[list[int]]
    isolated: list[bool]
    quasi_isolated: list[bool]
    contains_quasi_isolated_vertex: list[bool]

    @property
    def permutation(self) -> list[int]:
        return [v for comp in self.components for v in comp]

    @property
    def block_bounds(self) -> list[tuple[int, int]]:
        bounds, at = [], 0
        for comp in self.components:
            bounds.append((at, at + len(comp)))
            at += len(comp)
        return bounds

    def to_dict(self) -> dict:
        return {
            "components": [list(map(int, c)) for c in self.components],
            "isolated": list(self.isolated),
            "quasi_isolated": list(self.quasi_isolated),
            "contains_quasi_isolated_vertex": list(self.contains_quasi_isolated_vertex),
            "permutation": list(map(int, self.permutation)),
        }


def frobenius_form(g: Graph) -> FrobeniusForm:
    comps = _ordered_components(g.reachable_pattern())
    qmask = quasi_isolated_mask(g)
    return FrobeniusForm(
        components=comps,
        isolated=[is_isolated_subgraph(g, c) for c in comps],
        quasi_isolated=[is_quasi_isolated_subgraph(g, c) for c in comps],
        contains_quasi_isolated_vertex=[bool(qmask[c].any()) for c in comps],
    )


def permuted(matrix: np.ndarray, form: FrobeniusForm) -> np.ndarray:
    p = form.permutation
    return matrix[np.ix_(p, p)]


def isolated_components(g: Graph, form: FrobeniusForm | None = None) -> list[int]:
    form = frobenius_form(g) if form is None else form
    return [k for k, iso in enumerate(form.isolated) if iso]


def min_spanning_trees(g: Graph) -> int:
    """Minimum number of directed trees needed to span ``g``.

    Equal to the number of isolated strongly connected components: one root
    per source component of the condensation suffices and is necessary.
    """
    return len(isolated_components(g))


def has_spanning_tree(g: Graph) -> bool:
    return min_spanning_trees(g) == 1
