"""k-partite and anti-k-partite decompositions.

Classes are labelled ``0..k-1``.  For an edge ``j -> i`` with normalized
weight ``w_ij / d_i`` the class offset ``label(i) - label(j) (mod k)`` must be

* k-partite: ``+1`` when positive, ``+1 + k/2`` when negative (k even only);
* anti-k-partite (k even): ``+1`` when negative, ``+1 + k/2`` when positive.

Feasibility is a system of difference constraints over Z_k, solved with a
union-find that carries offsets to the root.
"""
from __future__ import annotations

import numpy as np

from .graph import Graph, quasi_isolated_mask


def _edge_offsets(g: Graph, members: np.ndarray, k: int, anti: bool):
    """Yield ``(i, j, offset)`` for edges ``j -> i`` inside ``members``.

    Yields ``None`` as the offset when the sign is not admissible for ``k``.
    """
    sub =g.weights[np.ix_(members, members)]
    d = g.d_in[members]
    ii, jj = np.nonzero(sub)
    for a, b in zip(ii, jj):
        positive = (sub[a, b] > 0) == (d[a] > 0)
        direct = positive != anti
        if direct:
            yield int(a), int(b), 1 % k
        elif k % 2 == 0:
            yield int(a), int(b), (1 + k // 2) % k
        else:
            yield int(a), int(b), None


def satisfies_definition(g: Graph, labels, k: int, anti: bool = False,
                         members=None) -> bool:
    """Edge-by-edge check of a labelled decomposition against the definition."""
    members = np.arange(g.n) if members is None else np.asarray(sorted(members))
    labels = np.asarray(labels, dtype=int)
    if k < 2 or labels.shape != members.shape:
        return False
    if anti and k % 2:
        return False
    if np.any(quasi_isolated_mask(g)[members]):
        return False
    if set(labels.tolist()) != set(range(k)):
        return False
    for i, j, off in _edge_offsets(g, members, k, anti):
        if off is None or (labels[i] - labels[j]) % k != off:
            return False
    return True


def _cover_shifts(label_sets: list[set[int]], k: int) -> list[int] | None:
    """Pick a cyclic shift per group so the shifted sets cover ``Z_k``."""
    full = (1 << k) - 1
    masks = []
    for s in label_sets:
        m = 0
        for x in s:
            m |= 1 << x
        masks.append(m)

    def rot(m, t):
        return ((m << t) | (m >> (k - t))) & full if t else m

    order = sorted(range(len(masks)), key=lambda i: -bin(masks[i]).count("1"))
    capacity = [0] * (len(order) + 1)
    for pos in range(len(order) - 1, -1, -1):
        capacity[pos] = capacity[pos + 1] + bin(masks[order[pos]]).count("1")
    dead: set[tuple[int, int]] = set()
    chosen = [0] * len(masks)

    def search(pos, covered):
        if covered == full:
            return True
        if pos == len(order) or capacity[pos] < k - bin(covered).count("1"):
            return False
        if (pos, covered) in dead:
            return False
        g = order[pos]
        seen = set()
        for t in range(k):
            m = rot(masks[g], t)
            if m in seen:
                continue
            seen.add(m)
            chosen[g] = t
            if search(pos + 1, covered | m):
                return True
        dead.add((pos, covered))
        return False

    return chosen if search(0, 0) else None


def detect(g: Graph, k: int, anti: bool = False, members=None) -> list[int] | None:
    """Labels of a (anti-)k-partite decomposition of ``members``, or ``None``.

    ``members`` defaults to all vertices; normalized weights always use the
    in-degrees of the full graph.  Returned labels follow sorted ``members``.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if anti and k % 2:
        raise ValueError("anti-k-partite requires even k")
    members = np.arange(g.n) if members is None else np.asarray(sorted(set(members)), dtype=int)
    if members.size < k or np.any(quasi_isolated_mask(g)[members]):
        return None
    m = members.size
    parent = list(range(m))
    offset = [0] * m  # label(v) - label(parent[v])

    def find(v):
        path = []
        while parent[v] != v:
            path.append(v)
            v = parent[v]
        root = v
        total = 0
        for u in reversed(path):
            total = (total + offset[u]) % k
            offset[u] = total
            parent[u] = root
        return root

    for i, j, off in _edge_offsets(g, members, k, anti):
        if off is None:
            return None
        ri, rj = find(i), find(j)
        oi, oj = offset[i] if i != ri else 0, offset[j] if j != rj else 0
        if ri == rj:
            if (oi - oj) % k != off:
                return None
        else:
            parent[ri] = rj
            offset[ri] = (oj + off - oi) % k

    rel = []
    groups: dict[int, list[int]] = {}
    for v in range(m):
        r = find(v)
        rel.append(offset[v] if v != r else 0)
        groups.setdefault(r, []).append(v)
    roots = list(groups)
    shifts = _cover_shifts([{rel[v] for v in groups[r]} for r in roots], k)
    if shifts is None:
        return None
    labels = [0] * m
    for r, t in zip(roots, shifts):
        for v in groups[r]:
            labels[v] = (rel[v] + t) % k
    # canonical rotation: smallest member carries label 0
    base = labels[0]
    labels = [(x - base) % k for x in labels]
    if not satisfies_definition(g, labels, k, anti, members):
        raise AssertionError("internal error: decomposition fails the definition")
    return labels


def classes(labels, members, k: int) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(k)]
    for v, lab in zip(members, labels):
        out[lab].append(int(v))
    return out
