"""Random graph generators used by the property suites.

All weights are small integers (or exact binary fractions) so that the exact
characteristic-polynomial oracle can consume them without rounding.  Every
generator takes a ``seed`` and draws from ``numpy.random.default_rng``.
"""
from __future__ import annotations

import numpy as np

from .components import scc, scc_of_pattern
from .graph import Graph, disjoint_union
from .partite import satisfies_definition

MAX_ATTEMPTS = 500
MAGNITUDES = (1, 2, 3)


class GenerationError(RuntimeError):
    """Rejection sampling gave up after the attempt budget."""


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _signed_weights(rng, size, neg_frac: float) -> np.ndarray:
    mags = rng.choice(MAGNITUDES, size=size).astype(float)
    signs = np.where(rng.random(size) < neg_frac, -1.0, 1.0)
    return mags * signs


def is_strongly_connected(g: Graph) -> bool:
    return len(scc(g)) == 1


def is_weakly_connected(g: Graph) -> bool:
    pattern = (g.weights != 0) | (g.weights.T != 0)
    return len(scc_of_pattern(pattern)) == 1


def gen_dag(n: int, p: float, seed, neg_frac: float = 0.0) -> Graph:
    """Forward edges along a random vertex order."""
    rng = _rng(seed)
    order = rng.permutation(n)
    w = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p:
                w[order[b], order[a]] = _signed_weights(rng, 1, neg_frac)[0]
    return Graph(w)


def gen_er_signed(n: int, p: float, neg_frac: float, seed, loops: bool = False) -> Graph:
    rng = _rng(seed)
    mask = rng.random((n, n)) < p
    if not loops:
        np.fill_diagonal(mask, False)
    w = np.where(mask, _signed_weights(rng, (n, n), neg_frac), 0.0)
    return Graph(w)


def gen_balanced(n: int, cycles: int, seed, neg_frac: float = 0.0,
                 nonnegative_degrees: bool = False) -> Graph:
    """Superpose ``cycles`` random directed cycles, each with a constant weight.

    With ``nonnegative_degrees`` samples with a negative in-degree are
    rejected and redrawn.
    """
    if n < 2:
        raise ValueError("balanced generator needs n >= 2")
    rng = _rng(seed)
    for _ in range(MAX_ATTEMPTS):
        w = np.zeros((n, n))
        for _ in range(cycles):
            length = int(rng.integers(2, n + 1))
            verts = rng.choice(n, size=length, replace=False)
            weight = _signed_weights(rng, 1, neg_frac)[0]
            for a in range(length):
                w[verts[(a + 1) % length], verts[a]] += weight
        g = Graph(w)
        if not nonnegative_degrees or np.all(g.d_in >= -g.zero_tol):
            return g
    raise GenerationError("gen_balanced: no sample with nonnegative degrees")


def gen_undirected(n: int, p: float, seed, connected: bool = True) -> Graph:
    """Symmetric nonnegative graph; a random spanning tree forces connectivity."""
    rng = _rng(seed)
    w = np.zeros((n, n))
    if connected:
        order = rng.permutation(n)
        for a in range(1, n):
            b = int(rng.integers(0, a))
            i, j = order[a], order[b]
            w[i, j] = w[j, i] = rng.choice(MAGNITUDES)
    for i in range(n):
        for j in range(i + 1, n):
            if w[i, j] == 0 and rng.random() < p:
                w[i, j] = w[j, i] = rng.choice(MAGNITUDES)
    return Graph(w)


def _pair_stubs(n: int, k: int, rng) -> np.ndarray | None:
    """One pass of sequential stub pairing; ``None`` when it gets stuck."""
    adj = np.zeros((n, n), dtype=bool)
    stubs = list(np.repeat(np.arange(n), k))
    while stubs:
        # a few blind draws usually succeed; scan every pair only when they do not
        for _ in range(8):
            i, j = rng.choice(len(stubs), size=2, replace=False)
            u, v = stubs[i], stubs[j]
            if u != v and not adj[u, v]:
                break
        else:
            a = np.asarray(stubs)
            ok = (a[:, None] != a[None, :]) & ~adj[a[:, None], a[None, :]]
            pairs = np.argwhere(np.triu(ok, 1))
            if pairs.size == 0:
                return None
            i, j = pairs[rng.integers(len(pairs))]
            u, v = a[i], a[j]
        adj[u, v] = adj[v, u] = True
        for idx in sorted((int(i), int(j)), reverse=True):
            stubs.pop(idx)
    return adj


def gen_regular(n: int, k: int, seed, weight: float = 1.0, connected: bool = False) -> Graph:
    """Random simple k-regular undirected graph.

    Stubs are paired one edge at a time among admissible pairs, restarting
    when no admissible pair is left (close to uniform for small k).
    """
    if n * k % 2 or k >= n or k < 1:
        raise ValueError("k-regular graph needs k < n and n*k even")
    if connected and k == 1 and n > 2:
        raise ValueError("a 1-regular graph on more than two vertices is disconnected")
    rng = _rng(seed)
    for _ in range(MAX_ATTEMPTS):
        adj = _pair_stubs(n, k, rng)
        if adj is None:
            continue
        g = Graph(weight * adj.astype(float))
        if connected and not is_strongly_connected(g):
            continue
        return g
    raise GenerationError("gen_regular: attempt budget exhausted")


def gen_strongly_connected(n: int, p: float, seed, neg_frac: float = 0.0) -> Graph:
    """Random digraph containing a random Hamiltonian cycle."""
    rng = _rng(seed)
    for _ in range(MAX_ATTEMPTS):
        g = gen_er_signed(n, p, neg_frac, rng)
        w = g.weights.copy()
        order = rng.permutation(n)
        for a in range(n):
            i, j = order[(a + 1) % n], order[a]
            if w[i, j] == 0 and i != j:
                w[i, j] = _signed_weights(rng, 1, neg_frac)[0]
        g = Graph(w)
        if is_strongly_connected(g) and (neg_frac == 0 or np.all(np.abs(g.d_in) > g.zero_tol)):
            return g
    raise GenerationError("gen_strongly_connected: attempt budget exhausted")


def _composition(rng, total: int, parts: int) -> np.ndarray:
    """Random split of a positive integer into ``parts`` positive integers."""
    cuts = np.sort(rng.choice(np.arange(1, total), size=parts - 1, replace=False))
    return np.diff(np.concatenate(([0], cuts, [total]))).astype(float)


def _row_weights(rng, n_dom: int, n_min: int, radius: float | None):
    """Magnitudes for the dominant (same sign as the degree) and minority edges."""
    minor = rng.choice(MAGNITUDES, size=n_min).astype(float)
    if radius is None:
        dom = rng.choice(MAGNITUDES, size=n_dom).astype(float)
        deficit = minor.sum() - dom.sum()
        if deficit >= 0:
            dom[rng.integers(n_dom)] += deficit + 1
        return dom, minor
    if radius == 1.0:
        return rng.choice(MAGNITUDES, size=n_dom).astype(float), minor
    # dom - minor = d and dom + minor = radius * d
    target = minor.sum() * (radius + 1) / (radius - 1)
    scale = 1
    while round(target * scale) < n_dom or abs(target * scale - round(target * scale)) > 1e-9:
        scale += 1
        if scale > 64:
            dom = rng.random(n_dom) + 0.5
            return dom * target / dom.sum(), minor
    minor *= scale
    total = int(round(target * scale))
    dom = _composition(rng, total, n_dom) if n_dom > 1 else np.array([float(total)])
    return dom, minor


def sample_partite(n: int, k: int, seed, anti: bool = False, p: float = 0.6,
                   neg_frac: float = 0.0, radius: float | None = None,
                   flip_rows: bool = False, strongly_connected: bool = False):
    """Draw a certified (anti-)k-partite graph; returns ``(graph, labels)``.

    ``neg_frac`` is the chance that an admissible minority-sign edge is
    drawn.  ``radius`` forces ``r(i) = radius`` at every vertex.
    ``flip_rows`` negates random rows, which leaves every normalized weight
    and hence the class structure unchanged.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if anti and k % 2:
        raise ValueError("anti-k-partite requires even k")
    if radius is not None and radius < 1:
        raise ValueError("radius must be >= 1")
    if radius is not None and radius > 1 and not anti and k % 2:
        raise ValueError("radius > 1 needs negative normalized weights, so k must be even")
    # for k = 2 the minority-sign edges stay inside a class, which then needs a partner
    needs_partner = k == 2 and (anti or (radius is not None and radius > 1))
    min_size = 2 if needs_partner else 1
    if n < k * min_size:
        raise ValueError(f"need at least {k * min_size} vertices")
    rng = _rng(seed)
    shift = k // 2 - 1
    for _ in range(MAX_ATTEMPTS):
        order = rng.permutation(n)
        labels = np.empty(n, dtype=int)
        labels[order[: k * min_size]] = np.arange(k * min_size) % k
        labels[order[k * min_size:]] = rng.integers(0, k, size=n - k * min_size)
        w = np.zeros((n, n))
        for i in range(n):
            q = labels[i]
            forward = np.flatnonzero(labels == (q - 1) % k)
            across = np.flatnonzero(labels == (q + shift) % k) if k % 2 == 0 else np.array([], int)
            across = across[across != i]
            fwd = forward[rng.random(forward.size) < p]
            if anti:
                # forward edges carry the minority sign, across edges dominate
                want_minor = radius is None or radius > 1
                minor_set = fwd if want_minor else np.array([], int)
                dom_set = across[rng.random(across.size) < p]
                if dom_set.size == 0 and across.size:
                    dom_set = rng.choice(across, size=1)
                if radius is not None and radius > 1 and minor_set.size == 0 and forward.size:
                    minor_set = rng.choice(forward, size=1)
            else:
                dom_set = fwd if fwd.size else rng.choice(forward, size=1)
                want_minor = radius is None or radius > 1
                chance = neg_frac if radius is None else max(neg_frac, p)
                minor_set = across[rng.random(across.size) < chance] if want_minor else np.array([], int)
                if radius is not None and radius > 1 and minor_set.size == 0 and across.size:
                    minor_set = rng.choice(across, size=1)
            if dom_set.size == 0:
                break
            if radius is not None and radius > 1 and minor_set.size == 0:
                break
            dom, minor = _row_weights(rng, dom_set.size, minor_set.size, radius)
            w[i, dom_set] = dom
            w[i, minor_set] = -minor
            if flip_rows and rng.random() < 0.5:
                w[i] = -w[i]
        else:
            g = Graph(w)
            if strongly_connected and not is_strongly_connected(g):
                continue
            if satisfies_definition(g, labels, k, anti):
                return g, labels.tolist()
    kind = "anti-k-partite" if anti else "k-partite"
    raise GenerationError(f"{kind} sampling failed for n={n}, k={k} after {MAX_ATTEMPTS} attempts")


def gen_k_partite(n: int, k: int, seed, **kwargs) -> Graph:
    return sample_partite(n, k, seed, anti=False, **kwargs)[0]


def gen_anti_k_partite(n: int, k: int, seed, **kwargs) -> Graph:
    return sample_partite(n, k, seed, anti=True, **kwargs)[0]


def attach_tail(core: Graph, rest: Graph, seed, p: float = 0.3, neg_frac: float = 0.0) -> Graph:
    """Disjoint union plus random edges from ``core`` into ``rest``.

    No edge enters ``core``, so it stays an isolated part of the result
    (vertices ``0..core.n-1``).
    """
    rng = _rng(seed)
    g = disjoint_union(core, rest)
    w = g.weights.copy()
    block = rng.random((rest.n, core.n)) < p
    w[core.n:, : core.n] = np.where(block, _signed_weights(rng, (rest.n, core.n), neg_frac), 0.0)
    return Graph(w)
