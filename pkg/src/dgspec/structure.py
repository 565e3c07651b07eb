"""Structural classes read off the graph and off its spectrum.

Covers acyclicity, maximal components, and (anti-)k-partite structure,
together with the spectral signatures these classes leave in the
normalized Laplacian.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .components import FrobeniusForm, frobenius_form, scc
from .eig import Spectrum, match_multisets, spectrum, target_mask
from .graph import Graph, associated_positive, quasi_isolated_mask
from .laplacian import PreconditionError, radii
from .partite import classes, detect, satisfies_definition

AMBIGUITY_FACTOR = 10.0
RADIUS_RTOL = 1e-9


class Membership(str, Enum):
    PRESENT = "present"
    AMBIGUOUS = "ambiguous"
    ABSENT = "absent"


def _require_loopless(g: Graph, what: str) -> None:
    if g.has_loops:
        raise PreconditionError(f"{what} assumes a loopless graph")


def membership(s: Spectrum, target: complex, tol: float | None = None) -> Membership:
    tol = s.tol if tol is None else tol
    dist = s.distance(target)
    if dist <= tol:
        return Membership.PRESENT
    if dist <= AMBIGUITY_FACTOR * tol:
        return Membership.AMBIGUOUS
    return Membership.ABSENT


def _combine(states) -> Membership:
    states = list(states)
    if all(x is Membership.PRESENT for x in states):
        return Membership.PRESENT
    if any(x is Membership.ABSENT for x in states):
        return Membership.ABSENT
    return Membership.AMBIGUOUS


def is_dag(g: Graph) -> bool:
    return not g.has_loops and all(len(c) == 1 for c in scc(g))


def _zero_one_masks(s: Spectrum):
    return target_mask(s, 0.0, s.tol), target_mask(s, 1.0, s.tol)


def dag_spectrum_check(g: Graph, s: Spectrum | None = None) -> bool:
    """Spectrum inside {0, 1} with m0 = #quasi-isolated and m1 = |V_R|."""
    s = spectrum(g) if s is None else s
    zero, one = _zero_one_masks(s)
    if np.any(zero & one) or not np.all(zero | one):
        return False
    q = int(quasi_isolated_mask(g).sum())
    return int(zero.sum()) == q and int(one.sum()) == g.n - q


def cyclic_vertex_lower_bound(s: Spectrum) -> int:
    """Eigenvalues outside {0, 1}; at least that many vertices lie on cycles."""
    zero, one = _zero_one_masks(s)
    return int(np.sum(~(zero | one)))


def cyclic_vertices(g: Graph) -> list[int]:
    loops = np.diag(g.weights) != 0
    out = [v for c in scc(g) if len(c) > 1 for v in c]
    out += [v for v in range(g.n) if loops[v] and v not in out]
    return sorted(out)


def _radius_tol(r: float) -> float:
    return RADIUS_RTOL * max(1.0, r)


def maximal_components(g: Graph, form: FrobeniusForm | None = None) -> list[int]:
    """Indices (into the Frobenius ordering) of components with r(i) = r throughout."""
    form = frobenius_form(g) if form is None else form
    rad = radii(g)
    hit = np.abs(rad.r_per_vertex - rad.r) <= _radius_tol(rad.r)
    return [k for k, comp in enumerate(form.components) if np.all(hit[comp])]


def is_maximal(g: Graph, vertices=None) -> bool:
    rad = radii(g)
    vs = np.arange(g.n) if vertices is None else np.asarray(list(vertices))
    return bool(np.all(np.abs(rad.r_per_vertex[vs] - rad.r) <= _radius_tol(rad.r)))


def detect_k_partite(g: Graph, k: int, vertices=None) -> list[int] | None:
    """Class labels ``0..k-1`` for ``vertices`` (sorted), or ``None``."""
    return detect(g, k, anti=False, members=vertices)


def detect_anti_k_partite(g: Graph, k: int, vertices=None) -> list[int] | None:
    return detect(g, k, anti=True, members=vertices)


def _roots(k: int, ms) -> list[complex]:
    return [complex(np.exp(2j * np.pi * m / k)) for m in ms]


def spectral_k_partite_membership(g: Graph, k: int, s: Spectrum | None = None) -> Membership:
    _require_loopless(g, "the spectral k-partite test")
    s = spectrum(g) if s is None else s
    r = radii(g).r
    return _combine(membership(s, 1 - r * z) for z in _roots(k, (1, -1)))


def spectral_anti_k_partite_membership(g: Graph, k: int, s: Spectrum | None = None) -> Membership:
    _require_loopless(g, "the spectral anti-k-partite test")
    if k % 2:
        return Membership.ABSENT
    s = spectrum(g) if s is None else s
    r = radii(g).r
    return _combine(membership(s, 1 + r * z) for z in _roots(k, (1, -1)))


def spectral_k_partite_test(g: Graph, k: int, s: Spectrum | None = None) -> bool:
    return spectral_k_partite_membership(g, k, s) is Membership.PRESENT


def spectral_anti_k_partite_test(g: Graph, k: int, s: Spectrum | None = None) -> bool:
    return spectral_anti_k_partite_membership(g, k, s) is Membership.PRESENT


def anti_converse_applies(k: int, r: float) -> bool:
    """Whether the spectral anti-k-partite test also implies the structure.

    That holds for ``k = 4^m`` and for ``k = 2 + 4^m`` when ``r > 1``.
    """
    def power_of_four(x):
        while x > 1 and x % 4 == 0:
            x //= 4
        return x == 1

    if k % 2:
        return False
    if power_of_four(k):
        return True
    return power_of_four(k - 2) and r > 1 + _radius_tol(r)


def _uniform_radius(g: Graph) -> float:
    rad = radii(g)
    if not is_maximal(g):
        raise PreconditionError("r(i) must equal r at every vertex")
    return rad.r


def _require_partite(g: Graph, k: int, anti: bool) -> list[int]:
    _require_loopless(g, "the k-partite spectral relations")
    if anti and k % 2:
        raise PreconditionError("anti-k-partite requires even k")
    labels = detect(g, k, anti=anti)
    if labels is None:
        kind = "anti-k-partite" if anti else "k-partite"
        raise PreconditionError(f"graph is not {kind} for k={k}")
    return labels


def kpartite_spectrum_shift_check(g: Graph, k: int, anti: bool = False,
                                  tol: float | None = None) -> bool:
    """Check spec(Δ) = {1 ∓ r·e^{±2πi/k}·(1 - λ⁺)} against the associated positive graph.

    Both rotation directions are checked as multisets; ``anti`` uses ``+r``.
    """
    _require_partite(g, k, anti)
    r = _uniform_radius(g)
    s = spectrum(g)
    s_pos = spectrum(associated_positive(g))
    tol = max(s.tol, r * s_pos.tol) if tol is None else tol
    sign = 1.0 if anti else -1.0
    for z in _roots(k, (1, -1)):
        mapped = 1 + sign * r * z * (1 - s_pos.eigenvalues)
        if match_multisets(mapped, s.eigenvalues) > tol:
            return False
    return True


def _all_positive_normalized(g: Graph) -> bool:
    rows, cols = np.nonzero(g.weights)
    return bool(np.all((g.weights[rows, cols] > 0) == (g.d_in[rows] > 0)))


def kpartite_guaranteed_eigs(g: Graph, k: int, anti: bool = False) -> list[complex]:
    """Eigenvalues that a (anti-)k-partite graph with uniform radius must have."""
    _require_partite(g, k, anti)
    r = _uniform_radius(g)
    odd = range(1, k, 2)
    if anti and _all_positive_normalized(g):
        return [1 - z for z in _roots(k, range(0, k, 2))] + [1 + z for z in _roots(k, odd)]
    if anti:
        return [1 + r * z for z in _roots(k, odd)]
    if _all_positive_normalized(g):
        return [1 - z for z in _roots(k, range(k))]
    return [1 - r * z for z in _roots(k, odd)]


@dataclass
class KPartiteFinding:
    k: int
    anti: bool
    vertices: list[int]
    labels: list[int] | None
    evidence: str  # "spectral", "combinatorial" or "both"
    spectral: Membership

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "anti": self.anti,
            "vertices": list(map(int, self.vertices)),
            "labels": None if self.labels is None else list(map(int, self.labels)),
            "classes": None if self.labels is None else classes(self.labels, self.vertices, self.k),
            "evidence": self.evidence,
            "spectral": self.spectral.value,
        }


@dataclass
class StructureReport:
    is_dag: bool
    spectral_consistent: bool
    cyclic_vertex_lower_bound: int
    cyclic_vertices: int
    radius: float
    maximal_components: list[int]
    components: list[list[int]]
    isolated: list[bool]
    kpartite_findings: list[KPartiteFinding] = field(default_factory=list)
    bipartite: bool = False
    bipartite_components: list[int] = field(default_factory=list)
    anti_bipartite: bool = False
    anti_bipartite_components: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "is_dag": self.is_dag,
            "spectral_consistent": self.spectral_consistent,
            "cyclic_vertex_lower_bound": self.cyclic_vertex_lower_bound,
            "cyclic_vertices": self.cyclic_vertices,
            "radius": self.radius,
            "components": [list(map(int, c)) for c in self.components],
            "isolated": list(self.isolated),
            "maximal_components": list(self.maximal_components),
            "bipartite": self.bipartite,
            "bipartite_components": list(self.bipartite_components),
            "anti_bipartite": self.anti_bipartite,
            "anti_bipartite_components": list(self.anti_bipartite_components),
            "kpartite_findings": [f.to_dict() for f in self.kpartite_findings],
        }


def structure_report(g: Graph, ks=None, s: Spectrum | None = None) -> StructureReport:
    """Combinatorial and spectral structure of a loopless graph.

    ``ks`` defaults to ``2..n``.  Combinatorial detection runs on every
    strongly connected component with at least two vertices; the spectral
    tests speak only about isolated maximal components.
    """
    _require_loopless(g, "structure_report")
    s = spectrum(g) if s is None else s
    form = frobenius_form(g)
    maximal = set(maximal_components(g, form))
    r = radii(g).r
    report = StructureReport(
        is_dag=is_dag(g),
        spectral_consistent=dag_spectrum_check(g, s),
        cyclic_vertex_lower_bound=cyclic_vertex_lower_bound(s),
        cyclic_vertices=len(cyclic_vertices(g)),
        radius=r,
        maximal_components=sorted(maximal),
        components=form.components,
        isolated=form.isolated,
    )
    ks = range(2, g.n + 1) if ks is None else ks
    for k in ks:
        for anti in (False, True):
            if anti and k % 2:
                continue
            spec_state = (spectral_anti_k_partite_membership(g, k, s) if anti
                          else spectral_k_partite_membership(g, k, s))
            witnessed = False
            for idx, comp in enumerate(form.components):
                if len(comp) < max(2, k):
                    continue
                labels = detect(g, k, anti=anti, members=comp)
                if labels is None:
                    continue
                host = form.isolated[idx] and idx in maximal
                witnessed |= host
                evidence = "both" if host and spec_state is Membership.PRESENT else "combinatorial"
                report.kpartite_findings.append(
                    KPartiteFinding(k, anti, [int(v) for v in comp], labels, evidence, spec_state))
                if k == 2 and host:
                    if anti:
                        report.anti_bipartite_components.append(idx)
                    else:
                        report.bipartite_components.append(idx)
            if spec_state is Membership.PRESENT and not witnessed:
                if not anti or anti_converse_applies(k, r):
                    report.kpartite_findings.append(
                        KPartiteFinding(k, anti, [], None, "spectral", spec_state))
    report.bipartite = bool(report.bipartite_components)
    report.anti_bipartite = bool(report.anti_bipartite_components)
    for f in report.kpartite_findings:
        if f.labels is not None and not satisfies_definition(g, f.labels, f.k, f.anti, f.vertices):
            raise AssertionError("reported decomposition fails the definition")
    return report


def search_bipartite_anti_bipartite_witness(n: int = 4, radius: float = 3.0,
                                            values=range(-2, 3)) -> Graph | None:
    """First symmetric signed graph (in lexicographic weight order) that is both
    bipartite and anti-bipartite with ``r(i) = radius`` at every vertex."""
    pairs = list(itertools.combinations(range(n), 2))
    for combo in itertools.product(list(values), repeat=len(pairs)):
        w = np.zeros((n, n))
        for (i, j), x in zip(pairs, combo):
            w[i, j] = w[j, i] = x
        if np.any(np.abs(w.sum(axis=1)) < 1e-12):
            continue
        g = Graph(w)
        rad = radii(g).r_per_vertex
        if np.any(np.abs(rad - radius) > _radius_tol(radius)):
            continue
        if detect(g, 2) is not None and detect(g, 2, anti=True) is not None:
            return g
    return None
