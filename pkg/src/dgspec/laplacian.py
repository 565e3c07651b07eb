"""Normalized Laplacian and its relatives, plus Gershgorin radii."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .components import scc
from .graph import Graph, GraphError, induced_subgraph, quasi_isolated_mask


class PreconditionError(ValueError):
    """Operation called outside the domain where it is defined."""


class Kind(str, Enum):
    DELTA = "delta"
    P = "p"
    DELTA_REDUCED = "delta_reduced"
    DIRICHLET = "dirichlet"
    L_REDUCED = "l_reduced"


@dataclass(frozen=True, eq=False)
class LaplacianMatrix:
    matrix: np.ndarray
    kind: Kind
    domain: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def to_csv(self) -> str:
        return "\n".join(",".join(repr(float(x)) for x in row) for row in self.matrix) + "\n"


def _normalized_adjacency(g: Graph) -> np.ndarray:
    """``D^{-1} W`` with zero rows at quasi-isolated vertices."""
    q = quasi_isolated_mask(g)
    d = np.where(q, 1.0, g.d_in)
    m = g.weights / d[:, None]
    m[q] = 0.0
    return m


def delta_matrix(g: Graph) -> np.ndarray:
    q = quasi_isolated_mask(g)
    m = -_normalized_adjacency(g)
    m[np.diag_indices(g.n)] += np.where(q, 0.0, 1.0)
    return m


def build_delta(g: Graph) -> LaplacianMatrix:
    return LaplacianMatrix(delta_matrix(g), Kind.DELTA, tuple(range(g.n)))


def build_p(g: Graph) -> LaplacianMatrix:
    return LaplacianMatrix(np.eye(g.n) - delta_matrix(g), Kind.P, tuple(range(g.n)))


def _restrict(g: Graph, omega, kind: Kind) -> LaplacianMatrix:
    idx = np.asarray(sorted(set(int(v) for v in omega)), dtype=int)
    if idx.size == 0:
        raise GraphError("omega must be nonempty")
    return LaplacianMatrix(delta_matrix(g)[np.ix_(idx, idx)], kind, tuple(int(i) for i in idx))


def build_dirichlet(g: Graph, omega) -> LaplacianMatrix:
    """Dirichlet Laplacian: act with zero extension outside ``omega``, restrict."""
    return _restrict(g, omega, Kind.DIRICHLET)


def build_reduced(g: Graph) -> LaplacianMatrix:
    vr = np.flatnonzero(~quasi_isolated_mask(g))
    if vr.size == 0:
        raise PreconditionError("every vertex is quasi-isolated; V_R is empty")
    return _restrict(g, vr, Kind.DELTA_REDUCED)


def build_l_reduced(g: Graph) -> LaplacianMatrix:
    """``I_R - D_R^{-1/2} W_R D_R^{-1/2}``, similar to the reduced Laplacian."""
    vr = np.flatnonzero(~quasi_isolated_mask(g))
    if vr.size == 0:
        raise PreconditionError("every vertex is quasi-isolated; V_R is empty")
    d = g.d_in[vr]
    if np.any(d < 0):
        raise PreconditionError("negative in-degree on V_R; use the reduced Laplacian instead")
    s = 1.0 / np.sqrt(d)
    w = g.weights[np.ix_(vr, vr)]
    m = np.eye(vr.size) - s[:, None] * w * s[None, :]
    return LaplacianMatrix(m, Kind.L_REDUCED, tuple(int(i) for i in vr))


def symmetric_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class Radii:
    r_per_vertex: np.ndarray
    r1: float
    r2: float
    r: float

    def to_dict(self) -> dict:
        return {"r_per_vertex": [float(x) for x in self.r_per_vertex],
                "r1": self.r1, "r2": self.r2, "r": self.r}


def radii(g: Graph) -> Radii:
    q = quasi_isolated_mask(g)
    absw = np.abs(g.weights)
    dabs = np.where(q, 1.0, np.abs(g.d_in))
    r_i = np.where(q, 0.0, absw.sum(axis=1) / dabs)
    vr = np.flatnonzero(~q)
    r2 = 0.0
    r1 = 0.0
    if vr.size:
        r2 = float(np.max(absw[np.ix_(vr, vr)].sum(axis=1) / dabs[vr]))
        for comp in scc(induced_subgraph(g, vr)):
            members = vr[comp]
            sums = absw[np.ix_(members, members)].sum(axis=1) / dabs[members]
            r1 = max(r1, float(np.max(sums)))
    return Radii(r_per_vertex=r_i, r1=r1, r2=r2, r=float(np.max(r_i)))
