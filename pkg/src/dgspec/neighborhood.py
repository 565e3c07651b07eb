"""Neighborhood graphs: weighted l-step walks and the induced Laplacian identity."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eig import Spectrum, match_multisets, multiplicity, spectrum
from .graph import Graph, quasi_isolated_mask
from .laplacian import PreconditionError, delta_matrix

IDENTITY_RTOL = 1e-10


@dataclass(frozen=True)
class NeighborhoodGraph:
    base: Graph
    order: int
    result: Graph


def _require(g: Graph, l: int) -> None:
    if int(l) != l or l < 2:
        raise PreconditionError(f"order must be an integer >= 2, got {l}")
    if np.any(quasi_isolated_mask(g)):
        raise PreconditionError("neighborhood graphs need every in-degree nonzero")


def neighborhood_graph(g: Graph, l: int) -> Graph:
    """``W (D^{-1} W)^{l-1}``: weight of all l-step walks, each intermediate
    vertex dividing by its in-degree.  Closed walks show up as loops."""
    _require(g, l)
    step = g.weights / g.d_in[:, None]
    w = g.weights.copy()
    for _ in range(l - 1):
        w = w @ step
    return Graph(w)


def neighborhood(g: Graph, l: int) -> NeighborhoodGraph:
    return NeighborhoodGraph(g, l, neighborhood_graph(g, l))


def identity_error(g: Graph, l: int, gl: Graph | None = None) -> tuple[float, float]:
    """``(||Δ[l] - (I - P^l)||_inf, allowed)``; ``P^l`` is formed as its own power."""
    gl = neighborhood_graph(g, l) if gl is None else gl
    delta = delta_matrix(g)
    p_power = np.linalg.matrix_power(np.eye(g.n) - delta, l)
    err = float(np.max(np.abs(delta_matrix(gl) - (np.eye(g.n) - p_power)).sum(axis=1)))
    norm = float(np.max(np.abs(delta).sum(axis=1)))
    return err, IDENTITY_RTOL * max(1.0, norm) ** l


def neighborhood_identity_check(g: Graph, l: int) -> bool:
    err, allowed = identity_error(g, l)
    return err <= allowed


def degrees_preserved(g: Graph, gl: Graph, rtol: float = IDENTITY_RTOL) -> bool:
    """In-degrees agree to rounding (out-degrees as well when ``g`` is balanced)."""
    scale = max(1.0, float(np.max(np.abs(g.weights))))
    ok = np.allclose(gl.d_in, g.d_in, rtol=0.0, atol=rtol * scale)
    if ok and np.allclose(g.d_in, g.d_out, rtol=0.0, atol=g.zero_tol):
        ok = np.allclose(gl.d_out, g.d_out, rtol=0.0, atol=rtol * scale)
    return bool(ok)


def mapped_spectrum(s: Spectrum, l: int) -> np.ndarray:
    return 1 - (1 - s.eigenvalues) ** l


def spectral_map_error(g: Graph, l: int) -> float:
    """Matching error between ``{1-(1-λ)^l}`` and the spectrum of ``Δ[l]``."""
    return match_multisets(mapped_spectrum(spectrum(g), l), spectrum(neighborhood_graph(g, l)).eigenvalues)


def m1_invariance(g: Graph, l: int) -> str:
    """``"holds"``, ``"fails"`` or ``"ambiguous"``.

    The map ``λ -> 1-(1-λ)^l`` pulls an eigenvalue at distance ``δ`` from 1
    to distance ``δ^l``; when every discrepancy comes from eigenvalues with
    ``tol < δ`` but ``δ^l <= tol`` the two counts are not resolvable at this
    tolerance and the result is ambiguous.
    """
    s = spectrum(g)
    sl = spectrum(neighborhood_graph(g, l))
    m1, m1_l = multiplicity(s, 1.0), multiplicity(sl, 1.0)
    if m1 == m1_l:
        return "holds"
    dist = np.abs(1 - s.eigenvalues)
    window = int(np.sum((dist > s.tol) & (dist ** l <= sl.tol)))
    return "ambiguous" if 0 < m1_l - m1 <= window else "fails"


def m1_invariant(g: Graph, l: int) -> bool:
    return m1_invariance(g, l) == "holds"


@dataclass
class TransferCase:
    case: str
    given: float | None
    bound: float | None
    quantity: float | None
    applies: bool
    holds: bool | None
    note: str = ""

    def to_dict(self) -> dict:
        return {"case": self.case, "given": self.given, "bound": self.bound,
                "quantity": self.quantity, "applies": self.applies, "holds": self.holds,
                "note": self.note}


def bound_transfer(s: Spectrum, l: int, a=None, b=None, c=None, d=None,
                   tol: float = 1e-8) -> list[TransferCase]:
    """Turn bounds on ``|λ[l]|`` into bounds on ``|1 - λ|``.

    ``s`` is the spectrum of Δ; ``λ[l] = 1 - (1 - λ)^l`` keeps the index
    pairing.  Index 0 is the eigenvalue nearest zero.  Omitted bounds default
    to the exact extreme values of ``|λ[l]|``.
    """
    lam = s.eigenvalues
    if lam.size == 0:
        raise PreconditionError("empty spectrum")
    mapped = np.abs(1 - (1 - lam) ** l)
    dist = np.abs(1 - lam)
    rest = np.ones(lam.size, dtype=bool)
    rest[int(np.argmin(np.abs(lam)))] = False
    min_rest = float(mapped[rest].min()) if rest.any() else None
    max_all = float(mapped.max())
    max_dist = float(dist.max())
    min_dist_rest = float(dist[rest].min()) if rest.any() else None
    out = []

    def add(name, given, side_ok, bound, quantity, note):
        if given is None or not side_ok or quantity is None:
            out.append(TransferCase(name, given, None, quantity, False, None, note))
            return
        out.append(TransferCase(name, given, bound, quantity, True, bool(bound <= quantity + tol)))

    a = min_rest if a is None else a
    add("i", a, a is not None and min_rest is not None and 1 - tol <= a <= min_rest + tol,
        max(0.0, a - 1) ** (1 / l) if a is not None else None, min_dist_rest,
        "needs 1 <= A <= min_{i != 0} |λ_i[l]|")
    b = min_rest if b is None else b
    add("ii", b, b is not None and min_rest is not None and min_rest - tol <= b <= 1 + tol,
        max(0.0, 1 - b) ** (1 / l) if b is not None else None, max_dist,
        "needs min_{i != 0} |λ_i[l]| <= B <= 1")
    c = max_all if c is None else c
    add("iii", c, 1 - tol <= c <= max_all + tol, max(0.0, c - 1) ** (1 / l), max_dist,
        "needs 1 <= C <= max_i |λ_i[l]|")
    d = max_all if d is None else d
    add("iv", d, max_all - tol <= d <= 1 + tol, max(0.0, 1 - d) ** (1 / l), float(dist.min()),
        "needs max_i |λ_i[l]| <= D <= 1")
    return out


def neighborhood_report(g: Graph, l: int) -> dict:
    gl = neighborhood_graph(g, l)
    err, allowed = identity_error(g, l, gl)
    s = spectrum(g)
    sl = spectrum(gl)
    return {
        "order": l,
        "identity_error": err,
        "identity_allowed": allowed,
        "identity_holds": err <= allowed,
        "degrees_preserved": degrees_preserved(g, gl),
        "spectral_map_error": match_multisets(mapped_spectrum(s, l), sl.eigenvalues),
        "m1": multiplicity(s, 1.0),
        "m1_order_l": multiplicity(sl, 1.0),
        "m1_invariance": m1_invariance(g, l),
        "spectrum_order_l": sl.to_dict(),
        "bound_transfer": [c.to_dict() for c in bound_transfer(s, l)],
    }
