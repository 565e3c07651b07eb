"""Eigenvalue estimates through comparison graphs and combinatorial constants."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .components import scc
from .eig import Spectrum, spectrum
from .graph import Graph, is_balanced, quasi_isolated_mask, underlying
from .laplacian import PreconditionError, radii

BOUND_TOL = 1e-8
CHEEGER_MAX_N = 22
DUAL_CHEEGER_MAX_N = 12
PERRON_TOL = 1e-12
PERRON_MAX_ITER = 100_000
TIE_RTOL = 1e-12


# -- bound bookkeeping -------------------------------------------------------

@dataclass
class BoundCheck:
    """One inequality ``bound <= quantity`` (lower) or ``quantity <= bound`` (upper)."""

    name: str
    bound: float | None
    quantity: float | None
    side: str
    verdict: str = ""
    slack: float | None = None
    note: str = ""

    def __post_init__(self):
        if self.verdict:
            return
        if self.bound is None or self.quantity is None:
            self.verdict = "vacuous"
            return
        self.slack = (self.quantity - self.bound) if self.side == "lower" else (self.bound - self.quantity)
        self.verdict = "pass" if self.slack >= -BOUND_TOL else "fail"

    @property
    def ok(self) -> bool:
        return self.verdict != "fail"

    def to_dict(self) -> dict:
        return {"name": self.name, "bound": self.bound, "quantity": self.quantity,
                "side": self.side, "slack": self.slack, "verdict": self.verdict,
                "note": self.note}


def skipped(name: str, reason: str) -> BoundCheck:
    return BoundCheck(name, None, None, "lower", verdict="skipped", note=reason)


@dataclass
class EstimateReport:
    checks: list[BoundCheck] = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "values": self.values, "checks": [c.to_dict() for c in self.checks]}


def _nonzero_real(s: Spectrum) -> np.ndarray:
    return s.nonzero().real


# -- majorization --------------------------------------------------------------

@dataclass
class MajorizationCheck:
    a: np.ndarray
    b: np.ndarray
    prefix_sums_ok: list[bool]
    totals_equal: bool
    holds: bool
    min_slack: float

    def to_dict(self) -> dict:
        return {"a": [float(x) for x in self.a], "b": [float(x) for x in self.b],
                "prefix_sums_ok": list(self.prefix_sums_ok), "totals_equal": self.totals_equal,
                "holds": self.holds, "min_slack": self.min_slack}


def check_majorization(a, b, tol: float = BOUND_TOL) -> MajorizationCheck:
    """Does ``b`` majorize ``a``?  Prefix sums in increasing order, equal totals."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    pa, pb = np.cumsum(a), np.cumsum(b)
    slack = pb - pa
    prefix = [bool(x >= -tol) for x in slack[:-1]]
    totals = bool(abs(slack[-1]) <= tol) if a.size else True
    min_slack = float(min(slack[:-1].min() if a.size > 1 else 0.0, -abs(slack[-1]) if a.size else 0.0))
    return MajorizationCheck(a, b, prefix, totals, all(prefix) and totals, min_slack)


def _require_balanced_nonneg_degrees(g: Graph) -> None:
    if not is_balanced(g):
        raise PreconditionError("graph is not balanced")
    if np.any(g.d_in < -g.zero_tol):
        raise PreconditionError("negative in-degree: the comparison with the underlying graph needs d_i >= 0")


def majorization_theorem_check(g: Graph, tol: float = BOUND_TOL) -> MajorizationCheck:
    """Eigenvalues of the underlying graph against the real parts of the spectrum."""
    _require_balanced_nonneg_degrees(g)
    u = spectrum(underlying(g))
    s = spectrum(g)
    return check_majorization(u.real, s.real, tol)


def _drop_nearest_zero(vals: np.ndarray) -> np.ndarray:
    """Remove the single entry standing for the constant-function eigenvalue."""
    return np.delete(vals, int(np.argmin(np.abs(vals))))


def majorization_extremes(g: Graph) -> list[BoundCheck]:
    """``min_{i!=0} λ_i(U) <= min_{i!=0} Re λ_i`` and ``max Re λ <= max λ(U)``.

    Index 0 is one eigenvalue nearest zero; other zeros stay in play.
    """
    _require_balanced_nonneg_degrees(g)
    u = spectrum(underlying(g)).eigenvalues.real
    re = spectrum(g).eigenvalues.real
    if g.n < 2:
        return [BoundCheck("underlying_min", None, None, "lower"),
                BoundCheck("underlying_max", float(u.max()), float(re.max()), "upper")]
    return [BoundCheck("underlying_min", float(_drop_nearest_zero(u).min()),
                       float(_drop_nearest_zero(re).min()), "lower"),
            BoundCheck("underlying_max", float(u.max()), float(re.max()), "upper")]


# -- Cheeger constants ---------------------------------------------------------

@dataclass
class CheegerResult:
    h: float | None
    h_dual: float | None
    witness_cut: list[int] | None
    witness_partition: tuple[list[int], list[int], list[int]] | None
    h_limited: bool = False
    h_dual_limited: bool = False

    def to_dict(self) -> dict:
        part = None if self.witness_partition is None else [list(p) for p in self.witness_partition]
        return {"h": self.h, "h_dual": self.h_dual, "witness_cut": self.witness_cut,
                "witness_partition": part, "h_limited": self.h_limited,
                "h_dual_limited": self.h_dual_limited}


def _require_undirected(g: Graph, limit: int, what: str) -> None:
    if not g.is_symmetric:
        raise PreconditionError(f"{what} needs an undirected (symmetric) graph")
    if not g.is_nonnegative:
        raise PreconditionError(f"{what} needs nonnegative weights")
    if g.n > limit:
        raise PreconditionError(f"{what} enumeration is limited to n <= {limit}, got {g.n}")
    if g.n < 2 or len(scc(g)) != 1:
        raise PreconditionError(f"{what} needs a connected graph with at least two vertices")


def _first_best(values: np.ndarray, best: float) -> int:
    return int(np.flatnonzero(np.abs(values - best) <= TIE_RTOL * max(1.0, abs(best)))[0])


def cheeger(g: Graph) -> tuple[float, list[int]]:
    """Exact ``h`` with the lexicographically smallest optimal ``W``."""
    _require_undirected(g, CHEEGER_MAX_N, "cheeger")
    n = g.n
    w = g.weights
    d = g.d_in
    # subsets containing vertex 0 suffice since the ratio is symmetric in W
    masks = (np.arange(1 << (n - 1), dtype=np.int64) << 1) | 1
    masks = masks[masks != (1 << n) - 1]
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    vol = bits @ d
    inner = np.zeros(masks.size)
    for i in range(n):
        for j in range(n):
            if w[i, j]:
                inner += w[i, j] * (bits[:, i] & bits[:, j])
    cut = vol - inner
    ratio = cut / np.minimum(vol, d.sum() - vol)
    best = float(ratio.min())
    hits = np.flatnonzero(np.abs(ratio - best) <= TIE_RTOL * max(1.0, best))
    candidates = []
    for k in hits:
        inside = [int(v) for v in np.flatnonzero(bits[k])]
        outside = [v for v in range(n) if v not in inside]
        candidates.append(min(inside, outside))
    return best, min(candidates)


def _assignments(n: int) -> np.ndarray:
    """All vectors in {0,1,2}^n in lexicographic order (0 = V1, 1 = V2, 2 = V3)."""
    return np.indices((3,) * n).reshape(n, -1).T


def dual_cheeger(g: Graph) -> tuple[float, tuple[list[int], list[int], list[int]]]:
    """Exact ``h_dual`` with the lexicographically first optimal labelling."""
    _require_undirected(g, DUAL_CHEEGER_MAX_N, "dual_cheeger")
    lab = _assignments(g.n)
    x1 = (lab == 0).astype(float)
    x2 = (lab == 1).astype(float)
    keep = (x1.sum(axis=1) > 0) & (x2.sum(axis=1) > 0)
    lab, x1, x2 = lab[keep], x1[keep], x2[keep]
    between = np.einsum("ki,ij,kj->k", x1, g.weights, x2)
    vols = (x1 + x2) @ g.d_in
    value = 2.0 * between / vols
    best = float(value.max())
    k = _first_best(value, best)
    parts = tuple([int(v) for v in np.flatnonzero(lab[k] == c)] for c in range(3))
    return best, parts


def cheeger_constants(g: Graph) -> CheegerResult:
    h, cut = cheeger(g)
    if g.n <= DUAL_CHEEGER_MAX_N:
        hd, part = dual_cheeger(g)
        return CheegerResult(h, hd, cut, part)
    return CheegerResult(h, None, cut, None, h_dual_limited=True)


def cheeger_lower(h: float) -> float:
    return 1.0 - math.sqrt(max(0.0, 1.0 - h * h))


def dual_cheeger_upper(hd: float) -> float:
    return 1.0 + math.sqrt(max(0.0, 1.0 - (1.0 - hd) ** 2))


def cheeger_bounds_check(g: Graph) -> EstimateReport:
    """The four Cheeger inequalities for an undirected connected graph."""
    res = cheeger_constants(g)
    s = spectrum(g)
    nz = _nonzero_real(s)
    lam1 = float(nz.min()) if nz.size else None
    lam_top = float(s.real.max())
    rep = EstimateReport(values={"h": res.h, "h_dual": res.h_dual, "lambda_1": lam1,
                                 "lambda_max": lam_top, "cheeger": res.to_dict()})
    rep.checks.append(BoundCheck("cheeger_lower", cheeger_lower(res.h), lam1, "lower"))
    rep.checks.append(BoundCheck("cheeger_upper", 2.0 * res.h, lam1, "upper"))
    if res.h_dual is None:
        rep.checks.append(skipped("dual_cheeger_lower", "n above the dual Cheeger limit"))
        rep.checks.append(skipped("dual_cheeger_upper", "n above the dual Cheeger limit"))
    else:
        rep.checks.append(BoundCheck("dual_cheeger_lower", 2.0 * res.h_dual, lam_top, "lower"))
        rep.checks.append(BoundCheck("dual_cheeger_upper", dual_cheeger_upper(res.h_dual), lam_top, "upper"))
    return rep


def _directed_cheeger_checks(prefix: str, comparison: Graph, s: Spectrum) -> list[BoundCheck]:
    re = _nonzero_real(s)
    out = []
    if comparison.n > CHEEGER_MAX_N:
        return [skipped(f"{prefix}_cheeger_lower", "n above the Cheeger limit")]
    h, _ = cheeger(comparison)
    out.append(BoundCheck(f"{prefix}_cheeger_lower", cheeger_lower(h),
                          float(re.min()) if re.size else None, "lower"))
    if comparison.n > DUAL_CHEEGER_MAX_N:
        out.append(skipped(f"{prefix}_dual_cheeger_upper", "n above the dual Cheeger limit"))
    else:
        hd, _ = dual_cheeger(comparison)
        out.append(BoundCheck(f"{prefix}_dual_cheeger_upper", dual_cheeger_upper(hd),
                              float(s.real.max()), "upper"))
    return out


def balanced_cheeger_check(g: Graph) -> EstimateReport:
    """Cheeger bounds on the real parts through the underlying graph (balanced, nonnegative)."""
    if not g.is_nonnegative:
        raise PreconditionError("needs nonnegative weights")
    _require_balanced_nonneg_degrees(g)
    u = underlying(g)
    rep = EstimateReport()
    rep.checks = _directed_cheeger_checks("underlying", u, spectrum(g))
    return rep


# -- Perron vector and the comparison graph -----------------------------------

def _require_perron(g: Graph) -> None:
    if not g.is_nonnegative:
        raise PreconditionError("Perron vector needs nonnegative weights")
    if np.any(g.d_in <= 0):
        raise PreconditionError("Perron vector needs positive in-degrees")
    if len(scc(g)) != 1:
        raise PreconditionError("Perron vector needs a strongly connected graph")


def transition_matrix(g: Graph) -> np.ndarray:
    return g.weights / g.d_in[:, None]


def perron_vector(g: Graph, tol: float = PERRON_TOL, max_iter: int = PERRON_MAX_ITER) -> np.ndarray:
    """Positive fixed point of the adjoint of ``P = D^{-1} W`` with unit sum.

    Iterates the lazy map ``phi -> (phi + P^T phi) / 2``, which has the same
    fixed points but no other eigenvalue on the unit circle, so it also
    converges when ``P`` is periodic (cycles, bipartite graphs).
    """
    _require_perron(g)
    pt = transition_matrix(g).T
    phi = np.full(g.n, 1.0 / g.n)
    for _ in range(max_iter):
        nxt = 0.5 * (phi + pt @ phi)
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - phi)) <= tol:
            return nxt
        phi = nxt
    raise PreconditionError(f"power iteration did not converge in {max_iter} steps")


def perron_residual(g: Graph, phi: np.ndarray) -> float:
    return float(np.max(np.abs(transition_matrix(g).T @ phi - phi)))


def tilde_graph(g: Graph, phi: np.ndarray | None = None) -> Graph:
    """Undirected comparison graph with weights ``P_ij phi_i + P_ji phi_j``."""
    phi = perron_vector(g) if phi is None else phi
    flow = phi[:, None] * transition_matrix(g)
    return Graph(flow + flow.T)


def tilde_comparison_check(g: Graph) -> EstimateReport:
    phi = perron_vector(g)
    gt = tilde_graph(g, phi)
    st = spectrum(gt)
    s = spectrum(g)
    re = _nonzero_real(s)
    nzt = _nonzero_real(st)
    rep = EstimateReport(values={
        "perron_residual": perron_residual(g, phi),
        "degree_error": float(np.max(np.abs(gt.d_in - 2.0 * phi))),
    })
    rep.checks.append(BoundCheck("tilde_min", float(nzt.min()) if nzt.size else None,
                                 float(re.min()) if re.size else None, "lower"))
    rep.checks.append(BoundCheck("tilde_max", float(st.real.max()), float(s.real.max()), "upper"))
    rep.checks.extend(_directed_cheeger_checks("tilde", gt, s))
    return rep


# -- trace bounds --------------------------------------------------------------

@dataclass
class TraceBounds:
    bound_re: float
    bound_im: float
    u_set: list[tuple[int, int]]
    trace_delta_sq: float
    trace_from_spectrum: float
    checks: list[BoundCheck]

    def to_dict(self) -> dict:
        return {"bound_re": self.bound_re, "bound_im": self.bound_im,
                "u_set": [list(p) for p in self.u_set], "trace_delta_sq": self.trace_delta_sq,
                "trace_from_spectrum": self.trace_from_spectrum,
                "checks": [c.to_dict() for c in self.checks]}


def mutual_pairs(g: Graph) -> list[tuple[int, int]]:
    """Pairs ``i < j`` joined both ways, both endpoints not quasi-isolated."""
    q = quasi_isolated_mask(g)
    w = g.weights
    both = (w != 0) & (w.T != 0)
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(both, 1))) if not q[i] and not q[j]]


def trace_delta_squared(g: Graph) -> float:
    """``Tr(Δ_R^2)`` from the weights alone."""
    q = quasi_isolated_mask(g)
    d = g.d_in
    vr = np.flatnonzero(~q)
    loops = np.diag(g.weights)[vr] / d[vr]
    total = vr.size - 2.0 * loops.sum() + (loops ** 2).sum()
    for i, j in mutual_pairs(g):
        total += 2.0 * g.weights[i, j] * g.weights[j, i] / (d[i] * d[j])
    return float(total)


def trace_bounds(g: Graph, s: Spectrum | None = None) -> TraceBounds:
    s = spectrum(g) if s is None else s
    nz = s.nonzero()
    count = nz.size
    if count == 0:
        raise PreconditionError("every eigenvalue is zero (n = m0)")
    tr = trace_delta_squared(g)
    sum_im2 = float(np.sum(nz.imag ** 2))
    sum_re2 = float(np.sum(nz.real ** 2))
    bound_re = math.sqrt(max(0.0, (tr + sum_im2) / count))
    bound_im = math.sqrt(max(0.0, (sum_re2 - tr) / count))
    # compared as squares: the square root would blow rounding in a zero
    # radicand (all eigenvalues real) up to about sqrt(eps)
    re2, im2 = nz.real ** 2, nz.imag ** 2
    mean_re2, mean_im2 = (tr + sum_im2) / count, (sum_re2 - tr) / count
    checks = [
        BoundCheck("trace_re_lower", mean_re2, float(re2.min()), "upper", note="squared"),
        BoundCheck("trace_re_upper", mean_re2, float(re2.max()), "lower", note="squared"),
        BoundCheck("trace_im_lower", mean_im2, float(im2.min()), "upper", note="squared"),
        BoundCheck("trace_im_upper", mean_im2, float(im2.max()), "lower", note="squared"),
    ]
    return TraceBounds(bound_re, bound_im, mutual_pairs(g), tr,
                       float(np.sum(s.eigenvalues ** 2).real), checks)


def regular_trace_bound(n: int, k: int) -> float:
    """Value of the real-part trace bound for an unweighted k-regular graph."""
    return math.sqrt(n * (k + 1) / ((n - 1) * k))


def gershgorin_sandwich_check(g: Graph, s: Spectrum | None = None) -> list[BoundCheck]:
    """``1-r <= min Re <= |V_R|/(n-m0) <= max Re <= 1+r`` and ``1 <= max Re``."""
    s = spectrum(g) if s is None else s
    re = _nonzero_real(s)
    names = ["disk_left", "mean_lower", "mean_upper", "disk_right", "max_at_least_one"]
    if re.size == 0:
        return [BoundCheck(x, None, None, "lower") for x in names]
    r = radii(g).r
    n_r = int((~quasi_isolated_mask(g)).sum())
    mean = n_r / re.size
    lo, hi = float(re.min()), float(re.max())
    return [
        BoundCheck("disk_left", 1.0 - r, lo, "lower"),
        BoundCheck("mean_lower", mean, lo, "upper"),
        BoundCheck("mean_upper", mean, hi, "lower"),
        BoundCheck("disk_right", 1.0 + r, hi, "upper"),
        BoundCheck("max_at_least_one", 1.0, hi, "lower"),
    ]


def estimate_report(g: Graph) -> EstimateReport:
    """Every estimate whose preconditions ``g`` meets; the rest are marked skipped."""
    s = spectrum(g)
    rep = EstimateReport(values={"radius": radii(g).r, "m0": s.m0, "n": g.n})
    rep.checks.extend(gershgorin_sandwich_check(g, s))
    try:
        tb = trace_bounds(g, s)
        rep.values["trace"] = {k: v for k, v in tb.to_dict().items() if k != "checks"}
        rep.checks.extend(tb.checks)
    except PreconditionError as exc:
        rep.checks.append(skipped("trace_bounds", str(exc)))
    try:
        mc = majorization_theorem_check(g)
        rep.values["majorization"] = mc.to_dict()
        rep.checks.append(BoundCheck("majorization", 0.0, mc.min_slack, "lower"))
        rep.checks.extend(majorization_extremes(g))
    except PreconditionError as exc:
        rep.checks.append(skipped("majorization", str(exc)))
    if g.is_symmetric and g.is_nonnegative:
        try:
            sub = cheeger_bounds_check(g)
            rep.values["cheeger"] = sub.values
            rep.checks.extend(sub.checks)
        except PreconditionError as exc:
            rep.checks.append(skipped("cheeger", str(exc)))
    elif g.is_nonnegative:
        try:
            rep.checks.extend(balanced_cheeger_check(g).checks)
        except PreconditionError as exc:
            rep.checks.append(skipped("underlying_cheeger", str(exc)))
    try:
        sub = tilde_comparison_check(g)
        rep.values["tilde"] = sub.values
        rep.checks.extend(sub.checks)
    except PreconditionError as exc:
        rep.checks.append(skipped("tilde_comparison", str(exc)))
    return rep
