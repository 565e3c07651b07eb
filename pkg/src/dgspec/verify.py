"""Randomized property suites with greedy reproducer minimization.

Each suite pairs a generator with a predicate on a single graph.  Trial
``t`` draws from ``default_rng([seed, t])``, so any failure replays alone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import estimates, generators as gen, neighborhood as nb, structure
from .charpoly import graph_oracle_roots
from .eig import assemble_from_blocks, conjugate_closed, eigvals, match_multisets, spectrum
from .graph import Graph, quasi_isolated_mask, scaled
from .io import format_edge_list
from .laplacian import PreconditionError, build_delta, radii

Check = Callable[[Graph], "tuple[bool, str]"]


@dataclass(frozen=True)
class Suite:
    name: str
    generate: Callable[[np.random.Generator], Graph]
    check: Check
    description: str


@dataclass
class Failure:
    trial: int
    detail: str
    reproducer: str

    def to_dict(self) -> dict:
        return {"trial": self.trial, "detail": self.detail, "reproducer": self.reproducer}


@dataclass
class VerifyResult:
    suite: str
    seed: int
    trials: int
    passed: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "trials": self.trials,
                "passed": self.passed, "failed": len(self.failures), "ok": self.ok,
                "failures": [f.to_dict() for f in self.failures]}


def _size(rng, lo=2, hi=12) -> int:
    return int(rng.integers(lo, hi + 1))


# -- predicates ----------------------------------------------------------------

def check_frobenius_union(g: Graph):
    err = match_multisets(assemble_from_blocks(g, with_residuals=False).eigenvalues,
                          eigvals(build_delta(g)).eigenvalues)
    return err <= 1e-8, f"block assembly vs full matrix error {err:.3e}"


def check_basic(g: Graph):
    s = spectrum(g)
    if not conjugate_closed(s.eigenvalues, s.tol):
        return False, "spectrum not closed under conjugation"
    n_r = int((~quasi_isolated_mask(g)).sum())
    total = complex(s.eigenvalues.sum())
    if abs(total - n_r) > 1e-8 * g.n:
        return False, f"eigenvalue sum {total} differs from |V_R| = {n_r}"
    rng = np.random.default_rng(g.n)
    factors = rng.choice([-3.0, -0.5, 0.5, 2.0, 3.0], size=g.n)
    rows = Graph(g.weights * factors[:, None])
    for name, other in (("row scaling", rows), ("global scaling", scaled(g, -2.5))):
        err = match_multisets(spectrum(other).eigenvalues, s.eigenvalues)
        if err > s.tol:
            return False, f"{name} changed the spectrum by {err:.3e}"
    r1 = radii(g).r1
    outside = np.abs(s.nonzero() - 1) > r1 + s.tol
    if np.any(outside):
        return False, f"eigenvalue outside D(1, r1) with r1 = {r1}"
    return True, ""


def check_trace_identity(g: Graph):
    s = spectrum(g)
    tr = estimates.trace_delta_squared(g)
    spec = complex(np.sum(s.eigenvalues ** 2))
    ok = abs(tr - spec) <= 1e-8 * g.n
    return ok, f"trace formula {tr} vs sum of squares {spec}"


def check_trace_bounds(g: Graph):
    try:
        tb = estimates.trace_bounds(g)
    except PreconditionError:
        return True, "vacuous"
    bad = [c.name for c in tb.checks if not c.ok]
    return not bad, f"failed: {bad}"


def check_gershgorin(g: Graph):
    bad = [c.name for c in estimates.gershgorin_sandwich_check(g) if not c.ok]
    return not bad, f"failed: {bad}"


def check_majorization(g: Graph):
    mc = estimates.majorization_theorem_check(g)
    extremes = estimates.majorization_extremes(g)
    bad = [c.name for c in extremes if not c.ok]
    return mc.holds and not bad, f"min prefix slack {mc.min_slack:.3e}; failed: {bad}"


def check_dag(g: Graph):
    if structure.is_dag(g):
        return structure.dag_spectrum_check(g), "DAG with spectrum outside {0,1}"
    if g.is_nonnegative and not g.has_loops:
        return not structure.dag_spectrum_check(g), "nonnegative non-DAG with spectrum inside {0,1}"
    return True, ""


def check_bipartite_forward(g: Graph):
    s = spectrum(g)
    r = radii(g).r
    return s.distance(1 + r) <= 1e-8, f"no eigenvalue at 1 + r = {1 + r}"


def check_cheeger(g: Graph):
    rep = estimates.cheeger_bounds_check(g)
    bad = [c.name for c in rep.checks if not c.ok]
    return not bad, f"failed: {bad}"


def check_perron(g: Graph):
    rep = estimates.tilde_comparison_check(g)
    bad = [c.name for c in rep.checks if not c.ok]
    res, deg = rep.values["perron_residual"], rep.values["degree_error"]
    ok = not bad and res <= 1e-10 and deg <= 1e-10
    return ok, f"residual {res:.3e}, degree error {deg:.3e}, failed: {bad}"


def check_neighborhood(g: Graph):
    for l in (2, 3, 4):
        gl = nb.neighborhood_graph(g, l)
        err, allowed = nb.identity_error(g, l, gl)
        if err > allowed:
            return False, f"l={l}: identity error {err:.3e} > {allowed:.3e}"
        if not nb.degrees_preserved(g, gl):
            return False, f"l={l}: in-degrees changed"
        if nb.m1_invariance(g, l) == "fails":
            return False, f"l={l}: m1 changed"
    return True, ""


def check_oracle(g: Graph):
    err = match_multisets(graph_oracle_roots(g), eigvals(build_delta(g)).eigenvalues)
    return err <= 1e-8, f"QR vs exact roots error {err:.3e}"


# -- generators ----------------------------------------------------------------

def _signed(rng):
    return gen.gen_er_signed(_size(rng), float(rng.uniform(0.15, 0.6)), 0.3, rng)


def _balanced(rng):
    return gen.gen_balanced(_size(rng), int(rng.integers(1, 6)), rng, neg_frac=0.3,
                            nonnegative_degrees=True)


def _dag_or_not(rng):
    n = _size(rng, 2, 15)
    if rng.random() < 0.5:
        return gen.gen_dag(n, float(rng.uniform(0.1, 0.7)), rng, neg_frac=0.3)
    return gen.gen_strongly_connected(n, float(rng.uniform(0.0, 0.4)), rng)


def _bipartite_host(rng):
    radius = float(rng.choice([1.0, 3.0]))
    core = gen.gen_k_partite(int(rng.integers(2 if radius == 1 else 4, 8)), 2, rng,
                             radius=radius, flip_rows=True, strongly_connected=True)
    rest = gen.gen_er_signed(int(rng.integers(1, 6)), 0.4, 0.0, rng)
    return gen.attach_tail(core, rest, rng)


def _undirected(rng):
    return gen.gen_undirected(_size(rng, 2, 10), float(rng.uniform(0.1, 0.6)), rng)


def _strong(rng):
    return gen.gen_strongly_connected(_size(rng, 2, 10), float(rng.uniform(0.1, 0.5)), rng)


def _no_quasi_isolated(rng):
    while True:
        g = _signed(rng)
        if not np.any(quasi_isolated_mask(g)):
            return g


def _small(rng):
    n = _size(rng, 1, 6)
    return gen.gen_er_signed(n, float(rng.uniform(0.1, 0.7)), float(rng.uniform(0.0, 0.5)), rng)


SUITES: dict[str, Suite] = {s.name: s for s in [
    Suite("frobenius-union", _signed, check_frobenius_union,
          "block assembly equals the full-matrix spectrum"),
    Suite("basic", _signed, check_basic,
          "conjugate pairs, eigenvalue sum, scaling invariance, Gershgorin disk"),
    Suite("trace-identity", _signed, check_trace_identity,
          "Tr(Δ_R^2) from weights equals the sum of squared eigenvalues"),
    Suite("trace-bounds", _signed, check_trace_bounds, "real and imaginary trace sandwiches"),
    Suite("gershgorin", _signed, check_gershgorin, "extremal real parts against 1 ± r"),
    Suite("majorization", _balanced, check_majorization,
          "underlying-graph eigenvalues are majorized by the real parts"),
    Suite("dag", _dag_or_not, check_dag, "DAG spectra sit in {0,1}; nonnegative cycles leave it"),
    Suite("bipartite", _bipartite_host, check_bipartite_forward,
          "an isolated maximal bipartite component puts 1 + r in the spectrum"),
    Suite("cheeger", _undirected, check_cheeger, "Cheeger and dual Cheeger eigenvalue bounds"),
    Suite("perron", _strong, check_perron, "Perron vector and the comparison graph"),
    Suite("neighborhood", _no_quasi_isolated, check_neighborhood,
          "Δ[l] = I - P^l, degree preservation, m1 invariance"),
    Suite("oracle", _small, check_oracle, "QR eigenvalues against exact characteristic roots"),
]}


def _fails(check: Check, g: Graph) -> bool:
    try:
        return not check(g)[0]
    except PreconditionError:
        return False


def minimize(g: Graph, check: Check) -> Graph:
    """Greedily drop edges (largest index first) while the check keeps failing."""
    current = g
    changed = True
    while changed:
        changed = False
        for src, dst, _ in sorted(current.edges(), reverse=True):
            w = current.weights.copy()
            w[dst, src] = 0.0
            candidate = Graph(w)
            if _fails(check, candidate):
                current = candidate
                changed = True
    return current


def run_suite(name: str, seed: int = 0, trials: int = 100, minimize_failures: bool = True) -> VerifyResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    suite = SUITES[name]
    result = VerifyResult(name, seed, trials)
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        g = suite.generate(rng)
        try:
            ok, detail = suite.check(g)
        except PreconditionError as exc:
            ok, detail = False, f"precondition: {exc}"
        if ok:
            result.passed += 1
            continue
        small = minimize(g, suite.check) if minimize_failures else g
        result.failures.append(Failure(t, detail, format_edge_list(small)))
    return result

