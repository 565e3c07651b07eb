import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dgspec.eig import spectrum
from dgspec.estimates import (
    BoundCheck, balanced_cheeger_check, check_majorization, cheeger, cheeger_bounds_check,
    dual_cheeger, estimate_report, gershgorin_sandwich_check, majorization_extremes,
    majorization_theorem_check, mutual_pairs, perron_residual, perron_vector,
    regular_trace_bound, tilde_comparison_check, tilde_graph, trace_bounds, trace_delta_squared,
)
from dgspec.generators import gen_balanced, gen_er_signed, gen_regular, gen_strongly_connected, gen_undirected
from dgspec.graph import (
    Graph, complete_graph, directed_cycle, directed_path, underlying, undirected_cycle,
)
from dgspec.laplacian import PreconditionError

from conftest import signed_graphs

FIG2 = Graph(np.array([[0, -2, 0, 1], [-2, 0, 1, 0], [0, 1, 0, -2], [1, 0, -2, 0]], float))
K2 = complete_graph(2)


def test_bound_check_verdicts():
    assert BoundCheck("x", 1.0, 2.0, "lower").verdict == "pass"
    assert BoundCheck("x", 1.0, 2.0, "upper").verdict == "fail"
    assert BoundCheck("x", 1.0, 1.0 + 5e-9, "upper").ok
    assert BoundCheck("x", None, 2.0, "lower").verdict == "vacuous"


def test_majorization_definition():
    assert check_majorization([1, 2, 3], [3, 2, 1]).holds
    assert check_majorization([0, 2], [1, 1]).holds
    assert not check_majorization([1, 1], [0, 2]).holds
    with pytest.raises(ValueError):
        check_majorization([1], [1, 2])


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=6), st.lists(st.integers(-5, 5), max_size=4))
def test_padding_preserves_majorization(x, pad):
    # increasing-order convention: the constant vector majorizes every vector
    y = [sum(x) / len(x)] * len(x)
    assert check_majorization(x, y).holds
    assert check_majorization(x + pad, y + pad).holds


def test_majorization_on_cycle():
    for n in range(2, 9):
        assert majorization_theorem_check(directed_cycle(n)).holds


def test_majorization_on_symmetric_graph():
    g = undirected_cycle(6)
    mc = majorization_theorem_check(g)
    # U(g) = 2g has the same Laplacian, so every prefix is tight
    assert mc.holds and abs(mc.min_slack) <= 1e-12


@pytest.mark.parametrize("seed", range(20))
def test_majorization_random_balanced(seed):
    g = gen_balanced(8, 4, seed, neg_frac=0.3, nonnegative_degrees=True)
    assert majorization_theorem_check(g).holds
    assert all(c.ok for c in majorization_extremes(g))


def test_majorization_preconditions():
    with pytest.raises(PreconditionError):
        majorization_theorem_check(directed_path(3))


def test_cheeger_values():
    assert cheeger(undirected_cycle(4))[0] == pytest.approx(0.5)
    assert cheeger(K2)[0] == pytest.approx(1.0)
    assert cheeger(complete_graph(4))[0] == pytest.approx(2 / 3)
    assert dual_cheeger(undirected_cycle(4))[0] == pytest.approx(1.0)
    assert dual_cheeger(K2)[0] == pytest.approx(1.0)
    h3 = dual_cheeger(complete_graph(3))[0]
    assert h3 == pytest.approx(2 / 3) and h3 < 1


def test_cheeger_requires_connected_undirected():
    with pytest.raises(PreconditionError):
        cheeger(directed_cycle(3))
    with pytest.raises(PreconditionError):
        cheeger(Graph(np.zeros((3, 3))))


def test_cheeger_tight_cases():
    rep = cheeger_bounds_check(undirected_cycle(4))
    checks = {c.name: c for c in rep.checks}
    assert checks["cheeger_upper"].slack == pytest.approx(0.0, abs=1e-12)
    assert checks["dual_cheeger_lower"].slack == pytest.approx(0.0, abs=1e-12)
    rep = cheeger_bounds_check(K2)
    assert rep.ok and rep.values["lambda_1"] == pytest.approx(2.0)


@pytest.mark.parametrize("seed", range(15))
def test_cheeger_bounds_random(seed):
    assert cheeger_bounds_check(gen_undirected(7, 0.3, seed)).ok


def test_balanced_directed_cheeger():
    for seed in range(10):
        g = gen_balanced(7, 4, seed)
        try:
            rep = balanced_cheeger_check(g)
        except PreconditionError:
            continue
        assert rep.ok


def test_perron_on_cycle_and_undirected():
    phi = perron_vector(directed_cycle(5))
    np.testing.assert_allclose(phi, 0.2, atol=1e-12)
    g = gen_undirected(6, 0.4, 1)
    phi = perron_vector(g)
    np.testing.assert_allclose(phi, g.d_in / g.d_in.sum(), atol=1e-10)
    assert perron_residual(g, phi) <= 1e-10


def test_tilde_graph():
    gt = tilde_graph(directed_cycle(5))
    assert gt.is_symmetric
    np.testing.assert_allclose(gt.weights, 0.2 * undirected_cycle(5).weights, atol=1e-12)
    g = gen_undirected(6, 0.4, 2)
    gt = tilde_graph(g)
    ratio = gt.weights[g.weights != 0] / g.weights[g.weights != 0]
    assert np.ptp(ratio) <= 1e-10


@pytest.mark.parametrize("seed", range(15))
def test_tilde_comparison(seed):
    g = gen_strongly_connected(8, 0.4, seed)
    rep = tilde_comparison_check(g)
    assert rep.ok
    assert rep.values["perron_residual"] <= 1e-10 and rep.values["degree_error"] <= 1e-10


def test_perron_preconditions():
    with pytest.raises(PreconditionError):
        perron_vector(directed_path(3))


def test_trace_of_k2():
    assert trace_delta_squared(K2) == pytest.approx(4.0)
    assert mutual_pairs(K2) == [(0, 1)]


@given(signed_graphs(max_n=8, loops=True))
def test_trace_identity(g):
    s = spectrum(g)
    assert abs(trace_delta_squared(g) - np.sum(s.eigenvalues ** 2)) <= 1e-8 * g.n


@given(signed_graphs(max_n=8))
def test_trace_sandwich(g):
    try:
        tb = trace_bounds(g)
    except PreconditionError:
        return
    assert all(c.ok for c in tb.checks)


def test_loopless_no_mutual_pairs():
    g = directed_cycle(5)
    tb = trace_bounds(g)
    s = spectrum(g)
    nz = s.nonzero()
    expected = math.sqrt((5 + np.sum(nz.imag ** 2)) / (5 - s.m0))
    assert tb.u_set == [] and tb.bound_re == pytest.approx(expected)


@pytest.mark.parametrize("n", range(2, 11))
def test_complete_graph_trace_bound_is_sharp(n):
    tb = trace_bounds(complete_graph(n))
    assert tb.bound_re == pytest.approx(n / (n - 1), abs=1e-12)
    assert regular_trace_bound(n, n - 1) == pytest.approx(n / (n - 1), abs=1e-15)


@pytest.mark.parametrize("n,k", [(8, 3), (10, 4), (9, 2), (12, 5)])
def test_regular_graph_trace_bound(n, k):
    g = gen_regular(n, k, n * k)
    assert trace_bounds(g).bound_re == pytest.approx(regular_trace_bound(n, k), abs=1e-10)


def test_gershgorin_sandwich_examples():
    for g in (directed_cycle(3), FIG2, directed_path(3)):
        assert all(c.ok for c in gershgorin_sandwich_check(g))
    names = {c.name: c for c in gershgorin_sandwich_check(FIG2)}
    assert names["disk_left"].quantity == pytest.approx(-2.0)
    assert names["mean_lower"].bound == pytest.approx(4 / 3)


@given(signed_graphs())
def test_gershgorin_sandwich_random(g):
    assert all(c.ok for c in gershgorin_sandwich_check(g))


def test_estimate_report_marks_skips():
    rep = estimate_report(gen_er_signed(6, 0.5, 0.3, 1))
    verdicts = {c.verdict for c in rep.checks}
    assert "fail" not in verdicts
    rep = estimate_report(underlying(directed_cycle(5)))
    names = [c.name for c in rep.checks]
    assert "cheeger_lower" in names and "majorization" in names and rep.ok
