import numpy as np
import pytest
from hypothesis import given

from dgspec.components import frobenius_form
from dgspec.eig import match_multisets, qr_eigenvalues, spectrum
from dgspec.generators import gen_balanced, gen_er_signed, gen_regular, gen_strongly_connected
from dgspec.graph import (
    Graph, complete_graph, directed_path, from_edge_list, quasi_isolated_mask, reverse, underlying,
    undirected_cycle,
)
from dgspec.laplacian import (
    Kind, PreconditionError, build_delta, build_dirichlet, build_l_reduced, build_p,
    build_reduced, delta_matrix, radii, symmetric_part,
)

from conftest import signed_graphs


def test_single_edge_delta():
    np.testing.assert_array_equal(delta_matrix(directed_path(2)), [[0.0, 0.0], [-1.0, 1.0]])


def test_classical_normalized_laplacian():
    g = undirected_cycle(5, 2.0)
    d = g.d_in
    np.testing.assert_allclose(delta_matrix(g), np.eye(5) - g.weights / d[:, None])


@given(signed_graphs())
def test_constant_vector_in_kernel(g):
    assert np.allclose(delta_matrix(g) @ np.ones(g.n), 0.0, atol=1e-12)


@given(signed_graphs(loops=True))
def test_p_plus_delta_is_identity(g):
    np.testing.assert_allclose(build_p(g).matrix + build_delta(g).matrix, np.eye(g.n), atol=1e-15)


def test_transition_rows_sum_to_one():
    g = gen_strongly_connected(7, 0.3, 2)
    np.testing.assert_allclose(build_p(g).matrix.sum(axis=1), 1.0)


@pytest.mark.parametrize("n,k", [(6, 2), (7, 4), (8, 3)])
def test_p_is_reversed_walk_on_regular_graphs(n, k):
    # unit weights and equal degrees: both normalizations divide by k
    g = gen_regular(n, k, seed=n + k)
    rev = reverse(g).weights
    walk = rev.T / rev.sum(axis=0)[:, None]
    np.testing.assert_allclose(build_p(g).matrix, walk, atol=1e-15)


def test_reduced_laplacian():
    r = build_reduced(directed_path(3))
    assert r.domain == (1, 2) and r.kind is Kind.DELTA_REDUCED
    np.testing.assert_array_equal(r.matrix, [[1.0, 0.0], [-1.0, 1.0]])
    g = gen_strongly_connected(5, 0.2, 1)
    np.testing.assert_array_equal(build_reduced(g).matrix, delta_matrix(g))
    with pytest.raises(PreconditionError):
        build_reduced(Graph(np.zeros((2, 2))))


@given(signed_graphs())
def test_spectrum_splits_into_zeros_and_reduced(g):
    q = quasi_isolated_mask(g)
    if q.all():
        return
    reduced = qr_eigenvalues(build_reduced(g).matrix)
    expected = np.concatenate([np.zeros(int(q.sum())), reduced])
    assert match_multisets(spectrum(g).eigenvalues, expected) <= 1e-8


def test_dirichlet_restrictions():
    g = gen_er_signed(6, 0.4, 0.3, 5)
    vr = np.flatnonzero(~quasi_isolated_mask(g))
    np.testing.assert_array_equal(build_dirichlet(g, vr).matrix, build_reduced(g).matrix)
    np.testing.assert_array_equal(build_dirichlet(g, range(6)).matrix, delta_matrix(g))
    comp = frobenius_form(g).components[0]
    idx = np.ix_(sorted(comp), sorted(comp))
    np.testing.assert_array_equal(build_dirichlet(g, comp).matrix, delta_matrix(g)[idx])


def test_l_reduced_symmetric_and_similar():
    g = underlying(gen_er_signed(6, 0.5, 0.0, 3))
    m = build_l_reduced(g).matrix
    np.testing.assert_allclose(m, m.T, atol=1e-15)
    for seed in range(10):
        h = gen_strongly_connected(6, 0.3, seed)
        err = match_multisets(qr_eigenvalues(build_l_reduced(h).matrix),
                              qr_eigenvalues(build_reduced(h).matrix))
        assert err <= 1e-8


def test_symmetric_part_of_balanced_graph():
    for seed in range(10):
        g = gen_balanced(6, 3, seed, neg_frac=0.3, nonnegative_degrees=True)
        if quasi_isolated_mask(g).any():
            continue
        np.testing.assert_allclose(symmetric_part(build_l_reduced(g).matrix),
                                   build_l_reduced(underlying(g)).matrix, atol=1e-12)


def test_l_reduced_needs_positive_degrees():
    g = from_edge_list([(0, 1, -1.0), (1, 0, 1.0)])
    with pytest.raises(PreconditionError):
        build_l_reduced(g)


def test_radii():
    assert radii(complete_graph(4)).r == 1.0
    g = from_edge_list([(1, 0, 1.0), (2, 0, -1.0), (3, 0, 1.0)], n=4)
    rad = radii(g)
    assert rad.r_per_vertex[0] == 3.0 and rad.r == 3.0
    assert rad.r1 <= rad.r2 <= rad.r


@given(signed_graphs())
def test_eigenvalues_in_gershgorin_disk(g):
    s = spectrum(g)
    r = radii(g).r
    nz = s.nonzero()
    assert np.all(np.abs(nz - 1) <= r + s.tol)
