import numpy as np
import pytest

from dgspec.eig import spectrum
from dgspec.generators import gen_dag, gen_er_signed, gen_strongly_connected, sample_partite
from dgspec.graph import (
    Graph, complete_graph, directed_cycle, directed_path, disjoint_union, from_edge_list,
    undirected_cycle,
)
from dgspec.laplacian import PreconditionError, radii
from dgspec.partite import classes, detect, satisfies_definition
from dgspec.structure import (
    Membership, anti_converse_applies, cyclic_vertex_lower_bound, cyclic_vertices,
    dag_spectrum_check, detect_anti_k_partite, detect_k_partite, is_dag, is_maximal,
    kpartite_guaranteed_eigs, kpartite_spectrum_shift_check, maximal_components, membership,
    search_bipartite_anti_bipartite_witness, spectral_anti_k_partite_test,
    spectral_k_partite_membership, spectral_k_partite_test, structure_report,
)

FIG2 = Graph(np.array([[0, -2, 0, 1], [-2, 0, 1, 0], [0, 1, 0, -2], [1, 0, -2, 0]], float))


def test_is_dag():
    assert is_dag(directed_path(3))
    assert not is_dag(directed_cycle(3))
    assert not is_dag(Graph(np.diag([1.0, 0.0])))


@pytest.mark.parametrize("seed", range(15))
def test_dag_spectrum(seed):
    assert dag_spectrum_check(gen_dag(9, 0.4, seed, neg_frac=0.3))


@pytest.mark.parametrize("seed", range(15))
def test_nonnegative_cycle_leaves_zero_one(seed):
    assert not dag_spectrum_check(gen_strongly_connected(6, 0.2, seed))


def test_signed_non_dag_can_look_acyclic():
    # vertex 1 receives +1 and -1, so Δ has a zero row and the 2-cycle is invisible
    g = from_edge_list([(0, 1, 1.0), (2, 1, -1.0), (1, 0, 1.0)], n=3)
    assert not is_dag(g)
    assert dag_spectrum_check(g)
    assert structure_report(g).spectral_consistent


def test_cyclic_vertex_bounds():
    assert cyclic_vertex_lower_bound(spectrum(directed_path(4))) == 0
    assert cyclic_vertex_lower_bound(spectrum(directed_cycle(3))) == 2
    assert len(cyclic_vertices(directed_cycle(3))) == 3
    assert cyclic_vertex_lower_bound(spectrum(complete_graph(3))) == 2
    for seed in range(10):
        g = gen_er_signed(7, 0.3, 0.3, seed)
        assert cyclic_vertex_lower_bound(spectrum(g)) <= len(cyclic_vertices(g))


def test_maximality():
    g = gen_strongly_connected(6, 0.3, 0)
    assert is_maximal(g) and maximal_components(g) == [0]
    h = from_edge_list([(1, 0, 1.0), (2, 0, -1.0), (3, 0, 1.0), (0, 1, 1.0)], n=4)
    assert not is_maximal(h)
    assert is_maximal(h, [0])


def test_k_partite_detection():
    labels = detect_k_partite(directed_cycle(5), 5)
    assert sorted(labels) == list(range(5))
    assert detect_k_partite(undirected_cycle(2), 2) is not None
    assert detect_k_partite(directed_cycle(3), 2) is None
    with pytest.raises(ValueError):
        detect(directed_cycle(3), 1)


def test_exhaustive_labels_agree_with_detection():
    import itertools
    g = directed_cycle(3)
    brute = any(satisfies_definition(g, list(lab), 2) for lab in itertools.product(range(2), repeat=3))
    assert brute is (detect_k_partite(g, 2) is not None)


def test_disconnected_nonnegative_is_anti_bipartite():
    g = disjoint_union(directed_cycle(3), directed_cycle(2))
    assert detect_anti_k_partite(g, 2) is not None
    assert detect_anti_k_partite(directed_cycle(4), 2) is None


def test_classes_helper():
    assert classes([1, 0, 1], [4, 5, 6], 2) == [[5], [4, 6]]


def test_spectral_cycle_test():
    for n in range(3, 9):
        assert spectral_k_partite_test(directed_cycle(n), n)
        expected = 1 - np.exp(2j * np.pi * np.arange(n) / n)
        got = np.array(kpartite_guaranteed_eigs(directed_cycle(n), n))
        assert np.allclose(np.sort_complex(got), np.sort_complex(expected))


def test_fig2_graph():
    s = spectrum(FIG2)
    assert np.allclose(np.sort(s.eigenvalues.real), [-2, 0, 2, 4], atol=1e-8)
    assert np.all(radii(FIG2).r_per_vertex == 3)
    assert spectral_k_partite_test(FIG2, 2) and spectral_anti_k_partite_test(FIG2, 2)
    assert detect_k_partite(FIG2, 2) is not None and detect_anti_k_partite(FIG2, 2) is not None
    assert any(abs(z - 4) < 1e-12 for z in kpartite_guaranteed_eigs(FIG2, 2))


def test_witness_search_reproduces_fig2_family():
    w = search_bipartite_anti_bipartite_witness()
    assert w is not None
    s = spectrum(w)
    assert np.allclose(np.sort(s.eigenvalues.real), [-2, 0, 2, 4], atol=1e-8)


def test_odd_anti_is_absent():
    assert not spectral_anti_k_partite_test(directed_cycle(3), 3)


def test_membership_tristate():
    s = spectrum(directed_cycle(4))
    assert membership(s, 2.0) is Membership.PRESENT
    assert membership(s, 2.0 + 5 * s.tol) is Membership.AMBIGUOUS
    assert membership(s, 3.0) is Membership.ABSENT


def test_structure_checks_refuse_loops():
    with pytest.raises(PreconditionError):
        spectral_k_partite_membership(Graph(np.eye(2)), 2)
    with pytest.raises(PreconditionError):
        structure_report(Graph(np.eye(2)))


def test_anti_converse_rule():
    assert anti_converse_applies(4, 1.0) and anti_converse_applies(16, 1.0)
    assert anti_converse_applies(6, 3.0) and not anti_converse_applies(6, 1.0)
    assert anti_converse_applies(3, 3.0) is False and not anti_converse_applies(8, 3.0)


@pytest.mark.parametrize("k,anti", [(2, False), (2, True), (4, False), (4, True), (3, False)])
@pytest.mark.parametrize("seed", range(8))
def test_shift_relation_and_guaranteed_eigs(k, anti, seed):
    radius = 1.0 if k % 2 else 3.0
    g, _ = sample_partite(2 * k + 1, k, seed, anti=anti, radius=radius, flip_rows=True)
    assert kpartite_spectrum_shift_check(g, k, anti)
    s = spectrum(g)
    for z in kpartite_guaranteed_eigs(g, k, anti):
        assert s.distance(z) <= 1e-8


def test_positive_bipartite_spectrum_is_symmetric():
    g, _ = sample_partite(6, 2, 3, strongly_connected=True)
    vals = spectrum(g).eigenvalues
    from dgspec.eig import match_multisets
    assert match_multisets(vals, 2 - vals) <= 1e-8


def test_shift_check_preconditions():
    with pytest.raises(PreconditionError):
        kpartite_spectrum_shift_check(directed_cycle(3), 2)


def test_report_on_dag_and_cycle():
    rep = structure_report(directed_path(4))
    assert rep.is_dag and rep.spectral_consistent
    rep = structure_report(directed_cycle(4), ks=[2, 4])
    found = {(f.k, f.anti, f.evidence) for f in rep.kpartite_findings}
    assert (4, False, "both") in found and (2, False, "both") in found
    assert rep.bipartite
    d = rep.to_dict()
    assert d["kpartite_findings"][0]["classes"] is not None
