import numpy as np
import pytest

from dgspec.generators import (
    GenerationError, attach_tail, gen_anti_k_partite, gen_balanced, gen_dag, gen_er_signed,
    gen_k_partite, gen_regular, gen_strongly_connected, gen_undirected, is_strongly_connected,
    is_weakly_connected, sample_partite,
)
from dgspec.graph import is_balanced, is_isolated_subgraph
from dgspec.structure import detect_anti_k_partite, detect_k_partite, is_dag


@pytest.mark.parametrize("seed", range(10))
def test_dag_is_acyclic(seed):
    assert is_dag(gen_dag(5, 0.5, seed))


@pytest.mark.parametrize("seed", range(10))
def test_balanced_generator(seed):
    g = gen_balanced(6, 4, seed, neg_frac=0.4)
    assert is_balanced(g)
    h = gen_balanced(6, 4, seed, neg_frac=0.4, nonnegative_degrees=True)
    assert is_balanced(h) and np.all(h.d_in >= -h.zero_tol)


def test_same_seed_same_graph():
    assert gen_er_signed(8, 0.4, 0.3, 12) == gen_er_signed(8, 0.4, 0.3, 12)
    assert gen_er_signed(8, 0.4, 0.3, 12) != gen_er_signed(8, 0.4, 0.3, 13)


def test_er_loops_flag():
    assert not gen_er_signed(6, 0.9, 0.0, 1).has_loops
    assert gen_er_signed(6, 0.9, 0.0, 1, loops=True).has_loops


@pytest.mark.parametrize("seed", range(10))
def test_undirected_and_regular(seed):
    g = gen_undirected(7, 0.2, seed)
    assert g.is_symmetric and g.is_nonnegative and is_strongly_connected(g)
    r = gen_regular(8, 3, seed)
    assert r.is_symmetric and not r.has_loops
    assert np.all(r.d_in == 3)


def test_regular_parity_rejected():
    with pytest.raises((ValueError, GenerationError)):
        gen_regular(5, 3, 0)


@pytest.mark.parametrize("seed", range(10))
def test_strongly_connected(seed):
    g = gen_strongly_connected(7, 0.1, seed, neg_frac=0.3)
    assert is_strongly_connected(g)
    assert is_weakly_connected(g)


@pytest.mark.parametrize("seed", range(10))
def test_k_partite_generator_certified(seed):
    g = gen_k_partite(9, 3, seed)
    assert detect_k_partite(g, 3) is not None


@pytest.mark.parametrize("k", [2, 4, 6])
@pytest.mark.parametrize("seed", range(5))
def test_anti_k_partite_generator(k, seed):
    g, labels = sample_partite(2 * k, k, seed, anti=True, radius=3.0, flip_rows=True)
    assert detect_anti_k_partite(g, k) is not None
    assert sorted(set(labels)) == list(range(k))


def test_partite_argument_checks():
    with pytest.raises(ValueError):
        gen_anti_k_partite(6, 3, 0)
    with pytest.raises(ValueError):
        gen_k_partite(1, 1, 0)
    with pytest.raises(ValueError):
        gen_k_partite(3, 2, 0, radius=3.0)


def test_attach_tail_keeps_core_isolated():
    core = gen_strongly_connected(4, 0.3, 0)
    g = attach_tail(core, gen_er_signed(3, 0.5, 0.2, 1), 2, p=0.9)
    assert g.n == 7
    assert is_isolated_subgraph(g, range(4))
    assert np.any(g.weights[4:, :4] != 0)
