import pytest

from dgspec.graph import Graph
from dgspec.io import parse_edge_list
from dgspec.verify import SUITES, minimize, run_suite
from dgspec.generators import gen_er_signed


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes_briefly(name):
    result = run_suite(name, seed=1, trials=15)
    assert result.ok, result.to_dict()
    assert result.passed == 15


def test_deterministic():
    assert run_suite("basic", seed=3, trials=5).to_dict() == run_suite("basic", seed=3, trials=5).to_dict()


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")


def test_minimize_shrinks_to_a_single_edge():
    def at_most_one_edge(g: Graph):
        return g.num_edges <= 1, "too many edges"

    g = gen_er_signed(6, 0.6, 0.3, 0)
    small = minimize(g, at_most_one_edge)
    assert small.num_edges == 2


def test_failures_carry_reproducers(monkeypatch):
    from dgspec import verify

    suite = verify.SUITES["basic"]
    broken = verify.Suite("broken", suite.generate, lambda g: (g.num_edges == 0, "has edges"), "")
    monkeypatch.setitem(verify.SUITES, "broken", broken)
    result = run_suite("broken", seed=0, trials=3)
    assert not result.ok
    for f in result.failures:
        assert parse_edge_list(f.reproducer).num_edges == 1
