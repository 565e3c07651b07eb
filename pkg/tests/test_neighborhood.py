import numpy as np
import pytest
from hypothesis import given

from dgspec.eig import match_multisets, spectrum
from dgspec.generators import gen_balanced, gen_er_signed
from dgspec.graph import directed_cycle, directed_path, from_edge_list, is_balanced, quasi_isolated_mask, underlying
from dgspec.laplacian import PreconditionError
from dgspec.neighborhood import (
    bound_transfer, degrees_preserved, identity_error, m1_invariance, mapped_spectrum,
    neighborhood, neighborhood_graph, neighborhood_report, spectral_map_error,
)

from conftest import signed_graphs


def test_four_cycle_square_is_two_two_cycles():
    g2 = neighborhood_graph(directed_cycle(4), 2)
    assert sorted(g2.edges()) == [(0, 2, 1.0), (1, 3, 1.0), (2, 0, 1.0), (3, 1, 1.0)]
    assert match_multisets(spectrum(g2).eigenvalues, [0, 0, 2, 2]) <= 1e-12


def test_k2_square_spectrum():
    g2 = neighborhood_graph(underlying(directed_path(2)), 2)
    assert match_multisets(spectrum(g2).eigenvalues, [0, 0]) <= 1e-12


def test_preconditions():
    with pytest.raises(PreconditionError):
        neighborhood_graph(directed_path(3), 2)
    with pytest.raises(PreconditionError):
        neighborhood_graph(directed_cycle(3), 1)
    assert neighborhood(directed_cycle(3), 3).order == 3


@given(signed_graphs(min_n=2, max_n=7, loops=True))
def test_identity_and_degrees(g):
    if quasi_isolated_mask(g).any():
        return
    for l in (2, 3, 4):
        gl = neighborhood_graph(g, l)
        err, allowed = identity_error(g, l, gl)
        assert err <= allowed
        assert degrees_preserved(g, gl)
        assert m1_invariance(g, l) != "fails"


def test_balanced_out_degrees_preserved():
    for seed in range(10):
        g = gen_balanced(6, 4, seed)
        if quasi_isolated_mask(g).any():
            continue
        gl = neighborhood_graph(g, 3)
        assert is_balanced(g)
        np.testing.assert_allclose(gl.d_out, g.d_out, atol=1e-10)


def test_mapped_spectrum_matches():
    g = directed_cycle(6)
    assert spectral_map_error(g, 3) <= 1e-10
    np.testing.assert_allclose(np.sort(mapped_spectrum(spectrum(directed_cycle(4)), 2).real),
                               [0, 0, 2, 2], atol=1e-12)


def test_m1_invariance_examples():
    g = from_edge_list([(0, 1, 1), (1, 0, 1), (1, 2, 1), (2, 1, 1), (0, 2, 1), (2, 0, 1)])
    assert m1_invariance(g, 2) == "holds"


def test_bound_transfer_four_cycle():
    cases = {c.case: c for c in bound_transfer(spectrum(directed_cycle(4)), 2)}
    iii = cases["iii"]
    assert iii.applies and iii.given == pytest.approx(2.0)
    assert iii.bound == pytest.approx(1.0) and iii.holds


def test_bound_transfer_degenerate_values():
    s = spectrum(directed_cycle(3))
    cases = {c.case: c for c in bound_transfer(s, 2, a=1.0, d=1.0)}
    assert cases["i"].applies and cases["i"].bound == 0.0 and cases["i"].holds
    # max |λ[2]| = sqrt(3) > 1, so D = 1 violates the side condition
    assert not cases["iv"].applies and cases["iv"].holds is None
    c4 = {c.case: c for c in bound_transfer(spectrum(directed_cycle(4)), 2, b=1.0)}
    assert c4["ii"].applies and c4["ii"].bound == 0.0


@pytest.mark.parametrize("seed", range(20))
def test_bound_transfer_never_fails(seed):
    g = gen_er_signed(7, 0.5, 0.3, seed)
    if quasi_isolated_mask(g).any():
        return
    for l in (2, 3):
        assert all(c.holds is not False for c in bound_transfer(spectrum(g), l))


def test_report_fields():
    rep = neighborhood_report(directed_cycle(4), 2)
    assert rep["identity_holds"] and rep["degrees_preserved"]
    assert rep["m1"] == rep["m1_order_l"] == 0
    assert len(rep["bound_transfer"]) == 4
