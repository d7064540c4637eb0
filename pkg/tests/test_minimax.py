import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import net_from, networks
from oracles import bounded_chain_minimax, mst_single_linkage, simple_chain_minimax
from netclust.errors import InvalidHopBound, NotSymmetric
from netclust.minimax import (
    bounded_hop_minimax,
    directed_minimax,
    max_symmetrize,
    minmax_product,
    single_linkage,
)


def test_minmax_product_small():
    a = np.array([[0, 3], [1, 0]], dtype=float)
    b = np.array([[0, 2], [5, 0]], dtype=float)
    # out[0,1] = min(max(0,2), max(3,0)) = 2
    assert minmax_product(a, b).tolist() == [[0, 2], [1, 0]]


def test_directed_minimax_uses_cheap_detour():
    net = net_from([[0, 9, 1], [9, 0, 9], [9, 1, 0]])
    d = directed_minimax(net)
    assert d[0, 1] == 1.0
    assert d[1, 0] == 9.0


def test_bounded_hops_two_is_identity():
    net = net_from([[0, 9, 1], [9, 0, 9], [9, 1, 0]])
    assert np.array_equal(bounded_hop_minimax(net, 2), net.dissim)
    assert bounded_hop_minimax(net, 3)[0, 1] == 1.0


@pytest.mark.parametrize("t", [0, 1, 2.5, True])
def test_bounded_hops_rejects_bad_t(t):
    with pytest.raises(InvalidHopBound):
        bounded_hop_minimax(net_from([[0, 1], [1, 0]]), t)


def test_single_linkage_requires_symmetry():
    with pytest.raises(NotSymmetric):
        single_linkage(net_from([[0, 1], [2, 0]]))


@given(networks(max_n=6))
def test_directed_minimax_matches_simple_chains(net):
    assert np.array_equal(directed_minimax(net), simple_chain_minimax(net.dissim))


@given(networks(max_n=5), st.integers(2, 5))
def test_bounded_hops_match_chain_enumeration(net, t):
    assert np.array_equal(bounded_hop_minimax(net, t), bounded_chain_minimax(net.dissim, t))


@given(networks(max_n=6))
def test_bounded_hops_converge_to_closure(net):
    assert np.array_equal(bounded_hop_minimax(net, net.n), directed_minimax(net))


@given(networks(max_n=8, symmetric=True, integer=False))
def test_single_linkage_matches_mst_paths(net):
    assert np.array_equal(single_linkage(net).dissim, mst_single_linkage(net.dissim))


@given(networks(max_n=6), st.integers(2, 6))
def test_more_hops_never_cost_more(net, t):
    assert np.all(bounded_hop_minimax(net, t + 1) <= bounded_hop_minimax(net, t))
    assert np.all(max_symmetrize(net).dissim >= net.dissim)
