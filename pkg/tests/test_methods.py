import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import net_from, networks
from oracles import nonreciprocal_by_definition, reciprocal_by_definition
from netclust.errors import InvalidHopBound, InvalidMethodSpec
from netclust.methods import (
    NONRECIPROCAL,
    RECIPROCAL,
    MethodSpec,
    graft,
    grafting,
    nonreciprocal,
    parse_method,
    reciprocal,
    run_method,
    semi,
    semi_reciprocal,
)
from netclust.network import restrict


def cycle3(fwd, back):
    return net_from([[0, fwd, back], [back, 0, fwd], [fwd, back, 0]])


def test_two_node_merge_at_max():
    net = net_from([[0, 2], [5, 0]])
    for u in (reciprocal(net), nonreciprocal(net), semi_reciprocal(net, 3), grafting(net, 10)):
        assert u.dissim[0, 1] == 5.0


def test_cycle_network_separates_the_two_extremes():
    net = cycle3(1, 2)
    assert np.all(reciprocal(net).off_diagonal() == 2)
    assert np.all(nonreciprocal(net).off_diagonal() == 1)
    assert np.all(grafting(net, 3).off_diagonal() == 1)


def test_semi_reciprocal_needs_short_chains():
    net = net_from([[0, 1, 2, 2], [2, 0, 1, 2], [2, 2, 0, 1], [1, 2, 2, 0]])
    u = semi_reciprocal(net, 3)
    assert u.dissim[0, 2] == 1 and u.dissim[1, 3] == 1
    assert u.dissim[0, 1] == 2
    # pulling {x1, x3} out of the network loses the intermediate hops
    sub = restrict(net, ["x1", "x3"])
    assert semi_reciprocal(sub, 3).dissim[0, 1] == 2


@given(networks(max_n=6))
def test_reciprocal_and_nonreciprocal_match_definitions(net):
    assert np.array_equal(reciprocal(net).dissim, reciprocal_by_definition(net.dissim))
    assert np.array_equal(nonreciprocal(net).dissim, nonreciprocal_by_definition(net.dissim))


@given(networks(max_n=6))
def test_semi_reciprocal_interpolates(net):
    assert np.array_equal(semi_reciprocal(net, 2).dissim, reciprocal(net).dissim)
    big = semi_reciprocal(net, max(2, net.n)).dissim
    assert np.array_equal(big, nonreciprocal(net).dissim)


@given(networks(max_n=6), st.sampled_from([1.0, 2.5, 4.0, 100.0]))
def test_grafting_is_ultrametric_between_extremes(net, beta):
    u = grafting(net, beta).dissim
    assert np.all(nonreciprocal(net).dissim <= u)
    assert np.all(u <= reciprocal(net).dissim)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("reciprocal", RECIPROCAL),
        ("nonreciprocal", NONRECIPROCAL),
        ("semi:3", semi(3)),
        ("graft:2.5", graft(2.5)),
    ],
)
def test_parse_method_round_trips(text, expected):
    spec = parse_method(text)
    assert spec == expected
    assert str(spec) == text


@pytest.mark.parametrize("text", ["", "single", "semi", "semi:x", "graft:-1", "graft:inf",
                                  "representable:"])
def test_parse_method_rejects(text):
    with pytest.raises((InvalidMethodSpec, InvalidHopBound)):
        parse_method(text)


def test_semi_rejects_small_t():
    with pytest.raises(InvalidHopBound):
        parse_method("semi:1")
    with pytest.raises(InvalidHopBound):
        MethodSpec("semi_reciprocal", t=1)


def test_representable_spec_from_file(data_dir):
    spec = parse_method(f"representable:{data_dir / 'three_cycle.rep'}")
    assert spec.kind == "representable"
    assert not spec.division_free
    u = run_method(spec, cycle3(1, 2))
    # forward links of 1 fit the template at multiple 1, the back links
    # need 2/3 < 1, so every pair merges at 1
    assert np.all(u.off_diagonal() == 1)
