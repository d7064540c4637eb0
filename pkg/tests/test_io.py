import io as stdio

import numpy as np
import pytest
from hypothesis import given

from conftest import networks
from netclust.errors import (
    NegativeSimilarity,
    NonZeroDiagonal,
    ParseError,
    ZeroColumnSum,
    ZeroSimilarity,
)
from netclust.ingest import IngestionSpec, ingest, similarity_to_network
from netclust.io import (
    dendrogram_from_json,
    dendrogram_to_json,
    family_to_text,
    network_to_csv,
    network_to_edge_list,
    parse_family,
    read_edge_list,
    read_family,
    read_matrix_rows,
    read_network_csv,
    to_newick,
)
from netclust.methods import reciprocal
from netclust.network import Network, dendrogram_from_ultrametric


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


@given(networks(max_n=6, integer=False))
def test_matrix_csv_round_trip(net):
    labels, grid = read_matrix_rows(stdio.StringIO(network_to_csv(net)))
    assert Network(tuple(labels), grid) == net


def test_matrix_header_without_corner(tmp_path):
    p = write(tmp_path, "m.csv", "a,b\na,0,1\nb,2,0\n")
    assert read_network_csv(p).dissim.tolist() == [[0, 1], [2, 0]]


@pytest.mark.parametrize(
    "text",
    [
        "",
        ",a,b\na,0,1\n",
        ",a,b\na,0,1\nc,2,0\n",
        ",a,b\na,0,x\nb,2,0\n",
        ",a,b\na,0,1,3\nb,2,0\n",
    ],
)
def test_matrix_parse_errors(tmp_path, text):
    with pytest.raises(ParseError):
        read_network_csv(write(tmp_path, "m.csv", text))


def test_matrix_still_validated(tmp_path):
    with pytest.raises(NonZeroDiagonal):
        read_network_csv(write(tmp_path, "m.csv", ",a,b\na,1,1\nb,2,0\n"))


def test_edge_list(tmp_path):
    net = Network(("a", "b", "c"), [[0, 1, 2], [3, 0, 4], [5, 6, 0]])
    p = write(tmp_path, "e.csv", "src,dst,weight\n" + network_to_edge_list(net))
    assert read_edge_list(p) == net
    with pytest.raises(ParseError):
        read_edge_list(write(tmp_path, "e2.csv", "a,b,1\n"))
    with pytest.raises(ParseError):
        read_edge_list(write(tmp_path, "e3.csv", "a,b,1\nb,a,1\na,b,2\n"))
    with pytest.raises(ParseError):
        read_edge_list(write(tmp_path, "e4.csv", "a,a,1\n"))


def test_dendrogram_json_round_trip():
    net = Network(("a", "b", "c"), [[0, 1, 4], [2, 0, 4], [4, 3, 0]])
    d = dendrogram_from_ultrametric(reciprocal(net))
    assert dendrogram_from_json(dendrogram_to_json(d)) == d
    with pytest.raises(ParseError):
        dendrogram_from_json("{")
    with pytest.raises(ParseError):
        dendrogram_from_json('{"labels": ["a"]}')


def test_newick():
    net = Network(("a", "b", "c"), [[0, 1, 4], [2, 0, 4], [4, 3, 0]])
    d = dendrogram_from_ultrametric(reciprocal(net))
    assert to_newick(d) == "(c:4,(a:2,b:2):2);"
    tie = Network(("a", "b", "c"), [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert to_newick(dendrogram_from_ultrametric(reciprocal(tie))) == "(a:1,b:1,c:1);"
    odd = Network(("a b", "c"), [[0, 1], [1, 0]])
    assert to_newick(dendrogram_from_ultrametric(reciprocal(odd))) == "('a b':1,c:1);"


def test_family_text(data_dir):
    fam = read_family(data_dir / "three_cycle.rep")
    assert fam.members[0].cycle_weights() == (1.0, 3.0)
    assert parse_family(family_to_text(fam)) == fam
    frac = parse_family("representer half 2\nedge 0 1 1/2\nedge 1 0 1\n")
    assert frac.sep == 0.5
    for bad in ("edge 0 1 1\n", "representer x\n", "representer x 2\nedge 0 1 z\n",
                "representer x 2\nfoo\n"):
        with pytest.raises(ParseError):
            parse_family(bad)
    with pytest.raises(ParseError):
        read_family(data_dir / "missing.rep")


# ------------------------------------------------------------ similarity tables

def test_two_sector_table():
    net = similarity_to_network(["s1", "s2"], [[np.nan, 10], [30, np.nan]])
    assert net.dissim.tolist() == [[0, 1], [1, 0]]


def test_three_sector_hand_values():
    u = [[np.nan, 2, 1], [5, np.nan, 3], [5, 2, np.nan]]
    net = similarity_to_network(["s1", "s2", "s3"], u)
    assert net.dissim[0, 2] == 4.0
    assert net.dissim[1, 2] == pytest.approx(4 / 3, rel=1e-15)
    assert net.dissim[1, 0] == 2.0


def test_diagonal_ignored_unless_self_use():
    plain = similarity_to_network(["a", "b"], [[99, 10], [30, 7]])
    assert plain.dissim.tolist() == [[0, 1], [1, 0]]
    own = similarity_to_network(["a", "b"], [[10, 10], [30, 10]], self_use=True)
    assert own.dissim.tolist() == [[0, 2], [4 / 3, 0]]


def test_similarity_errors():
    with pytest.raises(NegativeSimilarity):
        similarity_to_network(["a", "b"], [[0, -1], [1, 0]])
    with pytest.raises(ZeroColumnSum):
        similarity_to_network(["a", "b"], [[0, 0], [1, 0]])
    u = [[0, 1, 0], [1, 0, 1], [1, 1, 0]]
    with pytest.raises(ZeroSimilarity):
        similarity_to_network(["a", "b", "c"], u, zero_policy="error")
    net = similarity_to_network(["a", "b", "c"], u)
    assert net.dissim[0, 2] == 10 * 2.0


def test_ingest_formats(tmp_path, data_dir):
    net = ingest(IngestionSpec(str(data_dir / "bea_synthetic_10.csv"), "similarity-table"))
    assert net.n == 10
    p = write(tmp_path, "m.csv", network_to_csv(net))
    assert ingest(IngestionSpec(str(p), "matrix-csv")) == net
    with pytest.raises(ParseError):
        IngestionSpec("x", "xml")
    with pytest.raises(ParseError):
        ingest(IngestionSpec(str(tmp_path / "nope.csv")))
