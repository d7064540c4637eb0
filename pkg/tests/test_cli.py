import json
import subprocess
import sys

import pytest

from netclust.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cluster_two_nodes(capsys, data_dir):
    code, out, _ = run(capsys, "cluster", "--method", "reciprocal", "--input", str(data_dir / "two.csv"))
    assert code == 0
    doc = json.loads(out)
    assert doc["merges"] == [{"resolution": 5.0, "partition": [["a", "b"]]}]


def test_cluster_semi_on_two_triangles(capsys, data_dir):
    code, out, _ = run(capsys, "cluster", "--method", "semi:3", "--input", str(data_dir / "two_triangles.csv"))
    assert code == 0
    first = json.loads(out)["merges"][0]
    assert first["resolution"] == 1.0
    assert ["x1", "x3"] in first["partition"]


def test_cluster_outputs(capsys, tmp_path, data_dir):
    ultra = tmp_path / "u.csv"
    nwk = tmp_path / "t.nwk"
    code, _, _ = run(capsys, "cluster", "--method", "nonreciprocal", "--input",
                     str(data_dir / "cycle3.csv"), "--out-format", "newick", "--output", str(nwk),
                     "--ultra-csv", str(ultra))
    assert code == 0
    assert nwk.read_text() == "(x1:1,x2:1,x3:1);\n"
    assert ultra.read_text().splitlines()[1] == "x1,0,1,1"


def test_cluster_representable_on_similarity(capsys, data_dir):
    code, out, _ = run(capsys, "cluster", "--method",
                       f"representable:{data_dir / 'three_cycle.rep'}",
                       "--input", str(data_dir / "bea_synthetic_10.csv"),
                       "--format", "similarity", "--out-format", "ultra-csv")
    assert code == 0
    assert len(out.splitlines()) == 11


@pytest.mark.parametrize(
    "prop, method, name, expected",
    [
        ("excisive", "semi:3", "two_triangles.csv", 1),
        ("excisive", "reciprocal", "two_triangles.csv", 0),
        ("scale", "graft:3", "cycle3.csv", 1),
        ("sandwich", "semi:3", "two_triangles.csv", 0),
        ("value", "nonreciprocal", "two_triangles.csv", 0),
        ("transform", "semi:3", "two_triangles.csv", 0),
    ],
)
def test_audit_exit_codes(capsys, data_dir, prop, method, name, expected):
    code, out, _ = run(capsys, "audit", prop, "--method", method, "--input", str(data_dir / name))
    assert code == expected
    doc = json.loads(out)
    assert doc["verdict"] == ("holds" if expected == 0 else "violated")
    assert ("witness" in doc) == bool(expected)


def test_audit_excisive_witness(capsys, data_dir):
    _, out, _ = run(capsys, "audit", "excisive", "--method", "semi:3", "--input",
                    str(data_dir / "two_triangles.csv"))
    assert json.loads(out)["witness"]["block"] == ["x1", "x3"]


def test_audit_transform_with_explicit_map(capsys, tmp_path, data_dir):
    target = tmp_path / "t.csv"
    target.write_text(",y\ny,0\n")
    code, out, _ = run(capsys, "audit", "transform", "--method", "reciprocal", "--input",
                       str(data_dir / "two.csv"), "--other", str(target), "--map", "a=y,b=y")
    assert code == 0


def test_distance_modes(capsys, data_dir):
    cycle3 = str(data_dir / "cycle3.csv")
    assert run(capsys, "distance", cycle3, cycle3, "--exact") == (0, "exact 0\n", "")
    code, out, _ = run(capsys, "distance", cycle3, str(data_dir / "two_triangles.csv"),
                       "--upper", "--trials", "50")
    assert code == 0 and out.startswith("upper ")


def test_distance_cap(capsys, data_dir):
    code, _, err = run(capsys, "distance", str(data_dir / "two_triangles.csv"),
                       str(data_dir / "two_triangles.csv"), "--exact", "--cap", "3")
    assert code == 4
    assert err.startswith("ERROR InstanceTooLarge:")


def test_ingest_check(capsys, tmp_path, data_dir):
    out_csv = tmp_path / "n.csv"
    code, out, _ = run(capsys, "ingest-check", "--input", str(data_dir / "bea_synthetic_10.csv"),
                       "--format", "similarity", "--output", str(out_csv))
    assert code == 0
    assert out.splitlines()[:2] == ["nodes 10", "symmetric no"]
    assert out_csv.exists()


@pytest.mark.parametrize(
    "argv, code, prefix",
    [
        (["cluster", "--input", "two.csv"], 2, "ERROR UsageError:"),
        (["cluster", "--method", "bogus", "--input", "two.csv"], 2, "ERROR InvalidMethodSpec:"),
        (["audit", "nope", "--method", "reciprocal"], 2, "ERROR UsageError:"),
        (["cluster", "--method", "semi:1", "--input", "two.csv"], 2, "ERROR InvalidHopBound:"),
        (["cluster", "--method", "reciprocal", "--input", "missing.csv"], 3, "ERROR ParseError:"),
        (["ingest-check", "--input", "bea_synthetic_10.csv", "--format", "similarity",
          "--zero-policy", "error"], 3, "ERROR ZeroSimilarity:"),
        (["cluster", "--method", "reciprocal", "--input", "bea_synthetic_10.csv"], 3,
         "ERROR ParseError:"),
        ([], 2, "ERROR UsageError:"),
    ],
)
def test_error_lines(capsys, monkeypatch, data_dir, argv, code, prefix):
    monkeypatch.chdir(data_dir)
    got, out, err = run(capsys, *argv)
    assert got == code
    assert out == ""
    assert err.startswith(prefix)
    assert err.count("\n") == 1


def test_module_entry_point_is_deterministic(data_dir):
    cmd = [sys.executable, "-m", "netclust", "audit", "transform", "--method", "semi:3",
           "--input", str(data_dir / "two_triangles.csv"), "--seed", "5", "--probes", "30"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    assert a.returncode == 0
    assert a.stdout == b.stdout and a.stdout
