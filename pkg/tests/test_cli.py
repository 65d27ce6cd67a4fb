import io
import json
import os

import numpy as np
import pytest

from mwtrees.cli import main
from mwtrees.formats import dumps_graph, input_digest, load_graph
from mwtrees.gallery import path4_block2
from mwtrees.graphs import MatrixWeightedGraph, is_tree

from conftest import fixture_path

PATH4 = fixture_path("path4_block2.json")
CYCLE4 = fixture_path("cycle4_block2.json")
DIAMOND = fixture_path("diamond4.json")


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    return code, json.loads(out), err


def test_build_distance_matrix(capsys):
    code, report, _ = run_json(capsys, "build", PATH4, "--which", "D")
    assert code == 0
    assert report["schema"] == "mwtrees/report/v1"
    assert report["which"] == "D"
    assert report["shape"] == [8, 8]
    d = np.asarray(report["matrices"]["D"])
    assert d[0, 2] == 2.0 and d[6, 0] == 3.0
    with open(PATH4, "rb") as handle:
        assert report["input_digest"] == input_digest(handle.read())


def test_build_laplacian_modes_differ(capsys):
    code, inverted, _ = run_json(capsys, "build", PATH4, "--which", "L")
    assert code == 0 and inverted["mode"] == "inverted"
    code, raw, _ = run_json(capsys, "build", PATH4, "--which", "L",
                            "--mode", "raw")
    assert code == 0 and raw["mode"] == "raw"
    assert inverted["matrices"]["L"] != raw["matrices"]["L"]
    assert np.asarray(raw["matrices"]["L"])[0, 0] == 2.0


def test_build_incidence_needs_spd(capsys):
    code, out, err = run_cli(capsys, "build", PATH4, "--which", "Q")
    assert code == 3
    assert "NotSPD" in err


def test_build_works_on_all_fixtures(capsys):
    for path in (PATH4, CYCLE4, DIAMOND):
        code, report, _ = run_json(capsys, "build", path, "--which", "L")
        assert code == 0


def test_build_distance_rejects_non_tree(capsys):
    code, out, err = run_cli(capsys, "build", CYCLE4, "--which", "D")
    assert code == 3
    assert "NotATree" in err


def test_invert_fixture(capsys):
    code, report, _ = run_json(capsys, "invert", PATH4)
    assert code == 0
    check = report["checks"][0]
    assert check["name"] == "inverse_residual"
    assert check["status"] == "PASS"
    assert check["residual"] < 1e-10
    assert "matrices" not in report


def test_invert_emit_matrices(capsys):
    code, report, _ = run_json(capsys, "invert", PATH4, "--emit-matrices")
    assert code == 0
    d = np.asarray(report["matrices"]["D"])
    d_inv = np.asarray(report["matrices"]["D_inverse"])
    assert np.max(np.abs(d @ d_inv - np.eye(8))) < 1e-10


def test_invert_impossible_tolerance_fails(capsys):
    code, report, _ = run_json(capsys, "invert", PATH4, "--tolerance", "1e-20")
    assert code == 1
    assert report["checks"][0]["status"] == "FAIL"


def test_invert_singular_distance_matrix(capsys, tmp_path):
    g = MatrixWeightedGraph(3, 1, [(1, 2, [[1.0]]), (2, 3, [[-1.0]])])
    path = tmp_path / "singular.json"
    path.write_text(dumps_graph(g))
    code, out, err = run_cli(capsys, "invert", str(path))
    assert code == 4
    assert "not invertible" in err


def test_det_fixture(capsys):
    code, report, _ = run_json(capsys, "det", PATH4)
    assert code == 0
    assert report["sign"] == -1.0
    assert report["determinant"] == pytest.approx(-896.0, rel=1e-9)
    names = {c["name"]: c["status"] for c in report["checks"]}
    assert names == {"determinant_sign": "PASS", "determinant_logmag": "PASS"}


def test_det_singular_case(capsys, tmp_path):
    g = MatrixWeightedGraph(3, 1, [(1, 2, [[1.0]]), (2, 3, [[-1.0]])])
    path = tmp_path / "singular.json"
    path.write_text(dumps_graph(g))
    code, report, _ = run_json(capsys, "det", str(path))
    assert code == 0
    assert report["determinant"] == 0.0
    statuses = {c["name"]: c["status"] for c in report["checks"]}
    assert statuses["determinant_sign"] == "PASS"
    assert statuses["determinant_logmag"] == "SKIPPED"


def test_verify_all_fixtures_exit_zero(capsys):
    for path in (PATH4, CYCLE4, DIAMOND):
        code, report, _ = run_json(capsys, "verify", path)
        assert code == 0, path
        assert all(c["status"] != "FAIL" for c in report["checks"])


def test_verify_path4_skips_incidence_identity(capsys):
    code, report, _ = run_json(capsys, "verify", PATH4)
    by_name = {c["name"]: c for c in report["checks"]}
    assert by_name["qdq"]["status"] == "SKIPPED"
    assert by_name["ld"]["status"] == "PASS"
    assert by_name["rank_characterization"]["status"] == "PASS"


def test_verify_cycle_skips_identities_but_finds_witness(capsys):
    code, report, _ = run_json(capsys, "verify", CYCLE4)
    by_name = {c["name"]: c for c in report["checks"]}
    assert by_name["ld"]["status"] == "SKIPPED"
    assert by_name["rank_characterization"]["status"] == "PASS"
    assert "witness" in by_name["rank_characterization"]["detail"]


def test_verify_failing_tolerance_exits_one(capsys):
    code, report, _ = run_json(capsys, "verify", PATH4, "--suite", "identities",
                               "--tolerance", "1e-20")
    assert code == 1
    statuses = [c["status"] for c in report["checks"]]
    assert "FAIL" in statuses


def test_verify_emit_matrices(capsys):
    code, report, _ = run_json(capsys, "verify", PATH4, "--emit-matrices")
    assert code == 0
    assert set(report["matrices"]) == {"D", "L"}
    code, report, _ = run_json(capsys, "verify", DIAMOND, "--emit-matrices")
    assert code == 0
    assert set(report["matrices"]) == {"L"}


def test_verify_seed_changes_reports_deterministically(capsys):
    code1, rep1, _ = run_json(capsys, "verify", DIAMOND, "--suite", "ginverse")
    code2, rep2, _ = run_json(capsys, "verify", DIAMOND, "--suite", "ginverse")
    assert rep1["checks"] == rep2["checks"]
    code3, rep3, _ = run_json(capsys, "verify", DIAMOND, "--suite", "ginverse",
                              "--seed", "5")
    assert rep3["checks"][0]["residual"] != rep1["checks"][0]["residual"]


def test_stdin_input(capsys, monkeypatch):
    text = dumps_graph(path4_block2())
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    code, report, _ = run_json(capsys, "det", "-")
    assert code == 0
    assert report["input_digest"] == input_digest(text.encode())


def test_malformed_json_exits_two(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{broken")
    code, out, err = run_cli(capsys, "verify", str(path))
    assert code == 2
    assert "error" in err


def test_unknown_field_exits_two(capsys, tmp_path):
    obj = json.loads(dumps_graph(path4_block2()))
    obj["extra"] = 1
    path = tmp_path / "extra.json"
    path.write_text(json.dumps(obj))
    code, out, err = run_cli(capsys, "verify", str(path))
    assert code == 2
    assert "unknown" in err


def test_disconnected_graph_exits_two_with_problems(capsys, tmp_path):
    obj = {
        "n": 4,
        "s": 1,
        "edges": [
            {"u": 1, "v": 2, "weight": [[1.0]]},
            {"u": 3, "v": 4, "weight": [[1.0]]},
        ],
    }
    path = tmp_path / "disc.json"
    path.write_text(json.dumps(obj))
    code, out, err = run_cli(capsys, "verify", str(path))
    assert code == 2
    assert "NotConnected" in err


def test_missing_file_exits_two(capsys):
    code, out, err = run_cli(capsys, "det", "/nonexistent/graph.json")
    assert code == 2


def test_deficient_diamond(capsys):
    code, report, _ = run_json(capsys, "deficient", DIAMOND)
    assert code == 0
    assert report["endpoints"] == [1, 3]
    assert report["w"] == -1.0
    assert report["trees_with_edge"] == 4
    assert report["achieved_rank"] == 2
    assert report["checks"][0]["status"] == "PASS"


def test_deficient_on_tree_exits_three(capsys):
    code, out, err = run_cli(capsys, "deficient", PATH4)
    assert code == 3
    assert "IsATree" in err


def test_random_writes_loadable_instances(capsys, tmp_path):
    out_dir = str(tmp_path / "batch")
    code, out, err = run_cli(
        capsys, "random", "--n", "6", "--s", "2", "--count", "3",
        "--seed", "11", "--out", out_dir,
    )
    assert code == 0
    manifest = json.loads(out)
    assert manifest["count"] == 3
    assert [f["seed"] for f in manifest["files"]] == [11, 12, 13]
    for entry in manifest["files"]:
        g = load_graph(entry["path"])
        assert is_tree(g)
        assert g.n == 6 and g.s == 2
    # same seeds, same bytes
    second = str(tmp_path / "again")
    run_cli(capsys, "random", "--n", "6", "--s", "2", "--count", "3",
            "--seed", "11", "--out", second)
    for i in range(3):
        a = open(os.path.join(out_dir, f"graph-{i:04d}.json")).read()
        b = open(os.path.join(second, f"graph-{i:04d}.json")).read()
        assert a == b


def test_random_nontree_topology(capsys, tmp_path):
    out_dir = str(tmp_path / "nt")
    code, out, err = run_cli(
        capsys, "random", "--n", "5", "--s", "1", "--count", "2",
        "--topology", "nontree", "--kind", "scalar-positive", "--out", out_dir,
    )
    assert code == 0
    manifest = json.loads(out)
    for entry in manifest["files"]:
        assert not is_tree(load_graph(entry["path"]))


def test_text_format_output(capsys):
    code, out, err = run_cli(capsys, "verify", PATH4, "--format", "text")
    assert code == 0
    assert "PASS" in out and "SKIPPED" in out
    code, out, err = run_cli(capsys, "build", PATH4, "--which", "D",
                             "--format", "text")
    assert code == 0
    assert "D =" in out
