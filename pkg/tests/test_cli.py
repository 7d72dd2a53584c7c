import csv
import json
import subprocess
import sys

import pytest

from gpdgrid.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, RunConfig, UsageError, main
from gpdgrid.constructions import filtration_F
from gpdgrid.diagram import Diagram


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_F_writes_ten_simplices(tmp_path, capsys):
    path = tmp_path / "f3.json"
    code, _, _ = run(["generate", "--construction", "F", "--n", "3", "--out", str(path)], capsys)
    assert code == EXIT_OK
    obj = json.loads(path.read_text())
    assert len(obj["simplices"]) == 10


def test_generate_degree_cloud_csv(tmp_path, capsys):
    path = tmp_path / "cloud.csv"
    code, _, _ = run(["generate", "--construction", "degree-rips-cloud", "--n", "3",
                      "--out", str(path)], capsys)
    assert code == EXIT_OK
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 81  # header plus 80 points
    assert lines[0].startswith("x_num,x_den")


def test_generate_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(["generate", "--construction", "sublevel-rips", "--n", "2",
             "--preset", "paper-restricted", "--out", str(p)], capsys)
    assert a.read_bytes() == b.read_bytes()


def test_gri_and_gpd_outputs(tmp_path, capsys):
    code, out, _ = run(["gri", "--construction", "F", "--n", "2"], capsys)
    assert code == EXIT_OK
    rk = Diagram.from_json(json.loads(out))
    assert rk.support_size() > 0
    path = tmp_path / "gpd.json"
    code, out, _ = run(["gpd", "--construction", "F", "--n", "2", "--out", str(path)], capsys)
    assert code == EXIT_OK
    assert "gpd_support=10" in out
    obj = json.loads(path.read_text())
    assert obj["support"]["gpd"] == 10
    assert Diagram.from_json(obj["gri"]) == rk


def test_cover_method_matches_recursive(tmp_path, capsys):
    outs = {}
    for method in ("recursive", "cover"):
        path = tmp_path / f"{method}.json"
        code, _, _ = run(["gpd", "--construction", "F", "--n", "3", "--method", method,
                          "--threads", "2", "--out", str(path)], capsys)
        assert code == EXIT_OK
        outs[method] = json.loads(path.read_text())["gpd"]
    assert outs["recursive"] == outs["cover"]


def test_gpd_from_input_file_with_subgrid(tmp_path, capsys):
    src = tmp_path / "f.json"
    src.write_text(json.dumps(filtration_F(3).to_json()))
    code, out, _ = run(["gri", "--input", str(src), "--m", "0", "--rows", "1..3",
                        "--cols", "0..3"], capsys)
    assert code == EXIT_OK
    rk = Diagram.from_json(json.loads(out))
    assert rk.grid.shape == (3, 4)
    assert rk.support_size() > 0


def test_verify_pullback_passes(tmp_path, capsys):
    path = tmp_path / "v.json"
    code, _, _ = run(["verify", "--construction", "pullback", "--n", "2", "--d", "3",
                      "--out", str(path)], capsys)
    assert code == EXIT_OK
    assert json.loads(path.read_text())["passed"]


def test_verify_reports_failure_with_exit_one(tmp_path, capsys):
    path = tmp_path / "v.json"
    code, _, _ = run(["verify", "--construction", "F", "--n", "1", "--out", str(path)], capsys)
    assert code == EXIT_FAIL
    rep = json.loads(path.read_text())
    assert not rep["passed"] and rep["failed"] > 0


def test_bench_rows(tmp_path, capsys):
    path = tmp_path / "bench.csv"
    code, _, _ = run(["bench", "--n-min", "2", "--n-max", "4", "--out", str(path)], capsys)
    assert code == EXIT_OK
    rows = list(csv.DictReader(path.open()))
    assert [int(r["nonzero_terms"]) for r in rows] == [7, 15, 31]
    assert [r["support_size"] for r in rows] == ["10", "26", "57"]


def test_bench_cap_is_a_usage_error(capsys):
    code, _, err = run(["bench", "--n-max", "13"], capsys)
    assert code == EXIT_USAGE and "allow-large" in err


@pytest.mark.parametrize("args", [
    ["verify", "--construction", "F", "--n", "0"],
    ["gri", "--construction", "F", "--field", "4"],
    ["gri"],
    ["gri", "--construction", "F", "--rows", "0..9"],
    ["frobnicate"],
    ["gri", "--construction", "nope"],
])
def test_usage_errors(args, capsys):
    assert run(args, capsys)[0] == EXIT_USAGE


def test_missing_and_malformed_inputs(tmp_path, capsys):
    assert run(["gri", "--input", str(tmp_path / "absent.json")], capsys)[0] == EXIT_IO
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["gri", "--input", str(bad)], capsys)[0] == EXIT_IO
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"shape": [2, 2]}))
    assert run(["gri", "--input", str(wrong)], capsys)[0] == EXIT_IO


def test_config_validation():
    with pytest.raises(UsageError):
        RunConfig("bench", n_min=5, n_max=3).validate()
    RunConfig("bench", n_max=20, allow_large=True).validate()
    assert RunConfig("gri", construction="F").degree == 0
    assert RunConfig("gri", construction="degree-rips").degree == 1


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "gpdgrid.cli", "generate", "--construction",
                           "F", "--n", "2"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["simplices"]) == 6
