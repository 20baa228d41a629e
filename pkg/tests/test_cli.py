import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from onetrough import __version__
from onetrough.cli import run
from onetrough.export import read_profile_csv

GOLDEN = Path(__file__).parent / "golden"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_count_json():
    code, out, _ = call("count", "--c", "0.61005", "--p", "0.00065", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["count"] == 5
    assert doc["result"]["levels"] == [2, 3, 4, 5, 6]
    assert doc["version"] == __version__
    assert doc["config"]["c"] == 0.61005 and doc["config"]["subcommand"] == "count"


def test_count_via_xi():
    xi = 0.00065 * 0.61005 ** 4 / 4
    code, out, _ = call("count", "--c", "0.61005", "--xi", repr(xi))
    assert code == 0
    assert json.loads(out)["result"]["count"] == 5


def test_invalid_c_exit_2():
    code, out, err = call("count", "--c", "2.0", "--p", "0.5")
    assert code == 2 and out == ""
    rec = json.loads(err)
    assert rec["code"] == 2 and "--c" in rec["message"]
    assert set(rec) == {"code", "message", "context"}


@pytest.mark.parametrize(
    "argv",
    [
        ("count", "--c", "0.5"),
        ("count", "--c", "0.5", "--p", "0.5", "--xi", "0.001"),
        ("count", "--c", "0.5", "--p", "1.5"),
        ("wave", "--c", "0.5", "--p", "0.01", "--k", "0"),
        ("frobnicate",),
        ("count", "--c", "abc", "--p", "0.1"),
        ("scan", "--c-step", "-1"),
    ],
)
def test_usage_errors_exit_2(argv):
    code, _, err = call(*argv)
    assert code == 2
    assert json.loads(err)["code"] == 2


def test_missing_level_exit_3():
    code, _, err = call("wave", "--c", "0.99", "--p", "0.4", "--k", "2")
    assert code == 3
    assert json.loads(err)["context"]["subcommand"] == "wave"


def test_numerical_failure_exit_4(monkeypatch):
    from onetrough import cli
    from onetrough.errors import NumericalError

    def boom(c, tol=1e-12):
        raise NumericalError("no bracket")

    monkeypatch.setattr(cli, "theta_min", boom)
    code, _, err = call("theta-min", "--c", "0.5")
    assert code == 4 and json.loads(err)["message"] == "no bracket"


def test_wave_csv_verifies(tmp_path):
    target = tmp_path / "w.csv"
    code, _, _ = call("wave", "--c", "0.61005", "--p", "0.00065", "--k", "4", "--format", "csv", "-o", str(target))
    assert code == 0
    meta, rows = read_profile_csv(target.read_text())
    assert meta["verified"] == "true" and meta["k"] == "4"
    assert rows.shape == (1001, 3)


def test_verify_subcommand():
    code, out, _ = call("verify", "--c", "0.61005", "--p", "0.00065")
    assert code == 0
    reps = json.loads(out)["result"]["reports"]
    assert [r["k"] for r in reps] == [2, 3, 4, 5, 6]
    assert all(r["passed"] for r in reps)


def test_verify_failure_exit_4():
    # a tolerance below the achieved residuals makes verification fail
    code, _, err = call("verify", "--c", "0.61005", "--p", "0.00065", "--tol", "1e-15")
    assert code == 4 and "verification" in json.loads(err)["message"]


def test_theta_min_with_oracle():
    code, out, _ = call("theta-min", "--c", "0.8", "--oracle")
    res = json.loads(out)["result"]
    assert code == 0
    assert abs(res["theta_min"] - res["oracle_theta_min"]) < 1e-8


def test_eval_l_points():
    code, out, _ = call("eval-l", "--c", "0.61005", "--p", "0.00065", "--theta", "-10", "--theta", "-20", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "theta,L" and len(lines) == 3


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("ONETROUGH_OUTPUT_DIR", str(tmp_path))
    code, out, _ = call("count", "--c", "0.99", "--p", "0.4")
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "count.json").read_text())["result"]["count"] == 0


def test_scan_csv_sidecar_and_svg(tmp_path):
    csv_path = tmp_path / "map.csv"
    argv = ["scan", "--c-min", "0.2", "--c-max", "1.4", "--c-step", "0.2",
            "--p-min", "0.1", "--p-max", "0.9", "--p-step", "0.2", "--format", "csv", "-o", str(csv_path)]
    assert call(*argv)[0] == 0
    side = json.loads((tmp_path / "map.csv.json").read_text())
    assert side["shape"] == [7, 5]
    overlay = tmp_path / "beta.csv"
    overlay.write_text("c,beta\n0.5,0.3\n1.0,0.5\n")
    svg = tmp_path / "map.svg"
    code, _, _ = call("scan", "--from-csv", str(csv_path), "--format", "svg", "--overlay", str(overlay), "-o", str(svg))
    assert code == 0 and svg.read_text().startswith("<svg")


def test_bounds_json():
    code, out, _ = call("bounds", "--n", "200")
    res = json.loads(out)["result"]
    assert code == 0 and res["passed"] and res["max_L_sup"] < 7
    assert res["curves"]["p2"][0][1] == pytest.approx(0.64)


@pytest.mark.parametrize(
    "golden,argv",
    [
        ("count_five.json", ["count", "--c", "0.61005", "--p", "0.00065", "--format", "json"]),
        ("wave_k4.csv", ["wave", "--c", "0.61005", "--p", "0.00065", "--k", "4", "--n", "101", "--format", "csv"]),
        (
            "region_small.csv",
            ["scan", "--c-min", "0.1", "--c-max", "1.4", "--c-step", "0.1", "--p-min", "0.05",
             "--p-max", "0.95", "--p-step", "0.1", "--format", "csv"],
        ),
    ],
)
def test_golden_files(tmp_path, golden, argv):
    target = tmp_path / golden
    subprocess.run([sys.executable, "-m", "onetrough", *argv, "-o", str(target)], check=True)
    assert target.read_bytes() == (GOLDEN / golden).read_bytes()
    again = tmp_path / ("again_" + golden)
    subprocess.run([sys.executable, "-m", "onetrough", *argv, "-o", str(again)], check=True)
    assert again.read_bytes() == target.read_bytes()


def test_module_entry_point_exit_code():
    proc = subprocess.run(
        [sys.executable, "-m", "onetrough", "count", "--c", "2.0", "--p", "0.5"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert json.loads(proc.stderr)["code"] == 2
