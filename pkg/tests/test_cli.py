import csv
import io
import json

import pytest

import htgroups as hg
from htgroups.cli import main

from conftest import truncated_quaternionic

ENVELOPE_KEYS = {"command", "algebra", "seed", "tolerances", "results", "duration"}


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_builtin(capsys):
    code, out, _ = run(capsys, "validate", "--algebra", "heisenberg:1")
    assert code == 0
    report = json.loads(out)
    assert set(report) == ENVELOPE_KEYS
    assert report["algebra"] == {"source": "heisenberg:1", "m": 2, "n": 1}
    assert report["results"]["htype_ok"] is True
    assert report["results"]["iwasawa_ok"] is True


def test_validate_non_iwasawa_file_exits_1(capsys, tmp_path):
    path = tmp_path / "trunc.json"
    path.write_text(json.dumps(truncated_quaternionic().to_dict()))
    code, out, _ = run(capsys, "validate", "--algebra", str(path))
    assert code == 1
    report = json.loads(out)
    assert report["results"]["htype_ok"] is True
    assert report["results"]["iwasawa_ok"] is False
    assert report["results"]["witness"]["residual"] >= 0.1


def test_check_single_suite(capsys):
    code, out, _ = run(
        capsys,
        "check", "--algebra", "heisenberg:1", "--suite", "calibration",
        "--samples", "800", "--seed", "7", "--workers", "1",
    )
    assert code == 0
    report = json.loads(out)
    (entry,) = report["results"]
    assert entry["suite"] == "calibration" and entry["passed"] is True
    assert {r["suite"] for r in entry["subresults"]} == {
        "triangle", "involution", "inversion_gauge",
    }


def test_check_all_suites_csv(capsys):
    code, out, _ = run(
        capsys,
        "check", "--algebra", "quaternionic:1", "--samples", "600",
        "--format", "csv",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    suites = [row["suite"] for row in rows]
    assert "expansion_identity" in suites
    assert "calibration/triangle" in suites
    assert all(row["passed"] == "True" for row in rows)


def test_distance_and_infinity(capsys, tmp_path):
    points = tmp_path / "pts.json"
    points.write_text(json.dumps([{"x": [-1.0, 0.0], "t": [0.0]}, {"x": [2.0, 0.0], "t": [0.0]}]))
    code, out, _ = run(capsys, "distance", "--algebra", "heisenberg:1", "--points", str(points))
    assert code == 0
    assert json.loads(out)["results"]["distance"] == pytest.approx(3.0, rel=1e-15)

    points.write_text(json.dumps([{"x": [1.0, 0.0], "t": [0.0]}, "inf"]))
    code, out, _ = run(capsys, "distance", "--algebra", "heisenberg:1", "--points", str(points))
    assert code == 0
    assert json.loads(out)["results"]["distance"] == "inf"


def test_defect_equality_quadruple(capsys, tmp_path):
    points = tmp_path / "quad.json"
    points.write_text(
        json.dumps(
            [
                {"x": [0.0, 0.0], "t": [0.0]},
                "inf",
                {"x": [-1.0, 0.0], "t": [0.0]},
                {"x": [2.0, 0.0], "t": [0.0]},
            ]
        )
    )
    code, out, _ = run(capsys, "defect", "--algebra", "heisenberg:1", "--points", str(points))
    assert code == 0
    results = json.loads(out)["results"]
    assert abs(results["min_defect"]) <= 1e-9
    assert len(results["pairings"]) == 3
    assert set(results["pairings"][0]) == {"pairing", "X1_sqrt", "X2_sqrt", "defect"}


def test_cross_ratio_command(capsys, tmp_path):
    points = tmp_path / "quad.json"
    points.write_text(
        json.dumps([{"x": [float(k), 0.0], "t": [0.0]} for k in (1, 2, 3, 4)])
    )
    code, out, _ = run(capsys, "cross-ratio", "--algebra", "heisenberg:1", "--points", str(points))
    assert code == 0
    assert json.loads(out)["results"]["sqrt_value"] == pytest.approx(4.0 / 3.0, rel=1e-14)


def test_rcircle_command(capsys, tmp_path):
    code, out, _ = run(
        capsys,
        "rcircle", "--algebra", "heisenberg:1",
        "--direction", "1,0", "--lambdas", "0,inf,-1,2",
    )
    assert code == 0
    results = json.loads(out)["results"]
    assert results["separated"] is True and results["passed"] is True

    word = tmp_path / "word.json"
    word.write_text(
        json.dumps(
            [
                {"op": "translate", "arg": {"x": [0.3, -0.4], "t": [0.2]}},
                {"op": "dilate", "arg": 3.0},
                {"op": "invert", "arg": None},
            ]
        )
    )
    code, out, _ = run(
        capsys,
        "rcircle", "--algebra", "heisenberg:1",
        "--direction", "1,0", "--lambdas", "0,inf,-1,2", "--word", str(word),
    )
    assert code == 0
    assert abs(json.loads(out)["results"]["defect"]) <= 1e-8


def test_unknown_algebra_exits_2(capsys):
    code, out, err = run(capsys, "validate", "--algebra", "lorentzian:4")
    assert code == 2
    assert "lorentzian" in err
    assert out == ""


def test_malformed_points_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "distance", "--algebra", "heisenberg:1", "--points", str(bad))
    assert code == 2
    assert "error" in err

    wrong_count = tmp_path / "count.json"
    wrong_count.write_text(json.dumps([{"x": [1.0, 0.0], "t": [0.0]}]))
    code, _, err = run(capsys, "distance", "--algebra", "heisenberg:1", "--points", str(wrong_count))
    assert code == 2

    bad_dims = tmp_path / "dims.json"
    bad_dims.write_text(json.dumps([{"x": [1.0], "t": [0.0]}, {"x": [2.0], "t": [0.0]}]))
    code, _, err = run(capsys, "distance", "--algebra", "heisenberg:1", "--points", str(bad_dims))
    assert code == 2


def test_degenerate_quadruple_exits_2(capsys, tmp_path):
    points = tmp_path / "quad.json"
    points.write_text(json.dumps([{"x": [1.0, 0.0], "t": [0.0]}] * 4))
    code, _, err = run(capsys, "defect", "--algebra", "heisenberg:1", "--points", str(points))
    assert code == 2
    assert "distinct" in err


def test_algebra_json_roundtrip_identical_reports(capsys, tmp_path):
    path = tmp_path / "h2.json"
    path.write_text(json.dumps(hg.heisenberg(2).to_dict()))

    def results_for(selector):
        code, out, _ = run(
            capsys,
            "check", "--algebra", selector, "--suite", "iwasawa",
            "--samples", "1500", "--seed", "11",
        )
        assert code == 0
        results = json.loads(out)["results"]
        for entry in results:
            entry.pop("duration")
        return results

    assert results_for("heisenberg:2") == results_for(str(path))


def test_report_written_to_file(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = run(
        capsys,
        "validate", "--algebra", "octonionic", "--out", str(out_path),
    )
    assert code == 0
    assert out == ""
    report = json.loads(out_path.read_text())
    assert set(report) == ENVELOPE_KEYS
    assert report["results"]["htype_ok"] is True


def test_validate_csv_format(capsys):
    code, out, _ = run(
        capsys, "validate", "--algebra", "heisenberg:1", "--format", "csv"
    )
    assert code == 0
    rows = {row["field"]: row["value"] for row in csv.DictReader(io.StringIO(out))}
    assert rows["htype_ok"] == "True"
    assert float(rows["skew_residual"]) == 0.0
