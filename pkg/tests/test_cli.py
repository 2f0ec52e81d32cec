"""Command-line surface: envelopes, exit codes, pinned examples."""

import io
import json
import math

import pytest

from magnitude import cli

ENVELOPE_KEYS = {"command", "inputs_digest", "results", "timing_seconds", "version"}


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    report = json.loads(out)
    assert set(report) == ENVELOPE_KEYS
    return code, report, err


# ---------------------------------------------------------------------------
# pinned examples


def test_mag_three_points(capsys):
    code, rep, _ = run_json(capsys, "mag", "--points-1d", "0,1,3", "--t", "1")
    assert code == 0
    assert rep["results"]["magnitude"] == pytest.approx(2.223711313215775, abs=1e-12)
    assert rep["results"]["status"] == "UniquePD"
    assert rep["results"]["n_points"] == 3


def test_pixel_intrinsic_l_tromino(capsys):
    code, rep, _ = run_json(capsys, "pixel", "--ascii", r"##\n#.")
    assert code == 0
    assert rep["results"] == {"V": ["1", "4", "3"], "magnitude": "15/4"}


def test_ball_oracle_exact_rational(capsys):
    code, rep, _ = run_json(capsys, "oracle", "--ball", "3,1")
    assert code == 0
    assert rep["results"]["magnitude_exact"] == "25/6"
    code, rep, _ = run_json(capsys, "oracle", "--ball", "5,1")
    assert rep["results"]["magnitude_exact"] == "3199/480"
    assert rep["results"]["magnitude"] == pytest.approx(3199 / 480, rel=1e-15)


def test_conjecture_gap_in_dimension_five(capsys):
    code, rep, _ = run_json(capsys, "oracle", "--conjecture", "5,1")
    assert code == 0
    assert abs(rep["results"]["difference"]) > 1e-3
    code, rep, _ = run_json(capsys, "oracle", "--conjecture", "3,2.5")
    assert abs(rep["results"]["difference"]) <= 1e-12


def test_oracle_cantor_and_interval(capsys):
    code, rep, _ = run_json(capsys, "oracle", "--interval", "0,2", "--t", "1")
    assert code == 0
    assert rep["results"]["magnitude"] == pytest.approx(2.0, abs=1e-15)
    code, rep, _ = run_json(capsys, "oracle", "--cantor", "--t", "1")
    assert rep["results"]["magnitude"] == pytest.approx(1.4983504315884848, abs=1e-12)


# ---------------------------------------------------------------------------
# the k32 pathology surface


def test_mag_k32_negative_window(capsys):
    # defined but negative: reported with exit 0, status shows the form
    # is invertible without being positive definite
    code, rep, _ = run_json(capsys, "mag", "--graph", "k32", "--t", "0.34")
    assert code == 0
    assert rep["results"]["magnitude"] < 0
    assert rep["results"]["status"] == "UniqueInvertible"


def test_mag_k32_pole_exits_three(capsys):
    code, out, err = run(capsys, "mag", "--graph", "k32",
                         "--t", repr(0.5 * math.log(2)))
    assert code == 3
    rep = json.loads(out)
    assert rep["results"]["status"] == "Undefined"
    assert rep["results"]["magnitude"] is None


def test_magfn_never_exits_three(capsys):
    code, rep, _ = run_json(capsys, "magfn", "--graph", "k32",
                            "--tmin", "0.337", "--tmax", "0.346", "--steps", "7")
    assert code == 0
    samples = rep["results"]["samples"]
    assert len(samples) == 7
    assert all("status" in s for s in samples)
    mags = [s["magnitude"] for s in samples if s["magnitude"] is not None]
    assert any(m < 0 for m in mags)


# ---------------------------------------------------------------------------
# exit codes


def test_exit_two_on_bad_input(capsys):
    code, out, err = run(capsys, "mag", "--points-1d", "0,zebra")
    assert code == 2
    assert json.loads(err)["error"] == "BadSpec"

    code, _, err = run(capsys, "mag", "--t", "1")  # no source
    assert code == 2

    code, _, err = run(capsys, "mag", "--points-1d", "0,1", "--graph", "c5")
    assert code == 2

    code, _, err = run(capsys, "oracle", "--ball", "2,1")
    assert code == 2
    assert json.loads(err)["error"] == "UnsupportedDimension"

    code, _, err = run(capsys, "pixel", "--ascii", "#?#")
    assert code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0


# ---------------------------------------------------------------------------
# envelope properties


def _strip_timing(report):
    return {k: v for k, v in report.items() if k != "timing_seconds"}


def test_reports_deterministic_modulo_timing(capsys):
    _, rep1, _ = run_json(capsys, "mag", "--graph", "k32", "--t", "2")
    _, rep2, _ = run_json(capsys, "mag", "--graph", "k32", "--t", "2")
    assert _strip_timing(rep1) == _strip_timing(rep2)


def test_seeded_sample_deterministic(capsys):
    args = ("mag", "--ball", "2,1.0,30", "--seed", "9", "--t", "1.5")
    _, rep1, _ = run_json(capsys, *args)
    _, rep2, _ = run_json(capsys, *args)
    assert _strip_timing(rep1) == _strip_timing(rep2)
    assert rep1["results"]["status"] == "UniquePD"


def test_csv_sweep_format(capsys):
    code, out, _ = run(capsys, "magfn", "--points-1d", "0,1,2", "--tmin", "0.5",
                       "--tmax", "2", "--steps", "4", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,magnitude,positive_definite,status"
    assert len(lines) == 5


def test_csv_scalar_format(capsys):
    code, out, _ = run(capsys, "mag", "--points-1d", "0,1", "--t", "1",
                       "--format", "csv")
    assert code == 0
    rows = dict(line.split(",", 1) for line in out.strip().splitlines())
    assert float(rows["magnitude"]) == pytest.approx(1.4621171572600098, abs=1e-12)


def test_stdin_matrix(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("0,1\n1,0\n"))
    code, rep, _ = run_json(capsys, "mag", "--stdin-matrix", "--t", "1")
    assert code == 0
    assert rep["results"]["magnitude"] == pytest.approx(1.4621171572600098, abs=1e-12)


def test_weights_command(capsys):
    code, rep, _ = run_json(capsys, "weights", "--points-1d", "0,1", "--t", "2")
    assert code == 0
    w = rep["results"]["weighting"]
    assert w == rep["results"]["coweighting"]
    assert sum(w) == pytest.approx(rep["results"]["magnitude"], abs=1e-12)


def test_check_command_verdicts(capsys):
    code, rep, _ = run_json(capsys, "check", "--graph", "k32", "--t", "0.1")
    assert code == 0
    r = rep["results"]
    assert r["valid"] is True
    assert r["is_positive_definite"] is False
    assert r["negative_type_verdict"] == "CertifiedNot"

    code, rep, _ = run_json(capsys, "check", "--points-1d", "0,0.5,1.7", "--t", "1")
    r = rep["results"]
    assert r["is_positive_definite"] is True
    assert r["negative_type_verdict"] == "CertifiedNegativeType"


def test_check_invalid_matrix_exits_two(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("0,5\n5,0\n")  # fine
    code, _, _ = run(capsys, "check", "--matrix", str(bad), "--t", "1")
    assert code == 0
    bad.write_text("0,5,1\n5,0,1\n1,1,0\n")  # 5 > 1 + 1 breaks the triangle
    code, out, _ = run(capsys, "check", "--matrix", str(bad), "--t", "1")
    assert code == 2
    rep = json.loads(out)
    assert rep["results"]["valid"] is False
    assert rep["results"]["error"] == "TriangleViolation"


def test_dim_overresolution_warning(capsys):
    code, rep, err = run_json(capsys, "dim", "--grid", "11", "--tmin", "0.5",
                              "--tmax", "2", "--samples", "6")
    assert code == 0
    assert "window_warning" in rep["results"]
    assert "warning:" in err
    assert rep["results"]["method"] == "diversity_growth"


def test_dim_narrow_window_exits_two(capsys):
    code, _, err = run(capsys, "dim", "--grid", "11", "--tmin", "0.5",
                       "--tmax", "2", "--samples", "4")
    assert code == 2
    assert json.loads(err)["error"] == "WindowTooNarrow"


# ---------------------------------------------------------------------------
# refinement sweeps


def test_approx_grid_family(capsys):
    code, rep, _ = run_json(capsys, "approx", "--grid-sizes", "11,101,1001",
                            "--length", "2.0")
    assert code == 0
    r = rep["results"]
    assert r["nested"] is True
    rows = r["samples"]
    assert [row["level"] for row in rows] == [11, 101, 1001]
    assert rows[1]["magnitude"] == pytest.approx(1 + 100 * math.tanh(0.01),
                                                 abs=1e-9)
    assert rows[0]["delta"] is None
    assert rows[1]["delta"] > 0 and rows[2]["delta"] > 0
    mags = [row["magnitude"] for row in rows]
    assert mags == sorted(mags) and mags[-1] < 2.0


def test_approx_non_divisible_grids_not_nested(capsys):
    code, rep, _ = run_json(capsys, "approx", "--grid-sizes", "11,101,30")
    assert code == 0
    assert rep["results"]["nested"] is False


def test_approx_cantor_family_csv(capsys):
    code, out, _ = run(capsys, "approx", "--cantor-depths", "1,2,3,4",
                       "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "level,n_points,magnitude,status,delta"
    assert len(lines) == 5
    mags = [float(line.split(",")[2]) for line in lines[1:]]
    assert mags == sorted(mags)
    assert mags[-1] < 1.4983504315884848  # below the series oracle


def test_approx_ball_family_bounded_by_closed_form(capsys):
    code, rep, _ = run_json(capsys, "approx", "--ball-counts", "40,80",
                            "--ball", "3,1", "--seed", "11")
    assert code == 0
    rows = rep["results"]["samples"]
    assert all(row["magnitude"] <= 25 / 6 + 1e-9 for row in rows)
    assert rows[1]["magnitude"] >= rows[0]["magnitude"] - 1e-9


def test_approx_input_errors(capsys):
    code, _, err = run(capsys, "approx")
    assert code == 2
    code, _, err = run(capsys, "approx", "--ball-counts", "10,20", "--ball", "3,1")
    assert code == 2
    assert "seed" in json.loads(err)["detail"]
    code, _, _ = run(capsys, "approx", "--grid-sizes", "1,5")
    assert code == 2


def test_oracle_conjecture_reports_triple(capsys):
    code, rep, _ = run_json(capsys, "oracle", "--conjecture", "3,1")
    assert code == 0
    r = rep["results"]
    assert r["exact"] == pytest.approx(25 / 6, abs=1e-12)
    assert r["conjectured"] == pytest.approx(25 / 6, abs=1e-9)
    assert abs(r["difference"]) <= 1e-12


# ---------------------------------------------------------------------------
# pixel modes


def test_pixel_convexity_modes(capsys):
    code, rep, _ = run_json(capsys, "pixel", "--ascii", r"##\n#.",
                            "--convexity")
    assert code == 0
    assert rep["results"] == {"l1_convex": True, "witness": None}

    code, rep, _ = run_json(capsys, "pixel", "--ascii", "#.#", "--convexity")
    assert code == 0
    assert rep["results"]["l1_convex"] is False
    assert rep["results"]["witness"] == [[0, 0], [2, 0]]


def test_pixel_weights_mode(capsys):
    code, rep, _ = run_json(capsys, "pixel", "--ascii", r"##\n#.", "--weights")
    assert code == 0
    assert rep["results"]["total_mass"] == "15/4"
    assert rep["results"]["l1_convex"] is True


def test_pixel_mode_conflicts(capsys):
    code, _, err = run(capsys, "pixel", "--ascii", "##", "--weights",
                       "--convexity")
    assert code == 2
    code, _, _ = run(capsys, "pixel", "--bounds")
    assert code == 2
