"""End-to-end tests of the command-line interface: each subcommand's outputs,
the exit-code contract (0 ok, 1 config error, 2 failed proven bound),
byte-determinism of written files, and aggregated validation messages."""

import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp

from sanovlab.cli import main
from sanovlab.divergences import phi_sandwich

STATES = Path(__file__).resolve().parent.parent / "states"
MIXED = str(STATES / "maximally-mixed.json")
THIRD = str(STATES / "one-third.json")
COHERENT = str(STATES / "coherent.json")


@pytest.fixture()
def runner():
    return CliRunner()


def classical_b_e(r, p_rho, p_sigma):
    def f(s):
        phi = logsumexp((1.0 - s) * np.log(p_rho) + s * np.log(p_sigma))
        return (-(1.0 - s) * r - phi) / s

    grid = np.linspace(1e-6, 1.0 - 1e-6, 10001)
    i = int(np.argmax([f(s) for s in grid]))
    res = minimize_scalar(
        lambda s: -f(s),
        bounds=(grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return -res.fun


class TestMeasure:
    def test_maximally_mixed_two_copies(self, runner, tmp_path):
        out = tmp_path / "dist.json"
        result = runner.invoke(main, ["measure", "--sigma", MIXED, "--n", "2", "--out", str(out)])
        assert result.exit_code == 0, result.output
        payload = json.loads(out.read_text())
        probs = {(tuple(e["young"]), tuple(e["type"])): e["prob"] for e in payload["entries"]}
        want = {
            ((2, 0), (2, 0)): 0.25,
            ((2, 0), (1, 1)): 0.25,
            ((2, 0), (0, 2)): 0.25,
            ((1, 1), (1, 1)): 0.25,
        }
        for key, value in want.items():
            assert probs[key] == pytest.approx(value, abs=1e-12)
        assert out.with_suffix(".png").exists()

    def test_output_bytes_are_stable(self, runner, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            result = runner.invoke(
                main, ["measure", "--sigma", THIRD, "--n", "3", "--format", "csv", "--out", str(out)]
            )
            assert result.exit_code == 0, result.output
        assert a.read_bytes() == b.read_bytes()
        assert a.read_text().startswith("# sanovlab outcome distribution v1")

    def test_rejects_range_n(self, runner, tmp_path):
        result = runner.invoke(main, ["measure", "--sigma", MIXED, "--n", "2..4"])
        assert result.exit_code == 1
        assert "single --n" in result.output

    def test_rejects_budget_blowup(self, runner):
        result = runner.invoke(main, ["measure", "--sigma", MIXED, "--n", "20"])
        assert result.exit_code == 1
        assert "budget" in result.output


class TestDivergence:
    def test_json_panel_matches_library(self, runner, tmp_path):
        out = tmp_path / "panel.json"
        result = runner.invoke(
            main,
            ["divergence", "--sigma", THIRD, "--rho", COHERENT, "--s-grid", "0.2:0.8:4", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        panel = json.loads(out.read_text())
        sigma = np.diag([1.0 / 3.0, 2.0 / 3.0])
        rho = np.array([[0.3, 0.2], [0.2, 0.7]])
        for s_text, value in panel["phi"].items():
            s = float(s_text)
            assert value == pytest.approx(phi_sandwich(s, rho, sigma), abs=1e-10)
        assert "relative_entropy" in panel and "slope_divergence" in panel
        assert out.with_suffix(".png").exists()

    def test_csv_format_and_grid_validation(self, runner, tmp_path):
        out = tmp_path / "panel.csv"
        ok = runner.invoke(
            main,
            ["divergence", "--sigma", THIRD, "--rho", MIXED, "--format", "csv",
             "--s-grid", "0.1:0.9:5", "--out", str(out)],
        )
        assert ok.exit_code == 0, ok.output
        assert out.read_text().startswith("# sanovlab divergence panel v1")
        bad = runner.invoke(
            main, ["divergence", "--sigma", THIRD, "--rho", MIXED, "--s-grid", "0:1:5"]
        )
        assert bad.exit_code == 1
        assert "inside (0,1)" in bad.output

    def test_missing_states_are_aggregated(self, runner):
        result = runner.invoke(main, ["divergence"])
        assert result.exit_code == 1
        assert "--sigma is required" in result.output
        assert "--rho is required" in result.output


class TestExponents:
    def test_csv_matches_classical_oracle(self, runner, tmp_path):
        out = tmp_path / "curve.csv"
        result = runner.invoke(
            main,
            ["exponents", "--sigma", THIRD, "--rho", MIXED, "--r-grid", "0.005:0.05:4", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        rows = [row for row in out.read_text().splitlines() if not row.startswith("#")]
        reader = list(csv.DictReader(rows))
        p_rho = np.array([0.5, 0.5])
        p_sigma = np.array([1.0 / 3.0, 2.0 / 3.0])
        for row in reader:
            want = classical_b_e(float(row["r"]), p_rho, p_sigma)
            assert float(row["b_e_hat"]) == pytest.approx(want, abs=1e-6)
        meta = json.loads(out.with_suffix(".meta.json").read_text())
        assert set(meta) == {"d_hat", "d_sigma_rho"}
        assert out.with_suffix(".png").exists()

    def test_rejects_nonpositive_grid(self, runner):
        result = runner.invoke(
            main, ["exponents", "--sigma", THIRD, "--rho", MIXED, "--r-grid", "-0.1:0.5:5"]
        )
        assert result.exit_code == 1
        assert "strictly positive" in result.output


class TestVerify:
    def test_quick_run_exits_zero(self, runner, tmp_path):
        out = tmp_path / "report.jsonl"
        result = runner.invoke(main, ["verify", "--quick", "--out", str(out)])
        assert result.exit_code == 0, result.output
        summary = json.loads(result.output.splitlines()[0])["summary"]
        assert summary["passed"] == summary["total"] > 0
        lines = out.read_text().splitlines()
        assert json.loads(lines[-1])["summary"]["total"] == summary["total"]
        assert out.with_suffix(".png").exists()

    def test_corrupted_bound_exits_two(self, runner, tmp_path):
        out = tmp_path / "report.jsonl"
        result = runner.invoke(
            main, ["verify", "--quick", "--corrupt-bound", "1e-3", "--out", str(out)]
        )
        assert result.exit_code == 2
        summary = json.loads(result.output.splitlines()[0])["summary"]
        assert summary["passed"] < summary["total"]

    def test_rejects_bad_dimension(self, runner):
        result = runner.invoke(main, ["verify", "--d", "1"])
        assert result.exit_code == 1
        assert "--d must be >= 2" in result.output


class TestScan:
    def test_scan_writes_csv_and_reports_gap(self, runner, tmp_path):
        out = tmp_path / "scan.csv"
        result = runner.invoke(
            main,
            ["scan", "--sigma", THIRD, "--rho", MIXED, "--r", "0.05", "--n", "2..4", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        status = json.loads(result.output.splitlines()[0])
        assert "final_gap" in status and "trend" in status
        assert math.isfinite(float(status["final_gap"]))
        assert out.read_text().startswith("# sanovlab theorem2 scan v1")
        assert out.with_suffix(".png").exists()

    def test_rejects_nonpositive_radius(self, runner):
        result = runner.invoke(
            main, ["scan", "--sigma", THIRD, "--rho", MIXED, "--r", "-1"]
        )
        assert result.exit_code == 1
        assert "--r must be positive" in result.output


class TestSample:
    def test_seeded_runs_are_identical(self, runner, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            result = runner.invoke(
                main,
                ["sample", "--sigma", THIRD, "--n", "3", "--count", "50", "--seed", "7", "--out", str(out)],
            )
            assert result.exit_code == 0, result.output
        assert a.read_bytes() == b.read_bytes()
        assert len(a.read_text().splitlines()) == 2 + 50

    def test_errors_are_aggregated_not_first_only(self, runner):
        result = runner.invoke(main, ["sample", "--count", "0"])
        assert result.exit_code == 1
        assert "--sigma is required" in result.output
        assert "--seed is required" in result.output
        assert "--count must be >= 1" in result.output


class TestInputValidation:
    def test_malformed_matrix_file_names_the_path(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"dim": 2, "re": [[1, 0]]}')
        result = runner.invoke(main, ["measure", "--sigma", str(bad), "--n", "2"])
        assert result.exit_code == 1
        assert "bad.json" in result.output

    def test_missing_file_is_a_config_error(self, runner):
        result = runner.invoke(main, ["measure", "--sigma", "/nonexistent.json", "--n", "2"])
        assert result.exit_code == 1
        assert "error:" in result.output
