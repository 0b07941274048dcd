import json
from os.path import exists, join

from click.testing import CliRunner

from adialab.cli import main
from adialab.errors import TruncationError
from adialab.report import CSV_COLUMNS


def invoke(args):
    runner = CliRunner()
    return runner.invoke(main, args)


class TestGeometryCommands:
    def test_torus_compare(self, tmpdir):
        csv_path = join(str(tmpdir), "torus.csv")
        json_path = join(str(tmpdir), "torus.json")
        report_path = join(str(tmpdir), "torus.md")
        args = [
            "torus",
            "--mode",
            "compare",
            "--alpha-sqrt2",
            "--eps",
            "0.04,0.02",
            "--t",
            "1",
            "--lambda",
            "50",
            "--out-csv",
            csv_path,
            "--out-json",
            json_path,
            "--report",
            report_path,
        ]
        result = invoke(args)
        assert result.exit_code == 0, result.output
        assert "NC Weyl formula: CONFIRMED (torus)" in result.output

        with open(csv_path, encoding="utf-8") as handle:
            first = handle.read()
        assert first.splitlines()[0] == ",".join(CSV_COLUMNS)
        with open(json_path, encoding="utf-8") as handle:
            summary = json.load(handle)
        assert set(summary) == {"config_echo", "checks", "fits", "verdict"}
        assert summary["config_echo"]["geometry"] == "torus"
        assert exists(report_path)

        assert invoke(args).exit_code == 0
        with open(csv_path, encoding="utf-8") as handle:
            assert handle.read() == first

    def test_mismatch_needs_nonzero_alpha(self):
        result = invoke(["sol", "--alpha", "0", "--mode", "mismatch"])
        assert result.exit_code == 2
        assert "mismatch mode requires alpha != 0" in result.output

    def test_negative_eps(self):
        result = invoke(["torus", "--eps", "-1"])
        assert result.exit_code == 2
        assert "eps must be positive" in result.output

    def test_mode_not_available(self):
        assert invoke(["heisenberg", "--mode", "counting"]).exit_code == 2

    def test_two_named_slopes(self):
        assert invoke(["torus", "--alpha-sqrt2", "--alpha-golden"]).exit_code == 2

    def test_unknown_config_key(self, tmpdir):
        path = join(str(tmpdir), "config.json")
        with open(path, "w", encoding="utf-8") as handle:
            json.dump({"epsilon": [0.1]}, handle)
        result = invoke(["torus", "--config", path])
        assert result.exit_code == 2
        assert "epsilon" in result.output

    def test_failed_check(self):
        result = invoke(["weyl-ref", "--mode", "counting", "--eps", "0.01", "--lambda", "1", "--tol", "0.001"])
        assert result.exit_code == 1
        assert "FAIL" in result.output

    def test_convergence_failure(self, monkeypatch):
        def fail(*args, **kwargs):
            raise TruncationError("torus_heat_trace", "forced")

        monkeypatch.setattr("adialab.cells.torus_heat_trace", fail)
        result = invoke(["torus", "--mode", "heat", "--eps", "0.04", "--t", "1"])
        assert result.exit_code == 3
        assert "convergence failure" in result.output

    def test_sol_mismatch_defaults(self):
        result = invoke(["sol"])
        assert result.exit_code == 0, result.output
        assert "FAILS (Sol α≠0" in result.output


class TestSuiteAndGolden:
    def test_golden(self, tmpdir):
        path = join(str(tmpdir), "golden.json")
        result = invoke(["golden", "--out", path, "--dps", "20"])
        assert result.exit_code == 0, result.output
        assert "heisenberg_symbol_trace_reduced" in result.output
        with open(path, encoding="utf-8") as handle:
            assert len(json.load(handle)) == 5

    def test_suite(self, tmpdir):
        out_dir = str(tmpdir)
        result = invoke(["suite", "--out-dir", out_dir])
        assert result.exit_code == 0, result.output
        assert "## Acceptance criteria" in result.output
        assert "[FAIL]" not in result.output
        for name in ("suite.csv", "suite.json", "suite.md"):
            assert exists(join(out_dir, name))
