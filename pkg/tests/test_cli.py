"""CLI surface: records, tables, figures, exit codes, check suites."""

import csv
import json
import subprocess
import sys

import pytest

from walkgreen import bessel, green_half, green_orthant
from walkgreen.cli import TOL_ENV_VAR, main

G3_ORIGIN = 0.25273100985866300


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEval:
    def test_full_lattice_json(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--domain", "full", "--d", "3",
                               "--x", "0,0,0", "--y", "0,0,0")
        assert code == 0
        rec = json.loads(out)
        assert rec["value"] == pytest.approx(G3_ORIGIN, abs=1e-10)
        assert rec["error"]["kind"] == "quadrature"
        assert rec["error"]["bound"] <= 1e-11
        assert rec["method"] == "montroll-quadrature"
        assert rec["domain"] == "full(d=3)"

    def test_orthant_matches_library(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--domain", "orthant", "--d", "3",
                               "--x", "0,0,0", "--y", "0,0,0")
        assert code == 0
        rec = json.loads(out)
        assert rec["value"] == green_orthant(3, (0, 0, 0), (0, 0, 0)).value
        assert rec["method"] == "reflection-sum"

    def test_csv_record(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--domain", "half", "--d", "3",
                               "--x", "0,0,0", "--y", "1,2,0", "--format", "csv")
        assert code == 0
        rows = list(csv.reader(out.splitlines()))
        assert rows[0][:4] == ["domain", "x", "y", "value"]
        assert float(rows[1][3]) == pytest.approx(green_half(3, (0, 0, 0), (1, 2, 0)).value)

    def test_byte_identical_apart_from_wall_time(self, capsys):
        args = ("eval", "--domain", "half", "--d", "3", "--x", "0,0,0", "--y", "2,1,0")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        a, b = json.loads(out1), json.loads(out2)
        a.pop("wall_time_s")
        b.pop("wall_time_s")
        assert json.dumps(a) == json.dumps(b)

    def test_subspace_requires_m(self, capsys):
        code, _, err = run_cli(capsys, "eval", "--domain", "subspace", "--d", "3",
                               "--x", "0,0,0", "--y", "0,0,0")
        assert code == 2
        assert "requires --m" in err


class TestExitCodes:
    def test_strip_d3_is_transience_error(self, capsys):
        code, _, err = run_cli(capsys, "eval", "--domain", "strip", "--d", "3", "--L", "2",
                               "--x", "0,0,0", "--y", "0,0,0")
        assert code == 3
        assert "recurrent" in err

    def test_point_outside_domain(self, capsys):
        # negative coordinates need the --x=... form so argparse keeps them
        code, _, _ = run_cli(capsys, "eval", "--domain", "orthant", "--d", "3",
                             "--x=-1,0,0", "--y", "0,0,0")
        assert code == 3

    def test_malformed_coordinates(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["eval", "--domain", "full", "--d", "3", "--x", "a,b,c", "--y", "0,0,0"])
        assert exc.value.code == 2

    def test_dimension_mismatch_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["eval", "--domain", "full", "--d", "3", "--x", "0,0", "--y", "0,0,0"])
        assert exc.value.code == 2

    def test_convergence_exit_code(self, capsys, monkeypatch):
        monkeypatch.setattr(bessel, "ORDER_CAP", 24)
        code, _, err = run_cli(capsys, "eval", "--domain", "strip", "--d", "4", "--L", "2",
                               "--x", "0,0,0,0", "--y", "0,0,0,0", "--tol", "1e-9")
        assert code == 4
        assert "convergence" in err

    def test_unknown_suite_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["check", "everything"])
        assert exc.value.code == 2


class TestEnvTolerance:
    def test_env_var_loosens_strip_tail(self, capsys, monkeypatch):
        args = ("eval", "--domain", "strip", "--d", "4", "--L", "4",
                "--x", "0,0,0,0", "--y", "0,0,0,0")
        monkeypatch.delenv(TOL_ENV_VAR, raising=False)
        _, out_default, _ = run_cli(capsys, *args)
        monkeypatch.setenv(TOL_ENV_VAR, "1e-2")
        _, out_loose, _ = run_cli(capsys, *args)
        tight = json.loads(out_default)["error"]["bound"]
        loose = json.loads(out_loose)["error"]["bound"]
        assert loose > tight

    def test_flag_overrides_quadrature_tolerance(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--domain", "full", "--d", "4",
                               "--x", "2,1,0,0", "--y", "0,0,0,0", "--tol", "1e-9")
        assert code == 0
        assert json.loads(out)["error"]["bound"] <= 1e-9


class TestTable:
    def test_half_space_diagonal_csv(self, capsys, tmp_path):
        out_path = tmp_path / "half.csv"
        code, _, _ = run_cli(capsys, "table", "--domain", "half", "--d", "3",
                             "--range", "0:8", "--out", str(out_path))
        assert code == 0
        with open(out_path) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 9
        diag = [float(r["diag_value"]) for r in rows]
        # monotone decreasing toward g(0,0)
        assert all(a > b for a, b in zip(diag, diag[1:]))
        assert all(v > G3_ORIGIN for v in diag)
        assert diag[-1] - G3_ORIGIN < 5e-3

    def test_strip_columns_constant_per_layer(self, capsys, tmp_path):
        out_path = tmp_path / "strip.csv"
        code, _, _ = run_cli(capsys, "table", "--domain", "strip", "--d", "4", "--L", "2",
                             "--range", "0:3", "--out", str(out_path))
        assert code == 0
        with open(out_path) as fh:
            rows = list(csv.DictReader(fh))
        col0 = {r["diag_x1=0_value"] for r in rows}
        col1 = {r["diag_x1=1_value"] for r in rows}
        assert len(col0) == 1 and len(col1) == 1
        v0, v1 = float(col0.pop()), float(col1.pop())
        err = 2 * float(rows[0]["diag_x1=0_error"])
        assert abs(v0 - v1) <= err

    def test_empty_range_writes_header_only(self, capsys, tmp_path):
        out_path = tmp_path / "empty.csv"
        code, _, _ = run_cli(capsys, "table", "--domain", "half", "--d", "3",
                             "--range", "5:2", "--out", str(out_path))
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines == ["x1,diag_value,diag_error,offdiag_value,offdiag_error"]

    def test_json_table(self, capsys, tmp_path):
        out_path = tmp_path / "t.json"
        code, _, _ = run_cli(capsys, "table", "--domain", "full", "--d", "3",
                             "--range", "0:3", "--out", str(out_path), "--format", "json")
        assert code == 0
        table = json.loads(out_path.read_text())
        assert table["domain"] == "full(d=3)"
        assert len(table["rows"]) == 4

    def test_byte_identical_tables(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            run_cli(capsys, "table", "--domain", "half", "--d", "3",
                    "--range", "0:4", "--out", str(path))
        assert a.read_bytes() == b.read_bytes()

    def test_plot_renders_png(self, capsys, tmp_path):
        out_path = tmp_path / "half.csv"
        code, out, _ = run_cli(capsys, "table", "--domain", "half", "--d", "3",
                               "--range", "0:6", "--out", str(out_path), "--plot")
        assert code == 0
        png = tmp_path / "half.png"
        assert png.exists() and png.stat().st_size > 1000
        assert str(png) in out

    def test_oversized_range_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["table", "--domain", "full", "--d", "3",
                  "--range", "0:20000", "--out", "/tmp/x.csv"])
        assert exc.value.code == 2


class TestCheck:
    def test_identities_suite_passes(self, capsys):
        code, out, _ = run_cli(capsys, "check", "identities")
        assert code == 0
        assert "[PASS]" in out and "[FAIL]" not in out

    def test_scan_d_suite_passes(self, capsys):
        code, out, _ = run_cli(capsys, "check", "scan-d")
        assert code == 0
        assert "2dG_O-decreasing" in out

    def test_network_suite_passes(self, capsys):
        code, out, _ = run_cli(capsys, "check", "network")
        assert code == 0
        assert out.count("[PASS]") == 4

    def test_network_suite_dumps_graphs(self, capsys, tmp_path):
        from walkgreen import WeightedGraph

        code, out, _ = run_cli(capsys, "check", "network", "--dump-graphs", str(tmp_path))
        assert code == 0
        dumped = sorted(tmp_path.glob("*.graph"))
        assert len(dumped) == 4
        g = WeightedGraph.load(dumped[0])
        assert g.vertices() and g.boundary

    def test_mc_suite_small(self, capsys):
        code, out, _ = run_cli(capsys, "check", "mc", "--walks", "30000", "--horizon", "2000")
        assert code == 0
        assert "[FAIL]" not in out


class TestConsoleScript:
    def test_entry_point_runs(self):
        proc = subprocess.run(
            [sys.executable, "-m", "walkgreen.cli", "--help"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "eval" in proc.stdout and "table" in proc.stdout and "check" in proc.stdout
