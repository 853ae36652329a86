import json

import pytest

from torusdyn.cli import Options, main, run_command
from torusdyn.report import parse_csv, render_csv
from torusdyn.scenarios import resolve_scenario, save_scenario_file


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCount:
    def test_mult_by_2_l3(self, capsys):
        code, out, _ = run_cli(capsys, "count", "--scenario", "mult-by-2", "--l", "3")
        assert code == 0
        assert "49" in out

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "count", "--scenario", "mult-by-2", "--l", "3", "--format", "csv"
        )
        assert code == 0
        headers, rows = parse_csv(out)
        assert headers == ("l", "fixed_points")
        assert rows == (("3", "49"),)


class TestEnumerate:
    def test_deterministic_listing(self, capsys):
        code, first, _ = run_cli(
            capsys, "enumerate", "--scenario", "mult-by-3", "--format", "csv"
        )
        assert code == 0
        code, second, _ = run_cli(
            capsys, "enumerate", "--scenario", "mult-by-3", "--format", "csv"
        )
        assert first == second
        headers, rows = parse_csv(first)
        assert headers == ("index", "x1", "x2")
        assert len(rows) == 4
        assert rows[0] == ("0", "0", "0")
        assert rows[-1] == ("3", "1/2", "1/2")


class TestGrowth:
    def test_gaussian_csv(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "growth",
            "--scenario",
            "gaussian-cm",
            "--lmax",
            "10",
            "--format",
            "csv",
        )
        assert code == 0
        headers, rows = parse_csv(out)
        assert headers == ("l", "exact_count", "asymptote", "ratio")
        assert len(rows) == 10
        assert rows[0] == ("1", "1", "2", "1/2")

    def test_unpolarized_scenario_is_validation_error(self, capsys):
        code, _, err = run_cli(capsys, "growth", "--scenario", "unpolarizable-1x4")
        assert code == 1
        assert "not polarized" in err


class TestCompare:
    def test_mult_by_2_table(self, capsys):
        code, out, err = run_cli(
            capsys,
            "compare",
            "--scenario",
            "mult-by-2",
            "--lmax",
            "5",
            "--format",
            "csv",
        )
        assert code == 0
        headers, rows = parse_csv(out)
        assert headers == ("l", "exact_count", "formula_value", "difference")
        assert rows[0] == ("1", "1", "3", "-2")
        assert rows[1] == ("2", "9", "15", "-6")
        assert "formula" in err

    def test_missing_factors(self, capsys):
        code, _, err = run_cli(capsys, "compare", "--scenario", "silverman-sumdiff")
        assert code == 1
        assert "factors" in err


class TestQuotient:
    def test_bielliptic_rows(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "quotient",
            "--scenario",
            "bielliptic-quotient",
            "--lmax",
            "2",
            "--format",
            "csv",
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert rows[0] == ("1", "16", "2", "8", "8", "32")
        assert rows[1] == ("2", "4096", "2", "2048", "2048", "3200")


class TestSubvariety:
    def test_diagonal_counts(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "subvariety",
            "--scenario",
            "diagonal-subvariety",
            "--lmax",
            "3",
            "--format",
            "csv",
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert rows[0] == ("1", "1", "4", "1/4")
        assert rows[2] == ("3", "49", "64", "49/64")


class TestVerify:
    def test_all_flag_reports_polarization(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--all", "--scenario", "silverman-sumdiff"
        )
        assert code == 0
        assert "q = 2" in out

    def test_single_target(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "pfaffian", "--scenario", "gaussian-cm"
        )
        assert code == 0
        assert "pass" in out

    def test_dual_isogeny_target(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "dual-isogeny", "--scenario", "gaussian-cm"
        )
        assert code == 0
        assert "m = 2" in out

    def test_verify_all_skips_inapplicable(self, capsys):
        code, out, err = run_cli(
            capsys, "verify", "--all", "--scenario", "unpolarizable-1x4"
        )
        assert code == 0
        assert "degree = 16" in out
        assert "skipped" in err


class TestExitCodes:
    def test_degenerate_is_2(self, capsys):
        code, _, err = run_cli(capsys, "count", "--scenario", "unpolarizable-1x4")
        assert code == 2
        assert "degenerate" in err.lower() or "positive-dimensional" in err

    def test_budget_refusal_is_2(self, capsys):
        code, _, err = run_cli(
            capsys,
            "enumerate",
            "--scenario",
            "mult-by-2-g2",
            "--l",
            "5",
            "--budget",
            "100",
        )
        assert code == 2
        assert "budget" in err

    def test_validation_error_is_1(self, capsys):
        code, _, err = run_cli(capsys, "count", "--scenario", "no-such-scenario")
        assert code == 1
        assert "unknown scenario" in err

    def test_schema_error_is_1(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"name": "bad", "torus": {"g": "0"}}))
        code, _, err = run_cli(capsys, "count", "--scenario", str(path))
        assert code == 1
        assert "torus.g" in err

    def test_missing_scenario_flag_is_1(self, capsys):
        code, _, err = run_cli(capsys, "count")
        assert code == 1
        assert "--scenario" in err

    def test_bad_flag_value_is_1(self, capsys):
        code, _, err = run_cli(
            capsys, "count", "--scenario", "mult-by-2", "--l", "zero"
        )
        assert code == 1
        assert "invalid" in err

    def test_bad_verify_target_is_1(self, capsys):
        code, _, err = run_cli(
            capsys, "verify", "no-such-target", "--scenario", "mult-by-2"
        )
        assert code == 1
        assert "invalid choice" in err


class TestScenariosCommand:
    def test_lists_builtins(self, capsys):
        code, out, _ = run_cli(capsys, "scenarios")
        assert code == 0
        for name in (
            "gaussian-cm",
            "silverman-sumdiff",
            "unpolarizable-1x4",
            "bielliptic-quotient",
            "diagonal-subvariety",
            "mult-by-<m>",
        ):
            assert name in out


class TestCsvRoundTrip:
    @pytest.mark.parametrize(
        "command,name,opts",
        [
            ("count", "mult-by-2", Options(l=3)),
            ("growth", "gaussian-cm", Options(lmax=6)),
            ("compare", "mult-by-2", Options(lmax=4)),
            ("enumerate", "mult-by-3", Options(l=1)),
            ("quotient", "bielliptic-quotient", Options(l=1)),
            ("verify", "silverman-sumdiff", Options()),
        ],
    )
    def test_reparsed_csv_equals_report(self, command, name, opts):
        report = run_command(command, resolve_scenario(name), opts)
        headers, rows = parse_csv(render_csv(report))
        assert headers == report.headers
        assert rows == report.rows


class TestOutputFile:
    def test_out_writes_file(self, tmp_path, capsys):
        target = tmp_path / "table.csv"
        code, out, _ = run_cli(
            capsys,
            "growth",
            "--scenario",
            "mult-by-2",
            "--lmax",
            "3",
            "--format",
            "csv",
            "--out",
            str(target),
        )
        assert code == 0
        assert out == ""
        headers, rows = parse_csv(target.read_text())
        assert headers == ("l", "exact_count", "asymptote", "ratio")
        assert len(rows) == 3

    def test_file_scenario_accepted(self, tmp_path, capsys):
        path = tmp_path / "scenario.json"
        save_scenario_file(resolve_scenario("gaussian-cm"), path)
        code, out, _ = run_cli(
            capsys, "count", "--scenario", str(path), "--l", "2", "--format", "csv"
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert rows == (("2", "5"),)
