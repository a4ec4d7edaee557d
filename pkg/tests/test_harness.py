"""Study runner, slope fitting, CSV output, CLI."""

import math

import numpy as np
import pytest

from taylorfd import cli, harness
from taylorfd.core import predicted_evals_per_step
from taylorfd.harness import (ConvergenceReport, RungRow, StudySpec,
                              compare_methods, default_ladder, emit_csv,
                              fit_slope, run_study)


class TestStudySpec:
    def test_ladder_must_increase(self):
        with pytest.raises(ValueError):
            StudySpec("sin", "approx-taylor", 2, [10, 10, 20, 40])

    def test_minimum_rungs(self):
        with pytest.raises(ValueError):
            StudySpec("sin", "approx-taylor", 2, [10, 20, 40])

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            StudySpec("sin", "euler", 2, [10, 20, 40, 80])

    def test_default_ladders_are_valid(self):
        for label in ("sin", "riccati", "log", "pendulum", "toggle", "rational-m"):
            for order in (2, 3, 4, 6, 8):
                ladder = default_ladder(label, order)
                StudySpec(label, "approx-taylor", order, ladder)  # validates


class TestFitSlope:
    def test_recovers_exact_power_law(self):
        hs = [2.0 ** -k for k in range(8)]
        errs = [3.0 * h ** 2.5 for h in hs]
        slope, resid, used = fit_slope(hs, errs, floor=0.0)
        assert slope == pytest.approx(2.5, abs=1e-12)
        assert resid == pytest.approx(0.0, abs=1e-12)
        assert all(used)

    def test_floor_row_does_not_change_slope(self):
        hs = [0.1, 0.05, 0.025, 0.0125]
        errs = [h ** 3 for h in hs]
        floor = 1e-13
        slope_before, _, _ = fit_slope(hs, errs, floor)
        slope_after, _, used = fit_slope(hs + [0.00625], errs + [0.5e-13], floor)
        assert slope_after == slope_before
        assert used == [True] * 4 + [False]

    def test_divergent_rows_excluded(self):
        hs = [0.1, 0.05, 0.025]
        errs = [1e-2, 2.5e-3, math.nan]
        slope, _, used = fit_slope(hs, errs, 0.0)
        assert used == [True, True, False]
        assert slope == pytest.approx(2.0, abs=1e-12)

    def test_too_few_points(self):
        slope, resid, used = fit_slope([0.1, 0.05], [1e-20, math.nan], 1e-13)
        assert slope is None and resid is None


class TestRunStudy:
    def test_sin_order2(self):
        rep = run_study(StudySpec("sin", "approx-taylor", 2, [20, 40, 80, 160]))
        assert abs(rep.slope - 2.0) < 0.25
        for row, n in zip(rep.rows, [20, 40, 80, 160]):
            assert row.n_steps == n
            assert row.evals == n * predicted_evals_per_step(2)
            assert row.h == pytest.approx(1.0 / n)

    def test_divergent_rung_recorded_study_continues(self):
        # Coarse log-problem rungs sample outside the logarithm's domain.
        rep = run_study(StudySpec("log", "approx-taylor", 6, [5, 10, 80, 160, 320]))
        assert rep.rows[0].diverged
        assert math.isnan(rep.rows[0].error)
        assert not rep.rows[-1].diverged
        assert rep.slope is not None

    def test_exact_taylor_method_label(self):
        rep = run_study(StudySpec("sin", "exact-taylor", 3, [10, 20, 40, 80]))
        assert rep.method == "exact (jet)"
        assert abs(rep.slope - 3.0) < 0.3

    def test_rk_tableau_method(self):
        rep = run_study(StudySpec("sin", "rk-tableau", 2, [20, 40, 80, 160]))
        assert abs(rep.slope - 2.0) < 0.25
        assert rep.rows[0].evals == 3 * 20  # three stages


class TestEmitCsv:
    def read(self, path):
        with open(path, encoding="utf-8") as fh:
            return fh.read()

    def test_format(self, tmp_path):
        rep = run_study(StudySpec("sin", "approx-taylor", 2, [20, 40, 80, 160]))
        path = tmp_path / "sin.csv"
        emit_csv(rep, path)
        lines = self.read(path).splitlines()
        assert lines[0] == "# problem=sin"
        assert lines[1] == "# method=approx-taylor"
        assert lines[2] == "# R=2"
        assert lines[3] == "# seed=0"
        assert lines[4].startswith("# slope=")
        assert lines[5] == "h,error,evals,time_ns"
        assert len(lines) == 6 + 4

    def test_empty_report(self, tmp_path):
        rep = ConvergenceReport("sin", "approx-taylor", 2, 0)
        path = tmp_path / "empty.csv"
        emit_csv(rep, path)
        lines = self.read(path).splitlines()
        assert lines[-1] == "h,error,evals,time_ns"
        assert len(lines) == 6

    def test_deterministic_except_time(self, tmp_path):
        spec = StudySpec("rational-m", "approx-taylor", 2, [20, 40, 80, 160], seed=3)
        paths = []
        for tag in ("a", "b"):
            rep = run_study(spec)
            p = tmp_path / f"{tag}.csv"
            emit_csv(rep, p)
            paths.append(p)

        def strip_time(text):
            out = []
            for line in text.splitlines():
                if line.startswith("#") or line.startswith("h,"):
                    out.append(line)
                else:
                    out.append(line.rsplit(",", 1)[0])
            return out

        assert strip_time(self.read(paths[0])) == strip_time(self.read(paths[1]))

    def test_roundtrip_floats(self, tmp_path):
        rep = ConvergenceReport("sin", "approx-taylor", 4, 0,
                                rows=[RungRow(1 / 3, 3, 1.23456789e-11, 33, 17)])
        path = tmp_path / "rt.csv"
        emit_csv(rep, path)
        row = self.read(path).splitlines()[-1].split(",")
        assert float(row[0]) == 1 / 3
        assert float(row[1]) == 1.23456789e-11


class TestCompare:
    def test_identical_ladders_and_eval_ratio(self):
        result = compare_methods("rational-4", 4, [20, 40, 80, 160], seed=0)
        a, b = result.reports
        assert [r.h for r in a.rows] == [r.h for r in b.rows]
        assert result.evals_per_step[0] == predicted_evals_per_step(4) == 11
        assert result.evals_per_step[1] == 4  # classical RK4 stages
        assert result.time_ratio_at_finest > 0


class TestCli:
    def test_list_problems(self, capsys):
        assert cli.main(["list-problems"]) == 0
        out = capsys.readouterr().out
        for label in ("sin", "riccati", "log", "pendulum", "toggle", "rational-m"):
            assert label in out

    def test_stencil_prints_fractions(self, capsys):
        assert cli.main(["stencil", "1", "2"]) == 0
        out = capsys.readouterr().out
        assert "-2/3" in out and "1/12" in out

    def test_integrate_endpoint(self, capsys):
        rc = cli.main(["integrate", "--problem", "sin", "--order", "4", "--steps", "32"])
        assert rc == 0
        assert "endpoint" in capsys.readouterr().out

    def test_integrate_divergence_exit_code(self, capsys):
        rc = cli.main(["integrate", "--problem", "log", "--order", "6", "--steps", "10"])
        assert rc == 2

    def test_usage_error_exit_code(self, capsys):
        assert cli.main(["integrate", "--problem", "nosuch", "--steps", "8"]) == 1

    def test_bad_flag_exit_code(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["integrate", "--nonsense"])
        assert exc.value.code == 1

    def test_converge_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "study.csv"
        rc = cli.main(["converge", "--problem", "sin", "--order", "2",
                       "--ladder", "20,40,80,160", "--repeats", "1",
                       "--out", str(out)])
        assert rc == 0
        assert out.exists()
        text = out.read_text()
        assert text.startswith("# problem=sin")

    def test_cost_table(self, capsys):
        rc = cli.main(["cost", "--dims", "4:6", "--orders", "2,4"])
        assert rc == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "m,R,taylor_lower,approx,ratio"
        assert len(out.splitlines()) == 1 + 3 * 2

    def test_compare_command(self, tmp_path, capsys):
        rc = cli.main(["compare", "--problem", "rational-4", "--order", "4",
                       "--ladder", "20,40,80,160", "--repeats", "1",
                       "--out", str(tmp_path / "cmp")])
        assert rc == 0
        assert (tmp_path / "cmp-approx-taylor.csv").exists()
        assert (tmp_path / "cmp-rk4.csv").exists()

    def test_coeffs_roundtrip(self, tmp_path):
        path = tmp_path / "coeffs.csv"
        rc = cli.main(["integrate", "--problem", "rational-4", "--steps", "4",
                       "--coeffs-out", str(path)])
        assert rc == 0
        rc = cli.main(["integrate", "--problem", "rational-4", "--steps", "4",
                       "--coeffs", str(path)])
        assert rc == 0
