"""Config parsing, the experiment runner, and the command-line interface."""

import json
import math
import textwrap

import numpy as np
import pytest

from rmalm import (
    MetricsRow,
    fit_linear_rate,
    gen_linear_qp,
    read_metrics_csv,
    write_metrics_csv,
)
from rmalm._config import instance_digest, load_config
from rmalm.cli import emit_rate_report, main, run_experiment
from rmalm.exceptions import ConfigError, DataError


def write_config(tmp_path, body, name="run.ini"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(body))
    return str(path)


def scalar_oracle_config(tmp_path, out):
    return write_config(tmp_path, f"""
        [problem]
        kind = scalar_demo

        [solver]
        kind = oracle
        tol = 1e-10

        [output]
        dir = {out}
        """, name="oracle.ini")


def linear_qp_rmalm_config(tmp_path, out, *, seeds="0", extra="", report=""):
    return write_config(tmp_path, f"""
        [problem]
        kind = linear_qp
        n = 4
        num_constraints = 2
        seed = 3

        [solver]
        kind = rmalm
        penalty = 2.0
        budget0 = 5
        batch_obj = 10
        outer_iters = 8
        seeds = {seeds}
        {extra}

        [output]
        dir = {out}
        {report}
        """, name="rmalm.ini")


def strip_wall_column(path):
    return [line.rsplit(",", 1)[0] for line in path.read_text().splitlines()]


class TestConfigValidation:
    def test_all_errors_collected_and_labeled(self, tmp_path):
        cfg = write_config(tmp_path, """
            [problem]
            kind = qcqp
            n = ten
            obs_dim = 3
            bogus = 1

            [solver]
            kind = rmalm
            budget0 = 1
            budget_growth = 0.5

            [typo]
            x = 1
            """)
        with pytest.raises(ConfigError) as info:
            load_config(cfg)
        text = "; ".join(info.value.messages)
        assert "problem.n" in text
        assert "problem.num_constraints" in text  # required key missing
        assert "problem.bogus" in text
        assert "solver.budget0" in text
        assert "budget_growth" in text
        assert "unknown section [typo]" in text
        assert len(info.value.messages) >= 6

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="does not exist"):
            load_config(str(tmp_path / "nope.ini"))

    def test_salm_decay_exponent_must_be_square_summable(self, tmp_path):
        cfg = write_config(tmp_path, """
            [problem]
            kind = scalar_demo

            [solver]
            kind = salm
            decay_exponent = 0.5
            """)
        with pytest.raises(ConfigError, match="square-summable"):
            load_config(cfg)

    def test_report_eps_pair_required_together(self, tmp_path):
        cfg = write_config(tmp_path, """
            [problem]
            kind = scalar_demo

            [solver]
            kind = oracle

            [report]
            eps_fine = 1e-3
            """)
        with pytest.raises(ConfigError, match="together"):
            load_config(cfg)

    def test_report_eps_ordering(self, tmp_path):
        cfg = write_config(tmp_path, """
            [problem]
            kind = scalar_demo

            [solver]
            kind = oracle

            [report]
            eps_coarse = 1e-4
            eps_fine = 1e-2
            """)
        with pytest.raises(ConfigError, match="eps_fine"):
            load_config(cfg)

    def test_cvar_needs_a_returns_source(self, tmp_path):
        cfg = write_config(tmp_path, """
            [problem]
            kind = cvar

            [solver]
            kind = oracle
            """)
        with pytest.raises(ConfigError, match="returns_csv"):
            load_config(cfg)

    def test_main_maps_config_errors_to_exit_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, """
            [problem]
            kind = qcqp
            n = ten
            obs_dim = 3

            [solver]
            kind = rmalm
            """)
        code = main(["solve", "--config", cfg, "--out", str(tmp_path / "o")])
        assert code == 2
        err = capsys.readouterr().err
        assert "problem.n" in err
        assert "problem.num_constraints" in err


class TestOracleCommand:
    def test_writes_ground_truth_for_scalar_demo(self, tmp_path, capsys):
        out = tmp_path / "out"
        cfg = scalar_oracle_config(tmp_path, out)
        assert main(["oracle", "--config", cfg]) == 0
        payload = json.loads((out / "ground_truth.json").read_text())
        assert payload["x_opt"] == pytest.approx([1.0], abs=1e-8)
        assert payload["y_star"] == pytest.approx([2.0], abs=1e-7)
        assert payload["f_opt"] == pytest.approx(2.0, abs=1e-8)
        assert payload["kkt_residual"] <= 1e-9
        assert payload["instance_hash"] == instance_digest(
            {"kind": "scalar_demo", "seed": 0})
        assert "ground_truth.json" in capsys.readouterr().out

    def test_oracle_command_requires_oracle_kind(self, tmp_path):
        out = tmp_path / "out"
        cfg = linear_qp_rmalm_config(tmp_path, out)
        assert main(["oracle", "--config", cfg]) == 2

    def test_nonconvergent_oracle_exits_3(self, tmp_path, capsys):
        cfg = write_config(tmp_path, f"""
            [problem]
            kind = linear_qp
            n = 4
            num_constraints = 2

            [solver]
            kind = oracle
            tol = 1e-12
            penalty = 0.01
            max_outer = 1

            [output]
            dir = {tmp_path / "out"}
            """)
        assert main(["oracle", "--config", cfg]) == 3
        assert "numerical failure" in capsys.readouterr().err


class TestSolveCommand:
    def test_rmalm_run_writes_per_seed_metrics(self, tmp_path):
        out = tmp_path / "out"
        cfg = linear_qp_rmalm_config(tmp_path, out, seeds="0, 1")
        assert main(["solve", "--config", cfg]) == 0
        for seed in (0, 1):
            lines = (out / f"metrics_seed{seed}.csv").read_text().splitlines()
            assert lines[0] == "k,cum_inner,obj,avg_viol,max_viol,dist_sq_x,dist_sq_y,wall_time_s"
            assert len(lines) == 1 + 9  # header + iterations 0..8
        summary = json.loads((out / "summary.json").read_text())
        assert set(summary["seeds"]) == {"0", "1"}
        for entry in summary["seeds"].values():
            assert entry["dist_sq_y"] >= 0.0
            assert entry["cum_inner"] > 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["schema_version"] == 1
        assert manifest["seeds"] == [0, 1]
        assert manifest["config"]["solver"]["kind"] == "rmalm"

    def test_rerun_is_identical_except_wall_time(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        cfg1 = linear_qp_rmalm_config(tmp_path, out1)
        assert main(["solve", "--config", cfg1]) == 0
        assert main(["solve", "--config", cfg1, "--out", str(out2)]) == 0
        first = strip_wall_column(out1 / "metrics_seed0.csv")
        second = strip_wall_column(out2 / "metrics_seed0.csv")
        assert first == second

    def test_seed_override_flag(self, tmp_path):
        out = tmp_path / "out"
        cfg = linear_qp_rmalm_config(tmp_path, out)
        assert main(["solve", "--config", cfg, "--seeds", "5"]) == 0
        assert (out / "metrics_seed5.csv").exists()
        assert not (out / "metrics_seed0.csv").exists()

    def test_pdsg_run_writes_averaged_metrics(self, tmp_path):
        out = tmp_path / "out"
        cfg = write_config(tmp_path, f"""
            [problem]
            kind = linear_qp
            n = 4
            num_constraints = 2

            [solver]
            kind = pdsg
            step0 = 0.2
            iters = 50
            record_every = 10
            batch_obj = 5

            [output]
            dir = {out}
            """)
        assert main(["solve", "--config", cfg]) == 0
        assert (out / "metrics_seed0.csv").exists()
        assert (out / "metrics_avg_seed0.csv").exists()

    def test_salm_with_ground_truth_pipeline(self, tmp_path):
        oracle_out = tmp_path / "oracle"
        assert main(["oracle", "--config",
                     scalar_oracle_config(tmp_path, oracle_out)]) == 0
        out = tmp_path / "salm"
        cfg = write_config(tmp_path, f"""
            [problem]
            kind = scalar_demo

            [solver]
            kind = salm
            noise_scale = 0.0
            outer_iters = 30
            seeds = 0
            ground_truth = {oracle_out / "ground_truth.json"}

            [output]
            dir = {out}
            """, name="salm.ini")
        assert main(["solve", "--config", cfg]) == 0
        lines = (out / "salm_seed0.csv").read_text().splitlines()
        assert lines[0] == "seed,k,c_k,dist_sq_y"
        assert len(lines) == 1 + 31
        summary = json.loads((out / "summary.json").read_text())
        entry = summary["seeds"]["0"]
        assert entry["final_dist_sq_y"] < 0.01 * entry["initial_dist_sq_y"]

    def test_salm_without_dual_truth_is_a_config_error(self, tmp_path, capsys):
        cfg = write_config(tmp_path, f"""
            [problem]
            kind = cvar
            periods = 6
            assets = 3

            [solver]
            kind = salm
            seeds = 0
            outer_iters = 5

            [output]
            dir = {tmp_path / "out"}
            """)
        assert main(["solve", "--config", cfg]) == 2
        assert "oracle command first" in capsys.readouterr().err

    def test_stale_ground_truth_digest_rejected(self, tmp_path, capsys):
        truth = tmp_path / "ground_truth.json"
        truth.write_text(json.dumps({
            "instance_hash": "deadbeef",
            "x_opt": [0.0] * 4, "y_star": [0.0] * 2, "f_opt": 0.0,
        }))
        out = tmp_path / "out"
        cfg = linear_qp_rmalm_config(tmp_path, out,
                                     extra=f"ground_truth = {truth}")
        assert main(["solve", "--config", cfg]) == 2
        assert "belongs to instance" in capsys.readouterr().err

    def test_unreachable_accuracy_target_exits_3(self, tmp_path, capsys):
        out = tmp_path / "out"
        cfg = linear_qp_rmalm_config(
            tmp_path, out, seeds="0, 1",
            report="\n[report]\neps_coarse = 1e-29\neps_fine = 1e-30\n")
        assert main(["solve", "--config", cfg]) == 3
        assert "never reached" in capsys.readouterr().err

    def test_budget_exhaustion_exits_3(self, tmp_path, capsys):
        cfg = write_config(tmp_path, f"""
            [problem]
            kind = scalar_demo

            [solver]
            kind = rmalm
            budget0 = 5
            budget_growth = 2.0
            outer_iters = 30
            total_budget_cap = 100

            [output]
            dir = {tmp_path / "out"}
            """)
        assert main(["solve", "--config", cfg]) == 3
        assert "numerical failure" in capsys.readouterr().err


class TestGenerateCommand:
    def test_writes_instance_manifest(self, tmp_path, capsys):
        out = tmp_path / "out"
        cfg = linear_qp_rmalm_config(tmp_path, out)
        assert main(["generate", "--config", cfg]) == 0
        payload = json.loads((out / "instance.json").read_text())
        assert payload["dim"] == 4
        assert payload["num_constraints"] == 2
        assert payload["schema_version"] == 1
        assert payload["meta"]["mu"] > 0
        assert payload["meta"]["alpha"] > 0
        assert len(payload["feasible_witness"]) == 4
        assert "instance.json" in capsys.readouterr().out


class TestReportFlows:
    def geometric_csvs(self, tmp_path, scales=(1.1, 0.9), n=10):
        paths = []
        for idx, scale in enumerate(scales):
            rows = [
                MetricsRow(k=k, cum_inner=5 * k, obj=0.0, avg_viol=0.0,
                           max_viol=0.0, dist_sq_y=scale * 4.0 * 0.5**k)
                for k in range(n)
            ]
            path = tmp_path / f"seed{idx}.csv"
            write_metrics_csv(path, rows)
            paths.append(str(path))
        return paths

    def test_rate_report_fits_mean_trajectory(self, tmp_path, capsys):
        paths = self.geometric_csvs(tmp_path)
        out = tmp_path / "report"
        code = main(["report", *paths, "--out", str(out),
                     "--alpha", "1.0", "--penalty", "1.0"])
        assert code == 0
        report = json.loads((out / "rate_report.json").read_text())
        assert report["n_seeds"] == 2
        assert report["slope"] == pytest.approx(math.log(0.5), abs=1e-12)
        assert report["r_squared"] == pytest.approx(1.0, abs=1e-12)
        assert report["measured_rho"] == pytest.approx(0.5, abs=1e-12)
        assert report["theta"] == 0.25
        assert report["predicted_rho"] == 0.5
        assert "slope" in capsys.readouterr().out

    def test_report_needs_two_seeds(self, tmp_path):
        (path,) = self.geometric_csvs(tmp_path, scales=(1.0,))
        with pytest.raises(ConfigError, match="at least 2"):
            emit_rate_report([path], str(tmp_path / "r.json"))

    def test_report_rejects_missing_dual_distances(self, tmp_path):
        paths = []
        for idx in range(2):
            rows = [MetricsRow(k=k, cum_inner=k, obj=0.0, avg_viol=0.0,
                               max_viol=0.0) for k in range(6)]
            path = tmp_path / f"s{idx}.csv"
            write_metrics_csv(path, rows)
            paths.append(str(path))
        with pytest.raises(DataError, match="dist_sq_y"):
            emit_rate_report(paths, str(tmp_path / "r.json"))

    def test_report_rejects_mismatched_trajectories(self, tmp_path):
        paths = self.geometric_csvs(tmp_path)
        extra = self.geometric_csvs(tmp_path / "..", n=7)  # different length
        with pytest.raises(DataError, match="mismatched"):
            emit_rate_report([paths[0], extra[1]], str(tmp_path / "r.json"))

    def test_report_maps_bad_csv_to_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("k,obj\n0,1\n")
        other = self.geometric_csvs(tmp_path)[0]
        code = main(["report", str(bad), other, "--out", str(tmp_path / "r")])
        assert code == 2
        assert "has columns" in capsys.readouterr().err

    def test_report_maps_missing_file_to_exit_2(self, tmp_path, capsys):
        paths = self.geometric_csvs(tmp_path)
        code = main(["report", str(tmp_path / "ghost.csv"), paths[0],
                     "--out", str(tmp_path / "r")])
        assert code == 2
        assert "i/o error" in capsys.readouterr().err


class TestRunExperimentReporting:
    def test_rate_fit_and_complexity_recomputed_from_outputs(self, tmp_path):
        out1 = tmp_path / "first"
        cfg1 = linear_qp_rmalm_config(tmp_path, out1, seeds="0, 1")
        summary1 = run_experiment(cfg1)
        assert "rate_fit" in summary1
        assert math.isfinite(summary1["rate_fit"]["slope"])
        alpha = gen_linear_qp(4, 2, seed=3).meta["alpha"]
        assert summary1["rate_fit"]["theta"] == pytest.approx(
            (1.0 + 2.0 * alpha) ** -2)

        # derive reachable accuracy targets from the measured mean trajectory,
        # then rerun with a [report] section and check the recorded budgets
        trajs = [read_metrics_csv(out1 / f"metrics_seed{s}.csv") for s in (0, 1)]
        means = [float(np.mean([t[i].dist_sq_y for t in trajs]))
                 for i in range(len(trajs[0]))]
        cums = [trajs[0][i].cum_inner for i in range(len(trajs[0]))]
        assert min(means) < 0.9 * means[0]
        eps_coarse = 0.9 * means[0]
        eps_fine = min(means)
        out2 = tmp_path / "second"
        cfg2 = linear_qp_rmalm_config(
            tmp_path, out2, seeds="0, 1",
            report=(f"\n[report]\neps_coarse = {eps_coarse!r}\n"
                    f"eps_fine = {eps_fine!r}\nrate_iters = 4\n"))
        summary2 = run_experiment(cfg2)
        expect_coarse = next(c for c, v in zip(cums, means) if v <= eps_coarse)
        expect_fine = next(c for c, v in zip(cums, means) if v <= eps_fine)
        assert summary2["complexity"]["budget_coarse"] == expect_coarse
        assert summary2["complexity"]["budget_fine"] == expect_fine
        assert summary2["complexity"]["measured_ratio"] == pytest.approx(
            expect_fine / expect_coarse)

        # rate_iters=4 restricts the fit to the first five outer iterations
        pts = [(k, v) for k, v in enumerate(means[:5]) if v > 0]
        fit = fit_linear_rate(pts)
        assert summary2["rate_fit"]["slope"] == pytest.approx(fit.slope, abs=1e-12)
