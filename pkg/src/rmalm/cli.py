"""Batch experiment runner.

Subcommands::

    rmalm generate --config RUN.ini --out DIR   instance manifest
    rmalm solve    --config RUN.ini --out DIR   solver run, metrics CSVs
    rmalm oracle   --config RUN.ini --out DIR   ground-truth file
    rmalm report   --out DIR CSV [CSV ...]      rate report from metrics CSVs

Exit status: 0 on success, 2 on validation/config/precondition errors
(every offending field listed), 3 on numerical failures (nonconvergence,
exhausted budgets, unreachable accuracy targets).
"""

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._config import (
    build_problem,
    build_solver_config,
    instance_digest,
    load_config,
)
from .exceptions import (
    AssumptionError,
    BudgetExceededError,
    ConfigError,
    DataError,
    NoFeasibleIterateError,
    NonconvergenceError,
    UnreachableAccuracyError,
)
from .metrics import (
    SCHEMA_VERSION,
    read_metrics_csv,
    write_manifest,
    write_metrics_csv,
)
from .problem import make_holdout_objective
from .solvers.exact_oracle import solve_exact
from .solvers.noise_harness import salm_run
from .solvers.primal_dual import pdsg_solve
from .solvers.robbins_monro import solve as rmalm_solve
from .theory import complexity_check, contraction_theta, fit_linear_rate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _resolve_out_dir(args_out, config):
    out = args_out or config["output"].get("dir")
    if not out:
        raise ConfigError(["output.dir: required (or pass --out)"])
    os.makedirs(out, exist_ok=True)
    return out


def _clean_number(value):
    """NaN-free representation for the JSON summary."""
    value = float(value)
    return None if math.isnan(value) else value


def _load_ground_truth(path, digest):
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise ConfigError([f"solver.ground_truth: cannot read {path}: {exc}"]) from None
    except json.JSONDecodeError as exc:
        raise ConfigError([f"solver.ground_truth: {path} is not valid JSON: {exc}"]) from None
    if payload.get("instance_hash") != digest:
        raise ConfigError([
            f"solver.ground_truth: {path} belongs to instance "
            f"{payload.get('instance_hash')}, but this config describes {digest}"
        ])
    return (np.asarray(payload["x_opt"], dtype=float),
            np.asarray(payload["y_star"], dtype=float),
            float(payload["f_opt"]))


def _references(problem, solver_cfg, digest):
    """Primal/dual/objective reference values for the distance columns."""
    if solver_cfg.get("ground_truth"):
        return _load_ground_truth(solver_cfg["ground_truth"], digest)
    meta = problem.meta
    return meta.get("x_star"), meta.get("y_star"), meta.get("f_star")


def _resolve_auto_steps(solver_cfg, problem):
    """Resolve eta/beta 'auto' against the instance metadata."""
    mu = problem.meta.get("mu")
    eta = solver_cfg["eta"]
    if eta == "auto":
        eta = 2.0 / mu if mu and mu > 0 else 1.0
    beta = solver_cfg["beta"]
    if beta == "auto":
        if mu and mu > 0:
            beta = max(1.0, 2.0 * mu * eta * solver_cfg["tau"] - 1.0) + 0.5
        else:
            beta = 1.0
    return eta, beta


def _write_salm_csv(path, seed, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("seed", "k", "c_k", "dist_sq_y"))
        for row in rows:
            writer.writerow([seed, row.k, format(row.penalty, ".17g"),
                             format(row.dist_sq_y, ".17g")])


def _run_oracle(problem, params, digest, out):
    solution = solve_exact(problem, params["tol"], penalty=params["penalty"],
                           inner_tol=params["inner_tol"],
                           max_outer=params["max_outer"])
    payload = {
        "instance_hash": digest,
        "x_opt": solution.x_opt,
        "y_star": solution.y_star,
        "f_opt": solution.f_opt,
        "tol": solution.tol,
        "kkt_residual": solution.kkt_residual,
        "outer_iters": solution.outer_iters,
    }
    path = os.path.join(out, "ground_truth.json")
    write_manifest(path, payload)
    return {
        "ground_truth": path,
        "f_opt": solution.f_opt,
        "kkt_residual": solution.kkt_residual,
        "outer_iters": solution.outer_iters,
    }


def _run_salm(problem, solver_cfg, y_ref, out, summary):
    if y_ref is None:
        raise ConfigError([
            "solver.ground_truth: required for salm runs on instances without "
            "an analytic dual solution (run the oracle command first)"
        ])
    cfg = build_solver_config(solver_cfg)
    results = salm_run(problem, cfg, y_ref)
    trajectories = {}
    for seed, trace in results.items():
        path = os.path.join(out, f"salm_seed{seed}.csv")
        _write_salm_csv(path, seed, trace.rows)
        summary["seeds"][str(seed)] = {
            "final_dist_sq_y": _clean_number(trace.rows[-1].dist_sq_y),
            "initial_dist_sq_y": _clean_number(trace.rows[0].dist_sq_y),
            "final_max_viol": _clean_number(trace.rows[-1].max_viol),
            "file": path,
        }
        trajectories[seed] = [(row.k, row.k, row.dist_sq_y) for row in trace.rows]
    return trajectories


def _run_stochastic(problem, solver_cfg, kind, x_ref, y_ref, objective_fn,
                    threads, out, summary):
    eta = beta = None
    if kind == "rmalm":
        eta, beta = _resolve_auto_steps(solver_cfg, problem)

    def one_seed(seed):
        if kind == "rmalm":
            cfg = build_solver_config(solver_cfg, seed=seed, eta=eta, beta=beta)
            return seed, rmalm_solve(problem, cfg, x_ref=x_ref, y_ref=y_ref,
                                     objective_fn=objective_fn)
        cfg = build_solver_config(solver_cfg, seed=seed)
        return seed, pdsg_solve(problem, cfg, x_ref=x_ref, y_ref=y_ref,
                                objective_fn=objective_fn)

    seed_list = list(solver_cfg["seeds"])
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            traces = dict(pool.map(one_seed, seed_list))
    else:
        traces = dict(one_seed(s) for s in seed_list)

    trajectories = {}
    for seed in seed_list:
        trace = traces[seed]
        path = os.path.join(out, f"metrics_seed{seed}.csv")
        write_metrics_csv(path, trace.rows)
        if trace.avg_rows:
            write_metrics_csv(os.path.join(out, f"metrics_avg_seed{seed}.csv"),
                              trace.avg_rows)
        last = trace.rows[-1]
        summary["seeds"][str(seed)] = {
            "obj": _clean_number(last.obj),
            "avg_viol": _clean_number(last.avg_viol),
            "max_viol": _clean_number(last.max_viol),
            "dist_sq_x": _clean_number(last.dist_sq_x),
            "dist_sq_y": _clean_number(last.dist_sq_y),
            "cum_inner": last.cum_inner,
            "file": path,
        }
        trajectories[seed] = [(r.k, r.cum_inner, r.dist_sq_y) for r in trace.rows]
    return trajectories


def _mean_trajectory(trajectories):
    """Seed-averaged (k, cum_inner, mean dist_sq_y); [] when any NaN."""
    if not trajectories:
        return []
    lengths = {len(rows) for rows in trajectories.values()}
    if len(lengths) != 1:
        raise DataError("seed trajectories have mismatched lengths")
    first = next(iter(trajectories.values()))
    means = []
    for idx, (k, cum, _) in enumerate(first):
        vals = [rows[idx][2] for rows in trajectories.values()]
        if any(math.isnan(v) for v in vals):
            return []
        means.append((k, cum, float(np.mean(vals))))
    return means


def _rate_and_complexity(trajectories, report_cfg, solver_cfg, problem):
    """Optional rate fit and complexity check for the summary report."""
    out = {}
    mean_traj = _mean_trajectory(trajectories)
    positive = [(k, v) for k, _, v in mean_traj if v > 0]
    if len(trajectories) >= 2 and len(positive) >= 5:
        limit = report_cfg.get("rate_iters")
        pts = positive if limit is None else [(k, v) for k, v in positive if k <= limit]
        if len(pts) >= 5:
            fit = fit_linear_rate(pts)
            out["rate_fit"] = {"slope": fit.slope, "r_squared": fit.r_squared,
                               "measured_rho": math.exp(fit.slope)}
            alpha = report_cfg.get("alpha")
            if alpha is None:
                alpha = problem.meta.get("alpha")
            penalty = solver_cfg.get("penalty") or solver_cfg.get("penalty0")
            if alpha and penalty:
                info = contraction_theta(alpha, penalty)
                out["rate_fit"]["theta"] = info.theta
                out["rate_fit"]["predicted_rho"] = info.rho
    coarse, fine = report_cfg.get("eps_coarse"), report_cfg.get("eps_fine")
    if coarse is not None and fine is not None and mean_traj:
        budgets = {}
        for label, eps in (("coarse", coarse), ("fine", fine)):
            hit = next((cum for _, cum, v in mean_traj if v <= eps), None)
            if hit is None:
                raise UnreachableAccuracyError(
                    f"mean trajectory never reached the eps_{label}={eps:.3e} "
                    f"accuracy target; smallest value was "
                    f"{min(v for _, _, v in mean_traj):.3e}"
                )
            budgets[label] = hit
        q = solver_cfg.get("budget_exponent", 1.0)
        report = complexity_check(coarse, fine, (budgets["coarse"], budgets["fine"]),
                                  q, factor=report_cfg.get("agree_factor", 2.0))
        out["complexity"] = {
            "budget_coarse": budgets["coarse"], "budget_fine": budgets["fine"],
            "measured_ratio": report.measured_ratio,
            "predicted_ratio": report.predicted_ratio,
            "agrees": report.agrees,
        }
    return out


def run_experiment(config_path, out_dir=None, seeds=None, threads=1):
    """Run the experiment described by a config file.

    Dispatches on the configured solver kind, writes its output files
    (per-seed metrics CSVs, a ground-truth file for oracle runs, a
    sidecar manifest recording the full config, and a summary report
    with final metrics plus optional rate fit and complexity check) and
    returns the summary dict.
    """
    config = load_config(config_path)
    out = _resolve_out_dir(out_dir, config)
    problem_cfg = config["problem"]
    solver_cfg = dict(config["solver"])
    if seeds is not None:
        solver_cfg["seeds"] = tuple(seeds)
    digest = instance_digest(problem_cfg)
    problem = build_problem(problem_cfg)
    kind = solver_cfg["kind"]

    write_manifest(os.path.join(out, "manifest.json"), {
        "command": "solve" if kind != "oracle" else "oracle",
        "schema_version": SCHEMA_VERSION,
        "instance_hash": digest,
        "config": {"problem": problem_cfg, "solver": solver_cfg,
                   "report": config["report"]},
        "seeds": list(solver_cfg["seeds"]),
    })

    summary = {"instance_hash": digest, "solver": kind, "output_dir": out,
               "seeds": {}}
    if kind == "oracle":
        params = build_solver_config(solver_cfg)
        summary["oracle"] = _run_oracle(problem, params, digest, out)
        write_manifest(os.path.join(out, "summary.json"), summary)
        return summary

    x_ref, y_ref, _ = _references(problem, solver_cfg, digest)
    objective_fn = None
    if problem.obj_sampler is not None and problem.finite_sum_size is None:
        objective_fn = make_holdout_objective(
            problem, solver_cfg["eval_samples"], seed=problem_cfg.get("seed", 0))

    if kind == "salm":
        trajectories = _run_salm(problem, solver_cfg, y_ref, out, summary)
    else:
        trajectories = _run_stochastic(problem, solver_cfg, kind, x_ref, y_ref,
                                       objective_fn, threads, out, summary)
    summary.update(_rate_and_complexity(trajectories, config["report"],
                                        solver_cfg, problem))
    write_manifest(os.path.join(out, "summary.json"), summary)
    return summary


def emit_rate_report(csv_paths, out_path, alpha=None, penalty=None):
    """Average dual-distance trajectories across seeds and fit the rate.

    Needs at least two per-seed metrics CSVs with finite ``dist_sq_y``
    columns; writes a JSON report holding the fitted slope, R², the
    per-iteration table, and the predicted-vs-measured decay factors
    when ``alpha`` and ``penalty`` are supplied.
    """
    if len(csv_paths) < 2:
        raise ConfigError(["rate report needs at least 2 per-seed metrics CSVs"])
    trajectories = {}
    for path in csv_paths:
        rows = read_metrics_csv(path)
        traj = [(row.k, row.cum_inner, row.dist_sq_y) for row in rows]
        if any(math.isnan(v) for _, _, v in traj):
            raise DataError(
                f"metrics file {path} has empty dist_sq_y values; rate reports "
                "need runs with known ground truth"
            )
        trajectories[path] = traj
    mean_traj = _mean_trajectory(trajectories)
    pts = [(k, v) for k, _, v in mean_traj if v > 0]
    fit = fit_linear_rate(pts)
    report = {
        "n_seeds": len(csv_paths),
        "points": len(pts),
        "slope": fit.slope,
        "r_squared": fit.r_squared,
        "measured_rho": math.exp(fit.slope),
        "trajectory": [{"k": k, "mean_dist_sq_y": v} for k, _, v in mean_traj],
    }
    if alpha is not None and penalty is not None:
        info = contraction_theta(alpha, penalty)
        report["theta"] = info.theta
        report["predicted_rho"] = info.rho
        report["fixed_budget_ok"] = info.fixed_budget_ok
    write_manifest(out_path, report)
    return report


def cmd_generate(args):
    config = load_config(args.config)
    out = _resolve_out_dir(args.out, config)
    problem_cfg = config["problem"]
    problem = build_problem(problem_cfg)
    payload = {
        "command": "generate",
        "instance_hash": instance_digest(problem_cfg),
        "problem": problem_cfg,
        "dim": problem.dim,
        "num_constraints": problem.num_constraints,
        "meta": {k: v for k, v in problem.meta.items()
                 if isinstance(v, (int, float, str))},
        "feasible_witness": problem.feasible_witness,
    }
    path = os.path.join(out, "instance.json")
    write_manifest(path, payload)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_solve(args):
    summary = run_experiment(args.config, out_dir=args.out, seeds=args.seeds,
                             threads=args.threads)
    print(f"wrote results for {len(summary['seeds'])} seed(s) "
          f"to {summary['output_dir']}")
    return EXIT_OK


def cmd_oracle(args):
    config = load_config(args.config)
    if config["solver"]["kind"] != "oracle":
        raise ConfigError(["solver.kind: the oracle command requires kind = oracle"])
    summary = run_experiment(args.config, out_dir=args.out)
    print(f"wrote {summary['oracle']['ground_truth']} "
          f"(kkt residual {summary['oracle']['kkt_residual']:.3e})")
    return EXIT_OK


def cmd_report(args):
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "rate_report.json")
    report = emit_rate_report(args.csvs, path, alpha=args.alpha, penalty=args.penalty)
    print(f"wrote {path} (slope {report['slope']:.4f}, "
          f"R^2 {report['r_squared']:.4f})")
    return EXIT_OK


def _parse_seed_list(text):
    try:
        return tuple(int(p.strip()) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rmalm",
        description="Benchmark runner for stochastic augmented Lagrangian solvers",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, blurb in (
            ("generate", cmd_generate, "write an instance manifest"),
            ("solve", cmd_solve, "run the configured solver over all seeds"),
            ("oracle", cmd_oracle, "compute a ground-truth file")):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--config", required=True, help="run config (INI)")
        p.add_argument("--out", default=None,
                       help="output directory (overrides [output] dir)")
        if name == "solve":
            p.add_argument("--seeds", type=_parse_seed_list, default=None,
                           help="comma-separated seed list (overrides config)")
            p.add_argument("--threads", type=int, default=1,
                           help="parallel seed workers")
        p.set_defaults(fn=fn)
    p = sub.add_parser("report", help="fit a dual convergence rate from metrics CSVs")
    p.add_argument("csvs", nargs="+", help="per-seed metrics CSVs")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--alpha", type=float, default=None,
                   help="dual strong-concavity modulus for the predicted rate")
    p.add_argument("--penalty", type=float, default=None,
                   help="penalty parameter the runs used")
    p.set_defaults(fn=cmd_report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        for msg in exc.messages:
            print(f"config error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, AssumptionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonconvergenceError, BudgetExceededError, UnreachableAccuracyError,
            NoFeasibleIterateError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
