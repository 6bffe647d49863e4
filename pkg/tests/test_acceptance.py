"""End-to-end acceptance gate for the solver library.

Ten independent criteria, each printing exactly one
``criterion NN PASS/FAIL`` line with the measured quantities and their
targets; run ``pytest tests/test_acceptance.py -s`` to see every line.
The desk-scale solver checks pin their instances and seeds, so each
criterion is a deterministic computation.
"""

import itertools
import time

import numpy as np
import pytest

from rmalm import (
    ConfigError,
    MetricsRow,
    RmalmConfig,
    RobbinsMonroALM,
    SalmConfig,
    budget_to_reach,
    complexity_check,
    exact_subproblem,
    fit_linear_rate,
    gen_cvar,
    gen_linear_qp,
    gen_qcqp,
    gen_returns,
    make_box_projector,
    make_product_projector,
    multiplier_update,
    project_ball,
    project_simplex,
    salm_run,
    solve,
    solve_exact,
    write_metrics_csv,
)
from rmalm.auglag import PenaltyState, SampleBatch, auglag_grad_full, auglag_value, stoch_grad


def report(num, ok, detail):
    print(f"criterion {num:02d} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num:02d}: {detail}"


def test_criterion_01_singleton_batches_average_to_full_gradient():
    t0 = time.perf_counter()
    prob = gen_qcqp(3, 2, 2, mode="finite_sum", nsamples=4, seed=1)
    gen = np.random.default_rng(7)
    worst = 0.0
    for _ in range(5):
        x = gen.uniform(-2.0, 2.0, size=3)
        state = PenaltyState(float(gen.uniform(0.5, 10.0)),
                             gen.uniform(0.0, 2.0, size=2))
        total = np.zeros(3)
        for i in range(4):
            for j in range(2):
                batch = SampleBatch(obj_draws=np.array([i]),
                                    con_indices=np.array([j]))
                total += stoch_grad(prob, x, state, batch)
        full = auglag_grad_full(prob, x, state)
        worst = max(worst, float(np.max(np.abs(total / 8.0 - full))))
    elapsed = time.perf_counter() - t0
    report(1, worst <= 1e-12 and elapsed < 1.0,
           f"exhaustive singleton-batch average vs full gradient: max "
           f"deviation {worst:.2e} (tol 1e-12), {elapsed:.2f}s (cap 1s)")


def test_criterion_02_gradient_matches_finite_differences():
    t0 = time.perf_counter()
    prob = gen_qcqp(4, 3, 3, mode="finite_sum", nsamples=10, seed=2)
    gen = np.random.default_rng(3)
    worst = 0.0
    for _ in range(100):
        x = gen.uniform(-3.0, 3.0, size=4)
        state = PenaltyState(float(10.0 ** gen.uniform(-1.0, 1.0)),
                             gen.uniform(0.0, 2.0, size=3))
        grad = auglag_grad_full(prob, x, state)
        fd = np.zeros(4)
        for i in range(4):
            h = 1e-6 * max(1.0, abs(x[i]))
            e = np.zeros(4)
            e[i] = h
            fd[i] = (auglag_value(prob, x + e, state)
                     - auglag_value(prob, x - e, state)) / (2.0 * h)
        rel = float(np.linalg.norm(fd - grad) / max(1.0, np.linalg.norm(grad)))
        worst = max(worst, rel)
    elapsed = time.perf_counter() - t0
    report(2, worst <= 1e-5 and elapsed < 5.0,
           f"central finite differences at 100 random (x, y, c): worst "
           f"relative error {worst:.2e} (tol 1e-5), {elapsed:.2f}s (cap 5s)")


def simplex_by_enumeration(z):
    """Brute-force projection: try every support set, keep the closest."""
    n = z.size
    best, best_d = None, np.inf
    for r in range(1, n + 1):
        for support in itertools.combinations(range(n), r):
            idx = list(support)
            shift = (z[idx].sum() - 1.0) / r
            cand = np.zeros(n)
            cand[idx] = z[idx] - shift
            if cand.min() >= -1e-12:
                d = float(np.linalg.norm(cand - z))
                if d < best_d:
                    best, best_d = cand, d
    return best


def test_criterion_03_projection_suite():
    t0 = time.perf_counter()
    center = np.array([0.5, -1.0, 0.0, 2.0, 1.0, -0.5])
    projectors = {
        "box": make_box_projector(-1.0, 3.0),
        "ball": lambda z: project_ball(z, 2.0, center=center),
        "simplex": project_simplex,
        "product": make_product_projector(
            [((0, 2), make_box_projector(-1.0, 1.0)),
             ((2, 6), project_simplex)], 6),
    }
    gen = np.random.default_rng(11)
    worst_idem, worst_expand = 0.0, 0.0
    for name, proj in projectors.items():
        pts = gen.normal(scale=3.0, size=(1000, 6))
        for z in pts:
            p = proj(z)
            worst_idem = max(worst_idem, float(np.linalg.norm(proj(p) - p)))
        for a, b in zip(pts[:500], pts[500:]):
            gap = (np.linalg.norm(proj(a) - proj(b))
                   - np.linalg.norm(a - b))
            worst_expand = max(worst_expand, float(gap))
    worst_simplex = 0.0
    for n in range(2, 9):
        for z in gen.normal(scale=2.0, size=(100, n)):
            diff = np.linalg.norm(project_simplex(z) - simplex_by_enumeration(z))
            worst_simplex = max(worst_simplex, float(diff))
    elapsed = time.perf_counter() - t0
    ok = (worst_idem <= 1e-12 and worst_expand <= 1e-12
          and worst_simplex <= 1e-8 and elapsed < 10.0)
    report(3, ok,
           f"idempotence {worst_idem:.2e} and expansion excess "
           f"{worst_expand:.2e} over 1000 inputs (tol 1e-12); simplex vs "
           f"enumeration {worst_simplex:.2e} (tol 1e-8), {elapsed:.1f}s (cap 10s)")


def test_criterion_04_desk_qcqp_convergence():
    t0 = time.perf_counter()
    prob = gen_qcqp(10, 5, 5, mode="finite_sum", nsamples=1000, seed=0)
    oracle = solve_exact(prob, 1e-10)
    est = RobbinsMonroALM(penalty=10.0, budget0=5, batch_obj=50,
                          outer_iters=15, seed=0)
    est.fit(prob, x_ref=oracle.x_opt, y_ref=oracle.y_star)
    last = est.trace_.rows[-1]
    elapsed = time.perf_counter() - t0
    ok = last.dist_sq_x <= 1e-3 and last.avg_viol <= 1e-4 and elapsed < 60.0
    report(4, ok,
           f"desk run (n=10, 5 samples/5 constraints, N=1000, 15 outers): "
           f"final primal error {last.dist_sq_x:.2e} (tol 1e-3), avg "
           f"violation {last.avg_viol:.2e} (tol 1e-4), {elapsed:.1f}s (cap 60s)")


def test_criterion_05_linear_dual_rate():
    t0 = time.perf_counter()
    prob = gen_linear_qp(6, 3, seed=5)
    eta = 2.0 / prob.meta["mu"]
    trajs = []
    for seed in range(10):
        cfg = RmalmConfig(penalty=1.0, budget0=5, budget_growth=2.0,
                          batch_obj=10, eta=eta, beta=3.5, outer_iters=12,
                          seed=seed, store_iterates=False)
        trace = solve(prob, cfg)
        trajs.append([row.dist_sq_y for row in trace.rows])
    means = np.mean(trajs, axis=0)
    fit = fit_linear_rate(list(enumerate(means[:13])))
    elapsed = time.perf_counter() - t0
    ok = fit.slope < 0.0 and fit.r_squared >= 0.9 and elapsed < 120.0
    report(5, ok,
           f"mean dual error over 10 seeds, first 12 outers: slope "
           f"{fit.slope:.3f} (< 0), R^2 {fit.r_squared:.4f} (>= 0.9), "
           f"decay factor {np.exp(fit.slope):.3f}/iter, {elapsed:.1f}s (cap 120s)")


def test_criterion_06_exact_dual_contraction():
    t0 = time.perf_counter()
    prob = gen_linear_qp(6, 3, seed=5)
    penalty = 2.0
    bound = 1.0 / (1.0 + prob.meta["alpha"] * penalty)
    y_star = prob.meta["y_star"]
    y = np.zeros(prob.num_constraints)
    x = prob.start_point()
    worst_excess, steps = -np.inf, 0
    while np.linalg.norm(y - y_star) >= 1e-8 and steps < 80:
        x = exact_subproblem(prob, PenaltyState(penalty, y), x0=x, tol=1e-13)
        y_next = multiplier_update(y, penalty, prob.h_all(x))
        ratio = (np.linalg.norm(y_next - y_star)
                 / np.linalg.norm(y - y_star))
        worst_excess = max(worst_excess, ratio - bound)
        y = y_next
        steps += 1
    elapsed = time.perf_counter() - t0
    converged = np.linalg.norm(y - y_star) < 1e-8
    ok = converged and worst_excess <= 1e-4 and elapsed < 30.0
    report(6, ok,
           f"per-step dual ratio vs (1+alpha*c)^-1 = {bound:.4f} over "
           f"{steps} exact outer steps: worst excess {worst_excess:.2e} "
           f"(tol 1e-4), {elapsed:.1f}s (cap 30s)")


def test_criterion_07_noise_injected_decaying_penalty_trend():
    t0 = time.perf_counter()
    prob = gen_linear_qp(6, 3, seed=5)
    cfg = SalmConfig(penalty0=1.0, decay_exponent=0.75, noise_scale=0.1,
                     outer_iters=200, seeds=tuple(range(20)))
    results = salm_run(prob, cfg, prob.meta["y_star"])
    finals = [tr.rows[-1].dist_sq_y for tr in results.values()]
    initials = [tr.rows[0].dist_sq_y for tr in results.values()]
    ratio = float(np.median(finals) / np.median(initials))
    validator_rejects = False
    try:
        SalmConfig(decay_exponent=0.5).validate()
    except ConfigError:
        validator_rejects = True
    elapsed = time.perf_counter() - t0
    ok = ratio <= 0.1 and validator_rejects and elapsed < 120.0
    report(7, ok,
           f"20 noisy runs, 200 decaying-penalty steps: median final/initial "
           f"dual error {ratio:.2e} (tol 0.1); validator rejects decay "
           f"exponent 1/2: {validator_rejects}, {elapsed:.1f}s (cap 120s)")


def test_criterion_08_budget_complexity_scaling():
    t0 = time.perf_counter()
    prob = gen_linear_qp(4, 2, seed=3)
    penalty = 1.0 / prob.meta["alpha"]  # alpha*c = 1: 4x error drop per outer
    eta = 2.0 / prob.meta["mu"]
    trajs, cums = [], None
    for seed in range(8):
        cfg = RmalmConfig(penalty=penalty, budget0=5, budget_growth=8.0,
                          budget_exponent=0.5, batch_obj=50, eta=eta,
                          beta=3.5, outer_iters=4, seed=seed,
                          store_iterates=False)
        trace = solve(prob, cfg)
        trajs.append([row.dist_sq_y for row in trace.rows])
        cums = [row.cum_inner for row in trace.rows]
    means = np.mean(trajs, axis=0)
    mean_rows = [
        MetricsRow(k=k, cum_inner=cum, obj=0.0, avg_viol=0.0, max_viol=0.0,
                   dist_sq_y=float(v))
        for k, (cum, v) in enumerate(zip(cums, means))
    ]
    eps = float(np.sqrt(means[-3] * means[-2]))
    coarse = budget_to_reach(mean_rows, eps)
    fine = budget_to_reach(mean_rows, eps / 4.0)
    if coarse is None or fine is None or coarse == 0:
        elapsed = time.perf_counter() - t0
        report(8, False,
               f"accuracy targets eps={eps:.2e}, eps/4 not bracketed by the "
               f"mean trajectory {list(np.round(means, 5))}, {elapsed:.1f}s")
        return
    rep = complexity_check(eps, eps / 4.0, (coarse, fine), 0.5)
    elapsed = time.perf_counter() - t0
    ok = rep.agrees and elapsed < 300.0
    report(8, ok,
           f"budgets to reach eps and eps/4 (8-seed mean): {coarse} and "
           f"{fine}, measured ratio {rep.measured_ratio:.3f} vs predicted "
           f"4^1.5 = {rep.predicted_ratio:.3f} (band [4, 16]), "
           f"{elapsed:.1f}s (cap 300s)")


def test_criterion_09_cvar_desk_check():
    t0 = time.perf_counter()
    returns = gen_returns(50, 5, seed=0)
    prob = gen_cvar(returns, reg=1e-4)
    oracle = solve_exact(prob, 1e-10)
    cfg = RmalmConfig(penalty=8.0, budget0=5, batch_obj=1, batch_con=None,
                      eta=0.15, beta=50.0, outer_iters=16, seed=0,
                      store_iterates=False)
    trace = solve(prob, cfg, x_ref=oracle.x_opt, y_ref=oracle.y_star)
    last = trace.rows[-1]
    rel = abs(last.obj - oracle.f_opt) / abs(oracle.f_opt)
    elapsed = time.perf_counter() - t0
    ok = rel <= 0.01 and last.avg_viol <= 1e-4 and elapsed < 60.0
    report(9, ok,
           f"portfolio tail-risk desk run (50 periods, 5 assets): objective "
           f"within {rel:.2e} of optimum (tol 1e-2), avg violation "
           f"{last.avg_viol:.2e} (tol 1e-4), {elapsed:.1f}s (cap 60s)")


def test_criterion_10_repeat_runs_are_deterministic(tmp_path):
    t0 = time.perf_counter()
    prob = gen_qcqp(4, 3, 2, mode="finite_sum", nsamples=20, seed=3)
    cfg = RmalmConfig(penalty=5.0, budget0=5, batch_obj=10, batch_con=1,
                      outer_iters=6, seed=42)
    paths = []
    for name in ("first.csv", "second.csv"):
        trace = solve(prob, cfg)
        path = tmp_path / name
        write_metrics_csv(path, trace.rows)
        paths.append(path)
    first, second = (p.read_text().splitlines() for p in paths)
    stripped = [[line.rsplit(",", 1)[0] for line in lines]
                for lines in (first, second)]
    elapsed = time.perf_counter() - t0
    ok = stripped[0] == stripped[1] and len(first) == len(second) > 1
    report(10, ok,
           f"repeated solve with equal config and seed: metrics files "
           f"identical on all {len(first)} lines excluding the wall-time "
           f"column: {stripped[0] == stripped[1]}, {elapsed:.1f}s")
