"""Stochastic augmented Lagrangian method with inner Robbins-Monro loops.

Each outer iteration approximately minimizes the augmented Lagrangian
with projected stochastic gradient steps

    w_{s+1} = project_X(w_s - gamma_s * g(w_s)),
    gamma_s = tau_s * eta / (s + beta),

runs the loop for a geometrically growing number of steps, and then
applies the usual multiplier update at the reached point. Growing the
inner budget like ``growth^k`` is what turns the per-iteration
stochastic error into a linearly convergent outer scheme; the budget
exponent only matters for complexity accounting.
"""

import math
import time
from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import numpy as np
from sklearn.base import BaseEstimator

from ..auglag import PenaltyState, draw_batch, multiplier_update, stoch_grad
from ..exceptions import BudgetExceededError, ConfigError
from ..metrics import SolveTrace, make_row
from ..rng import RngStream

# mirrors the benchmark setting: 1.7-fold budget growth with a
# just-above-one complexity exponent
DEFAULT_BUDGET_GROWTH = 1.7 ** 1.0001


@dataclass(frozen=True)
class RmalmConfig:
    """Configuration of one solver run.

    ``tau`` may be a positive float or a callable ``s -> tau_s`` over
    inner steps; ``eta`` may be a positive float or a callable
    ``k -> eta_k`` over outer iterations. ``batch_con=None`` evaluates
    every constraint each inner step (exact constraint term), a positive
    integer samples that many indices uniformly with replacement.
    """

    penalty: float = 10.0
    budget0: int = 5
    budget_growth: float = DEFAULT_BUDGET_GROWTH
    budget_exponent: float = 1e-4
    tau: Union[float, Callable[[int], float]] = 1.0
    eta: Union[float, Callable[[int], float]] = 1.0
    beta: float = 1.0
    batch_obj: int = 50
    batch_con: Optional[int] = None
    outer_iters: int = 16
    seed: int = 0
    budget_cap: Optional[int] = None
    total_budget_cap: int = 10_000_000
    store_iterates: bool = True

    def validate(self):
        """Raise `ConfigError` listing every invalid field."""
        problems = []
        if not self.penalty > 0:
            problems.append(f"penalty must be positive, got {self.penalty}")
        if not (isinstance(self.budget0, int) and self.budget0 > 1):
            problems.append(f"budget0 must be an integer > 1, got {self.budget0}")
        if not self.budget_growth >= 1.0:
            problems.append(f"budget_growth must be >= 1, got {self.budget_growth}")
        if not self.budget_exponent > 0:
            problems.append(f"budget_exponent must be positive, got {self.budget_exponent}")
        if not callable(self.tau) and not self.tau > 0:
            problems.append(f"tau must be positive or callable, got {self.tau}")
        if not callable(self.eta) and not self.eta > 0:
            problems.append(f"eta must be positive or callable, got {self.eta}")
        if not self.beta > 0:
            problems.append(f"beta must be positive, got {self.beta}")
        if not (isinstance(self.batch_obj, int) and self.batch_obj >= 1):
            problems.append(f"batch_obj must be a positive integer, got {self.batch_obj}")
        if self.batch_con is not None and not (
                isinstance(self.batch_con, int) and self.batch_con >= 1):
            problems.append(f"batch_con must be None or a positive integer, got {self.batch_con}")
        if not (isinstance(self.outer_iters, int) and self.outer_iters >= 0):
            problems.append(f"outer_iters must be a nonnegative integer, got {self.outer_iters}")
        if self.budget_cap is not None and not (
                isinstance(self.budget_cap, int) and self.budget_cap >= 2):
            problems.append(f"budget_cap must be None or an integer >= 2, got {self.budget_cap}")
        if not (isinstance(self.total_budget_cap, int) and self.total_budget_cap > 0):
            problems.append(f"total_budget_cap must be a positive integer, got {self.total_budget_cap}")
        if problems:
            raise ConfigError(problems)
        return self


def _tau_at(cfg, s):
    return float(cfg.tau(s)) if callable(cfg.tau) else float(cfg.tau)


def _eta_at(cfg, k):
    return float(cfg.eta(k)) if callable(cfg.eta) else float(cfg.eta)


def step_size(s, k, cfg: RmalmConfig) -> float:
    """Inner step length ``tau_s * eta_k / (s + beta)`` for step ``s >= 1``."""
    if s < 1:
        raise ValueError(f"inner step index must be >= 1, got {s}")
    return _tau_at(cfg, s) * _eta_at(cfg, k) / (s + cfg.beta)


def subproblem_budget(k, cfg: RmalmConfig) -> int:
    """Inner-iteration budget ``ceil(budget0 * growth^k)`` for iteration ``k >= 1``.

    Monotone nondecreasing in ``k`` whenever ``growth >= 1``; an optional
    per-iteration cap truncates the schedule.
    """
    if k < 1:
        raise ValueError(f"outer iteration index must be >= 1, got {k}")
    raw = cfg.budget0 * cfg.budget_growth ** k
    budget = math.ceil(raw)
    if cfg.budget_cap is not None:
        budget = min(budget, cfg.budget_cap)
    return int(budget)


def inner_loop(problem, x_start, state: PenaltyState, budget, outer_k, cfg,
               gen: np.random.Generator) -> np.ndarray:
    """Run ``budget - 1`` projected stochastic gradient steps.

    The start point is projected onto X first (iterate 1); steps
    ``s = 1 .. budget-1`` then use the decaying schedule `step_size`
    evaluated at outer index ``outer_k``. Requires ``budget >= 2``.
    """
    if budget < 2:
        raise ValueError(f"inner budget must be >= 2, got {budget}")
    proj = problem.projector
    w = proj(np.asarray(x_start, dtype=float))
    for s in range(1, budget):
        batch = draw_batch(problem, gen, cfg.batch_obj, cfg.batch_con)
        grad = stoch_grad(problem, w, state, batch)
        w = proj(w - step_size(s, outer_k, cfg) * grad)
    return w


def solve(problem, cfg: RmalmConfig, *, x0=None, x_ref=None, y_ref=None,
          callback=None, objective_fn=None) -> SolveTrace:
    """Full solver run: outer multiplier iterations over inner loops.

    Outer iteration ``k`` (1-based) runs an inner loop of
    ``subproblem_budget(k)`` iterations with step scale ``eta`` evaluated
    at ``k - 1``, then updates the multipliers at the reached point.
    Metrics are recorded for the initial point (row ``k=0``) and after
    every multiplier update; ``callback(k, cum_inner, row)`` is invoked
    once per outer iteration. Reference solutions for the distance
    columns default to the instance metadata when present. Exceeding
    ``total_budget_cap`` raises `BudgetExceededError` naming the outer
    iteration that did not fit.
    """
    cfg.validate()
    gen = RngStream(cfg.seed, stream=0).generator()
    if x_ref is None:
        x_ref = problem.meta.get("x_star")
    if y_ref is None:
        y_ref = problem.meta.get("y_star")
    x = problem.start_point() if x0 is None else problem.projector(np.asarray(x0, dtype=float))
    y = np.zeros(problem.num_constraints)
    start = time.perf_counter()
    trace = SolveTrace(xs=[] if cfg.store_iterates else None)
    row = make_row(problem, x, 0, 0, 0.0, objective_fn=objective_fn,
                   x_ref=x_ref, y_ref=y_ref, y=y)
    trace.rows.append(row)
    if cfg.store_iterates:
        trace.xs.append(x.copy())
    cum = 0
    for k in range(1, cfg.outer_iters + 1):
        budget = subproblem_budget(k, cfg)
        if cum + budget > cfg.total_budget_cap:
            raise BudgetExceededError(
                f"outer iteration {k} needs {budget} inner iterations but only "
                f"{cfg.total_budget_cap - cum} of the {cfg.total_budget_cap} "
                f"budget remain",
                outer_index=k,
            )
        state = PenaltyState(cfg.penalty, y)
        x = inner_loop(problem, x, state, budget, k - 1, cfg, gen)
        cum += budget
        y = multiplier_update(y, cfg.penalty, problem.h(x))
        row = make_row(problem, x, k, cum, time.perf_counter() - start,
                       objective_fn=objective_fn, x_ref=x_ref, y_ref=y_ref, y=y)
        trace.rows.append(row)
        if cfg.store_iterates:
            trace.xs.append(x.copy())
        if callback is not None:
            callback(k, cum, row)
    trace.x, trace.y, trace.cum_inner = x, y, cum
    return trace


class RobbinsMonroALM(BaseEstimator):
    """Estimator interface to `solve`.

    Constructor arguments mirror `RmalmConfig`; ``eta="auto"`` resolves
    to ``2 / mu`` when the instance metadata provides the strong
    convexity constant ``mu`` (falling back to 1.0), and ``beta="auto"``
    to the smallest value keeping the classical step condition
    ``2 * mu * eta * tau > 1`` comfortably satisfied.

    After `fit`, ``x_`` and ``y_`` hold the final primal and dual
    iterates, ``trace_`` the full metrics trace, and ``config_`` the
    resolved configuration.
    """

    def __init__(self, penalty=10.0, budget0=5, budget_growth=DEFAULT_BUDGET_GROWTH,
                 budget_exponent=1e-4, tau=1.0, eta="auto", beta="auto",
                 batch_obj=50, batch_con=None, outer_iters=16, seed=0,
                 budget_cap=None, total_budget_cap=10_000_000, store_iterates=True):
        self.penalty = penalty
        self.budget0 = budget0
        self.budget_growth = budget_growth
        self.budget_exponent = budget_exponent
        self.tau = tau
        self.eta = eta
        self.beta = beta
        self.batch_obj = batch_obj
        self.batch_con = batch_con
        self.outer_iters = outer_iters
        self.seed = seed
        self.budget_cap = budget_cap
        self.total_budget_cap = total_budget_cap
        self.store_iterates = store_iterates

    def _resolved_config(self, problem) -> RmalmConfig:
        mu = problem.meta.get("mu")
        eta = self.eta
        if isinstance(eta, str):
            if eta != "auto":
                raise ConfigError([f"eta must be a number, callable, or 'auto', got {eta!r}"])
            eta = 2.0 / mu if mu and mu > 0 else 1.0
        beta = self.beta
        if isinstance(beta, str):
            if beta != "auto":
                raise ConfigError([f"beta must be a number or 'auto', got {beta!r}"])
            tau_bar = self.tau if not callable(self.tau) else 1.0
            if mu and mu > 0 and not callable(eta):
                beta = max(1.0, 2.0 * mu * float(eta) * float(tau_bar) - 1.0) + 0.5
            else:
                beta = 1.0
        return RmalmConfig(
            penalty=self.penalty, budget0=self.budget0,
            budget_growth=self.budget_growth, budget_exponent=self.budget_exponent,
            tau=self.tau, eta=eta, beta=beta, batch_obj=self.batch_obj,
            batch_con=self.batch_con, outer_iters=self.outer_iters,
            seed=self.seed, budget_cap=self.budget_cap,
            total_budget_cap=self.total_budget_cap,
            store_iterates=self.store_iterates,
        ).validate()

    def fit(self, problem, *, x0=None, x_ref=None, y_ref=None, callback=None,
            objective_fn=None):
        """Solve ``problem`` and store the results on the estimator."""
        cfg = self._resolved_config(problem)
        trace = solve(problem, cfg, x0=x0, x_ref=x_ref, y_ref=y_ref,
                      callback=callback, objective_fn=objective_fn)
        self.config_ = cfg
        self.trace_ = trace
        self.x_ = trace.x
        self.y_ = trace.y
        self.n_inner_ = trace.cum_inner
        return self

    def with_seed(self, seed) -> "RobbinsMonroALM":
        """Clone of the estimator with a different seed."""
        params = self.get_params()
        params["seed"] = seed
        return RobbinsMonroALM(**params)


def resolve_config(estimator_or_config, problem) -> RmalmConfig:
    """Return a validated `RmalmConfig` from either representation."""
    if isinstance(estimator_or_config, RmalmConfig):
        return estimator_or_config.validate()
    return estimator_or_config._resolved_config(problem)


def with_outer_iters(cfg: RmalmConfig, outer_iters: int) -> RmalmConfig:
    """Copy of ``cfg`` with a different outer-iteration count."""
    return replace(cfg, outer_iters=outer_iters)
