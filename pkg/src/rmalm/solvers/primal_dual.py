"""Primal-dual stochastic gradient baseline.

A single-loop method on the ordinary Lagrangian
``l(x, y) = f(x) + y'h(x)``: at step ``t`` it takes a projected
stochastic gradient step in ``x`` using the current multipliers and a
projected ascent step in ``y`` using an unbiased sparse estimate of
``h``, both with the decaying step ``step0 / (1+t)^decay``. Kept
deliberately simple; it serves as the comparison curve next to the
inner-loop solver, not as a tuned competitor.
"""

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator

from ..auglag import draw_batch
from ..exceptions import ConfigError
from ..metrics import SolveTrace, make_row
from ..rng import RngStream


@dataclass(frozen=True)
class PdsgConfig:
    """Configuration of the primal-dual baseline."""

    step0: float = 1.0
    decay: float = 0.5
    batch_obj: int = 50
    batch_con: Optional[int] = None
    iters: int = 10_000
    seed: int = 0
    record_every: Optional[int] = None
    store_iterates: bool = False

    def validate(self):
        problems = []
        if not self.step0 > 0:
            problems.append(f"step0 must be positive, got {self.step0}")
        if not 0 < self.decay <= 1:
            problems.append(f"decay must lie in (0, 1], got {self.decay}")
        if not (isinstance(self.batch_obj, int) and self.batch_obj >= 1):
            problems.append(f"batch_obj must be a positive integer, got {self.batch_obj}")
        if self.batch_con is not None and not (
                isinstance(self.batch_con, int) and self.batch_con >= 1):
            problems.append(f"batch_con must be None or a positive integer, got {self.batch_con}")
        if not (isinstance(self.iters, int) and self.iters >= 1):
            problems.append(f"iters must be a positive integer, got {self.iters}")
        if self.record_every is not None and not (
                isinstance(self.record_every, int) and self.record_every >= 1):
            problems.append(f"record_every must be None or a positive integer, got {self.record_every}")
        if problems:
            raise ConfigError(problems)
        return self


def running_average(iterates):
    """Uniform running averages of a sequence of iterates.

    Element ``k`` (0-based) is the mean of the first ``k+1`` iterates,
    computed incrementally. Averages of points of a convex set stay in
    the set.
    """
    averages = []
    mean = None
    for count, x in enumerate(iterates, start=1):
        x = np.asarray(x, dtype=float)
        mean = x.copy() if mean is None else mean + (x - mean) / count
        averages.append(mean.copy())
    if not averages:
        raise ValueError("cannot average an empty iterate sequence")
    return averages


def pdsg_solve(problem, cfg: PdsgConfig, *, x0=None, x_ref=None, y_ref=None,
               callback=None, objective_fn=None) -> SolveTrace:
    """Run the baseline; records the raw and averaged iterates.

    ``rows`` holds metrics at the raw iterate ``x_t`` and ``avg_rows`` at
    the running average, both on the recording grid ``record_every``
    (default: about 100 evenly spaced rows plus the final point). The
    ``k`` column is the iteration index ``t``, and ``cum_inner`` equals
    ``t`` (one stochastic gradient per iteration). The callback contract
    matches the main solver: ``callback(t, t, row)`` per recorded row.
    """
    cfg.validate()
    gen = RngStream(cfg.seed, stream=0).generator()
    if x_ref is None:
        x_ref = problem.meta.get("x_star")
    if y_ref is None:
        y_ref = problem.meta.get("y_star")
    every = cfg.record_every or max(1, cfg.iters // 100)
    proj = problem.projector
    x = problem.start_point() if x0 is None else proj(np.asarray(x0, dtype=float))
    avg = x.copy()
    y = np.zeros(problem.num_constraints)
    m = problem.num_constraints
    trace = SolveTrace(xs=[] if cfg.store_iterates else None,
                       avg_rows=[], avg_xs=[] if cfg.store_iterates else None)
    start = time.perf_counter()

    def record(t):
        wall = time.perf_counter() - start
        row = make_row(problem, x, t, t, wall, objective_fn=objective_fn,
                       x_ref=x_ref, y_ref=y_ref, y=y)
        avg_row = make_row(problem, avg, t, t, wall, objective_fn=objective_fn,
                           x_ref=x_ref, y_ref=y_ref, y=y)
        trace.rows.append(row)
        trace.avg_rows.append(avg_row)
        if cfg.store_iterates:
            trace.xs.append(x.copy())
            trace.avg_xs.append(avg.copy())
        if callback is not None:
            callback(t, t, row)

    record(0)
    for t in range(cfg.iters):
        step = cfg.step0 / (1.0 + t) ** cfg.decay
        batch = draw_batch(problem, gen, cfg.batch_obj, cfg.batch_con)
        _, grad = problem.f0(x)
        grad = np.asarray(grad, dtype=float).copy()
        if problem.obj_sampler is not None:
            _, gmean = problem.obj_batch_mean(x, batch.obj_draws)
            grad += gmean
        indices = batch.con_indices
        scale = m / indices.size
        vals, hgrads = problem.h_batch(x, indices)
        grad += scale * (y[indices] @ hgrads)
        x = proj(x - step * grad)
        # dual ascent on an unbiased sparse estimate of h at the new point
        h_new, _ = problem.h_batch(x, indices)
        h_est = np.zeros(m)
        np.add.at(h_est, indices, h_new)
        y = np.maximum(0.0, y + step * scale * h_est)
        avg += (x - avg) / (t + 2.0)
        if (t + 1) % every == 0 or t + 1 == cfg.iters:
            record(t + 1)
    trace.x, trace.y, trace.cum_inner = x, y, cfg.iters
    return trace


class PrimalDualSG(BaseEstimator):
    """Estimator interface to `pdsg_solve`.

    After `fit`, ``x_`` is the final raw iterate, ``x_avg_`` the final
    running average, and ``trace_`` the full trace.
    """

    def __init__(self, step0=1.0, decay=0.5, batch_obj=50, batch_con=None,
                 iters=10_000, seed=0, record_every=None, store_iterates=False):
        self.step0 = step0
        self.decay = decay
        self.batch_obj = batch_obj
        self.batch_con = batch_con
        self.iters = iters
        self.seed = seed
        self.record_every = record_every
        self.store_iterates = store_iterates

    def _config(self) -> PdsgConfig:
        return PdsgConfig(
            step0=self.step0, decay=self.decay, batch_obj=self.batch_obj,
            batch_con=self.batch_con, iters=self.iters, seed=self.seed,
            record_every=self.record_every, store_iterates=self.store_iterates,
        ).validate()

    def fit(self, problem, *, x0=None, x_ref=None, y_ref=None, callback=None,
            objective_fn=None):
        trace = pdsg_solve(problem, self._config(), x0=x0, x_ref=x_ref,
                           y_ref=y_ref, callback=callback, objective_fn=objective_fn)
        self.trace_ = trace
        self.x_ = trace.x
        self.y_ = trace.y
        self.x_avg_ = running_average(trace.xs)[-1] if trace.xs else None
        return self
