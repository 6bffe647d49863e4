"""Noise-injected augmented Lagrangian method.

Each outer iteration solves the subproblem essentially exactly, then
perturbs the minimizer with controlled zero-mean noise before the
multiplier update:

    x_hat  = argmin_{x in X} L(x, y_k, c_k)
    x_next = project_X(x_hat - c_k * eps_k),   E eps_k = 0,  E|eps_k|^2 <= sigma^2
    y_next = max(0, y_k + c_k * h(x_next)),    c_k = c0 * (k+1)^(-decay)

With the penalty decaying like ``(k+1)^(-decay)`` for a decay exponent in
(1/2, 1], the penalties are square-summable but not summable, which is
what lets the multiplier iteration average the injected noise away. The
harness exists to exhibit that convergence in Monte Carlo runs, one
independent noise stream per seed.

The perturbed point is projected back onto X (the recursion is otherwise
free to leave the set where the constraints are well behaved).
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from sklearn.base import BaseEstimator

from ..auglag import PenaltyState, multiplier_update
from ..exceptions import ConfigError
from ..rng import RngStream
from .subproblem import exact_subproblem

NOISE_LAWS = ("gaussian", "uniform", "rademacher")

# per-seed noise draws use a dedicated substream
_NOISE_STREAM = 1


def _draw_noise(gen, dim, scale, law):
    """Zero-mean perturbation with E|eps|^2 <= scale^2 (= for gaussian/rademacher)."""
    if scale == 0.0:
        return np.zeros(dim)
    if law == "gaussian":
        return gen.normal(0.0, scale / math.sqrt(dim), size=dim)
    if law == "uniform":
        half = scale * math.sqrt(3.0 / dim)
        return gen.uniform(-half, half, size=dim)
    signs = 2.0 * gen.integers(0, 2, size=dim) - 1.0
    return (scale / math.sqrt(dim)) * signs


@dataclass(frozen=True)
class SalmConfig:
    """Configuration of the noise-injection harness."""

    penalty0: float = 1.0
    decay_exponent: float = 0.75
    noise_scale: float = 0.1
    noise_law: str = "gaussian"
    outer_iters: int = 200
    inner_tol: float = 1e-10
    seeds: Tuple[int, ...] = (0,)
    inner_max_iter: int = 1_000_000

    def validate(self):
        """Raise `ConfigError` listing every invalid field."""
        problems = []
        if not self.penalty0 > 0:
            problems.append(f"penalty0 must be positive, got {self.penalty0}")
        if not 0.5 < self.decay_exponent <= 1.0:
            problems.append(
                f"decay_exponent must lie in (0.5, 1], got {self.decay_exponent}: "
                "the penalty schedule needs square-summable but non-summable "
                "penalties, which fails at or below 1/2"
            )
        if not self.noise_scale >= 0:
            problems.append(f"noise_scale must be nonnegative, got {self.noise_scale}")
        law = self.noise_law
        if law not in NOISE_LAWS and law != "rademacher-scaled":
            problems.append(f"noise_law must be one of {list(NOISE_LAWS)}, got {self.noise_law!r}")
        if not (isinstance(self.outer_iters, int) and self.outer_iters >= 0):
            problems.append(f"outer_iters must be a nonnegative integer, got {self.outer_iters}")
        if not self.inner_tol > 0:
            problems.append(f"inner_tol must be positive, got {self.inner_tol}")
        if not self.seeds:
            problems.append("seeds must be a nonempty sequence of integers")
        if not (isinstance(self.inner_max_iter, int) and self.inner_max_iter > 0):
            problems.append(f"inner_max_iter must be a positive integer, got {self.inner_max_iter}")
        if problems:
            raise ConfigError(problems)
        return self

    @property
    def law(self) -> str:
        return "rademacher" if self.noise_law == "rademacher-scaled" else self.noise_law

    def penalty_at(self, k) -> float:
        """Penalty used by the (k+1)-th update, ``penalty0 * (k+1)^-decay``."""
        return self.penalty0 * float(k + 1) ** (-self.decay_exponent)


@dataclass(frozen=True)
class SalmRow:
    """One recorded outer iteration of a noise-injection run."""

    k: int
    penalty: float
    dist_sq_y: float
    max_viol: float


@dataclass
class SalmTrace:
    """Per-seed result of `salm_run`."""

    seed: int
    rows: List[SalmRow] = field(default_factory=list)
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None


def salm_run(problem, cfg: SalmConfig, y_star, *, y0=None, x0=None):
    """Run the harness for every configured seed.

    Returns ``{seed: SalmTrace}`` where each trace records, per outer
    iteration, the penalty used and the squared dual distance
    ``|y_k - y_star|^2`` (row ``k=0`` holds the initial distance). Seeds
    only affect the injected noise, drawn from independent streams, so
    equal seed lists reproduce identical trajectory sets.
    """
    cfg.validate()
    y_star = np.asarray(y_star, dtype=float)
    if y_star.shape != (problem.num_constraints,):
        raise ValueError(
            f"y_star must have length {problem.num_constraints}, got shape {y_star.shape}"
        )
    start = problem.feasible_witness if x0 is None else np.asarray(x0, dtype=float)
    if start is None:
        start = problem.start_point()
    y_init = np.zeros(problem.num_constraints) if y0 is None else np.asarray(y0, dtype=float)
    results = {}
    for seed in cfg.seeds:
        gen = RngStream(int(seed), stream=_NOISE_STREAM).generator()
        x_hat = np.asarray(start, dtype=float).copy()
        y = y_init.copy()
        trace = SalmTrace(seed=int(seed))
        trace.rows.append(SalmRow(0, cfg.penalty_at(0),
                                  float(np.sum((y - y_star) ** 2)), math.nan))
        for k in range(cfg.outer_iters):
            penalty = cfg.penalty_at(k)
            state = PenaltyState(penalty, y)
            x_hat = exact_subproblem(problem, state, cfg.inner_tol, x0=x_hat,
                                     max_iter=cfg.inner_max_iter)
            eps = _draw_noise(gen, problem.dim, cfg.noise_scale, cfg.law)
            x = problem.projector(x_hat - penalty * eps)
            y = multiplier_update(y, penalty, problem.h(x))
            _, max_v = problem.violations(x)
            trace.rows.append(SalmRow(k + 1, penalty,
                                      float(np.sum((y - y_star) ** 2)), max_v))
        trace.x, trace.y = x_hat if cfg.outer_iters == 0 else x, y
        results[int(seed)] = trace
    return results


class NoiseInjectedALM(BaseEstimator):
    """Estimator interface to a single-seed `salm_run`.

    After `fit`, ``trace_`` holds the seed's `SalmTrace` and ``x_``/``y_``
    the final primal/dual iterates.
    """

    def __init__(self, penalty0=1.0, decay_exponent=0.75, noise_scale=0.1,
                 noise_law="gaussian", outer_iters=200, inner_tol=1e-10, seed=0):
        self.penalty0 = penalty0
        self.decay_exponent = decay_exponent
        self.noise_scale = noise_scale
        self.noise_law = noise_law
        self.outer_iters = outer_iters
        self.inner_tol = inner_tol
        self.seed = seed

    def _config(self) -> SalmConfig:
        return SalmConfig(
            penalty0=self.penalty0, decay_exponent=self.decay_exponent,
            noise_scale=self.noise_scale, noise_law=self.noise_law,
            outer_iters=self.outer_iters, inner_tol=self.inner_tol,
            seeds=(self.seed,),
        ).validate()

    def fit(self, problem, y_star=None, *, y0=None, x0=None):
        """Run the harness; ``y_star`` defaults to the instance metadata."""
        if y_star is None:
            y_star = problem.meta.get("y_star")
        if y_star is None:
            raise ValueError(
                "y_star is required (pass it or provide it in problem.meta); "
                "compute it with the exact oracle"
            )
        cfg = self._config()
        trace = salm_run(problem, cfg, y_star, y0=y0, x0=x0)[self.seed]
        self.config_ = cfg
        self.trace_ = trace
        self.x_ = trace.x
        self.y_ = trace.y
        return self
