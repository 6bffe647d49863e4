"""Problem container for constrained stochastic convex programs.

A problem instance describes

    minimize    f(x) = f0(x) + E[F(x, xi)]
    subject to  h_j(x) <= 0  for j = 1..m,   x in X,

where ``f0`` is a deterministic smooth convex term, the expectation is
over objective samples ``xi`` (either a sampling distribution or a
finite data set indexed by integers), every ``h_j`` is smooth convex,
and ``X`` is a simple closed convex set given through its Euclidean
projector.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from ._validation import check_vector
from .exceptions import DataError
from .rng import RngStream


@dataclass
class StochasticProblem:
    """Constrained stochastic program in the form described above.

    Parameters
    ----------
    dim : int
        Number of decision variables.
    f0 : callable
        ``f0(x) -> (value, gradient)`` for the deterministic objective part.
    constraints : list of callables
        ``constraints[j](x) -> (value, gradient)`` for each ``h_j``.
    projector : callable
        Euclidean projector onto the feasible set ``X``.
    obj_sampler : callable, optional
        ``obj_sampler(x, draw) -> (value, gradient)`` for one sampled
        objective term ``F(x, draw)``. ``None`` means the objective is
        entirely deterministic (``f = f0``).
    xi_sampler : callable, optional
        ``xi_sampler(gen, size) -> sequence of draws`` for expectation-form
        objectives. Unused when ``finite_sum_size`` is set, in which case
        draws are integer indices in ``range(finite_sum_size)``.
    finite_sum_size : int, optional
        Size of the data set when the expectation is a finite average.
    feasible_witness : ndarray, optional
        A strictly feasible point (every ``h_j < 0``), when one is known.
    h_all : callable, optional
        Vectorized ``x -> array of all constraint values``; falls back to
        looping over ``constraints``.
    constraint_batch : callable, optional
        Vectorized ``(x, indices) -> (values, gradient rows)`` for a subset
        of constraints; same fallback.
    obj_batch : callable, optional
        Vectorized ``(x, draws) -> (mean value, mean gradient)`` over a
        batch of objective draws; same fallback.
    objective_full : callable, optional
        Exact full objective ``x -> (value, gradient)`` including the
        expectation term, when it has a closed form.
    meta : dict
        Free-form instance metadata (smoothness and convexity constants,
        analytic solutions, raw generator data). Solvers only ever read
        from it opportunistically.
    """

    dim: int
    f0: Callable[[np.ndarray], tuple]
    constraints: list
    projector: Callable[[np.ndarray], np.ndarray]
    obj_sampler: Optional[Callable[[np.ndarray, Any], tuple]] = None
    xi_sampler: Optional[Callable[[np.random.Generator, int], Any]] = None
    finite_sum_size: Optional[int] = None
    feasible_witness: Optional[np.ndarray] = None
    h_all: Optional[Callable[[np.ndarray], np.ndarray]] = None
    constraint_batch: Optional[Callable[[np.ndarray, np.ndarray], tuple]] = None
    obj_batch: Optional[Callable[[np.ndarray, Any], tuple]] = None
    objective_full: Optional[Callable[[np.ndarray], tuple]] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dim <= 0:
            raise ValueError(f"dim must be positive, got {self.dim}")
        if self.finite_sum_size is not None and self.finite_sum_size <= 0:
            raise ValueError(f"finite_sum_size must be positive, got {self.finite_sum_size}")
        if self.finite_sum_size is not None and self.obj_sampler is None:
            raise ValueError("finite_sum_size given but obj_sampler is missing")
        if self.feasible_witness is not None:
            self.feasible_witness = check_vector(
                np.asarray(self.feasible_witness, dtype=float), "feasible_witness", dim=self.dim
            )

    # ------------------------------------------------------------------
    # constraint evaluation

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def h(self, x) -> np.ndarray:
        """All constraint values at ``x``."""
        if self.h_all is not None:
            return np.asarray(self.h_all(x), dtype=float)
        return np.array([fn(x)[0] for fn in self.constraints], dtype=float)

    def h_batch(self, x, indices):
        """Values and gradient rows of the constraints in ``indices``.

        Returns ``(values, grads)`` with ``grads`` of shape
        ``(len(indices), dim)``.
        """
        indices = np.asarray(indices, dtype=int)
        if indices.size == 0:
            raise ValueError("constraint batch is empty")
        if indices.min() < 0 or indices.max() >= self.num_constraints:
            raise ValueError(
                f"constraint index out of range: valid range is "
                f"[0, {self.num_constraints}), got {indices.min()}..{indices.max()}"
            )
        if self.constraint_batch is not None:
            vals, grads = self.constraint_batch(x, indices)
            return np.asarray(vals, dtype=float), np.asarray(grads, dtype=float)
        vals = np.empty(indices.size)
        grads = np.empty((indices.size, self.dim))
        for row, j in enumerate(indices):
            vals[row], grads[row] = self.constraints[j](x)
        return vals, grads

    def violations(self, x):
        """``(average, maximum)`` of the positive parts of all constraints."""
        pos = np.maximum(self.h(x), 0.0)
        return float(pos.mean()), float(pos.max())

    # ------------------------------------------------------------------
    # objective evaluation

    def objective_value_grad(self, x):
        """Exact objective value and gradient, when exactly evaluable.

        Works for deterministic objectives and finite-sum objectives
        (averaging the sampler over the whole data set if no closed form
        was provided). Expectation-form objectives raise ``DataError``;
        use a sample-average surrogate for those.
        """
        if self.objective_full is not None:
            val, grad = self.objective_full(x)
            return float(val), np.asarray(grad, dtype=float)
        val, grad = self.f0(x)
        val = float(val)
        grad = np.asarray(grad, dtype=float).copy()
        if self.obj_sampler is None:
            return val, grad
        if self.finite_sum_size is None:
            raise DataError(
                "objective is an expectation without a finite-sum form; "
                "exact evaluation is not available"
            )
        scale = 1.0 / self.finite_sum_size
        for i in range(self.finite_sum_size):
            vi, gi = self.obj_sampler(x, i)
            val += scale * float(vi)
            grad += scale * np.asarray(gi, dtype=float)
        return val, grad

    def objective(self, x) -> float:
        return self.objective_value_grad(x)[0]

    def objective_grad(self, x) -> np.ndarray:
        return self.objective_value_grad(x)[1]

    def obj_batch_mean(self, x, draws):
        """Mean sampled-objective value and gradient over ``draws``."""
        if self.obj_sampler is None:
            raise ValueError("problem has no sampled objective term")
        if self.obj_batch is not None:
            val, grad = self.obj_batch(x, draws)
            return float(val), np.asarray(grad, dtype=float)
        vals = 0.0
        grad = np.zeros(self.dim)
        count = 0
        for draw in draws:
            vi, gi = self.obj_sampler(x, draw)
            vals += float(vi)
            grad += np.asarray(gi, dtype=float)
            count += 1
        if count == 0:
            raise ValueError("objective batch is empty")
        return vals / count, grad / count

    def draw_objective(self, gen: np.random.Generator, size: int):
        """Draw a batch of objective samples (indices or sampler output)."""
        if self.obj_sampler is None:
            return ()
        if size <= 0:
            raise ValueError(f"objective batch size must be positive, got {size}")
        if self.finite_sum_size is not None:
            return gen.integers(0, self.finite_sum_size, size=size)
        if self.xi_sampler is None:
            raise DataError("expectation-form objective has no xi_sampler")
        return self.xi_sampler(gen, size)

    # ------------------------------------------------------------------

    def start_point(self) -> np.ndarray:
        """Default initial iterate: the projection of the origin onto X."""
        return self.projector(np.zeros(self.dim))


def make_holdout_objective(problem: StochasticProblem, size: int = 100_000,
                           seed: int = 0, stream: int = 900):
    """Sample-average surrogate of an expectation-form objective.

    Draws a fixed evaluation sample once and returns ``x -> value``.
    Deterministic given ``(seed, stream)``, so reported objective values
    are reproducible. For finite-sum or deterministic objectives the
    exact evaluation is returned instead.
    """
    if problem.obj_sampler is None or problem.finite_sum_size is not None:
        return problem.objective
    gen = RngStream(seed, stream).generator()
    draws = problem.xi_sampler(gen, size)

    def surrogate(x):
        val, _ = problem.obj_batch_mean(x, draws)
        base, _ = problem.f0(x)
        return float(base) + val

    return surrogate
