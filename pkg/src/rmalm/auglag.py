"""Augmented Lagrangian for inequality constraints, and its stochastic gradient.

For penalty ``c > 0`` and multipliers ``y >= 0`` the augmented Lagrangian of

    minimize f(x)  subject to  h_j(x) <= 0,  x in X

is

    L(x, y, c) = f(x) + (c/2) * sum_j max(0, h_j(x) + y_j/c)^2 - |y|^2/(2c).

It is convex and continuously differentiable in ``x`` whenever ``f`` and all
``h_j`` are, with gradient

    grad_x L = grad f(x) + sum_j max(0, c*h_j(x) + y_j) * grad h_j(x),

and the multiplier step associated with a new primal point is
``y+ = max(0, y + c*h(x))``.

The stochastic estimator below replaces ``grad f`` by a mini-batch average
of sampled objective gradients and the constraint sum by an inverse-
probability-weighted sum over constraint indices drawn uniformly with
replacement. Both replacements are unbiased, so the estimator's
expectation over one draw is exactly ``grad_x L``.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np

from ._validation import check_vector
from .problem import StochasticProblem


@dataclass(frozen=True)
class PenaltyState:
    """Penalty parameter and multiplier vector for one outer iteration."""

    penalty: float
    multipliers: np.ndarray

    def __post_init__(self):
        if not self.penalty > 0:
            raise ValueError(f"penalty must be positive, got {self.penalty}")
        y = check_vector(self.multipliers, "multipliers")
        if y.size and y.min() < 0:
            raise ValueError("multipliers must be nonnegative")
        object.__setattr__(self, "multipliers", y)


@dataclass(frozen=True)
class SampleBatch:
    """One mini-batch of objective draws and constraint indices.

    ``obj_draws`` may be empty when the objective has no sampled term;
    ``con_indices`` always holds at least one constraint index.
    """

    obj_draws: Any
    con_indices: np.ndarray


def draw_batch(problem: StochasticProblem, gen: np.random.Generator,
               batch_obj: int, batch_con=None) -> SampleBatch:
    """Draw an independent batch of objective samples and constraint indices.

    Constraint indices are uniform over ``range(m)`` with replacement.
    ``batch_con=None`` requests a full deterministic constraint pass
    (every index exactly once), which makes the constraint part of the
    gradient exact. Objective draws come first in the stream, then
    constraint indices, so the consumption order is fixed.
    """
    draws = problem.draw_objective(gen, batch_obj) if problem.obj_sampler else ()
    m = problem.num_constraints
    if m == 0:
        raise ValueError("problem has no constraints")
    if batch_con is None:
        indices = np.arange(m)
    else:
        if batch_con <= 0:
            raise ValueError(f"constraint batch size must be positive, got {batch_con}")
        indices = gen.integers(0, m, size=batch_con)
    return SampleBatch(obj_draws=draws, con_indices=indices)


def _penalty_weights(problem, x, state, indices):
    """max(0, c*h_j + y_j) for the requested constraint rows, plus grads."""
    vals, grads = problem.h_batch(x, indices)
    weights = np.maximum(0.0, state.penalty * vals + state.multipliers[indices])
    return weights, grads


def auglag_value(problem: StochasticProblem, x, state: PenaltyState) -> float:
    """Exact augmented Lagrangian value (requires an exactly evaluable f)."""
    x = check_vector(x, "x", dim=problem.dim)
    fval = problem.objective(x)
    c, y = state.penalty, state.multipliers
    hinge = np.maximum(0.0, problem.h(x) + y / c)
    return float(fval + 0.5 * c * np.dot(hinge, hinge) - np.dot(y, y) / (2.0 * c))


def auglag_grad_full(problem: StochasticProblem, x, state: PenaltyState) -> np.ndarray:
    """Exact gradient of the augmented Lagrangian in ``x``."""
    x = check_vector(x, "x", dim=problem.dim)
    _, grad = problem.objective_value_grad(x)
    weights, hgrads = _penalty_weights(problem, x, state, np.arange(problem.num_constraints))
    return grad + weights @ hgrads


def auglag_value_grad_full(problem: StochasticProblem, x, state: PenaltyState):
    """Value and gradient in one pass (constraints evaluated once)."""
    x = check_vector(x, "x", dim=problem.dim)
    fval, grad = problem.objective_value_grad(x)
    c, y = state.penalty, state.multipliers
    vals, hgrads = problem.h_batch(x, np.arange(problem.num_constraints))
    hinge = np.maximum(0.0, vals + y / c)
    value = float(fval + 0.5 * c * np.dot(hinge, hinge) - np.dot(y, y) / (2.0 * c))
    return value, grad + (c * hinge) @ hgrads


def stoch_grad(problem: StochasticProblem, x, state: PenaltyState,
               batch: SampleBatch) -> np.ndarray:
    """Unbiased mini-batch estimate of ``grad_x L(x, y, c)``.

    The objective part averages sampled gradients over ``batch.obj_draws``
    (plus the deterministic part's exact gradient); the constraint part
    scales the sampled index sum by ``m / len(con_indices)`` so that its
    expectation under uniform-with-replacement sampling matches the full
    sum. A full-pass index batch reproduces the exact constraint term.
    """
    x = check_vector(x, "x", dim=problem.dim)
    _, grad = problem.f0(x)
    grad = np.asarray(grad, dtype=float).copy()
    draws = batch.obj_draws
    has_draws = draws is not None and len(draws) > 0
    if problem.obj_sampler is not None and has_draws:
        _, gmean = problem.obj_batch_mean(x, draws)
        grad += gmean
    indices = np.asarray(batch.con_indices, dtype=int)
    if indices.size == 0:
        raise ValueError("constraint batch is empty")
    weights, hgrads = _penalty_weights(problem, x, state, indices)
    scale = problem.num_constraints / indices.size
    return grad + scale * (weights @ hgrads)


def multiplier_update(y, penalty, h_values) -> np.ndarray:
    """Projected multiplier step ``max(0, y + c*h)``.

    Keeps multipliers in the nonnegative orthant and is 1-Lipschitz in
    ``y`` for fixed ``c`` and ``h``.
    """
    y = check_vector(y, "y")
    h_values = check_vector(h_values, "h_values", dim=y.shape[0])
    if not penalty > 0:
        raise ValueError(f"penalty must be positive, got {penalty}")
    return np.maximum(0.0, y + penalty * h_values)
