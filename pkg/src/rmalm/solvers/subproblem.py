"""Deterministic minimization of the augmented Lagrangian over X.

Used wherever an (almost) exact subproblem solution is needed: the
noise-injection harness, the high-accuracy oracle, and tests. The
method is spectral projected gradient: a Barzilai-Borwein trial step
with nonmonotone Armijo backtracking, which on the smooth convex
subproblems at hand reliably drives the fixed-point residual

    r(x) = | x - project_X(x - grad L(x)) |

to tolerances near machine precision.
"""

from collections import deque

import numpy as np

from ..auglag import PenaltyState, auglag_value_grad_full
from ..exceptions import NonconvergenceError

# Line-search parameters. Acceptance compares against the maximum of the
# last few values (Grippo-style window) rather than the last value alone:
# near the minimum, value differences sit at the rounding floor, and a
# monotone test would reject the well-scaled spectral step and stall the
# residual around sqrt(machine epsilon).
_ARMIJO = 1e-4
_MEMORY = 10
_VALUE_SLACK = 1e-15
_STEP_MIN = 1e-13
_STEP_MAX = 1e13


def exact_subproblem(problem, state: PenaltyState, tol, x0=None,
                     max_iter=1_000_000):
    """Minimize ``L(x, y, c)`` over the feasible set X to high accuracy.

    Parameters
    ----------
    problem : StochasticProblem
        Problem with an exactly evaluable objective (deterministic or
        finite-sum).
    state : PenaltyState
        Penalty parameter and multipliers defining the subproblem.
    tol : float
        Target on the projected-gradient fixed-point residual ``r(x)``.
    x0 : ndarray, optional
        Warm start; defaults to the projection of the origin. The start
        is projected onto X before the first step.
    max_iter : int
        Iteration cap; exceeding it raises `NonconvergenceError` carrying
        the final residual.

    Returns
    -------
    numpy.ndarray
        Point whose residual is at most ``tol``.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    proj = problem.projector
    x = proj(np.zeros(problem.dim) if x0 is None else np.asarray(x0, dtype=float))
    val, grad = auglag_value_grad_full(problem, x, state)
    step = 1.0 / max(1.0, float(np.linalg.norm(grad)))
    residual = float(np.linalg.norm(x - proj(x - grad)))
    recent = deque([val], maxlen=_MEMORY)
    for _ in range(max_iter):
        if residual <= tol:
            return x
        reference = max(recent)
        trial_step = step
        for _ in range(80):
            x_new = proj(x - trial_step * grad)
            direction = x_new - x
            slope = float(grad @ direction)
            val_new, grad_new = auglag_value_grad_full(problem, x_new, state)
            if val_new <= reference + _ARMIJO * slope + _VALUE_SLACK * (1.0 + abs(reference)):
                break
            trial_step *= 0.5
            if trial_step < _STEP_MIN:
                break
        diff_x = x_new - x
        diff_g = grad_new - grad
        curvature = float(diff_x @ diff_g)
        if curvature > 0.0:
            step = float(diff_x @ diff_x) / curvature
            step = min(max(step, _STEP_MIN), _STEP_MAX)
        else:
            step = min(trial_step * 2.0, _STEP_MAX)
        x, val, grad = x_new, val_new, grad_new
        recent.append(val)
        residual = float(np.linalg.norm(x - proj(x - grad)))
    raise NonconvergenceError(
        f"subproblem solve stopped after {max_iter} iterations with "
        f"residual {residual:.3e} (target {tol:.3e})",
        residual=residual,
    )
