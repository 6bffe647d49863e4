"""Deterministic high-accuracy reference solver.

Runs the augmented Lagrangian method with a fixed penalty and essentially
exact subproblem solves until the primal step, the scaled dual step, and
the worst violation are all below tolerance. On convex problems the
returned point carries a first-order certificate: the KKT residual
(stationarity of the ordinary Lagrangian, complementarity, feasibility)
is checked to be within an order of magnitude of the tolerance.

Intended for desk-scale finite-sum instances; for large constraint
counts use `best_feasible_iterate` over recorded solver traces instead,
selecting the best objective among feasible iterates.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ..auglag import PenaltyState, multiplier_update
from ..exceptions import NoFeasibleIterateError, NonconvergenceError
from .subproblem import exact_subproblem


@dataclass(frozen=True)
class OracleSolution:
    """Ground truth produced by `solve_exact`."""

    x_opt: np.ndarray
    y_star: np.ndarray
    f_opt: float
    outer_iters: int
    stat_residual: float      # |x - proj(x - grad_x Lagrangian)|
    comp_residual: float      # max_j |y_j h_j(x)|
    max_violation: float      # max_j [h_j(x)]_+
    tol: float

    @property
    def kkt_residual(self) -> float:
        return max(self.stat_residual, self.comp_residual, self.max_violation)


def kkt_residuals(problem, x, y):
    """Stationarity, complementarity, and feasibility residuals at (x, y)."""
    vals, grads = problem.h_batch(x, np.arange(problem.num_constraints))
    grad = problem.objective_grad(x) + y @ grads
    stat = float(np.linalg.norm(x - problem.projector(x - grad)))
    comp = float(np.max(np.abs(y * vals))) if vals.size else 0.0
    viol = float(np.max(np.maximum(vals, 0.0))) if vals.size else 0.0
    return stat, comp, viol


def solve_exact(problem, tol=1e-10, *, penalty=10.0, inner_tol=None,
                max_outer=10_000, x0=None) -> OracleSolution:
    """Solve a finite-sum instance to high accuracy with deterministic ALM.

    Parameters
    ----------
    problem : StochasticProblem
        Must have an exactly evaluable objective.
    tol : float
        Outer stopping tolerance on
        ``max(|x_next - x|, |y_next - y| / penalty, max violation)``.
    penalty : float
        Fixed penalty parameter; the limit point does not depend on it
        (only the path does), which is checked in the test suite.
    inner_tol : float, optional
        Subproblem residual target; defaults to ``tol / 100`` floored at
        1e-13.
    max_outer : int
        Outer iteration cap; exceeding it raises `NonconvergenceError`.
    x0 : ndarray, optional
        Primal start; defaults to the strictly feasible witness when the
        instance provides one.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not penalty > 0:
        raise ValueError(f"penalty must be positive, got {penalty}")
    if inner_tol is None:
        inner_tol = max(tol * 1e-2, 1e-13)
    x = problem.feasible_witness if x0 is None else np.asarray(x0, dtype=float)
    if x is None:
        x = problem.start_point()
    x = problem.projector(np.asarray(x, dtype=float))
    y = np.zeros(problem.num_constraints)
    crit = np.inf
    for outer in range(1, max_outer + 1):
        state = PenaltyState(penalty, y)
        x_new = exact_subproblem(problem, state, inner_tol, x0=x)
        h_vals = problem.h(x_new)
        y_new = multiplier_update(y, penalty, h_vals)
        crit = max(
            float(np.linalg.norm(x_new - x)),
            float(np.linalg.norm(y_new - y)) / penalty,
            float(np.max(np.maximum(h_vals, 0.0), initial=0.0)),
        )
        x, y = x_new, y_new
        if crit <= tol:
            break
    else:
        raise NonconvergenceError(
            f"exact solve did not reach tol={tol:.3e} within {max_outer} outer "
            f"iterations (last residual {crit:.3e})",
            residual=crit,
        )
    stat, comp, viol = kkt_residuals(problem, x, y)
    return OracleSolution(
        x_opt=x, y_star=y, f_opt=problem.objective(x), outer_iters=outer,
        stat_residual=stat, comp_residual=comp, max_violation=viol, tol=tol,
    )


def best_feasible_iterate(traces, problem, feas_tol=1e-6) -> np.ndarray:
    """Best recorded iterate: smallest objective among feasible ones.

    Scans the supplied traces in order (and each trace in iteration
    order), keeping iterates whose recorded maximum violation is at most
    ``feas_tol``, and returns the earliest one attaining the smallest
    objective. Traces must have been run with ``store_iterates=True``.

    Raises `NoFeasibleIterateError` (reporting the smallest violation
    seen) when nothing qualifies.
    """
    if not feas_tol >= 0:
        raise ValueError(f"feas_tol must be nonnegative, got {feas_tol}")
    best_x, best_obj = None, np.inf
    min_viol = np.inf
    for trace in traces:
        if trace.xs is None:
            raise ValueError(
                "trace has no stored iterates; rerun the solver with "
                "store_iterates=True to use best_feasible_iterate"
            )
        if len(trace.xs) != len(trace.rows):
            raise ValueError("trace iterates and metrics rows are out of sync")
        for row, x in zip(trace.rows, trace.xs):
            min_viol = min(min_viol, row.max_viol)
            if row.max_viol <= feas_tol and row.obj < best_obj:
                best_obj = row.obj
                best_x = x
    if best_x is None:
        raise NoFeasibleIterateError(
            f"no iterate had maximum violation <= {feas_tol:.3e}; the smallest "
            f"violation seen was {min_viol:.3e}",
            min_violation=None if np.isinf(min_viol) else float(min_viol),
        )
    return best_x.copy()


class ALMOracle(BaseEstimator):
    """Estimator interface to `solve_exact`.

    After `fit`, ``x_opt_``, ``y_star_``, and ``f_opt_`` hold the
    solution triple and ``solution_`` the full `OracleSolution`.
    """

    def __init__(self, tol=1e-10, penalty=10.0, inner_tol=None, max_outer=10_000):
        self.tol = tol
        self.penalty = penalty
        self.inner_tol = inner_tol
        self.max_outer = max_outer

    def fit(self, problem, *, x0=None):
        solution = solve_exact(problem, self.tol, penalty=self.penalty,
                               inner_tol=self.inner_tol,
                               max_outer=self.max_outer, x0=x0)
        self.solution_ = solution
        self.x_opt_ = solution.x_opt
        self.y_star_ = solution.y_star
        self.f_opt_ = solution.f_opt
        return self
