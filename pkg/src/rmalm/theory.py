"""Rate constants of the method and empirical verification utilities.

The quantities here tie the solver's observable behaviour to the
underlying analysis:

* `contraction_theta`: squared per-iteration contraction factor
  ``theta = (1 + alpha*c)^-2`` of the exact dual update when the dual
  function is ``alpha``-strongly concave and the penalty is ``c``. The
  dual error of the stochastic method decays like ``rho^k`` with
  ``rho = 2*theta`` once inner budgets grow like ``rho^-(1+q)k``, which
  requires ``theta < 1/2``.
* `theta_prime`: transfer coefficient from squared dual error to squared
  primal error, ``[ (2 + alpha*c) * a / (c + alpha*c^2) ]^2`` for an
  inverse-mapping Lipschitz modulus ``a``.
* `inner_error_scale`: the constant ``v`` such that an inner loop of
  ``S`` steps leaves mean squared error at most ``v / (S + beta)``:
  ``v = max(eta^2 * tau_hi^2 * sigma^2 / (2*mu*eta*tau_lo - 1),
  (beta + 1) * d^2)``.
* `fit_linear_rate` / `complexity_check`: least-squares rate estimation
  on measured trajectories and budget-scaling verification against the
  ``(1/eps)^(1+q)`` total-complexity prediction.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ._validation import check_scalar
from .exceptions import AssumptionError


@dataclass(frozen=True)
class TheoryConstants:
    """Instance- and schedule-level constants used by the bounds.

    ``mu`` is the strong-convexity modulus of the objective, ``l_h`` the
    constraint Lipschitz constant on X, ``sigma`` the gradient-noise
    second-moment bound, ``alpha`` the dual strong-concavity modulus,
    ``inverse_lipschitz`` the Lipschitz modulus at the origin of the
    inverse of the Lagrangian operator, ``diameter`` the diameter of X,
    and ``tau_lo``/``tau_hi``/``eta``/``beta`` the step-schedule bounds.
    """

    mu: float
    sigma: float
    eta: float
    beta: float
    diameter: float
    tau_lo: float = 1.0
    tau_hi: float = 1.0
    l_h: Optional[float] = None
    alpha: Optional[float] = None
    inverse_lipschitz: Optional[float] = None


class ContractionInfo(NamedTuple):
    """Dual contraction factor with its derived rate and budget flag."""

    theta: float
    rho: float
    fixed_budget_ok: bool


def contraction_theta(alpha, penalty) -> ContractionInfo:
    """Squared dual contraction ``theta = (1 + alpha*c)^-2``.

    Also reports ``rho = 2*theta`` (the per-iteration decay of the mean
    squared dual error under matched budget growth) and whether
    ``theta < 1/2``, the condition for that decay to be a contraction.
    """
    alpha = check_scalar(alpha, "alpha", low=0.0, strict_low=True)
    penalty = check_scalar(penalty, "penalty", low=0.0, strict_low=True)
    theta = (1.0 + alpha * penalty) ** -2
    return ContractionInfo(theta=theta, rho=2.0 * theta, fixed_budget_ok=theta < 0.5)


def theta_prime(alpha, penalty, inverse_lipschitz) -> float:
    """Dual-to-primal error transfer ``[(2+ac) * a_inv / (c + a*c^2)]^2``."""
    alpha = check_scalar(alpha, "alpha", low=0.0, strict_low=True)
    penalty = check_scalar(penalty, "penalty", low=0.0, strict_low=True)
    inverse_lipschitz = check_scalar(inverse_lipschitz, "inverse_lipschitz",
                                     low=0.0, strict_low=True)
    ratio = (2.0 + alpha * penalty) * inverse_lipschitz / (penalty + alpha * penalty**2)
    return ratio**2


def inner_error_scale(tc: TheoryConstants) -> float:
    """Constant ``v`` bounding inner-loop mean squared error by ``v/(S+beta)``.

    Requires the step condition ``2*mu*eta*tau_lo > 1`` strictly; its
    failure raises `AssumptionError` naming the inequality.
    """
    denom = 2.0 * tc.mu * tc.eta * tc.tau_lo - 1.0
    if denom <= 0.0:
        raise AssumptionError(
            f"step condition violated: 2*mu*eta*tau_lo = "
            f"{2.0 * tc.mu * tc.eta * tc.tau_lo:.6g} must exceed 1"
        )
    noise_branch = (tc.eta**2) * (tc.tau_hi**2) * (tc.sigma**2) / denom
    start_branch = (tc.beta + 1.0) * tc.diameter**2
    return max(noise_branch, start_branch)


class RateFit(NamedTuple):
    """Least-squares fit of ``log(value)`` against the iteration index."""

    slope: float
    r_squared: float
    intercept: float


def fit_linear_rate(trajectory: Sequence[Tuple[float, float]]) -> RateFit:
    """Fit ``log(value) = intercept + slope * k`` by ordinary least squares.

    ``trajectory`` is a sequence of ``(k, value)`` pairs with at least 5
    points, all values strictly positive (they are squared distances).
    ``exp(slope)`` estimates the per-iteration decay factor. A constant
    trajectory fits exactly with slope 0 and, having no variance to
    explain, reports ``r_squared = 1``.
    """
    pts = [(float(k), float(v)) for k, v in trajectory]
    if len(pts) < 5:
        raise ValueError(f"need at least 5 trajectory points, got {len(pts)}")
    bad = [k for k, v in pts if not v > 0]
    if bad:
        raise ValueError(
            f"log-domain error: nonpositive distances at k = {bad[:5]}; "
            "rate fitting needs strictly positive values"
        )
    ks = np.array([k for k, _ in pts])
    logs = np.log([v for _, v in pts])
    k_mean, log_mean = ks.mean(), logs.mean()
    dk = ks - k_mean
    denom = float(dk @ dk)
    if denom == 0.0:
        raise ValueError("trajectory points must span more than one k value")
    slope = float(dk @ (logs - log_mean)) / denom
    intercept = log_mean - slope * k_mean
    residuals = logs - (intercept + slope * ks)
    total = float(np.sum((logs - log_mean) ** 2))
    if total == 0.0:
        r_squared = 1.0
    else:
        r_squared = 1.0 - float(residuals @ residuals) / total
    return RateFit(slope=slope, r_squared=r_squared, intercept=intercept)


class ComplexityReport(NamedTuple):
    """Measured vs predicted budget scaling between two accuracy targets."""

    measured_ratio: float
    predicted_ratio: float
    agrees: bool
    factor: float


def complexity_check(eps1, eps2, budgets, q, factor=2.0) -> ComplexityReport:
    """Compare measured budget growth against the ``(1/eps)^(1+q)`` law.

    ``budgets`` is the pair of cumulative inner-iteration counts needed
    to reach ``eps1`` and the tighter ``eps2``. The predicted ratio is
    ``(eps1/eps2)^(1+q)``; agreement means the measured ratio lies within
    a multiplicative ``factor`` of it.
    """
    eps1 = check_scalar(eps1, "eps1", low=0.0, strict_low=True)
    eps2 = check_scalar(eps2, "eps2", low=0.0, strict_low=True)
    if eps2 > eps1:
        raise ValueError(f"eps2 must be <= eps1, got eps1={eps1}, eps2={eps2}")
    q = check_scalar(q, "q", low=0.0, strict_low=True)
    factor = check_scalar(factor, "factor", low=1.0)
    budget1, budget2 = budgets
    budget1 = check_scalar(float(budget1), "budgets[0]", low=0.0, strict_low=True)
    budget2 = check_scalar(float(budget2), "budgets[1]", low=0.0, strict_low=True)
    measured = budget2 / budget1
    predicted = (eps1 / eps2) ** (1.0 + q)
    agrees = predicted / factor <= measured <= predicted * factor
    return ComplexityReport(measured_ratio=measured, predicted_ratio=predicted,
                            agrees=agrees, factor=factor)


def budget_to_reach(rows, threshold, field="dist_sq_y"):
    """First cumulative inner budget at which ``field`` drops to ``threshold``.

    ``rows`` is a metrics-row sequence; returns the ``cum_inner`` of the
    first row with ``row.field <= threshold``, or ``None`` when the
    trajectory never gets there (callers turn that into an
    unreachable-accuracy error with context).
    """
    threshold = check_scalar(threshold, "threshold", low=0.0, strict_low=True)
    for row in rows:
        value = getattr(row, field)
        if not math.isnan(value) and value <= threshold:
            return row.cum_inner
    return None


def constants_from_problem(problem, *, sigma, eta, beta, tau_lo=1.0,
                           tau_hi=1.0) -> TheoryConstants:
    """Assemble `TheoryConstants` from instance metadata plus schedule values."""
    meta = problem.meta
    missing = [key for key in ("mu", "diameter") if key not in meta]
    if missing:
        raise ValueError(f"problem metadata lacks required constants: {missing}")
    return TheoryConstants(
        mu=float(meta["mu"]), sigma=float(sigma), eta=float(eta),
        beta=float(beta), diameter=float(meta["diameter"]),
        tau_lo=float(tau_lo), tau_hi=float(tau_hi),
        l_h=float(meta["l_h"]) if "l_h" in meta else None,
        alpha=float(meta["alpha"]) if "alpha" in meta else None,
    )
