"""Solver implementations: stochastic inner-loop ALM, noise-injected ALM,
a deterministic high-accuracy oracle, and a primal-dual baseline."""

from .subproblem import exact_subproblem
from .robbins_monro import (
    RmalmConfig,
    RobbinsMonroALM,
    inner_loop,
    solve,
    step_size,
    subproblem_budget,
)
from .noise_harness import NoiseInjectedALM, SalmConfig, salm_run
from .exact_oracle import (
    ALMOracle,
    OracleSolution,
    best_feasible_iterate,
    kkt_residuals,
    solve_exact,
)
from .primal_dual import PdsgConfig, PrimalDualSG, pdsg_solve, running_average

__all__ = [
    "ALMOracle",
    "NoiseInjectedALM",
    "OracleSolution",
    "PdsgConfig",
    "PrimalDualSG",
    "RmalmConfig",
    "RobbinsMonroALM",
    "SalmConfig",
    "best_feasible_iterate",
    "exact_subproblem",
    "inner_loop",
    "kkt_residuals",
    "pdsg_solve",
    "running_average",
    "salm_run",
    "solve",
    "solve_exact",
    "step_size",
    "subproblem_budget",
]
