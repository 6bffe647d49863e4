"""Stochastic augmented Lagrangian solvers and benchmark problems.

The package bundles four solvers for convex programs with convex
inequality constraints and a simple projectable set constraint:

- `RobbinsMonroALM`: augmented Lagrangian outer loop whose subproblems
  are solved by projected stochastic gradient with growing budgets.
- `NoiseInjectedALM`: exact subproblem solves perturbed by synthetic
  noise with a decaying penalty, for studying noise robustness.
- `ALMOracle`: deterministic high-accuracy reference solver.
- `PrimalDualSG`: projected stochastic gradient on the ordinary
  Lagrangian, the usual single-loop baseline.

Benchmark instances come from `gen_qcqp`, `gen_two_stage`, `gen_cvar`,
and `gen_linear_qp`; `rmalm.cli` runs them from config files and logs
metrics CSVs.
"""

from .auglag import (
    PenaltyState,
    SampleBatch,
    auglag_grad_full,
    auglag_value,
    auglag_value_grad_full,
    draw_batch,
    multiplier_update,
    stoch_grad,
)
from .exceptions import (
    AssumptionError,
    BudgetExceededError,
    ConfigError,
    DataError,
    NoFeasibleIterateError,
    NonconvergenceError,
    RmalmError,
    UnreachableAccuracyError,
)
from .generators import (
    gen_cvar,
    gen_linear_qp,
    gen_qcqp,
    gen_returns,
    gen_two_stage,
    load_returns_csv,
    make_scalar_demo,
)
from .metrics import (
    CSV_COLUMNS,
    SCHEMA_VERSION,
    MetricsRow,
    SolveTrace,
    read_metrics_csv,
    write_metrics_csv,
)
from .problem import StochasticProblem, make_holdout_objective
from .projections import (
    make_box_projector,
    make_product_projector,
    project_ball,
    project_box,
    project_nonneg,
    project_simplex,
)
from .rng import RngStream
from .solvers import (
    ALMOracle,
    NoiseInjectedALM,
    OracleSolution,
    PdsgConfig,
    PrimalDualSG,
    RmalmConfig,
    RobbinsMonroALM,
    SalmConfig,
    best_feasible_iterate,
    exact_subproblem,
    kkt_residuals,
    pdsg_solve,
    running_average,
    salm_run,
    solve_exact,
)
from .solvers.robbins_monro import (
    DEFAULT_BUDGET_GROWTH,
    inner_loop,
    solve,
    step_size,
    subproblem_budget,
)
from .theory import (
    ComplexityReport,
    ContractionInfo,
    RateFit,
    TheoryConstants,
    budget_to_reach,
    complexity_check,
    constants_from_problem,
    contraction_theta,
    fit_linear_rate,
    inner_error_scale,
    theta_prime,
)

__version__ = "0.1.0"

__all__ = [
    "ALMOracle",
    "AssumptionError",
    "BudgetExceededError",
    "CSV_COLUMNS",
    "ComplexityReport",
    "ConfigError",
    "ContractionInfo",
    "DEFAULT_BUDGET_GROWTH",
    "DataError",
    "MetricsRow",
    "NoFeasibleIterateError",
    "NoiseInjectedALM",
    "NonconvergenceError",
    "OracleSolution",
    "PdsgConfig",
    "PenaltyState",
    "PrimalDualSG",
    "RateFit",
    "RmalmConfig",
    "RmalmError",
    "RngStream",
    "RobbinsMonroALM",
    "SCHEMA_VERSION",
    "SalmConfig",
    "SampleBatch",
    "SolveTrace",
    "StochasticProblem",
    "TheoryConstants",
    "UnreachableAccuracyError",
    "auglag_grad_full",
    "auglag_value",
    "auglag_value_grad_full",
    "best_feasible_iterate",
    "budget_to_reach",
    "complexity_check",
    "constants_from_problem",
    "contraction_theta",
    "draw_batch",
    "exact_subproblem",
    "fit_linear_rate",
    "gen_cvar",
    "gen_linear_qp",
    "gen_qcqp",
    "gen_returns",
    "gen_two_stage",
    "inner_error_scale",
    "inner_loop",
    "kkt_residuals",
    "load_returns_csv",
    "make_box_projector",
    "make_holdout_objective",
    "make_product_projector",
    "make_scalar_demo",
    "multiplier_update",
    "pdsg_solve",
    "project_ball",
    "project_box",
    "project_nonneg",
    "project_simplex",
    "read_metrics_csv",
    "running_average",
    "salm_run",
    "solve",
    "solve_exact",
    "step_size",
    "stoch_grad",
    "subproblem_budget",
    "theta_prime",
    "write_metrics_csv",
]
