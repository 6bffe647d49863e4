"""Exception types shared across the package."""


class RmalmError(Exception):
    """Base class for package-specific failures."""


class ConfigError(RmalmError, ValueError):
    """Invalid configuration.

    Collects every offending field so a caller sees all problems at once
    instead of fixing them one by one.
    """

    def __init__(self, messages):
        if isinstance(messages, str):
            messages = [messages]
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


class DataError(RmalmError, ValueError):
    """Malformed problem data (bad file, inconsistent dimensions, ...)."""


class AssumptionError(RmalmError, ValueError):
    """A quantitative assumption required by a bound does not hold.

    The message names the violated inequality.
    """


class NonconvergenceError(RmalmError, RuntimeError):
    """An iterative solve hit its iteration cap before reaching tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class BudgetExceededError(RmalmError, RuntimeError):
    """The cumulative inner-iteration budget cap was reached.

    `outer_index` names the outer iteration that could not be afforded.
    """

    def __init__(self, message, outer_index=None):
        super().__init__(message)
        self.outer_index = outer_index


class NoFeasibleIterateError(RmalmError, ValueError):
    """No recorded iterate satisfied the feasibility tolerance."""

    def __init__(self, message, min_violation=None):
        super().__init__(message)
        self.min_violation = min_violation


class UnreachableAccuracyError(RmalmError, RuntimeError):
    """A requested accuracy threshold was never reached by a trajectory."""
