"""Exception types raised across the package."""


class FormulaDomainError(ValueError):
    """A fault-frequency formula was evaluated outside its domain."""


class SignalSpecError(ValueError):
    """A signal recipe violates its invariants (aliasing, empty window, ...)."""


class ConfigError(ValueError):
    """Malformed configuration. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(ValueError):
    """A result file does not follow the expected CSV schema."""


class NumericalFailure(RuntimeError):
    """A numerical kernel did not converge."""


class EstimationError(RuntimeError):
    """Base class for estimator failures.

    Estimator failures are expected at low SNR; the benchmark counts them
    per cell instead of aborting.
    """

    def __init__(self, message, method=None):
        self.method = method
        if method is not None:
            message = f"{method}: {message}"
        super().__init__(message)


class RankDeficiencyError(EstimationError):
    def __init__(self, message, rank=None, method=None):
        self.rank = rank
        super().__init__(message, method)


class DegenerateSubspaceError(EstimationError):
    pass


class DegenerateRotationError(EstimationError):
    pass


class RootSelectionError(EstimationError):
    pass


class PeakCountError(EstimationError):
    pass


class IllConditionedError(EstimationError):
    pass
