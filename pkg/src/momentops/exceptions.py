"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """An object specification or run configuration violates its invariants."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class QuadratureError(RuntimeError):
    """Quadrature failed to reach the requested tolerance.

    ``achieved`` carries the error estimate at the point of failure.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class NotWellDefinedError(RuntimeError):
    """An operator application was requested where the defining integral diverges.

    ``evidence`` carries the graded partial-integral sequence that triggered
    the divergence verdict.
    """

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence
