"""Exception types shared across the package."""


class ArgumentError(ValueError):
    """Raised when an argument fails validation."""


class ConfigError(ValueError):
    """Raised when an experiment configuration is inconsistent."""


class SolveFailure(RuntimeError):
    """Raised when a shifted Gram solve does not meet its residual tolerance.

    Typically means the shift is too close to the spectrum of A^T A, or the
    iterative inner solver did not converge.
    """


class EvaluationError(RuntimeError):
    """Raised when a scalar function cannot be evaluated where required."""
