"""Exception hierarchy shared across the package."""


class PBitRCError(Exception):
    """Base class for all package errors."""


class DomainError(PBitRCError, ValueError):
    """Input outside an operation's domain (non-finite values, bad shapes)."""


class ConfigError(PBitRCError, ValueError):
    """Invalid experiment or parameter configuration."""


class NumericError(PBitRCError, ArithmeticError):
    """A numerical procedure failed (no convergence, singular system)."""


class ConvergenceError(NumericError):
    """Iteration cap reached; ``estimate`` holds the best value found."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ScalingError(NumericError):
    """Spectral-radius rescaling impossible (radius is zero)."""


class ConstructionError(NumericError):
    """Random construction produced a degenerate object."""
