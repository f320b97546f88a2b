"""Exception types shared across the package.

The CLI maps these onto distinct exit codes (see cli.py), so scripts can
tell a bad config from a numerical failure from a starved estimator.
"""


class KerrShutterError(Exception):
    """Base class for all package errors."""


class ConfigError(KerrShutterError):
    """Invalid, unknown, or missing configuration keys/values."""


class WavelengthRangeError(KerrShutterError):
    """Wavelength outside the validity range of a material model."""


class QuadratureError(KerrShutterError):
    """Numerical integration failed to converge at the requested tolerance.

    Carries diagnostics: number of refinement levels tried and the last
    observed relative change between levels.
    """

    def __init__(self, message, levels=None, last_change=None):
        super().__init__(message)
        self.levels = levels
        self.last_change = last_change


class InsufficientStatisticsError(KerrShutterError):
    """Too few counts to evaluate an estimator (zero denominator)."""


class CurveShapeError(KerrShutterError):
    """A sampled curve does not have the shape an operation requires."""
