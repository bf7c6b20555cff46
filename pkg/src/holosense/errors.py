"""Exception types shared across the package."""


class HolosenseError(Exception):
    """Base class for package-specific errors."""


class ConfigError(HolosenseError):
    """Invalid scenario or sweep configuration; the message carries the field path."""


class RecoveryError(HolosenseError):
    """Base class for two-hologram object-wave recovery failures."""


class IllConditionedDeltaError(RecoveryError):
    """|sin(delta)| is too small for a stable two-hologram inversion."""


class InconsistentIntensitiesError(RecoveryError):
    """The quadratic-root discriminant is negative beyond tolerance."""


class CirclesDoNotIntersectError(RecoveryError):
    """The geometric radicand is negative beyond tolerance (heavy noise)."""


class DegenerateMeanError(HolosenseError):
    """Some |mu_l| fell below tolerance; likelihood derivatives are undefined there."""

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(int(i) for i in indices)


class SingularInformationError(HolosenseError):
    """The information (or Schur complement) matrix is numerically singular."""


class QuadratureAccuracyError(HolosenseError):
    """Adaptive quadrature did not reach the requested accuracy.

    Carries the achieved estimate and its error bound.
    """

    def __init__(self, message, value=float("nan"), error=float("inf")):
        super().__init__(message)
        self.value = value
        self.error = error


class NotAscentError(HolosenseError):
    """The proposed step is not an ascent direction for the log-likelihood."""
