"""
Errors and warnings raised by the reserving engine.
"""


class ReserveEngineError(Exception):
    """
    Base class for every error raised by this package.
    """


class StructuralViolation(ReserveEngineError):
    """
    A transition which the retirement structure forbids has a nonzero rate,
    or the initial distribution is not a distribution over the
    pre-retirement states.
    """


class UnboundedIntensity(ReserveEngineError):
    """
    The total outgoing rate of a state exceeds the declared bound.
    """


class NegativeIntensity(ReserveEngineError):
    """
    A sampled transition rate is negative.
    """


class BadDiscount(ReserveEngineError):
    """
    The bank account is not positive, does not start at one or does not
    grow at the declared short rate.
    """


class UnboundedPayment(ReserveEngineError):
    """
    A payment is not finite on the contract horizon.
    """


class OutOfHorizon(ReserveEngineError):
    """
    A time lies outside of the contract horizon.
    """


class GridMisaligned(ReserveEngineError):
    """
    A time which must be a grid node is not one.
    """


class NonMarkovPreRetirement(ReserveEngineError):
    """
    A pre-retirement rate depends on the duration where a duration-free rate
    is required.
    """


class RegimeMismatch(ReserveEngineError):
    """
    A reserve surface does not belong to the requested information regime.
    """


class EmptyConditioning(ReserveEngineError):
    """
    No simulated path satisfies a conditioning event.
    """


class BadBound(ReserveEngineError):
    """
    A thinning acceptance ratio exceeded one.
    """


class ModelFileError(ReserveEngineError):
    """
    A model file could not be read or is malformed.
    """


class ScenarioConfigError(ReserveEngineError):
    """
    A scenario configuration value is invalid.
    """


class DiagonalInterpolationWarning(UserWarning):
    """
    A reserve on the diagonal ``s = t`` was extrapolated from earlier
    entry times.
    """
