"""Exception types raised across the package."""


class CredalError(ValueError):
    """Base class for input and contract violations."""


class EmptyInput(CredalError):
    pass


class DimensionMismatch(CredalError):
    pass


class InvalidProbabilityVector(CredalError):
    pass


class InvalidEvent(CredalError):
    pass


class InvalidGrouping(CredalError):
    pass


class InvalidScale(CredalError):
    pass


class DimensionTooLarge(CredalError):
    pass


class DimensionTooSmall(CredalError):
    pass


class TooManyLabels(CredalError):
    pass


class NotNested(CredalError):
    pass


class BaseTooLong(CredalError):
    pass


class InvalidHeight(CredalError):
    pass


class EpsilonTooLarge(CredalError):
    pass


class InvalidRadii(CredalError):
    pass


class UnknownDimension(CredalError):
    pass


class InfeasibleEmbedding(CredalError):
    pass


class ZeroReferenceVolume(CredalError):
    pass


class InvalidHyperparameter(CredalError):
    pass


class NumericalFailure(RuntimeError):
    """An internal numeric routine did not produce a usable answer."""


class NoConvergence(RuntimeWarning):
    pass


class NegativeMassWarning(RuntimeWarning):
    pass
