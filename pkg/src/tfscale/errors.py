"""Exception hierarchy.

Every error raised by the package derives from :class:`FrameError`, which is
itself a ``ValueError`` so callers that only care about "bad input" can catch
that.
"""


class FrameError(ValueError):
    """Base class for all package errors."""


class InvalidFrame(FrameError):
    pass


class DimensionMismatch(FrameError):
    pass


class DimensionTooSmall(FrameError):
    pass


class UnsupportedDimension(FrameError):
    pass


class LengthMismatch(FrameError):
    pass


class NegativeCoefficient(FrameError):
    pass


class NotUnitNorm(FrameError):
    pass


class AllZeroFrame(FrameError):
    pass


class OutOfRange(FrameError):
    pass


class EmptyNullSpace(FrameError):
    pass


# numeric kernel


class NotSymmetric(FrameError):
    pass


class NotPSD(FrameError):
    pass


class NoConvergence(FrameError):
    pass


class IterationLimit(FrameError):
    """Nearest-point iteration hit its cap before deciding hull membership."""


class IterationCap(FrameError):
    """Perceptron did not separate the points within its update budget."""


# planar


class PropertyQViolated(FrameError):
    pass


class AccumulationFailed(FrameError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


# io


class ParseError(FrameError):
    def __init__(self, message, location=None):
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location


class NormViolation(FrameError):
    def __init__(self, index, norm):
        super().__init__(f"vector {index} has norm {norm!r}, expected 1")
        self.index = index
        self.norm = norm
