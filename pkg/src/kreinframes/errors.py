"""Exception hierarchy.

Negative analysis outcomes (not a frame, not transferable) are returned as
values; exceptions are reserved for violated preconditions.
"""


class KreinFrameError(Exception):
    """Base class for all errors raised by this package."""


# numeric core
class NotSquare(KreinFrameError):
    pass


class NotHermitian(KreinFrameError):
    pass


class NotPSD(KreinFrameError):
    pass


class Singular(KreinFrameError):
    pass


class NormExceedsOne(KreinFrameError):
    pass


class NonFiniteEntries(KreinFrameError):
    pass


class NoConvergence(KreinFrameError):
    pass


# spaces and frames
class DimensionMismatch(KreinFrameError):
    pass


class InvalidSymmetry(KreinFrameError):
    pass


class LengthMismatch(KreinFrameError):
    pass


class NotAFrameError(KreinFrameError):
    """An operation that needs a frame was handed a family that is not one."""


# structure
class EpsilonOutOfRange(KreinFrameError):
    pass


class NotSquareInvertible(KreinFrameError):
    pass


class NotAProjection(KreinFrameError):
    pass


class DoesNotCommuteWithJ(KreinFrameError):
    pass


class OverlappingMasks(KreinFrameError):
    pass


class SignatureMismatch(KreinFrameError):
    pass


class BadIndexCover(KreinFrameError):
    pass


class SubfamilyNotFrame(KreinFrameError):
    pass


class SearchLimitExceeded(KreinFrameError):
    pass


# potential
class NotUnitNorm(KreinFrameError):
    pass


class KLessThanN(KreinFrameError):
    pass


class NotFFCritical(KreinFrameError):
    pass


class VerificationFailed(KreinFrameError):
    pass


# documents / cli
class ParseError(KreinFrameError):
    pass
