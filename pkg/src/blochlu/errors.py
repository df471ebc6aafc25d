"""Exception hierarchy.

Every error raised by the library derives from :class:`BlochLUError`, which is
itself a :class:`ValueError`, so callers that only care about "bad input" can
catch that.
"""


class BlochLUError(ValueError):
    """Base class for all library errors."""


# -- state validation
class BadDimension(BlochLUError):
    pass


class NotHermitian(BlochLUError):
    pass


class TraceNotOne(BlochLUError):
    pass


class NotPositive(BlochLUError):
    pass


class ZeroVector(BlochLUError):
    pass


class BadRank(BlochLUError):
    pass


# -- local unitaries and rotations
class ArityMismatch(BlochLUError):
    pass


class NotSpecialUnitary(BlochLUError):
    pass


class NotRotation(BlochLUError):
    pass


# -- tensors
class TooManyQubits(BlochLUError):
    pass


class IncompleteTensors(BlochLUError):
    pass


class BadPartition(BlochLUError):
    pass


class NotSymmetric(BlochLUError):
    pass


class MissingTensor(BlochLUError):
    pass


# -- words and invariants
class WordSyntaxError(BlochLUError):
    """Malformed or inadmissible word text; ``position`` is the failing atom/junction."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class UnsupportedQubitCount(BlochLUError):
    pass


class WrongQubitCount(BlochLUError):
    pass


class DimensionMismatch(BlochLUError):
    pass


class SchemeMismatch(BlochLUError):
    pass


# -- decisions
class QubitMismatch(BlochLUError):
    pass


class PreconditionViolated(BlochLUError):
    pass


class NotGeneric(BlochLUError):
    pass


class ConstructionFailure(BlochLUError):
    """Witness reconstruction failed; ``diagnostics`` holds per-qubit details."""

    def __init__(self, message, diagnostics=None, improper=False):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
        self.improper = improper
