"""Exception types shared across the package."""


class EvenSpecError(Exception):
    """Base class for all package errors."""


class Graph6Error(EvenSpecError, ValueError):
    """Malformed graph6 text; ``offset`` is the index of the offending byte."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class PreconditionError(EvenSpecError, ValueError):
    """An operation was called outside its documented domain."""


class CapacityError(EvenSpecError, ValueError):
    """Input is larger than the brute-force routines support."""


class CertificationError(EvenSpecError, RuntimeError):
    """A construction produced a matrix that failed its own verification."""


class SoundnessError(EvenSpecError, RuntimeError):
    """A graph received both an obstruction and a verified certificate."""
