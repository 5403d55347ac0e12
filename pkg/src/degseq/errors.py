"""Exception hierarchy shared by the generators, oracles and CLI."""


class DegSeqError(Exception):
    """Base class for every error raised by this package."""


class InvalidDegree(DegSeqError, ValueError):
    pass


class OddDegreeSum(DegSeqError, ValueError):
    pass


class NotGraphical(DegSeqError, ValueError):
    pass


class NotBigraphical(NotGraphical):
    pass


class UnbalancedParts(DegSeqError, ValueError):
    pass


class InvalidAnchor(DegSeqError, ValueError):
    pass


class InternalInvariantViolation(DegSeqError, AssertionError):
    pass


class BoundViolation(InternalInvariantViolation):
    """A supposed lower bound exceeded the quantity it bounds."""


class TooLargeForOracle(DegSeqError, ValueError):
    pass


class InsufficientSamples(DegSeqError, ValueError):
    pass


class GaveUp(DegSeqError, RuntimeError):
    """Restart cap exceeded. ``stats`` holds the accounting up to that point."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats


class Restart(DegSeqError):
    """Control-flow signal: the current run is rejected and must start over.

    ``cause`` is one of ``"initial"``, ``"f"`` or ``"b"``.
    """

    def __init__(self, cause):
        super().__init__(cause)
        self.cause = cause
