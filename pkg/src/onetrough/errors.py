"""Exception hierarchy shared by all modules."""


class TroughError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TroughError, ValueError):
    """Input outside the (guarded) parameter domain."""


class NumericalError(TroughError, ArithmeticError):
    """A numerical procedure failed: no bracket, no crossing, singular system."""


class DiscontinuityError(NumericalError):
    """Evaluation too close to a pole of an arctan argument in L."""


class LevelNotBracketedError(NumericalError):
    """Integer level k is not strictly inside the range of L on a branch."""


class ConsistencyError(NumericalError):
    """Overdetermined matching equations are not satisfied (theta is not a root)."""
