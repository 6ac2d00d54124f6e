"""Exception hierarchy shared by every app; each class knows its CLI exit code."""


class OverlapLabError(Exception):
    """Base class for all domain errors."""

    exit_code = 2


class ValidationProblem(OverlapLabError, ValueError):
    """Input rejected before any computation started."""

    exit_code = 2


class DimensionMismatch(ValidationProblem):
    pass


class DegenerateSimplexError(ValidationProblem):
    pass


class GeneralPositionError(ValidationProblem):
    pass


class ConstructionError(ValidationProblem):
    pass


class PreconditionError(ValidationProblem):
    pass


class BudgetExhausted(OverlapLabError):
    """A retry or search budget ran out; ``attempts`` and ``partial`` describe how far it got."""

    exit_code = 3

    def __init__(self, message, attempts=None, partial=None):
        super().__init__(message)
        self.attempts = attempts
        self.partial = partial


class InconclusiveResult(OverlapLabError):
    """Honest 'unknown' / 'unfalsified' outcome where a definite answer was required."""

    exit_code = 3

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class InvariantViolation(OverlapLabError, AssertionError):
    """A proven inequality failed on a concrete instance; always a bug."""

    exit_code = 1


class ReplayMismatch(OverlapLabError):
    """A replayed run produced outputs whose digests differ from the recorded ones."""

    exit_code = 3

    def __init__(self, message, differences=None):
        super().__init__(message)
        self.differences = differences or []
