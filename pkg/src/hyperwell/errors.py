"""Exception hierarchy shared by all hyperwell modules."""


class HyperwellError(Exception):
    """Base class for library errors."""


class UsageError(HyperwellError, ValueError):
    """Invalid arguments (bad parameters, mismatched series centers, ...)."""


class DomainError(HyperwellError, ValueError):
    """Input outside the domain where an operation is defined."""


class PoleAtCenterError(DomainError):
    """A simple-pole expansion was requested at the pole itself."""


class NoSuchStateError(DomainError):
    """Requested bound state does not exist for the given parameters."""

    def __init__(self, message, max_level=None):
        super().__init__(message)
        self.max_level = max_level


class SufficiencyError(HyperwellError):
    """The sufficient condition for a polynomial solution is violated."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class IterationBudgetError(HyperwellError):
    """AIM ran out of Taylor order (one order is consumed per iteration)."""


class TruncationError(HyperwellError):
    """A series was truncated before its tail became negligible."""

    def __init__(self, message, tail_bound=None):
        super().__init__(message)
        self.tail_bound = tail_bound
