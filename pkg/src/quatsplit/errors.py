"""Exception hierarchy shared by every module of the package."""


class QuatsplitError(Exception):
    """Base class for all errors raised by quatsplit."""


class InvalidArgument(QuatsplitError, ValueError):
    """An input violates the documented preconditions of an operation."""


class ResourceLimitExceeded(QuatsplitError):
    """A configured work budget ran out before an exact answer was reached."""


class HypothesisViolation(QuatsplitError):
    """The side conditions a splitting criterion needs do not hold."""

    def __init__(self, message, hypotheses=None):
        super().__init__(message)
        self.hypotheses = hypotheses


class InapplicableRule(QuatsplitError):
    """A specialised criterion does not cover the given input."""


class ClassificationMismatch(InapplicableRule):
    """The element does not generate the extension type a criterion requires."""


class InternalInconsistency(QuatsplitError, AssertionError):
    """Two computations that must agree did not; indicates a bug."""
