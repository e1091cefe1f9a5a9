"""Exception hierarchy shared by all modules.

The CLI maps every :class:`DomainError` to exit status 1; usage problems
(bad flags, malformed configs) are reported with exit status 2.
"""


class DomainError(Exception):
    """Base class for errors raised by the algebra and simulation code."""


class InputError(DomainError, ValueError):
    """An argument is malformed or outside its documented range."""


class CapacityError(DomainError):
    """A computation would exceed a configured enumeration bound."""


class TruncationError(DomainError):
    """A quantity is not determined by the stages carried by a point."""


class UndefinedColumnError(DomainError):
    """Input data requested on the top column, where the cocycle is undefined."""


class HypothesisError(DomainError):
    """The hypothesis of the characterization theorem does not hold."""


class InfeasibleError(DomainError):
    """No object satisfying the requested constraints exists."""


class PreconditionError(DomainError):
    """An operation was called outside its precondition."""


class ConsistencyError(DomainError):
    """An internal cross-check failed; indicates a defect, not bad input."""
