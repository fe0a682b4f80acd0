"""
Exception hierarchy shared by every workbench module.

All domain errors derive from ``WorkbenchError`` (itself a ``ValueError``) so the
command-line front end can map them to a single exit code.
"""

from typing import Optional


class WorkbenchError(ValueError):
    """Base class for invalid input or a violated precondition."""


class ParseError(WorkbenchError):
    """Malformed S-expression or FOF text."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class SortError(WorkbenchError):
    """A number variable used where an index variable is required, or vice versa."""


class ArityError(WorkbenchError):
    """A formula has the wrong number of free variables for the operation."""


class OpenFormulaError(WorkbenchError):
    """A sentence was required but the formula has free variables."""


class OpenTermError(WorkbenchError):
    """A closed term was required but the term contains variables."""


class NotACodeError(WorkbenchError):
    """A natural number outside the range of the Goedel numbering."""


class EmptyListError(WorkbenchError):
    """A big connective or generator received an empty list."""


class IndexSyntaxError(WorkbenchError):
    """Index-sort syntax where only arithmetic (plus T) is allowed."""


class UnboundedQuantifierError(WorkbenchError):
    """An unbounded quantifier inside a formula evaluated as Delta_0."""


class MissingBindingError(WorkbenchError):
    """The environment does not cover a free variable."""


class TranslationError(WorkbenchError):
    """An interpretation cannot translate the given formula."""


class BudgetExceededError(WorkbenchError):
    """A construction or export went past its node budget."""


class PoolTooLargeError(WorkbenchError):
    """A check suite received more sentences than the configured bound."""


class ConfigError(WorkbenchError):
    """Invalid configuration value."""
