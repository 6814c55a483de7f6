"""Exception types shared across the package."""


class PlatkitError(Exception):
    """Base class for all package errors."""


class ParseError(PlatkitError):
    """Malformed textual or JSON input; carries the offending token position."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class ResourceLimitError(PlatkitError):
    """A computation would exceed a configured size cap (word length, state sum)."""


class BudgetError(PlatkitError):
    """A bounded procedure ran out of its configured budget before reaching its goal."""


class ReplayError(PlatkitError):
    """A move record could not be applied during log replay."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class OracleMismatchError(PlatkitError):
    """A move changed the link invariant; signals an implementation bug."""
