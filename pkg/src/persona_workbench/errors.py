"""Exception hierarchy shared across the package."""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for all package errors."""


class CorpusError(WorkbenchError):
    """Raised when a corpus file cannot be loaded or fails validation.

    Carries the 1-based line number of the offending record when known.
    """

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownThemeError(WorkbenchError):
    """Raised when a string cannot be parsed as a known theme."""


class RetrievalError(WorkbenchError):
    """Raised on index construction or scoring misuse (duplicate or unknown ids)."""


class CatalogError(WorkbenchError):
    """Raised when an ability catalog file is malformed or inconsistent."""


class AbilityNotFoundError(WorkbenchError):
    """Raised when a (theme, name) pair has no catalog entry."""

    def __init__(self, theme: str, name: str) -> None:
        super().__init__(f"no ability entry for ({theme}, {name!r})")
        self.theme = theme
        self.name = name


class ValidationError(WorkbenchError):
    """Raised on invalid caller-supplied values; names the offending field."""

    def __init__(self, message: str, field: str | None = None) -> None:
        self.field = field
        super().__init__(message)


class NotFoundError(WorkbenchError):
    """Raised when a stored entity id does not exist."""

    def __init__(self, message: str, field: str | None = None) -> None:
        self.field = field
        super().__init__(message)


class StoreError(WorkbenchError):
    """Raised on persistence failures or store misuse."""


class ProviderError(WorkbenchError):
    """Raised when a completion provider fails.

    ``retryable`` marks transient failures (timeouts, 5xx) that the caller
    may retry; schema or auth problems are not retryable.
    """

    def __init__(self, message: str, retryable: bool = False) -> None:
        self.retryable = retryable
        super().__init__(message)


class GroundingError(WorkbenchError):
    """Raised when an operation that requires grounding passages has none."""
