"""Shared exception types."""


class SSModError(Exception):
    """Base class for all package errors."""


class BudgetError(SSModError):
    """An enumeration or extension budget was exceeded."""


class SearchBoundError(SSModError):
    """A bounded exhaustive search was exhausted without a hit."""
