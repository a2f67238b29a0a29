"""Exception types shared across the package.

Everything raised for bad input data or configuration derives from
:class:`DataError`, so callers (and the CLI) can distinguish "your data is
wrong" from genuine internal faults.
"""

from __future__ import annotations


class DataError(Exception):
    """Base class for data and configuration problems."""


class ParseError(DataError):
    """A file could not be parsed.  Carries the path and 1-based line number."""

    def __init__(self, path: object, line: int, message: str) -> None:
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


class DuplicateIdError(DataError):
    """An identifier that must be unique appeared more than once."""


class UnknownIdError(DataError):
    """A reference points at an identifier that does not exist."""


class InvalidConfigError(DataError):
    """A configuration value is out of range or inconsistent."""


class MissingBaselineError(DataError):
    """No baseline cell exists for a (year, category) pair being scored."""


class EmptyPoolError(DataError):
    """A rating pool contains no selection instances."""


class NoSelectionError(DataError):
    """A university score was requested for an empty selection."""


class MismatchedSetError(DataError):
    """Rankings that must cover the same universities do not."""


class EmptyIntersectionError(DataError):
    """Two rankings share no universities at all."""
