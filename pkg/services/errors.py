"""Exception hierarchy shared by the evaluation services.

The CLI maps these onto exit codes: validation problems exit with 2,
runtime failures exit with 1.
"""

from typing import Optional


class SimpEvalError(Exception):
    """Base class for all evaluation errors."""


class InvalidArgumentError(SimpEvalError, ValueError):
    """A caller passed arguments that violate an operation's preconditions."""


class DatasetNotFoundError(SimpEvalError, FileNotFoundError):
    """A dataset name or corpus file could not be resolved."""


class CorruptDatasetError(SimpEvalError):
    """A corpus file has the wrong shape or content digest."""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        expected: Optional[int] = None,
        actual: Optional[int] = None,
    ):
        super().__init__(message)
        self.path = path
        self.expected = expected
        self.actual = actual


class FetchError(SimpEvalError):
    """Downloading a dataset file failed. Safe to retry."""

    retriable = True

    def __init__(self, message: str, url: Optional[str] = None):
        super().__init__(message)
        self.url = url
