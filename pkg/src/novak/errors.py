"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: invalid input -> 2, budget -> 3.
"""


class NovakError(Exception):
    """Base class for all library errors."""


class InvalidArgument(NovakError, ValueError):
    pass


class PreconditionViolation(InvalidArgument):
    """Raised when a construction is applied outside its hypotheses."""


class BudgetExceeded(NovakError):
    """A factorization or search ran out of its effort budget."""


class SizeLimitExceeded(NovakError):
    """A constructed integer would exceed the configured bit ceiling."""


class CounterexampleError(NovakError):
    """A provably true invariant failed to hold; carries the evidence."""

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence


class CacheError(NovakError):
    def __init__(self, message, line_no=None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line_no is not None:
            where += f"{line_no}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line_no = line_no
        self.path = path


class CacheFormatError(CacheError, InvalidArgument):
    """Malformed cache line."""


class CacheProductError(CacheError):
    """A cache record whose factors do not multiply back to 2^n + 1."""
