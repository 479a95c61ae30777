"""Exception hierarchy shared by the solvers, the file readers and the CLI."""


class ConnRestoreError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(ConnRestoreError, ValueError):
    pass


class ParseError(ConnRestoreError, ValueError):
    """A malformed instance or solution document.

    ``line`` is the 1-based line number the problem was detected on.
    """

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class BudgetExceededError(ConnRestoreError):
    """A search would exceed its configured work cap."""


class IterationCapExceededError(BudgetExceededError):
    pass


class InfeasibleError(ConnRestoreError):
    """No solution exists within the candidate set (for example, a grid too coarse)."""


class SearchSpaceTooLargeError(BudgetExceededError):
    pass
