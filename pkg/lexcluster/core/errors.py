"""
Error hierarchy shared by services and the command line.

Services raise these with a human-readable detail; only the CLI layer turns
them into exit codes.
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class LexClusterError(Exception):
    """Base error carrying a detail message and the process exit code."""

    exit_code: int = EXIT_DATA

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def __repr__(self) -> str:
        return f"{type(self).__name__}(detail={self.detail!r})"


class UsageError(LexClusterError):
    """Invalid flags or configuration."""

    exit_code = EXIT_USAGE


class DataError(LexClusterError):
    """Unreadable, malformed or unsuitable input data."""

    exit_code = EXIT_DATA


class ParseError(DataError):
    """Malformed edge-list or clustering line."""

    def __init__(self, detail: str, line_number: int):
        super().__init__(f"line {line_number}: {detail}")
        self.line_number = line_number


class EmptyClusterError(DataError):
    """A cluster operation received an empty node set."""


class UndefinedConductanceError(DataError):
    """Conductance denominator min(Vol(c), 2m - Vol(c)) is zero."""


class StepOutOfRangeError(DataError):
    """Dendrogram step outside [0, |events|]."""


class ContractViolation(LexClusterError):
    """An internal precondition was broken (a bug, not bad input)."""

    exit_code = EXIT_DATA
