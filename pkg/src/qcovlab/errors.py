"""Exception hierarchy shared by every qcovlab module."""


class QCovError(Exception):
    """Base class for all library errors."""


class DomainError(QCovError, ValueError):
    """An argument lies outside the domain of a function."""


class InvalidBaseError(DomainError):
    """A box bracket was requested with base 1."""


class ShapeError(QCovError, ValueError):
    """Operators or spaces with incompatible shapes were combined."""


class GuardInfeasibleError(QCovError, ValueError):
    """The truncation is too small to leave a guarded interior."""


class UnsupportedRegimeError(QCovError, ValueError):
    """The construction is only defined for a different range of q."""


class ConstructionFailedError(QCovError, RuntimeError):
    """A brute-force construction did not reach its tolerance.

    ``table`` holds the candidate residuals that were tried.
    """

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table or {}


class InternalInconsistencyError(QCovError, RuntimeError):
    """Two independent constructions of the same object disagree."""


class IncompletePresentationError(QCovError, KeyError):
    """A misordered pair of generators has no rewrite rule."""

    def __init__(self, pair):
        super().__init__(f"no rewrite rule for misordered pair {pair[0]}*{pair[1]}")
        self.pair = pair

    def __str__(self):
        return self.args[0]


class PresentationSyntaxError(QCovError, ValueError):
    """The presentation DSL could not be parsed."""

    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ConfigError(QCovError, ValueError):
    """A suite configuration is invalid; the message names the key."""
