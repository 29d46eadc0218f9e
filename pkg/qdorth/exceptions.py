"""
Exceptions raised by qdorth.

Every failure the library can diagnose has its own class, so that callers (and the command line) can tell a usage
mistake from bad input data or a numerical failure.
"""


class QDOrthError(Exception):
    """Base class of all qdorth errors."""


class ImproperlyConfigured(QDOrthError):
    """A setting or an experiment configuration is invalid."""


class UsageError(QDOrthError):
    """Invalid command line usage, detected before any computation."""


class PrecisionOverflowError(QDOrthError, OverflowError):
    """An extended precision operation overflowed or produced an invalid value."""


class ZeroDivisorError(QDOrthError, ZeroDivisionError):
    """Division by an exact zero."""


class NegativeSqrtError(QDOrthError, ValueError):
    """Square root of a negative number."""


class DimensionMismatchError(QDOrthError, ValueError):
    """Operands do not have compatible shapes."""


class Breakdown(QDOrthError, ArithmeticError):
    """
    The pivot norm of column `k` fell below the breakdown threshold.

    Modified Gram-Schmidt without column swaps cannot proceed on a numerically rank deficient matrix.

    Parameters
    ----------
    k : int
        1-based index of the offending column
    norm : float
        Leading part of the pivot norm
    threshold : float
    """

    def __init__(self, k, norm=0.0, threshold=0.0):
        super(Breakdown, self).__init__(
            "breakdown at column {}: pivot norm {:.3e} below threshold {:.3e}".format(k, norm, threshold))
        self.k = k
        self.norm = norm
        self.threshold = threshold


class MatrixFormatError(QDOrthError, ValueError):
    """A matrix or vector file could not be parsed."""

    def __init__(self, msg, path=None, lineno=None):
        where = ''
        if path is not None:
            where = '{}:{}: '.format(path, lineno) if lineno is not None else '{}: '.format(path)
        super(MatrixFormatError, self).__init__(where + msg)
        self.path = path
        self.lineno = lineno


class ExecutionError(QDOrthError, RuntimeError):
    """A worker of the parallel executor failed; the result is discarded, never returned half-computed."""
