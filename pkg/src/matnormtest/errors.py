"""Exception hierarchy shared across the package."""


class MatNormError(Exception):
    """Base class for all errors raised by :mod:`matnormtest`."""


class ShapeMismatch(MatNormError, ValueError):
    """Operands do not have conformable shapes."""


class DomainError(MatNormError, ValueError):
    """A scalar argument lies outside the function's domain."""


class NotPositiveDefinite(MatNormError, ValueError):
    """Cholesky factorization hit a non-positive (or negligible) pivot."""


class SampleTooSmall(MatNormError, ValueError):
    """Too few observations for the requested estimate or null law."""


class SingularCovariance(NotPositiveDefinite):
    """The unbiased sample covariance of vec(X_i) is not positive definite."""


class SingularUpdate(NotPositiveDefinite):
    """A flip-flop scale update produced a non positive definite matrix."""


class MaxIterationsExceeded(MatNormError, RuntimeError):
    """Flip-flop iteration hit ``max_iter``; ``report`` holds the last iterate."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParseError(MatNormError, ValueError):
    """Malformed dataset file."""


class ShapeError(ParseError):
    """A CSV row does not hold exactly ``rows * cols`` fields."""


class BadMagic(ParseError):
    """IDX header magic number is not the expected one."""


class TruncatedFile(ParseError):
    """IDX payload is shorter than its header declares."""
