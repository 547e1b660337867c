"""Exception types shared across the package."""


class DataValidationError(ValueError):
    """Raised when input data violates a structural requirement
    (dimension mismatch, rank deficiency, non-finite entries, ...)."""


class TableParseError(ValueError):
    """Raised when a delimited input table or a config file cannot be parsed."""


class NumericalError(RuntimeError):
    """Raised when a computation is numerically impossible
    (degenerate sample, no descent direction, quadrature failure, ...)."""
