"""Exception hierarchy shared across the pipeline.

The CLI maps each family to a process exit code.
"""


class ConfigError(ValueError):
    """Invalid experiment configuration (exit code 2)."""

    exit_code = 2


class DataError(ValueError):
    """Unreadable or malformed input data (exit code 3)."""

    exit_code = 3


class CSVFormatError(DataError):
    """A CSV cell or header that does not match the dataset descriptor."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class NumericalError(ArithmeticError):
    """Training diverged, e.g. a NaN loss (exit code 4)."""

    exit_code = 4


class NotFittedError(RuntimeError):
    """A model was used before ``fit``."""
