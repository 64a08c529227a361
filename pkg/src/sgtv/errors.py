class DataError(ValueError):
    """Malformed or inconsistent input data (shapes, files, missing side information)."""


class NumericalError(ArithmeticError):
    """A solver produced non-finite values."""
