"""Exception hierarchy shared by the library and the CLI."""


class GiantAtomError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(GiantAtomError, ValueError):
    """Invalid or incomplete configuration (bad key, out-of-range value)."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class DomainError(GiantAtomError, ValueError):
    """An argument lies outside the domain of the operation."""


class SingularityError(GiantAtomError, ZeroDivisionError):
    """A denominator vanished (modulus below the singular floor)."""


class NumericError(GiantAtomError, ArithmeticError):
    """Quadrature or integration failed to reach the requested accuracy."""


class ConvergenceError(GiantAtomError, RuntimeError):
    """An iterative procedure ran out of budget. ``best`` holds the last estimate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DataError(GiantAtomError, ValueError):
    """Malformed spectrum data (non-numeric cells, duplicates, too few rows)."""


class FlatObjectiveError(DataError):
    """The data carry no information (constant transmission)."""
