"""Exception hierarchy shared by every qstat module."""


class QstatError(Exception):
    """Base class for analysis errors (CLI maps these to exit status 1)."""


class DomainError(QstatError, ValueError):
    """Argument outside the mathematical domain of a function."""


class InsufficientDataError(QstatError, ValueError):
    """Too few observations (or groups) for the requested quantity."""


class DegenerateDataError(QstatError, ValueError):
    """Zero-variance input where the statistic is undefined (0/0)."""


class DataFormatError(QstatError, ValueError):
    """Malformed input file."""


class ConvergenceError(QstatError, ArithmeticError):
    """Iterative numerical routine failed to converge."""
