"""Exception types shared across the package.

The CLI maps these onto process exit codes: ConfigError -> 2,
DataError -> 3, NumericalError -> 4.
"""


class AnovaFitError(Exception):
    """Base class for package-specific errors."""


class ConfigError(AnovaFitError):
    """Invalid or mutually inconsistent configuration values."""


class DataError(AnovaFitError):
    """Malformed or out-of-contract input data."""


class DomainError(DataError):
    """Coordinate lies outside the domain of the selected basis."""


class NumericalError(AnovaFitError):
    """Numerical failure while solving or evaluating."""


class DegenerateModelError(NumericalError):
    """Model variance is zero; sensitivity indices are undefined."""
