"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ValidationError -> 1, NumericsError
(and subclasses) -> 2, failed diagnostic checks -> 3.
"""


class QCHybridError(Exception):
    """Base class for all package errors."""


class ValidationError(QCHybridError):
    """Invalid configuration value or ill-formed input object."""


class NumericsError(QCHybridError):
    """A numerical computation left its documented tolerance regime."""


class IntegrationError(NumericsError):
    """Non-finite state encountered during time integration."""

    def __init__(self, message, t_fail):
        super().__init__(message)
        self.t_fail = t_fail


class SpectrumError(NumericsError):
    """Eigenvalue spectrum violates the documented tolerance contract."""
