"""This module defines the exceptions raised across the package.

Every error carries the process exit code the command line uses for it and a
mapping of diagnostics that is serialised to JSON on standard error.
"""
from typing import Any, Dict, Optional

from renyi_spectrum.constants import EXIT_DOMAIN, EXIT_NUMERICAL, EXIT_USAGE


class RenyiSpectrumError(Exception):
    """Base class for all package errors"""

    exit_code = EXIT_DOMAIN

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = dict(details or {})

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable representation used by the command line"""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }


class DomainError(RenyiSpectrumError, ValueError):
    """An argument lies outside the domain of the operation"""


class OutOfRangeError(DomainError):
    """The entropy deficit exceeds ln N"""


class MissingParameterError(DomainError):
    """A parameter needed by the requested phase was not provided"""


class WrongPhaseError(DomainError):
    """A phase solver was called with a point belonging to another phase"""


class PhaseInconsistencyError(RenyiSpectrumError):
    """The reconstructed density is negative, so the wrong phase was used"""


class NumericalError(RenyiSpectrumError):
    """Base class for numerical failures"""

    exit_code = EXIT_NUMERICAL


class KernelAccuracyError(NumericalError):
    """A kernel could not reach the requested tolerance"""

    def __init__(self, message: str, residual: float, **details: Any):
        super().__init__(message, {"residual": residual, **details})
        self.residual = residual


class RootFindingError(NumericalError):
    """A one-dimensional root could not be bracketed or did not converge"""

    def __init__(self, message: str, bracket: Any = None, **details: Any):
        super().__init__(message, {"bracket": bracket, **details})
        self.bracket = bracket


class OracleConvergenceError(NumericalError):
    """The finite-N saddle-point solver did not converge"""

    def __init__(self, message: str, residual_history: Any = None, **details: Any):
        history = [float(x) for x in (residual_history or [])]
        super().__init__(message, {"residual_history": history, **details})
        self.residual_history = history


class ConfigurationError(RenyiSpectrumError):
    """A configuration file is unreadable or names unknown settings"""

    exit_code = EXIT_USAGE
