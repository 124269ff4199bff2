"""Exception hierarchy shared by every fsoqkd component.

The CLI maps ConfigError to exit code 2 and every other FsoQkdError to 3.
"""

from typing import Any


class FsoQkdError(Exception):
    """Base class for all errors raised by fsoqkd."""


class InvalidArgumentError(FsoQkdError, ValueError):
    pass


class NumericalError(FsoQkdError, ArithmeticError):
    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class FitConvergenceError(NumericalError):
    """Raised when the optimiser stops without converging; carries the best point found."""

    def __init__(self, message: str, best_params: Any = None, nll: float = float("nan"), diagnostics=None):
        super().__init__(message, diagnostics)
        self.best_params = best_params
        self.nll = nll


class PhysicalityError(NumericalError):
    pass


class CalibrationError(FsoQkdError):
    pass


class InsufficientPilotsError(FsoQkdError):
    pass


class UnrecoverableBlockError(FsoQkdError):
    """The block cannot be processed, e.g. pilot SNR below the discard threshold."""

    def __init__(self, message: str, snr_db: float = float("nan")):
        super().__init__(message)
        self.snr_db = snr_db


class ConfigError(FsoQkdError):
    pass
