"""Exception hierarchy shared across the package."""


class MVMAMError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(MVMAMError, ValueError):
    """An input violates a documented precondition (shape, sign, ordering)."""


class ConfigurationError(MVMAMError, ValueError):
    """A model or run configuration is incomplete or names unknown things."""


class NumericalError(MVMAMError, ArithmeticError):
    """A linear solve or iteration broke down (zero pivot, failed search)."""


class NumericalBlowupError(NumericalError):
    """A state or drift became non-finite or exceeded the blowup bound."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
