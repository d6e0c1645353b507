"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``VerificationFailure`` -> 1,
``InputError`` -> 2, ``BudgetExceeded`` -> 3.
"""


class SoftPlaneError(Exception):
    """Base class for all library errors."""


class InputError(SoftPlaneError, ValueError):
    """Malformed input or a violated precondition."""


class VerificationFailure(SoftPlaneError):
    """A mathematical check failed.  ``witness`` holds the offending data."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(SoftPlaneError):
    """An enumeration would exceed the configured element or node budget."""
