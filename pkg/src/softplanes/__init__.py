"""Projective planes from soft triples of finite groups, and back."""
__version__ = "0.1.0"

from .errors import BudgetExceeded, InputError, SoftPlaneError, VerificationFailure  # noqa: E402

__all__ = ["__version__", "BudgetExceeded", "InputError", "SoftPlaneError", "VerificationFailure"]
