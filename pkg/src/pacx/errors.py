"""Shared exception types."""


class BudgetError(RuntimeError):
    """An enumeration or search exceeded its configured budget.

    Raised instead of silently truncating, so callers can either raise the
    budget or refuse the instance.  The CLI maps this to exit code 3.
    """


class VerificationError(RuntimeError):
    """An internal consistency suite found a violated invariant."""
