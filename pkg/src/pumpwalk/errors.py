"""Shared exception types."""


class ConvergenceError(RuntimeError):
    """A truncated iteration hit its hard cap or an exact solve failed."""


class OracleCheckError(RuntimeError):
    """An internal cross-check inside the dense simulator failed."""
