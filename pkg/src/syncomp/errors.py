"""Shared exception types."""


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class RankDeficientError(ValueError):
    """A full-row-rank matrix was required; redundant rows must be removed first."""


class BudgetExceededError(RuntimeError):
    """An enumeration or table would exceed its configured budget."""


class DecodeFailureError(RuntimeError):
    """No candidate was found within the decoder's enumeration budget."""


class StrategyError(ValueError):
    """A schedule strategy's precondition does not hold for the given code."""
