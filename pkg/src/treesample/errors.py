"""Shared exception types."""


class DegenerateDistributionError(ValueError):
    """The dependency-tree distribution has no probability mass (Z_D <= 0 or singular)."""


class StuckWalkError(RuntimeError):
    """A random walk reached a node with zero total incoming weight."""


class RejectionBudgetError(RuntimeError):
    """Rejection sampling exceeded its attempt budget (pathological Z_T/Z_D)."""
