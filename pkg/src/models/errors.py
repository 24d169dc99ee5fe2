"""
Exception hierarchy for the multiway join simulator.
"""


class JoinSimError(Exception):
    """Base class for simulator errors."""


class PlanInfeasibleError(JoinSimError):
    """A hash plan violates a precondition of the chosen strategy."""


class RoleMismatchError(JoinSimError, ValueError):
    """Relations do not carry the column roles a join expects."""


class MalformedTreeError(JoinSimError, ValueError):
    """A loop tree has negative trips, bad probabilities or a bad body."""


class UnsupportedStrategyError(JoinSimError, ValueError):
    """The requested strategy has no implementation for this operation."""
