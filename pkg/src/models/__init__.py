"""
Models package: shared domain types.
"""

from .errors import (
    JoinSimError,
    MalformedTreeError,
    PlanInfeasibleError,
    RoleMismatchError,
    UnsupportedStrategyError,
)
from .plan import DEFAULT_SALTS, HashLevel, HashPlan, Strategy
from .relation import (
    INTERMEDIATE_TUPLE_WIDTH_BYTES,
    TUPLE_WIDTH_BYTES,
    DataProfile,
    Relation,
)
from .results import JoinAggregate, RunStats
from .state_models import RunState

__all__ = [
    "JoinSimError",
    "MalformedTreeError",
    "PlanInfeasibleError",
    "RoleMismatchError",
    "UnsupportedStrategyError",
    "DEFAULT_SALTS",
    "HashLevel",
    "HashPlan",
    "Strategy",
    "INTERMEDIATE_TUPLE_WIDTH_BYTES",
    "TUPLE_WIDTH_BYTES",
    "DataProfile",
    "Relation",
    "JoinAggregate",
    "RunStats",
    "RunState",
]
