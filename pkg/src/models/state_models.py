"""
State models for the experiment pipeline.
"""

from typing import Optional, TypedDict

from .relation import Relation
from .results import JoinAggregate, RunStats


class RunState(TypedDict, total=False):
    """State flowing through the generate → simulate → verify graph."""
    spec: object
    strategy: str
    machine: object
    plan: object
    verify: bool
    R: Relation
    S: Relation
    T: Relation
    aggregate: JoinAggregate
    stats: RunStats
    verified: Optional[bool]
    verify_skipped: bool
