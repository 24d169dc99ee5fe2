"""
Pattern memory unit state.

Resident tiles (the partition that stays on chip while another relation
streams past it) count toward a unit's occupancy. Streamed fragments sit in
the prefetch half of the double buffer and are tracked separately.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple, Union

import numpy as np

from ..models import PlanInfeasibleError, Relation

logger = logging.getLogger(__name__)

UnitIndex = Union[int, Tuple[int, int]]


@dataclass
class PmuState:
    """One on-chip memory unit and the tuples routed to it."""
    index: UnitIndex
    capacity: int
    stored_R: List[list] = field(default_factory=list)
    stored_S: List[list] = field(default_factory=list)
    stored_T: List[list] = field(default_factory=list)
    occupancy: int = 0
    resident: Dict[str, bool] = field(default_factory=dict)

    def _buffer(self, name: str) -> List[list]:
        return getattr(self, f"stored_{name}")

    def load(self, name: str, rows: List[list], resident: bool = True) -> None:
        """Append ``rows`` to buffer ``name`` (R, S or T)."""
        if resident:
            if self.occupancy + len(rows) > self.capacity:
                raise PlanInfeasibleError(
                    f"PMU {self.index} overflows: {self.occupancy + len(rows)} "
                    f"resident tuples exceed capacity {self.capacity}"
                )
            self.occupancy += len(rows)
        self.resident[name] = resident
        self._buffer(name).extend(rows)

    def discard(self, name: str) -> None:
        buffer = self._buffer(name)
        if self.resident.get(name):
            self.occupancy -= len(buffer)
        buffer.clear()


def make_units(count: int, capacity: int) -> List[PmuState]:
    return [PmuState(index=i, capacity=capacity) for i in range(count)]


def make_grid(side: int, capacity: int) -> List[PmuState]:
    """Row-major square grid; unit (row, col) sits at row * side + col."""
    return [
        PmuState(index=(row, col), capacity=capacity)
        for row in range(side)
        for col in range(side)
    ]


def scatter(rel: Relation, destinations: np.ndarray, count: int) -> List[List[list]]:
    """Group the rows of ``rel`` by destination unit."""
    groups: List[List[list]] = [[] for _ in range(count)]
    for row, dest in zip(rel.rows(), destinations.tolist()):
        groups[dest].append(row)
    return groups
