"""
Engine package: functional simulation of join strategies on a PMU grid.
"""

from .pmu import PmuState, make_grid, make_units
from .simulator import (
    JoinEngine,
    create_engine,
    run_cascaded_binary,
    run_cyclic3,
    run_linear3,
    run_star3,
)

__all__ = [
    "PmuState",
    "make_grid",
    "make_units",
    "JoinEngine",
    "create_engine",
    "run_cascaded_binary",
    "run_cyclic3",
    "run_linear3",
    "run_star3",
]
