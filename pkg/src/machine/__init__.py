"""
Machine package: accelerator parameters and plan feasibility.
"""

from .config import (
    MachineConfig,
    default_config,
    effective_M,
    grid_side,
    per_unit_capacity,
)
from .planner import check_plan, default_plan, required_partitions, star_split

__all__ = [
    "MachineConfig",
    "default_config",
    "effective_M",
    "grid_side",
    "per_unit_capacity",
    "check_plan",
    "default_plan",
    "required_partitions",
    "star_split",
]
