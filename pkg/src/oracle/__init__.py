"""
Oracle package: brute-force ground truth for every join.
"""

from .reference import (
    group_count,
    oracle_binary,
    oracle_cyclic3,
    oracle_linear3,
    write_aggregate_csv,
)

__all__ = [
    "group_count",
    "oracle_binary",
    "oracle_cyclic3",
    "oracle_linear3",
    "write_aggregate_csv",
]
