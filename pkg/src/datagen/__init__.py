"""
Data generation package: synthetic relations, the hash family and
partitioning.
"""

from .codec import read_relation_csv, relation_checksum, write_relation_csv
from .generator import generate_relation, uniform_keys
from .hashing import hash_bucket, hash_buckets
from .partition import (
    PartitionKey,
    nested_partition,
    partition,
    two_level_partition_S,
)

__all__ = [
    "read_relation_csv",
    "relation_checksum",
    "write_relation_csv",
    "generate_relation",
    "uniform_keys",
    "hash_bucket",
    "hash_buckets",
    "PartitionKey",
    "nested_partition",
    "partition",
    "two_level_partition_S",
]
