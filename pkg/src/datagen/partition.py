"""
Hash partitioning of relations.
"""

from typing import List, NamedTuple, Optional

import numpy as np

from ..models import HashLevel, HashPlan, Relation, RoleMismatchError
from .hashing import hash_buckets


class PartitionKey(NamedTuple):
    """Column, hash level and bucket count of one partitioning step."""
    column: str
    level: HashLevel
    buckets: int
    salt: Optional[int] = None


def bucket_ids(rel: Relation, key: PartitionKey) -> np.ndarray:
    return hash_buckets(rel.column(key.column), key.level, key.buckets, key.salt)


def partition(
    rel: Relation,
    column: str,
    level: HashLevel,
    buckets: int,
    salt: Optional[int] = None,
) -> List[Relation]:
    """
    Split ``rel`` into ``buckets`` partitions by hashing ``column``.

    Tuple t lands in partition hash_bucket(t.column, level, buckets); the
    relative order of tuples within a partition is preserved.
    """
    key = PartitionKey(column, level, buckets, salt)
    ids = bucket_ids(rel, key)
    return _split(rel, ids, buckets)


def _split(rel: Relation, ids: np.ndarray, buckets: int) -> List[Relation]:
    order = np.argsort(ids, kind="stable")
    counts = np.bincount(ids, minlength=buckets)
    bounds = np.cumsum(counts)[:-1]
    return [
        rel.take(chunk, name=f"{rel.name}_{i}")
        for i, chunk in enumerate(np.split(order, bounds))
    ]


def nested_partition(
    rel: Relation, outer: PartitionKey, inner: PartitionKey
) -> List[List[Relation]]:
    """Two-level partition: cell [i][j] holds tuples with outer=i and inner=j."""
    cells = []
    for part in partition(rel, outer.column, outer.level, outer.buckets, outer.salt):
        inner_parts = partition(
            part, inner.column, inner.level, inner.buckets, inner.salt
        )
        for j, cell in enumerate(inner_parts):
            cell.name = f"{part.name}_{j}"
        cells.append(inner_parts)
    return cells


def two_level_partition_S(S: Relation, plan: HashPlan) -> List[List[Relation]]:
    """S_ij: tuples of S(B,C) with H(b)=i and g(c)=j, ordered i-major."""
    if S.columns[:2] != ("B", "C"):
        raise RoleMismatchError(f"Expected S(B,C), got {S.name}{S.columns}")
    return nested_partition(
        S,
        PartitionKey("B", HashLevel.H, plan.H_bkt, plan.salt(HashLevel.H)),
        PartitionKey("C", HashLevel.g, plan.g_bkt, plan.salt(HashLevel.g)),
    )
