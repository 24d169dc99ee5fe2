"""
Deterministic multi-level hash family.

Each level multiplies the key by its own odd 64-bit salt (Fibonacci-style
multiplicative hashing), keeps the high 32 bits of the 64-bit product and
reduces modulo the bucket count. Keys and outputs are plain unsigned
integers, so results are identical on every platform.
"""

from typing import Optional

import numpy as np
import numpy.typing as npt

from ..models import HashLevel
from ..models.plan import DEFAULT_SALTS

_KEY_MASK = 0xFFFFFFFF


def _salt_for(level: HashLevel, salt: Optional[int]) -> np.uint64:
    value = DEFAULT_SALTS[HashLevel(level)] if salt is None else salt
    return np.uint64(value & 0xFFFFFFFFFFFFFFFF)


def hash_buckets(
    values: npt.ArrayLike, level: HashLevel, buckets: int, salt: Optional[int] = None
) -> np.ndarray:
    """Bucket index in [0, buckets) for every key in ``values``."""
    if buckets < 1:
        raise ValueError("buckets must be at least 1")

    keys = np.atleast_1d(np.asarray(values, dtype=np.uint64))
    if buckets == 1:
        return np.zeros(keys.shape, dtype=np.int64)

    with np.errstate(over="ignore"):
        mixed = keys * _salt_for(level, salt)
    high = mixed >> np.uint64(32)
    return (high % np.uint64(buckets)).astype(np.int64)


def hash_bucket(
    value: int, level: HashLevel, buckets: int, salt: Optional[int] = None
) -> int:
    """Scalar form of :func:`hash_buckets`."""
    return int(hash_buckets([int(value) & _KEY_MASK], level, buckets, salt)[0])
