"""
Synthetic relation generation.

Values come from numpy's PCG64 bit generator. Only raw 64-bit outputs are
used (``random_raw``), which numpy keeps stable across releases and
platforms; a draw x maps to ``((x >> 32) * d) >> 32`` in [0, d).
"""

import logging
from typing import Sequence

import numpy as np

from ..models import DataProfile, Relation

logger = logging.getLogger(__name__)


def uniform_keys(count: int, d: int, seed: int) -> np.ndarray:
    """``count`` keys drawn uniformly from {0, ..., d-1}."""
    if count == 0:
        return np.empty(0, dtype=np.uint32)
    raw = np.random.PCG64(seed).random_raw(count)
    high = raw >> np.uint64(32)
    return ((high * np.uint64(d)) >> np.uint64(32)).astype(np.uint32)


def generate_relation(
    profile: DataProfile, columns: Sequence[str], name: str = ""
) -> Relation:
    """
    Generate a relation of ``profile.n`` tuples with values in [0, d).

    The tuples depend only on the profile; ``columns`` labels them. Three
    relations generated from one profile are therefore copies of each other.
    """
    profile.validate()
    columns = tuple(columns)
    if len(columns) != 2:
        raise ValueError("Base relations have exactly two columns")

    keys = uniform_keys(2 * profile.n, profile.d, profile.seed)
    data = keys.reshape(profile.n, 2)
    label = name or "".join(columns)

    logger.debug(
        f"Generated {label}({''.join(columns)}): n={profile.n}, d={profile.d}, "
        f"seed={profile.seed}"
    )
    return Relation(label, columns, data)
