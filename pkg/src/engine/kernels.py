"""
Vectorized local-join kernels for bulk PMU fragments.
"""

from typing import List, Tuple

import numpy as np


def equi_join_indices(
    left_keys: np.ndarray, right_keys: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Index pairs (i, j) with left_keys[i] == right_keys[j], left-major."""
    order = np.argsort(right_keys, kind="stable")
    ordered = right_keys[order]
    lo = np.searchsorted(ordered, left_keys, side="left")
    hi = np.searchsorted(ordered, left_keys, side="right")
    counts = hi - lo

    total = int(counts.sum())
    left_idx = np.repeat(np.arange(len(left_keys)), counts)
    first = np.repeat(lo, counts)
    offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    return left_idx, order[first + offsets]


def match_counts(probe_keys: np.ndarray, build_keys: np.ndarray) -> np.ndarray:
    """For every probe key, how many build keys equal it."""
    ordered = np.sort(build_keys)
    lo = np.searchsorted(ordered, probe_keys, side="left")
    hi = np.searchsorted(ordered, probe_keys, side="right")
    return (hi - lo).astype(np.int64)


def group_sum(groups: np.ndarray, weights: np.ndarray) -> List[Tuple[int, int]]:
    """(group, total weight) pairs for the non-zero groups."""
    keep = weights > 0
    if not keep.any():
        return []
    keys, inverse = np.unique(groups[keep], return_inverse=True)
    sums = np.zeros(len(keys), dtype=np.int64)
    np.add.at(sums, inverse.ravel(), weights[keep])
    return list(zip(keys.tolist(), sums.tolist()))
