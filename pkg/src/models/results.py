"""
Join results and run instrumentation.
"""

import csv
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union


class JoinAggregate:
    """Count of joined result tuples per group key (an A value)."""

    def __init__(self, counts: Optional[Mapping[int, int]] = None) -> None:
        self.counts: Dict[int, int] = {}
        if counts:
            for key, count in counts.items():
                self.add(key, count)

    def add(self, key: int, count: int = 1) -> None:
        if count < 0:
            raise ValueError("Aggregate counts must be non-negative")
        if count:
            self.counts[int(key)] = self.counts.get(int(key), 0) + int(count)

    def add_pairs(self, pairs: Iterable[Tuple[int, int]]) -> None:
        for key, count in pairs:
            self.add(key, count)

    def merge(self, other: "JoinAggregate") -> "JoinAggregate":
        """Add another aggregate into this one and return self."""
        for key, count in other.counts.items():
            self.add(key, count)
        return self

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def rows(self) -> List[Tuple[int, int]]:
        return sorted(self.counts.items())

    def write_csv(self, path: Union[str, Path]) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerows(self.rows())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JoinAggregate):
            return NotImplemented
        return self.counts == other.counts

    def __len__(self) -> int:
        return len(self.counts)

    def __repr__(self) -> str:
        return f"JoinAggregate(groups={len(self.counts)}, total={self.total})"


@dataclass
class RunStats:
    """Instrumentation counters of one engine run."""
    dram_tuples_read: int = 0
    onchip_broadcasts: int = 0
    comparisons: int = 0
    hash_probes: int = 0
    intermediate_tuples: int = 0
    spilled: bool = False
    peak_pmu_occupancy: int = 0

    def read(self, tuples: int, destinations: int = 1) -> None:
        """A fragment crosses the chip boundary once and fans out on chip."""
        self.dram_tuples_read += tuples
        self.onchip_broadcasts += tuples * destinations

    def absorb(self, comparisons: int, probes: int) -> None:
        self.comparisons += comparisons
        self.hash_probes += probes

    def observe_occupancy(self, occupancy: int) -> None:
        self.peak_pmu_occupancy = max(self.peak_pmu_occupancy, occupancy)

    def to_dict(self) -> dict:
        return asdict(self)
