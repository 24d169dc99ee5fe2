"""
Loop trees of the analytical runtime model.

A tree mirrors the loop nest of a join: interior nodes say how their
children are composed (sequential, parallel, pipelined or streamed) and
leaves carry per-trip costs. Trip counts are expected values and may be
fractional.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator, List, Optional, Tuple

from ..models import MalformedTreeError


class Construct(str, Enum):
    SEQUENTIAL = "sequential"
    PARALLEL = "parallel"
    PIPELINE = "pipeline"
    STREAMING = "streaming"


class LeafKind(str, Enum):
    COMPUTE = "compute"
    DRAM_READ = "dram_read"
    DRAM_WRITE = "dram_write"


@dataclass
class Leaf:
    """
    Cost of one trip of the enclosing node.

    ``cost`` is in comparisons for compute leaves and bytes for DRAM leaves.
    A DRAM trip is split over ``requests`` transfers; ``width`` converts
    bytes back into tuples.
    """
    kind: LeafKind
    cost: float
    width: int = 1
    requests: float = 1
    spill: bool = False
    lanes: Optional[int] = None

    @property
    def is_memory(self) -> bool:
        return self.kind in (LeafKind.DRAM_READ, LeafKind.DRAM_WRITE)

    def to_dict(self) -> dict:
        data = {"kind": self.kind.value, "cost": self.cost}
        if self.is_memory:
            data.update(width=self.width, requests=self.requests, spill=self.spill)
        if self.lanes is not None:
            data["lanes"] = self.lanes
        return data


@dataclass
class LoopNode:
    label: str
    trips: float = 1
    construct: Construct = Construct.SEQUENTIAL
    par: int = 1
    children: List["LoopNode"] = field(default_factory=list)
    leaf: Optional[Leaf] = None
    branch_prob: float = 1.0
    condition: Optional[str] = None
    phase: Optional[str] = None

    def validate(self) -> None:
        """Raise MalformedTreeError on the first invalid node."""
        if self.trips < 0:
            raise MalformedTreeError(f"{self.label}: negative trips {self.trips}")
        if not 0.0 <= self.branch_prob <= 1.0:
            raise MalformedTreeError(
                f"{self.label}: branch probability {self.branch_prob} outside [0, 1]"
            )
        if self.par < 1:
            raise MalformedTreeError(f"{self.label}: parallelism must be at least 1")
        if self.leaf is not None and self.children:
            raise MalformedTreeError(f"{self.label}: a leaf node cannot have children")
        if self.leaf is None and not self.children:
            raise MalformedTreeError(f"{self.label}: empty interior node")
        if self.leaf is not None:
            if self.leaf.cost < 0 or self.leaf.requests < 0:
                raise MalformedTreeError(f"{self.label}: negative leaf cost")
            if self.leaf.is_memory and self.leaf.width < 1:
                raise MalformedTreeError(f"{self.label}: tuple width must be positive")
        for child in self.children:
            child.validate()

    @property
    def is_memory(self) -> bool:
        return self.leaf is not None and self.leaf.is_memory

    def walk(self, scale: float = 1.0) -> Iterator[Tuple["LoopNode", float]]:
        """Yield every node with the expected number of times it executes."""
        scale = scale * self.trips * self.branch_prob
        yield self, scale
        for child in self.children:
            yield from child.walk(scale)

    def to_dict(self) -> dict:
        data: dict = {
            "label": self.label,
            "construct": self.construct.value,
            "trips": self.trips,
        }
        if self.construct is Construct.PARALLEL:
            data["par"] = self.par
        if self.branch_prob != 1.0:
            data["branch_prob"] = self.branch_prob
        if self.condition:
            data["condition"] = self.condition
        if self.phase:
            data["phase"] = self.phase
        if self.leaf is not None:
            data["leaf"] = self.leaf.to_dict()
        else:
            data["children"] = [child.to_dict() for child in self.children]
        return data

    def render(self, indent: int = 0) -> str:
        """Indented text form, one node per line."""
        head = f"{'  ' * indent}{self.label} [{self.construct.value}"
        if self.construct is Construct.PARALLEL:
            head += f" par={self.par}"
        head += f"] trips={self.trips:.6g}"
        if self.condition:
            head += f" if {self.condition} p={self.branch_prob:.4g}"
        if self.leaf is not None:
            head += f" {self.leaf.kind.value} cost={self.leaf.cost:.6g}"
            if self.leaf.spill:
                head += " spill"
        lines = [head] + [child.render(indent + 1) for child in self.children]
        return "\n".join(lines)


def leaf_node(label: str, trips: float, leaf: Leaf, **kwargs: Any) -> LoopNode:
    return LoopNode(label=label, trips=trips, leaf=leaf, **kwargs)


def dram_read(
    label: str, tuples: float, width: int, requests: float = 1, spill: bool = False
) -> LoopNode:
    """One transfer of ``tuples`` tuples of ``width`` bytes from DRAM."""
    return leaf_node(
        label, 1, Leaf(LeafKind.DRAM_READ, tuples * width, width, requests, spill)
    )


def dram_write(
    label: str, tuples: float, width: int, requests: float = 1, spill: bool = False
) -> LoopNode:
    return leaf_node(
        label, 1, Leaf(LeafKind.DRAM_WRITE, tuples * width, width, requests, spill)
    )


def compute(label: str, trips: float, cost: float, **kwargs: Any) -> LoopNode:
    return leaf_node(label, trips, Leaf(LeafKind.COMPUTE, cost), **kwargs)
