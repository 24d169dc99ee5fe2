"""
Recursive evaluation of loop trees into cycle estimates.

Every node evaluates to a steady-state time plus a latency that is paid
once per execution. Parents compose their children according to the
node's construct.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict

from ..machine import MachineConfig
from .loop_tree import Construct, LeafKind, LoopNode

logger = logging.getLogger(__name__)

PARTITION_PHASE = "partition"


@dataclass
class Timing:
    steady: float
    latency: float
    bottleneck: str

    @property
    def total(self) -> float:
        return self.steady + self.latency


@dataclass
class RuntimeEstimate:
    """Modeled runtime of one loop tree."""
    cycles: float
    seconds: float
    bottleneck: str
    breakdown: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "cycles": self.cycles,
            "seconds": self.seconds,
            "bottleneck": self.bottleneck,
            "breakdown": dict(self.breakdown),
        }


def _leaf_timing(node: LoopNode, cfg: MachineConfig) -> Timing:
    leaf = node.leaf
    assert leaf is not None
    trips = node.trips
    if trips == 0 or leaf.cost == 0:
        return Timing(0.0, 0.0, node.label)

    if leaf.kind is LeafKind.COMPUTE:
        lanes = leaf.lanes or cfg.L
        return Timing(trips * leaf.cost / lanes, cfg.compute_latency_cycles, node.label)

    # sub-granule requests are charged a whole granule
    per_trip = max(leaf.cost, leaf.requests * cfg.dram_granule_bytes)
    rate = cfg.ssd_bytes_per_cycle if leaf.spill else cfg.dram_bytes_per_cycle
    return Timing(trips * per_trip / rate, cfg.dram_latency_cycles, node.label)


def _streaming(node: LoopNode, kids: list) -> Timing:
    """Stages overlap; DRAM stages share one channel."""
    memory = [(child, t) for child, t in zip(node.children, kids) if child.is_memory]
    other = [(child, t) for child, t in zip(node.children, kids) if not child.is_memory]

    memory_steady = sum(t.steady for _, t in memory)
    other_steady = max((t.steady for _, t in other), default=0.0)
    if memory and memory_steady >= other_steady:
        bottleneck = max(memory, key=lambda pair: pair[1].steady)[1].bottleneck
    else:
        bottleneck = max(other, key=lambda pair: pair[1].steady)[1].bottleneck

    n = node.trips
    latency = sum(t.latency for t in kids)
    return Timing(n * max(memory_steady, other_steady), n * latency, bottleneck)


def _timing(node: LoopNode, cfg: MachineConfig) -> Timing:
    if node.leaf is not None:
        timing = _leaf_timing(node, cfg)
    else:
        kids = [_timing(child, cfg) for child in node.children]
        n = node.trips
        heaviest = max(kids, key=lambda t: t.total).bottleneck

        if node.construct is Construct.SEQUENTIAL:
            timing = Timing(n * sum(t.total for t in kids), 0.0, heaviest)

        elif node.construct is Construct.PARALLEL:
            latency = sum(t.latency for t in kids) if n > 0 else 0.0
            steady = n / node.par * sum(t.steady for t in kids)
            timing = Timing(steady, latency, heaviest)

        elif node.construct is Construct.PIPELINE:
            steady = sum(t.steady for t in kids)
            latency = sum(t.latency for t in kids)
            if n >= 1:
                # fill once, then one slowest stage per further iteration
                steady += (n - 1) * max(t.total for t in kids)
                timing = Timing(steady, latency, heaviest)
            else:
                timing = Timing(n * steady, n * latency, heaviest)

        else:
            timing = _streaming(node, kids)

    if node.branch_prob != 1.0:
        timing = Timing(
            timing.steady * node.branch_prob,
            timing.latency * node.branch_prob,
            timing.bottleneck,
        )
    return timing


def evaluate_runtime(tree: LoopNode, cfg: MachineConfig) -> RuntimeEstimate:
    """Cycles, seconds, bottleneck stage and per-phase breakdown of ``tree``."""
    tree.validate()
    timing = _timing(tree, cfg)
    cycles = timing.total

    breakdown: Dict[str, float] = {}
    if tree.construct is Construct.SEQUENTIAL and timing.latency == 0.0:
        scale = tree.trips * tree.branch_prob
        for child in tree.children:
            key = child.phase or child.label
            breakdown[key] = breakdown.get(key, 0.0) + scale * _timing(child, cfg).total
    else:
        breakdown[tree.phase or tree.label] = cycles

    estimate = RuntimeEstimate(
        cycles=cycles,
        seconds=cycles / cfg.clock_hz,
        bottleneck=timing.bottleneck,
        breakdown=breakdown,
    )
    logger.debug(f"{tree.label}: {cycles:.6g} cycles, bottleneck {estimate.bottleneck}")
    return estimate


def _dram_read_tuples(node: LoopNode, scale: float) -> float:
    if node.phase == PARTITION_PHASE:
        return 0.0
    scale *= node.trips * node.branch_prob
    if node.leaf is not None:
        if node.leaf.kind is LeafKind.DRAM_READ:
            return scale * node.leaf.cost / node.leaf.width
        return 0.0
    return sum(_dram_read_tuples(child, scale) for child in node.children)


def implied_dram_tuples(tree: LoopNode) -> int:
    """Expected tuples read from DRAM by the join phases, rounded."""
    return int(round(_dram_read_tuples(tree, 1.0)))


def implied_comparisons(tree: LoopNode) -> float:
    """Expected key comparisons over the whole tree."""
    return sum(
        scale * node.leaf.cost
        for node, scale in tree.walk()
        if node.leaf is not None and node.leaf.kind is LeafKind.COMPUTE
    )
