"""
Loop trees for the self and star join strategies.

Fine-grained hash buckets only receive tuples when some key value maps to
them, so trip counts and per-bucket sizes use the expected number of
covered buckets rather than the raw bucket count. With d much larger than
the bucket count the two coincide.

Branch probabilities follow from uniform keys: two tuples that landed in the
same one of b covered buckets share a key with probability b/d.
"""

import logging
import math
from typing import List, Optional, Tuple

from ..config import get_settings
from ..machine import MachineConfig
from ..models import (
    TUPLE_WIDTH_BYTES,
    HashPlan,
    Strategy,
    UnsupportedStrategyError,
)
from .evaluate import PARTITION_PHASE
from .formulas import CostInputs, intermediate_size
from .loop_tree import Construct, LoopNode, compute, dram_read, dram_write

logger = logging.getLogger(__name__)

W = TUPLE_WIDTH_BYTES


def covered_buckets(buckets: float, d: float) -> float:
    """Expected number of non-empty buckets when d keys hash into ``buckets``."""
    if buckets <= 1:
        return float(buckets)
    return buckets * (1.0 - math.exp(d * math.log1p(-1.0 / buckets)))


def _hit_probability(buckets: float, d: float) -> float:
    return min(1.0, buckets / d)


def intermediate_volume(shape: CostInputs, cfg: MachineConfig) -> Tuple[float, bool]:
    """|R join S| and whether it spills past DRAM."""
    size_i = shape.size_i
    if size_i is None:
        size_i = intermediate_size(shape.size_r, shape.size_s, shape.d)
    width = get_settings().model.intermediate_tuple_width
    return size_i, size_i * width > cfg.dram_capacity_bytes


def _partition_phase(passes: List[Tuple[str, float, float]]) -> Optional[LoopNode]:
    """One streaming read plus one scattered write per partitioned relation."""
    children = [
        LoopNode(
            f"partition_{name}",
            construct=Construct.STREAMING,
            children=[
                dram_read(PARTITION_PHASE, tuples, W),
                dram_write(PARTITION_PHASE, tuples, W, requests=buckets),
            ],
        )
        for name, tuples, buckets in passes
        if buckets > 1
    ]
    if not children:
        return None
    return LoopNode(PARTITION_PHASE, children=children, phase=PARTITION_PHASE)


def _pmus(trips: float, cfg: MachineConfig, children: List[LoopNode]) -> LoopNode:
    return LoopNode(
        "pmu", trips=trips, construct=Construct.PARALLEL, par=cfg.U, children=children
    )


def _linear_tree(
    shape: CostInputs, plan: HashPlan, cfg: MachineConfig
) -> List[LoopNode]:
    R, S, T, d = shape.size_r, shape.size_s, shape.size_t, shape.d
    H = covered_buckets(plan.H_bkt, d)
    g = covered_buckets(plan.g_bkt, d)
    h = covered_buckets(plan.h_bkt, d)
    s_cell = S / (H * g)
    t_bucket = T / g

    probe = LoopNode(
        "probe",
        construct=Construct.STREAMING,
        children=[
            dram_read("stream_T", t_bucket, W),
            _pmus(
                h,
                cfg,
                [
                    compute("comp", t_bucket, s_cell / h),
                    compute(
                        "comp",
                        t_bucket * s_cell / h,
                        R / (H * h),
                        branch_prob=_hit_probability(g, d),
                        condition="SC==TC",
                    ),
                ],
            ),
        ],
    )
    join1 = LoopNode(
        "join1",
        trips=H,
        construct=Construct.PIPELINE,
        phase="join1",
        children=[
            dram_read("load_R", R / H, W, requests=plan.h_bkt),
            LoopNode(
                "S_ij",
                trips=g,
                construct=Construct.PIPELINE,
                children=[dram_read("load_S", s_cell, W, requests=plan.h_bkt), probe],
            ),
        ],
    )
    partition = _partition_phase(
        [("R", R, plan.H_bkt), ("S", S, plan.H_bkt * plan.g_bkt), ("T", T, plan.g_bkt)]
    )
    return [node for node in (partition, join1) if node is not None]


def _cascaded_self_tree(
    shape: CostInputs, plan: HashPlan, cfg: MachineConfig
) -> List[LoopNode]:
    R, S, T, d = shape.size_r, shape.size_s, shape.size_t, shape.d
    size_i, spill = intermediate_volume(shape, cfg)
    w_i = get_settings().model.intermediate_tuple_width
    H = covered_buckets(plan.H_bkt, d)
    G = covered_buckets(plan.G_bkt, d)
    h = covered_buckets(plan.h_bkt, d)
    g = covered_buckets(plan.g_bkt, d)

    join1 = LoopNode(
        "join1",
        trips=H,
        construct=Construct.PIPELINE,
        phase="join1",
        children=[
            dram_read("load_R", R / H, W, requests=plan.h_bkt),
            LoopNode(
                "build_RS",
                construct=Construct.STREAMING,
                children=[
                    dram_read("stream_S", S / H, W),
                    _pmus(h, cfg, [compute("comp", S / (H * h), R / (H * h))]),
                    dram_write(
                        "store_RS", size_i / H, w_i, requests=plan.G_bkt, spill=spill
                    ),
                ],
            ),
        ],
    )
    join2 = LoopNode(
        "join2",
        trips=G,
        construct=Construct.PIPELINE,
        phase="join2",
        children=[
            dram_read("load_T", T / G, W, requests=plan.g_bkt),
            LoopNode(
                "probe_RS",
                construct=Construct.STREAMING,
                children=[
                    dram_read("stream_RS", size_i / G, w_i, spill=spill),
                    _pmus(g, cfg, [compute("comp", size_i / (G * g), T / (G * g))]),
                ],
            ),
        ],
    )
    partition = _partition_phase(
        [("R", R, plan.H_bkt), ("S", S, plan.H_bkt), ("T", T, plan.G_bkt)]
    )
    return [node for node in (partition, join1, join2) if node is not None]


def _star_tree(shape: CostInputs, plan: HashPlan, cfg: MachineConfig) -> List[LoopNode]:
    R, S, T, d = shape.size_r, shape.size_s, shape.size_t, shape.d
    h = covered_buckets(plan.h_bkt, d)
    g = covered_buckets(plan.g_bkt, d)
    s_unit = S / (h * g)

    join1 = LoopNode(
        "join1",
        phase="join1",
        children=[
            dram_read("load_R", R, W, requests=plan.h_bkt),
            dram_read("load_T", T, W, requests=plan.g_bkt),
            LoopNode(
                "probe",
                construct=Construct.STREAMING,
                children=[
                    dram_read("stream_S", S, W),
                    _pmus(
                        h * g,
                        cfg,
                        [
                            compute("comp", s_unit, R / h),
                            compute(
                                "comp",
                                s_unit * R / h,
                                T / g,
                                branch_prob=_hit_probability(h, d),
                                condition="SB==RB",
                            ),
                        ],
                    ),
                ],
            ),
        ],
    )
    return [join1]


def _cascaded_star_tree(
    shape: CostInputs, plan: HashPlan, cfg: MachineConfig
) -> List[LoopNode]:
    R, S, T, d = shape.size_r, shape.size_s, shape.size_t, shape.d
    size_i, spill = intermediate_volume(shape, cfg)
    w_i = get_settings().model.intermediate_tuple_width
    h = covered_buckets(plan.h_bkt, d)
    g = covered_buckets(plan.g_bkt, d)

    join1 = LoopNode(
        "join1",
        phase="join1",
        children=[
            dram_read("load_R", R, W, requests=plan.h_bkt),
            LoopNode(
                "build_RS",
                construct=Construct.STREAMING,
                children=[
                    dram_read("stream_S", S, W),
                    _pmus(h, cfg, [compute("comp", S / h, R / h)]),
                    dram_write("store_RS", size_i, w_i, spill=spill),
                ],
            ),
        ],
    )
    join2 = LoopNode(
        "join2",
        phase="join2",
        children=[
            dram_read("load_T", T, W, requests=plan.g_bkt),
            LoopNode(
                "probe_RS",
                construct=Construct.STREAMING,
                children=[
                    dram_read("stream_RS", size_i, w_i, spill=spill),
                    _pmus(g, cfg, [compute("comp", size_i / g, T / g)]),
                ],
            ),
        ],
    )
    return [join1, join2]


_BUILDERS = {
    Strategy.LINEAR3: _linear_tree,
    Strategy.STAR3: _star_tree,
    Strategy.CASCADED_SELF: _cascaded_self_tree,
    Strategy.CASCADED_STAR: _cascaded_star_tree,
}


def build_loop_tree(
    strategy: Strategy, shape: CostInputs, plan: HashPlan, cfg: MachineConfig
) -> LoopNode:
    """Loop nest of ``strategy`` on ``shape`` under ``plan``."""
    strategy = Strategy(strategy)
    builder = _BUILDERS.get(strategy)
    if builder is None:
        raise UnsupportedStrategyError(
            f"No loop tree for {strategy.value}; use the tuples-read formulas"
        )
    shape.validate()
    tree = LoopNode(strategy.value, children=builder(shape, plan, cfg))
    tree.validate()
    return tree
