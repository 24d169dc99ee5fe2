"""
Performance model package: tuples-read formulas and the loop-tree runtime
model.
"""

from .builders import build_loop_tree, covered_buckets, intermediate_volume
from .evaluate import (
    RuntimeEstimate,
    evaluate_runtime,
    implied_comparisons,
    implied_dram_tuples,
)
from .formulas import (
    CostInputs,
    cyclic_breakeven_M,
    cyclic_cost,
    cyclic_min_cost,
    cyclic_self_join_reads,
    intermediate_size,
    linear_breakeven_M,
    optimal_H,
    solve_breakeven_M,
    tuples_read_linear,
)
from .loop_tree import Construct, Leaf, LeafKind, LoopNode
from .search import (
    Comparison,
    best_plan,
    compare_best,
    compare_plans,
    compare_strategies,
    estimate,
    shape_for,
)

__all__ = [
    "build_loop_tree",
    "covered_buckets",
    "intermediate_volume",
    "RuntimeEstimate",
    "evaluate_runtime",
    "implied_comparisons",
    "implied_dram_tuples",
    "CostInputs",
    "cyclic_breakeven_M",
    "cyclic_cost",
    "cyclic_min_cost",
    "cyclic_self_join_reads",
    "intermediate_size",
    "linear_breakeven_M",
    "optimal_H",
    "solve_breakeven_M",
    "tuples_read_linear",
    "Construct",
    "Leaf",
    "LeafKind",
    "LoopNode",
    "Comparison",
    "best_plan",
    "compare_best",
    "compare_plans",
    "compare_strategies",
    "estimate",
    "shape_for",
]
