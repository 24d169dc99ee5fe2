"""
Plan feasibility and default plans for each strategy.
"""

import logging
import math

from ..models import HashPlan, PlanInfeasibleError, Strategy
from .config import MachineConfig, effective_M, grid_side

logger = logging.getLogger(__name__)


def required_partitions(size: int, cfg: MachineConfig) -> int:
    """Fewest top-level partitions whose share of ``size`` fits on chip."""
    capacity = effective_M(cfg)
    if size <= 0:
        return 1
    if capacity <= 0:
        raise PlanInfeasibleError("On-chip capacity is zero")
    return max(1, math.ceil(size / capacity))


def star_split(U: int) -> tuple:
    """(h, g) with h*g == U and h the largest divisor not above sqrt(U)."""
    h = max(k for k in range(1, math.isqrt(U) + 1) if U % k == 0)
    return h, U // h


def default_plan(
    strategy: Strategy,
    size_r: int,
    size_s: int,
    size_t: int,
    cfg: MachineConfig,
    target_bucket_tuples: int = 64,
) -> HashPlan:
    """Minimum feasible top-level partitioning with small fine buckets."""
    strategy = Strategy(strategy)

    if strategy is Strategy.LINEAR3:
        H = required_partitions(size_r, cfg)
        g = max(1, math.ceil(size_s / (H * target_bucket_tuples)))
        return HashPlan(H_bkt=H, h_bkt=cfg.U, g_bkt=g)

    if strategy is Strategy.CYCLIC3:
        side = grid_side(cfg)
        parts = required_partitions(size_r, cfg)
        ideal = math.sqrt(parts * max(size_t, 1) / max(size_s, 1))
        H = min(parts, max(1, round(ideal)))
        G = math.ceil(parts / H)
        f = max(1, math.ceil(size_s / (G * target_bucket_tuples)))
        return HashPlan(H_bkt=H, G_bkt=G, h_bkt=side, g_bkt=side, f_bkt=f)

    if strategy is Strategy.STAR3:
        h, g = star_split(cfg.U)
        return HashPlan(h_bkt=h, g_bkt=g)

    if strategy is Strategy.CASCADED_SELF:
        return HashPlan(
            H_bkt=required_partitions(size_r, cfg),
            G_bkt=required_partitions(size_t, cfg),
            h_bkt=cfg.U,
            g_bkt=cfg.U,
        )

    return HashPlan(h_bkt=cfg.U, g_bkt=cfg.U)


def check_plan(
    strategy: Strategy,
    size_r: int,
    size_s: int,
    size_t: int,
    plan: HashPlan,
    cfg: MachineConfig,
) -> None:
    """Raise PlanInfeasibleError naming the first violated precondition."""
    strategy = Strategy(strategy)
    capacity = effective_M(cfg)

    def require(condition: bool, message: str) -> None:
        if not condition:
            logger.debug(f"Plan rejected for {strategy.value}: {message}")
            raise PlanInfeasibleError(message)

    if strategy is Strategy.LINEAR3:
        require(plan.h_bkt == cfg.U, f"h_bkt={plan.h_bkt} must equal U={cfg.U}")
        need = required_partitions(size_r, cfg)
        require(plan.H_bkt >= need, f"H_bkt={plan.H_bkt} < ceil(|R|/M)={need}")

    elif strategy is Strategy.CYCLIC3:
        side = grid_side(cfg)
        require(
            plan.h_bkt == side and plan.g_bkt == side,
            f"h_bkt and g_bkt must both equal sqrt(U)={side}",
        )
        need = required_partitions(size_r, cfg)
        require(
            plan.H_bkt * plan.G_bkt >= need,
            f"H_bkt*G_bkt={plan.H_bkt * plan.G_bkt} < ceil(|R|/M)={need}",
        )

    elif strategy is Strategy.STAR3:
        require(
            plan.h_bkt * plan.g_bkt == cfg.U,
            f"h_bkt*g_bkt={plan.h_bkt * plan.g_bkt} must equal U={cfg.U}",
        )
        require(
            size_r + size_t <= capacity,
            f"|R|+|T|={size_r + size_t} exceeds on-chip capacity M={capacity}",
        )

    elif strategy is Strategy.CASCADED_SELF:
        require(
            plan.h_bkt == cfg.U and plan.g_bkt == cfg.U,
            f"h_bkt and g_bkt must both equal U={cfg.U}",
        )
        need_r = required_partitions(size_r, cfg)
        need_t = required_partitions(size_t, cfg)
        require(plan.H_bkt >= need_r, f"H_bkt={plan.H_bkt} < ceil(|R|/M)={need_r}")
        require(plan.G_bkt >= need_t, f"G_bkt={plan.G_bkt} < ceil(|T|/M)={need_t}")

    else:
        require(
            plan.h_bkt == cfg.U and plan.g_bkt == cfg.U,
            f"h_bkt and g_bkt must both equal U={cfg.U}",
        )
        for role, size in (("R", size_r), ("T", size_t)):
            require(
                size <= capacity,
                f"|{role}|={size} exceeds on-chip capacity M={capacity}",
            )
