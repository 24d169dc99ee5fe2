"""
Plan search and 3-way versus cascaded comparison.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional, Tuple

from ..config import get_settings
from ..config.settings import ModelSettings
from ..machine import MachineConfig, check_plan, effective_M, required_partitions
from ..models import HashPlan, PlanInfeasibleError, Strategy, UnsupportedStrategyError
from .builders import build_loop_tree, intermediate_volume
from .evaluate import RuntimeEstimate, evaluate_runtime
from .formulas import CostInputs

logger = logging.getLogger(__name__)


def shape_for(
    size_r: float,
    size_s: float,
    size_t: float,
    d: float,
    cfg: MachineConfig,
    size_i: Optional[float] = None,
) -> CostInputs:
    """CostInputs with M taken from the machine."""
    return CostInputs(size_r, size_s, size_t, M=effective_M(cfg), d=d, size_i=size_i)


def estimate(
    strategy: Strategy, shape: CostInputs, plan: HashPlan, cfg: MachineConfig
) -> RuntimeEstimate:
    return evaluate_runtime(build_loop_tree(strategy, shape, plan, cfg), cfg)


def _doublings(start: int, span: int) -> list:
    return [start * 2**k for k in range(span + 1)]


def candidate_plans(
    strategy: Strategy,
    shape: CostInputs,
    cfg: MachineConfig,
    model: Optional[ModelSettings] = None,
) -> Iterator[HashPlan]:
    """Power-of-two grid of bucket counts, starting at the feasible minimum."""
    model = model or get_settings().model
    strategy = Strategy(strategy)
    fine = [2**k for k in range(model.search_max_exponent + 1)]

    if strategy is Strategy.LINEAR3:
        H_min = required_partitions(shape.size_r, cfg)
        for H, g in product(_doublings(H_min, model.search_span), fine):
            yield HashPlan(H_bkt=H, h_bkt=cfg.U, g_bkt=g)

    elif strategy is Strategy.CASCADED_SELF:
        H_opts = _doublings(required_partitions(shape.size_r, cfg), model.search_span)
        G_opts = _doublings(required_partitions(shape.size_t, cfg), model.search_span)
        for H, G in product(H_opts, G_opts):
            yield HashPlan(H_bkt=H, G_bkt=G, h_bkt=cfg.U, g_bkt=cfg.U)

    elif strategy is Strategy.STAR3:
        for h in range(1, cfg.U + 1):
            if cfg.U % h == 0:
                yield HashPlan(h_bkt=h, g_bkt=cfg.U // h)

    elif strategy is Strategy.CASCADED_STAR:
        yield HashPlan(h_bkt=cfg.U, g_bkt=cfg.U)

    else:
        raise UnsupportedStrategyError(f"No plan search for {strategy.value}")


def best_plan(
    strategy: Strategy,
    shape: CostInputs,
    cfg: MachineConfig,
    model: Optional[ModelSettings] = None,
) -> Tuple[HashPlan, RuntimeEstimate]:
    """Exhaustive search of ``candidate_plans`` for the fastest modeled plan."""
    strategy = Strategy(strategy)
    best: Optional[Tuple[HashPlan, RuntimeEstimate]] = None
    for plan in candidate_plans(strategy, shape, cfg, model):
        check_plan(strategy, shape.size_r, shape.size_s, shape.size_t, plan, cfg)
        result = estimate(strategy, shape, plan, cfg)
        if best is None or result.cycles < best[1].cycles:
            best = (plan, result)

    if best is None:
        raise PlanInfeasibleError(f"No feasible plan for {strategy.value}")
    logger.debug(f"Best {strategy.value} plan: {best[0].to_dict()}")
    return best


@dataclass
class Comparison:
    """Modeled 3-way and cascaded runtimes on one shape."""
    three_way: RuntimeEstimate
    cascaded: RuntimeEstimate
    plan3: HashPlan
    plan2: HashPlan
    spilled: bool

    @property
    def speedup(self) -> float:
        return self.cascaded.cycles / self.three_way.cycles

    def to_dict(self) -> dict:
        return {
            "three_way_seconds": self.three_way.seconds,
            "cascaded_seconds": self.cascaded.seconds,
            "speedup": self.speedup,
            "spilled": self.spilled,
            "plan3": self.plan3.to_dict(),
            "plan2": self.plan2.to_dict(),
        }


def _pair(star: bool) -> Tuple[Strategy, Strategy]:
    if star:
        return Strategy.STAR3, Strategy.CASCADED_STAR
    return Strategy.LINEAR3, Strategy.CASCADED_SELF


def compare_plans(
    shape: CostInputs,
    plan3: HashPlan,
    plan2: HashPlan,
    cfg: MachineConfig,
    star: bool = False,
) -> Comparison:
    three, cascaded = _pair(star)
    sizes = (shape.size_r, shape.size_s, shape.size_t)
    check_plan(three, *sizes, plan3, cfg)
    check_plan(cascaded, *sizes, plan2, cfg)
    return Comparison(
        three_way=estimate(three, shape, plan3, cfg),
        cascaded=estimate(cascaded, shape, plan2, cfg),
        plan3=plan3,
        plan2=plan2,
        spilled=intermediate_volume(shape, cfg)[1],
    )


def compare_strategies(
    shape: CostInputs,
    plan3: HashPlan,
    plan2: HashPlan,
    cfg: MachineConfig,
    star: bool = False,
) -> float:
    """Speedup of the 3-way join over the cascaded binary joins."""
    return compare_plans(shape, plan3, plan2, cfg, star).speedup


def compare_best(
    shape: CostInputs,
    cfg: MachineConfig,
    star: bool = False,
    model: Optional[ModelSettings] = None,
) -> Comparison:
    """Compare both sides at their best searched plans."""
    three, cascaded = _pair(star)
    plan3, _ = best_plan(three, shape, cfg, model)
    plan2, _ = best_plan(cascaded, shape, cfg, model)
    return compare_plans(shape, plan3, plan2, cfg, star)
