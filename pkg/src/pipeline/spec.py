"""
Experiment specification: which relations to build and how to run them.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..config import get_settings
from ..datagen import generate_relation
from ..machine import MachineConfig, default_config, default_plan, effective_M
from ..models import DataProfile, HashPlan, PlanInfeasibleError, Relation, Strategy

logger = logging.getLogger(__name__)

SHAPES = ("self-linear", "cyclic", "star")

SHAPE_STRATEGIES: Dict[str, Tuple[Strategy, ...]] = {
    "self-linear": (
        Strategy.LINEAR3,
        Strategy.STAR3,
        Strategy.CASCADED_SELF,
        Strategy.CASCADED_STAR,
    ),
    "cyclic": (Strategy.CYCLIC3,),
    "star": (
        Strategy.STAR3,
        Strategy.CASCADED_STAR,
        Strategy.LINEAR3,
        Strategy.CASCADED_SELF,
    ),
}


@dataclass
class ExperimentSpec:
    """
    Shape, sizes and overrides of one experiment.

    Self and cyclic shapes draw R, S and T from one profile (n, d, seed), so
    the three relations are copies of one another. The star shape draws
    the dimensions R and T with K tuples and the fact S with N tuples.
    """
    shape: str = "self-linear"
    n: int = 1000
    d: int = 10
    k: Optional[int] = None
    seed: int = 0
    plan_overrides: Dict[str, int] = field(default_factory=dict)
    machine_overrides: Dict[str, float] = field(default_factory=dict)

    def validate(self, cfg: Optional[MachineConfig] = None) -> None:
        if self.shape not in SHAPES:
            raise ValueError(f"Unknown shape {self.shape!r}; expected one of {SHAPES}")
        if self.n < 1 or self.d < 1:
            raise ValueError("n and d must be positive")
        if self.shape == "star":
            if self.k is None or self.k < 1:
                raise ValueError("The star shape needs a positive k")
            capacity = effective_M(cfg or self.machine())
            if 2 * self.k > capacity:
                raise PlanInfeasibleError(
                    f"2K={2 * self.k} exceeds on-chip capacity M={capacity}"
                )

    def machine(self) -> MachineConfig:
        return default_config().with_overrides(**self.machine_overrides)

    @property
    def default_strategy(self) -> Strategy:
        return SHAPE_STRATEGIES[self.shape][0]

    @property
    def strategies(self) -> Tuple[Strategy, ...]:
        """Strategies that compute the same aggregate on this shape."""
        return SHAPE_STRATEGIES[self.shape]

    def profiles(self) -> List[Tuple[str, DataProfile, str]]:
        """(name, profile, column roles) of R, S and T."""
        if self.shape == "star":
            k = self.k or 0
            return [
                ("R", DataProfile(k, self.d, self.seed), "AB"),
                ("S", DataProfile(self.n, self.d, self.seed + 1), "BC"),
                ("T", DataProfile(k, self.d, self.seed + 2), "CD"),
            ]
        profile = DataProfile(self.n, self.d, self.seed)
        t_roles = "CA" if self.shape == "cyclic" else "CD"
        return [("R", profile, "AB"), ("S", profile, "BC"), ("T", profile, t_roles)]

    def sizes(self) -> Tuple[int, int, int]:
        sizes = [profile.n for _, profile, _ in self.profiles()]
        return sizes[0], sizes[1], sizes[2]

    def relations(self) -> Tuple[Relation, Relation, Relation]:
        self.validate()
        R, S, T = (
            generate_relation(profile, roles, name)
            for name, profile, roles in self.profiles()
        )
        logger.info(f"Generated {self.shape} relations: {R}, {S}, {T}")
        return R, S, T

    def plan_for(
        self, strategy: Strategy, cfg: Optional[MachineConfig] = None
    ) -> HashPlan:
        """Default plan for ``strategy`` with the plan overrides applied."""
        cfg = cfg or self.machine()
        target = get_settings().engine.target_bucket_tuples
        plan = default_plan(Strategy(strategy), *self.sizes(), cfg, target)
        if self.plan_overrides:
            plan = plan.with_buckets(**self.plan_overrides)
        return plan

    def to_dict(self) -> dict:
        return {
            "shape": self.shape,
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "seed": self.seed,
            "plan_overrides": dict(self.plan_overrides),
            "machine_overrides": dict(self.machine_overrides),
        }
