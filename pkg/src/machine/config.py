"""
Declarative description of the Plasticine-like accelerator.
"""

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Any

from ..models import TUPLE_WIDTH_BYTES, PlanInfeasibleError


@dataclass(frozen=True)
class MachineConfig:
    """Accelerator parameters shared by the engine and the model."""
    U: int = 64
    L: int = 16
    onchip_bytes: int = 16 * 2**20
    dram_bw: float = 49e9
    ssd_bw: float = 700e6
    dram_capacity_bytes: int = 251 * 10**9
    net_latency_cycles: int = 24
    pcu_latency_cycles: int = 6
    clock_hz: float = 1e9
    double_buffered: bool = True
    # Recorded only; compute throughput is U*L comparisons per cycle.
    peak_tflops: float = 12.3
    dram_latency_ns: float = 100.0
    dram_granule_bytes: int = 64

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.U < 1 or self.L < 1:
            raise ValueError("U and L must be at least 1")
        if self.onchip_bytes < 0 or self.dram_capacity_bytes < 0:
            raise ValueError("Capacities must be non-negative")
        if self.dram_bw <= 0 or self.ssd_bw <= 0 or self.clock_hz <= 0:
            raise ValueError("Bandwidths and clock must be positive")
        if self.net_latency_cycles < 0 or self.pcu_latency_cycles < 0:
            raise ValueError("Latencies must be non-negative")
        if self.dram_latency_ns < 0 or self.dram_granule_bytes < 0:
            raise ValueError("DRAM latency and granule must be non-negative")

    @property
    def dram_bytes_per_cycle(self) -> float:
        return self.dram_bw / self.clock_hz

    @property
    def ssd_bytes_per_cycle(self) -> float:
        return self.ssd_bw / self.clock_hz

    @property
    def dram_latency_cycles(self) -> float:
        return self.dram_latency_ns * 1e-9 * self.clock_hz

    @property
    def compute_latency_cycles(self) -> int:
        return self.net_latency_cycles + self.pcu_latency_cycles

    def with_overrides(self, **overrides: Any) -> "MachineConfig":
        """Copy with the given fields replaced; ``None`` values are ignored."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "MachineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"Unknown machine fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "MachineConfig":
        return cls.from_dict(json.loads(text))


def default_config() -> MachineConfig:
    """The evaluation machine: 64 units, 16 lanes, 16 MiB, 49 GB/s DRAM."""
    return MachineConfig()


def effective_M(cfg: MachineConfig, tuple_width: int = TUPLE_WIDTH_BYTES) -> int:
    """On-chip tuple capacity; half the scratchpad when double buffered."""
    if tuple_width <= 0:
        raise ValueError("tuple_width must be positive")
    capacity = cfg.onchip_bytes // tuple_width
    return capacity // 2 if cfg.double_buffered else capacity


def per_unit_capacity(cfg: MachineConfig, tuple_width: int = TUPLE_WIDTH_BYTES) -> int:
    return effective_M(cfg, tuple_width) // cfg.U


def grid_side(cfg: MachineConfig) -> int:
    """Side of the square unit grid used by the cyclic join."""
    side = math.isqrt(cfg.U)
    if side * side != cfg.U:
        raise PlanInfeasibleError(f"U={cfg.U} is not a perfect square")
    return side
