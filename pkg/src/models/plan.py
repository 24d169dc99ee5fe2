"""
Hash plan: bucket counts and salts for every hash function level.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict


class HashLevel(str, Enum):
    """Hash functions named by the bucket count they produce."""
    H = "H"
    G = "G"
    h = "h"
    g = "g"
    f = "f"


# Odd 64-bit multipliers, one per level.
DEFAULT_SALTS: Dict[HashLevel, int] = {
    HashLevel.H: 0x9E3779B97F4A7C15,
    HashLevel.G: 0xC2B2AE3D27D4EB4F,
    HashLevel.h: 0x165667B19E3779F9,
    HashLevel.g: 0xD6E8FEB86659FD93,
    HashLevel.f: 0xFF51AFD7ED558CCD,
}


@dataclass(frozen=True)
class HashPlan:
    """Bucket counts for H, G, h, g and f plus the salt of each level."""
    H_bkt: int = 1
    G_bkt: int = 1
    h_bkt: int = 1
    g_bkt: int = 1
    f_bkt: int = 1
    salt_per_level: Dict[HashLevel, int] = field(
        default_factory=lambda: dict(DEFAULT_SALTS)
    )

    def __post_init__(self) -> None:
        for name in ("H_bkt", "G_bkt", "h_bkt", "g_bkt", "f_bkt"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        for level, salt in self.salt_per_level.items():
            if salt % 2 == 0:
                raise ValueError(f"Salt for level {level.value} must be odd")

    def buckets(self, level: HashLevel) -> int:
        """
        Bucket count of one hash level.

        Args:
            level: Hash level

        Returns:
            The matching ``*_bkt`` field
        """
        count: int = getattr(self, f"{level.value}_bkt")
        return count

    def salt(self, level: HashLevel) -> int:
        return self.salt_per_level.get(level, DEFAULT_SALTS[level])

    def with_buckets(self, **counts: int) -> "HashPlan":
        return replace(self, **counts)

    def to_dict(self) -> dict:
        return {
            "H_bkt": self.H_bkt,
            "G_bkt": self.G_bkt,
            "h_bkt": self.h_bkt,
            "g_bkt": self.g_bkt,
            "f_bkt": self.f_bkt,
            "salt_per_level": {
                level.value: salt for level, salt in self.salt_per_level.items()
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HashPlan":
        salts = dict(DEFAULT_SALTS)
        for key, value in data.get("salt_per_level", {}).items():
            salts[HashLevel(key)] = int(value)
        return cls(
            H_bkt=int(data.get("H_bkt", 1)),
            G_bkt=int(data.get("G_bkt", 1)),
            h_bkt=int(data.get("h_bkt", 1)),
            g_bkt=int(data.get("g_bkt", 1)),
            f_bkt=int(data.get("f_bkt", 1)),
            salt_per_level=salts,
        )


class Strategy(str, Enum):
    """Join strategies understood by the engine, the planner and the model."""
    LINEAR3 = "linear3"
    CYCLIC3 = "cyclic3"
    STAR3 = "star3"
    CASCADED_SELF = "cascaded-self"
    CASCADED_STAR = "cascaded-star"

    @property
    def is_cascaded(self) -> bool:
        return self in (Strategy.CASCADED_SELF, Strategy.CASCADED_STAR)
