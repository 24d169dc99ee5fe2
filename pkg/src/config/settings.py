"""
Configuration settings for the multiway join simulator.
"""

import logging
import os
from dataclasses import dataclass, field

from dotenv import load_dotenv

from ..models.relation import INTERMEDIATE_TUPLE_WIDTH_BYTES

# Load environment variables
load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


def _env_bool(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value in (None, ""):
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


@dataclass
class EngineSettings:
    """Configuration for the functional engine and verification."""
    workers: int = field(default_factory=lambda: _env_int("MWJOIN_WORKERS", 1))
    oracle_limit: int = field(
        default_factory=lambda: _env_int("MWJOIN_ORACLE_LIMIT", 100_000)
    )
    target_bucket_tuples: int = 64


@dataclass
class ModelSettings:
    """Configuration for the analytical model and plan search."""
    intermediate_tuple_width: int = INTERMEDIATE_TUPLE_WIDTH_BYTES
    search_max_exponent: int = 20
    search_span: int = 6
    sweep_workers: int = field(
        default_factory=lambda: _env_int("MWJOIN_SWEEP_WORKERS", 4)
    )


@dataclass
class LoggingSettings:
    """Configuration for application logging."""
    enable_logging: bool = field(
        default_factory=lambda: _env_bool("MWJOIN_ENABLE_LOGGING", True)
    )
    log_level: str = field(
        default_factory=lambda: os.getenv("MWJOIN_LOG_LEVEL", "INFO")
    )


@dataclass
class Settings:
    """Main application settings."""
    engine: EngineSettings = field(default_factory=EngineSettings)
    model: ModelSettings = field(default_factory=ModelSettings)
    logging: LoggingSettings = field(default_factory=LoggingSettings)

    def validate(self) -> None:
        """Validate configuration settings."""
        if self.engine.workers < 1:
            raise ValueError("Engine workers must be at least 1")

        if self.engine.oracle_limit < 0:
            raise ValueError("Oracle limit must be non-negative")

        if self.engine.target_bucket_tuples < 1:
            raise ValueError("Target bucket size must be positive")

        if self.model.intermediate_tuple_width <= 0:
            raise ValueError("Intermediate tuple width must be positive")

        if self.model.search_max_exponent < 0 or self.model.search_span < 0:
            raise ValueError("Plan search bounds must be non-negative")

        if self.model.sweep_workers < 1:
            raise ValueError("Sweep workers must be at least 1")

        if not isinstance(logging.getLevelName(self.logging.log_level.upper()), int):
            raise ValueError(f"Unknown log level: {self.logging.log_level}")


# Global settings instance
settings = Settings()


def get_settings() -> Settings:
    """Get the application settings."""
    return settings
