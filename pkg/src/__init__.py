"""
Multiway Join Simulator - Source Package

Functional and analytical simulation of multiway hash joins on a
Plasticine-like spatial accelerator.
"""

import logging
from .config import get_settings
from .engine import create_engine
from .machine import default_config
from .models import JoinAggregate, RunStats, Strategy
from .pipeline import ExperimentSpec, create_pipeline


# Set up logging
def setup_logging() -> None:
    """Set up application logging."""
    settings = get_settings()

    if settings.logging.enable_logging:
        level = getattr(logging, settings.logging.log_level.upper(), logging.INFO)

        logging.basicConfig(
            level=level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        # Keep graph runtime chatter out of experiment logs
        logging.getLogger('langgraph').setLevel(logging.WARNING)


# Initialize logging when package is imported
setup_logging()

__version__ = "0.1.0"
__all__ = [
    "get_settings",
    "create_engine",
    "create_pipeline",
    "default_config",
    "ExperimentSpec",
    "JoinAggregate",
    "RunStats",
    "Strategy",
    "setup_logging"
]
