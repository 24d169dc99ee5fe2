"""
Configuration package for the multiway join simulator.
"""

from .settings import Settings, get_settings

__all__ = ["Settings", "get_settings"]
