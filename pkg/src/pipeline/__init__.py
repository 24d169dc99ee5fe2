"""
Pipeline package: experiment specification and the run graph.
"""

from .experiment import ExperimentPipeline, create_pipeline, reference_aggregate
from .spec import SHAPE_STRATEGIES, SHAPES, ExperimentSpec

__all__ = [
    "ExperimentPipeline",
    "create_pipeline",
    "reference_aggregate",
    "SHAPE_STRATEGIES",
    "SHAPES",
    "ExperimentSpec",
]
