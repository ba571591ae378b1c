"""Services module for sentence simplification evaluation."""

from .corpus import EvalCorpus
from .dataset_registry import DatasetRegistry
from .evaluation_service import EvaluationService, get_evaluation_service
from .metric_registry import MetricRegistry, get_metric_registry

__all__ = [
    "DatasetRegistry",
    "EvalCorpus",
    "EvaluationService",
    "MetricRegistry",
    "get_evaluation_service",
    "get_metric_registry",
]
