"""Command modules for the simpeval command line."""

from .datasets import register as register_datasets
from .evaluate import register as register_evaluate
from .report import register as register_report

__all__ = ["register_datasets", "register_evaluate", "register_report"]
