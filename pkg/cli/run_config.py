"""Shared options of the `evaluate` and `report` commands."""

import argparse
import logging
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from config import (
    AVAILABLE_METRICS,
    DEFAULT_LOWERCASE,
    DEFAULT_METRICS,
    DEFAULT_SEED,
    DEFAULT_TOKENIZER,
)
from services.core_text import TokenizationScheme
from services.corpus import EvalCorpus
from services.dataset_registry import DatasetRegistry
from services.dataset_store import load_corpus, load_corpus_from_files
from services.errors import DatasetNotFoundError, InvalidArgumentError
from services.metric_registry import MetricRegistry, load_scorer
from services.quality_estimation import FrequencyTable, load_frequency_table

logger = logging.getLogger(__name__)


class RunConfig(BaseModel):
    """Everything one evaluation run depends on."""
    test_set: Optional[str] = None
    original_path: Optional[Path] = None
    reference_paths: List[Path] = Field(default_factory=list)
    system_path: Path
    metrics: List[str] = Field(default_factory=lambda: list(DEFAULT_METRICS))
    external_metrics: Dict[str, str] = Field(default_factory=dict)
    tokenizer: TokenizationScheme = TokenizationScheme(DEFAULT_TOKENIZER)
    lowercase: bool = DEFAULT_LOWERCASE
    frequency_table: Optional[Path] = None
    report_path: Optional[Path] = None
    seed: int = DEFAULT_SEED

    @model_validator(mode="after")
    def _check_sources(self) -> "RunConfig":
        if (self.test_set is None) == (self.original_path is None):
            raise ValueError("Give exactly one of --test-set or --orig")
        if self.original_path is not None and not self.reference_paths:
            raise ValueError("--orig needs at least one --refs file")
        if self.test_set is not None and self.reference_paths:
            raise ValueError("--refs only applies together with --orig")
        if not self.metrics:
            raise ValueError("Select at least one metric")
        known = set(AVAILABLE_METRICS) | set(self.external_metrics)
        unknown = [name for name in self.metrics if name not in known]
        if unknown:
            raise ValueError(
                f"Unknown metric(s): {', '.join(unknown)} (known: {', '.join(sorted(known))})"
            )
        return self

    def build_registry(self) -> MetricRegistry:
        """A fresh registry holding this run's external scorers."""
        registry = MetricRegistry()
        for name, path in self.external_metrics.items():
            registry.register(name, load_scorer(path))
        return registry

    def load_corpus(self, registry: Optional[DatasetRegistry] = None) -> EvalCorpus:
        """Load originals, references and system outputs."""
        if self.test_set is not None:
            descriptor = (registry or DatasetRegistry()).resolve(self.test_set)
            return load_corpus(descriptor, self.system_path)
        return load_corpus_from_files(self.original_path, self.reference_paths, self.system_path)

    def load_frequency_table(self) -> Optional[FrequencyTable]:
        """The frequency table, or None with a warning when it cannot be read."""
        if self.frequency_table is None:
            return None
        try:
            return load_frequency_table(self.frequency_table)
        except (DatasetNotFoundError, InvalidArgumentError) as e:
            logger.warning("Lexical complexity omitted: %s", e)
            return None


def _split_metrics(value: str) -> List[str]:
    return [name.strip() for name in value.split(",") if name.strip()]


def _parse_external(values: Optional[List[str]]) -> Dict[str, str]:
    external: Dict[str, str] = {}
    for value in values or []:
        name, sep, path = value.partition("=")
        if not sep or not name or not path:
            raise InvalidArgumentError(f"Expected NAME=module:function, got '{value}'")
        external[name] = path
    return external


def add_run_arguments(parser: argparse.ArgumentParser) -> None:
    """Corpus, metric and tokenization options."""
    source = parser.add_argument_group("corpus")
    source.add_argument("--test-set", help="Registered test set name")
    source.add_argument("--orig", type=Path, help="Original sentences, one per line")
    source.add_argument("--refs", type=Path, nargs="+", default=[], help="Reference files, one per reference set")
    source.add_argument("--sys", type=Path, required=True, help="System outputs, one per line")

    scoring = parser.add_argument_group("scoring")
    scoring.add_argument(
        "--metrics",
        type=_split_metrics,
        default=None,
        help=f"Comma-separated metrics (default: {','.join(DEFAULT_METRICS)})",
    )
    scoring.add_argument(
        "--external-metric",
        action="append",
        metavar="NAME=MODULE:FUNCTION",
        help="Register and select an external corpus scorer",
    )
    scoring.add_argument(
        "--tokenizer",
        choices=[scheme.value for scheme in TokenizationScheme],
        default=DEFAULT_TOKENIZER,
    )
    scoring.add_argument("--no-lowercase", action="store_true", help="Keep case when matching n-grams")
    scoring.add_argument("--freq-table", type=Path, help="Word frequency table for lexical complexity")
    scoring.add_argument("--seed", type=int, default=DEFAULT_SEED)


def run_config_from_args(args: argparse.Namespace, report_path: Optional[Path] = None) -> RunConfig:
    external = _parse_external(args.external_metric)
    metrics = list(args.metrics) if args.metrics is not None else list(DEFAULT_METRICS)
    metrics += [name for name in external if name not in metrics]
    return RunConfig(
        test_set=args.test_set,
        original_path=args.orig,
        reference_paths=args.refs,
        system_path=args.sys,
        metrics=list(dict.fromkeys(metrics)),
        external_metrics=external,
        tokenizer=args.tokenizer,
        lowercase=not args.no_lowercase,
        frequency_table=args.freq_table,
        report_path=report_path,
        seed=args.seed,
    )
