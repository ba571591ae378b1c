"""Corpus metric report assembly.

Combines SARI, BLEU, FKGL and registered external metrics into a single
MetricReport, and scores a sampled human reference against the remaining
references to give a "Reference" baseline row.
"""

import logging
import random
from typing import Dict, List, Optional, Sequence

from pydantic import BaseModel, Field

from config import (
    AVAILABLE_METRICS,
    DEFAULT_LOWERCASE,
    DEFAULT_MAX_ORDER,
    DEFAULT_METRICS,
    DEFAULT_SEED,
    DEFAULT_TOKENIZER,
)
from services.bleu import Smoothing, corpus_bleu
from services.corpus import EvalCorpus
from services.errors import InvalidArgumentError
from services.fkgl import fkgl
from services.metric_registry import MetricRegistry, get_metric_registry
from services.sari import SariOperationScores, corpus_sari

logger = logging.getLogger(__name__)


class MetricReport(BaseModel):
    """Corpus-level scores. Metrics that were not requested stay None."""
    sari: Optional[float] = None
    sari_breakdown: Optional[Dict[str, SariOperationScores]] = None
    bleu: Optional[float] = None
    fkgl: Optional[float] = None
    extras: Dict[str, float] = Field(default_factory=dict)
    diagnostics: Dict[str, str] = Field(default_factory=dict)


def validate_metric_names(
    metrics: Sequence[str],
    registry: Optional[MetricRegistry] = None,
) -> List[str]:
    """Check metric names against built-ins and registered extras.

    Raises:
        InvalidArgumentError: On an unknown name
    """
    registry = registry or get_metric_registry()
    unknown = [name for name in metrics if name not in AVAILABLE_METRICS and name not in registry]
    if unknown:
        known = ", ".join(list(AVAILABLE_METRICS) + registry.names())
        raise InvalidArgumentError(f"Unknown metric(s): {', '.join(unknown)} (known: {known})")
    # Preserve order, drop duplicates
    return list(dict.fromkeys(metrics))


def compute_metric_report(
    corpus: EvalCorpus,
    metrics: Sequence[str] = DEFAULT_METRICS,
    tokenizer: str = DEFAULT_TOKENIZER,
    lowercase: bool = DEFAULT_LOWERCASE,
    max_order: int = DEFAULT_MAX_ORDER,
    smoothing: str = Smoothing.NONE.value,
    registry: Optional[MetricRegistry] = None,
) -> MetricReport:
    """Score the corpus's system outputs with the selected metrics."""
    registry = registry or get_metric_registry()
    selected = validate_metric_names(metrics, registry)
    outputs = corpus.require_outputs()
    report = MetricReport()

    if "sari" in selected:
        sari, breakdown = corpus_sari(
            corpus.originals, outputs, corpus.references, max_order, tokenizer, lowercase
        )
        report.sari = sari
        report.sari_breakdown = {operation.value: scores for operation, scores in breakdown.items()}

    if "bleu" in selected:
        report.bleu = corpus_bleu(
            outputs, corpus.references, max_order, smoothing, tokenizer, lowercase
        )

    if "fkgl" in selected:
        try:
            report.fkgl = fkgl(outputs)
        except InvalidArgumentError as e:
            # All-empty outputs have no readability
            logger.warning("FKGL skipped: %s", e)
            report.diagnostics["fkgl"] = str(e)

    extra_names = [name for name in selected if name not in AVAILABLE_METRICS]
    if extra_names:
        report.extras, diagnostics = registry.evaluate(corpus, extra_names)
        report.diagnostics.update(diagnostics)

    return report


def sample_reference_split(corpus: EvalCorpus, seed: int = DEFAULT_SEED):
    """Pick one reference per instance; return it and the remaining R-1 sets.

    Raises:
        InvalidArgumentError: If the corpus has fewer than two references
    """
    num_refs = corpus.reference_count
    if num_refs < 2:
        raise InvalidArgumentError("A reference baseline needs at least two references")

    rng = random.Random(seed)
    sampled: List[str] = []
    remaining: List[List[str]] = [[] for _ in range(num_refs - 1)]
    for index in range(len(corpus)):
        choice = rng.randrange(num_refs)
        references = corpus.references_for(index)
        sampled.append(references[choice])
        others = references[:choice] + references[choice + 1:]
        for slot, reference in enumerate(others):
            remaining[slot].append(reference)
    return sampled, remaining


def reference_baseline(
    corpus: EvalCorpus,
    metrics: Sequence[str] = DEFAULT_METRICS,
    seed: int = DEFAULT_SEED,
    tokenizer: str = DEFAULT_TOKENIZER,
    lowercase: bool = DEFAULT_LOWERCASE,
    max_order: int = DEFAULT_MAX_ORDER,
) -> MetricReport:
    """Score one sampled human reference per instance against the others.

    External metrics are not run for the baseline.
    """
    sampled, remaining = sample_reference_split(corpus, seed)
    baseline_corpus = EvalCorpus(originals=corpus.originals, outputs=sampled, references=remaining)
    builtin = [name for name in metrics if name in AVAILABLE_METRICS]
    return compute_metric_report(
        baseline_corpus, builtin, tokenizer, lowercase, max_order, registry=MetricRegistry()
    )
