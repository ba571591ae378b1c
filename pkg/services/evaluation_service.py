"""End-to-end evaluation of one system on one corpus.

Ties the metric, annotation, quality-estimation and report modules
together for the CLI and the reproduction tool.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence

from config import (
    DEFAULT_LOWERCASE,
    DEFAULT_MAX_ORDER,
    DEFAULT_METRICS,
    DEFAULT_SEED,
    DEFAULT_TOKENIZER,
)
from services.annotation import TransformationScores, annotate_pair, transformation_f1
from services.corpus import EvalCorpus
from services.metric_registry import MetricRegistry, get_metric_registry
from services.metrics import (
    MetricReport,
    compute_metric_report,
    reference_baseline,
    sample_reference_split,
)
from services.quality_estimation import FrequencyTable, QEAggregate, compute_corpus_features
from services.report_builder import (
    ReportBundle,
    feature_histograms,
    length_breakdown,
    sample_instances,
)

logger = logging.getLogger(__name__)


def metric_document(report: MetricReport) -> Dict[str, Any]:
    """JSON-ready metric scores; unselected metrics are left out."""
    document: Dict[str, Any] = {}
    if report.sari is not None:
        document["sari"] = report.sari
        document["sari_breakdown"] = {
            name: scores.model_dump(mode="json", exclude={"operation"})
            for name, scores in (report.sari_breakdown or {}).items()
        }
    if report.bleu is not None:
        document["bleu"] = report.bleu
    if report.fkgl is not None:
        document["fkgl"] = report.fkgl
    if report.extras:
        document["extras"] = dict(report.extras)
    if report.diagnostics:
        document["diagnostics"] = dict(report.diagnostics)
    return document


def qe_document(aggregate: QEAggregate) -> Dict[str, Any]:
    return aggregate.model_dump(mode="json", exclude_none=True)


class EvaluationService:
    """Runs metrics and builds reports with shared tokenization settings."""

    def __init__(
        self,
        tokenizer: str = DEFAULT_TOKENIZER,
        lowercase: bool = DEFAULT_LOWERCASE,
        max_order: int = DEFAULT_MAX_ORDER,
        registry: Optional[MetricRegistry] = None,
    ):
        self.tokenizer = tokenizer
        self.lowercase = lowercase
        self.max_order = max_order
        self.registry = registry or get_metric_registry()

    def score(self, corpus: EvalCorpus, metrics: Sequence[str] = DEFAULT_METRICS) -> MetricReport:
        return compute_metric_report(
            corpus,
            metrics,
            tokenizer=self.tokenizer,
            lowercase=self.lowercase,
            max_order=self.max_order,
            registry=self.registry,
        )

    def transformations(self, corpus: EvalCorpus) -> TransformationScores:
        return transformation_f1(
            corpus.originals, corpus.require_outputs(), corpus.references, self.tokenizer
        )

    def evaluate(
        self,
        corpus: EvalCorpus,
        metrics: Sequence[str] = DEFAULT_METRICS,
        table: Optional[FrequencyTable] = None,
    ) -> Dict[str, Any]:
        """Scores, transformation F1s and QE aggregates as one document.

        Raises:
            InvalidArgumentError: On unknown metrics or a corpus without outputs
        """
        outputs = corpus.require_outputs()
        report = self.score(corpus, metrics)
        _, aggregate = compute_corpus_features(corpus.originals, outputs, table, self.tokenizer)

        document = metric_document(report)
        document["transformations"] = self.transformations(corpus).as_dict()
        document["quality_estimation"] = qe_document(aggregate)
        return document

    def reference_outputs(self, corpus: EvalCorpus, seed: int = DEFAULT_SEED) -> List[str]:
        """One human reference per instance, sampled when there are several."""
        if corpus.reference_count == 1:
            return list(corpus.references[0])
        sampled, _ = sample_reference_split(corpus, seed)
        return sampled

    def build_report_bundle(
        self,
        corpus: EvalCorpus,
        metrics: Sequence[str] = DEFAULT_METRICS,
        table: Optional[FrequencyTable] = None,
        seed: int = DEFAULT_SEED,
        title: str = "Simplification report",
    ) -> ReportBundle:
        """Gather every analysis shown in the HTML report."""
        outputs = corpus.require_outputs()
        report = self.score(corpus, metrics)

        reference_report = None
        if corpus.reference_count >= 2:
            reference_report = reference_baseline(
                corpus,
                metrics,
                seed=seed,
                tokenizer=self.tokenizer,
                lowercase=self.lowercase,
                max_order=self.max_order,
            )
        else:
            logger.info("Single reference: no reference score baseline")

        features, aggregate = compute_corpus_features(corpus.originals, outputs, table, self.tokenizer)
        _, reference_aggregate = compute_corpus_features(
            corpus.originals, self.reference_outputs(corpus, seed), table, self.tokenizer
        )

        annotations = [
            annotate_pair(original, output, self.tokenizer)
            for original, output in zip(corpus.originals, outputs)
        ]
        source_lengths = [len(tokens) for tokens, _, _, _ in annotations]
        compression, similarity = feature_histograms(features)

        return ReportBundle(
            title=title,
            instance_count=len(corpus),
            reference_count=corpus.reference_count,
            metrics=report,
            reference_metrics=reference_report,
            transformations=self.transformations(corpus),
            system_qe=aggregate,
            reference_qe=reference_aggregate,
            features=features,
            compression_histogram=compression,
            similarity_histogram=similarity,
            length_buckets=length_breakdown(source_lengths, features),
            samples=sample_instances(corpus, features, annotations, seed),
        )


# Singleton instance
_evaluation_service: Optional[EvaluationService] = None


def get_evaluation_service() -> EvaluationService:
    """Get the singleton EvaluationService instance with default settings."""
    global _evaluation_service
    if _evaluation_service is None:
        _evaluation_service = EvaluationService()
    return _evaluation_service
