"""Report data assembly: highlights, sampled instances, histograms, length buckets.

Everything the HTML report shows is gathered into a ReportBundle first;
rendering never computes scores.
"""

import math
import random
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from config import (
    DEFAULT_SEED,
    HISTOGRAM_BINS,
    MIN_INSTANCES_FOR_BUCKETS,
    SAMPLES_PER_CATEGORY,
)
from services.annotation import Transformation, TransformationLabels, TransformationScores, WordAlignment
from services.corpus import EvalCorpus
from services.errors import InvalidArgumentError
from services.metrics import MetricReport
from services.quality_estimation import QEAggregate, QEFeatureSet, aggregate_features


class HighlightSide(str, Enum):
    SOURCE = "source"
    OUTPUT = "output"


class HighlightKind(str, Enum):
    DELETE = "delete"
    MOVE = "move"
    REPLACE = "replace"
    COPY = "copy"
    ADDITION = "addition"


class HighlightSpan(BaseModel):
    """A run of tokens [start, end) on one side sharing a transformation kind."""
    side: HighlightSide
    start: int
    end: int
    kind: HighlightKind

    @model_validator(mode="after")
    def _check_range(self) -> "HighlightSpan":
        if not 0 <= self.start < self.end:
            raise ValueError(f"Invalid span range [{self.start}, {self.end})")
        return self


class SampleCategory(str, Enum):
    """Behaviours illustrated in the Samples section, in display order."""
    SENTENCE_SPLITTING = "sentence-splitting"
    STRONG_REWRITE = "strong-rewrite"
    HIGH_COMPRESSION = "high-compression"
    LEXICAL_SIMPLIFICATION = "lexical-simplification"
    EXACT_COPIES = "exact-copies"


class SampledInstance(BaseModel):
    index: int
    source_tokens: List[str]
    output_tokens: List[str]
    source_spans: List[HighlightSpan]
    output_spans: List[HighlightSpan]
    features: QEFeatureSet


class Histogram(BaseModel):
    """Equal-width bin counts over a closed value range."""
    label: str
    counts: List[int]
    edges: List[float]

    @property
    def total(self) -> int:
        return sum(self.counts)


class LengthBucket(BaseModel):
    """Instances whose source token count lies in (lower, upper].

    lower is None for the first bucket, which starts at the shortest source.
    """
    lower: Optional[int] = None
    upper: int
    indices: List[int] = Field(default_factory=list)
    aggregate: Optional[QEAggregate] = None

    @property
    def count(self) -> int:
        return len(self.indices)

    @property
    def label(self) -> str:
        if self.lower is None:
            return f"<= {self.upper}"
        return f"{self.lower + 1}-{self.upper}" if self.upper > self.lower else f"({self.lower}, {self.upper}]"


class ReportBundle(BaseModel):
    """All analyses of one system on one corpus, ready to render."""
    title: str
    instance_count: int
    reference_count: int
    metrics: MetricReport
    reference_metrics: Optional[MetricReport] = None
    transformations: Optional[TransformationScores] = None
    system_qe: QEAggregate
    reference_qe: Optional[QEAggregate] = None
    features: List[QEFeatureSet]
    compression_histogram: Histogram
    similarity_histogram: Histogram
    length_buckets: List[LengthBucket]
    samples: Dict[SampleCategory, List[SampledInstance]]

    @model_validator(mode="after")
    def _check_samples(self) -> "ReportBundle":
        for category, instances in self.samples.items():
            if len(instances) > SAMPLES_PER_CATEGORY:
                raise ValueError(f"Category {category.value} holds {len(instances)} samples")
            for instance in instances:
                if not 0 <= instance.index < self.instance_count:
                    raise ValueError(f"Sampled index {instance.index} outside the corpus")
        return self


Annotation = Tuple[List[str], List[str], WordAlignment, TransformationLabels]


# =========================================================================
# Highlights
# =========================================================================

def _merge_runs(kinds: Sequence[HighlightKind], side: HighlightSide) -> List[HighlightSpan]:
    spans: List[HighlightSpan] = []
    start = 0
    for position in range(1, len(kinds) + 1):
        if position == len(kinds) or kinds[position] != kinds[start]:
            spans.append(HighlightSpan(side=side, start=start, end=position, kind=kinds[start]))
            start = position
    return spans


def highlight_spans(
    alignment: WordAlignment,
    labels: TransformationLabels,
) -> Tuple[List[HighlightSpan], List[HighlightSpan]]:
    """Source and output spans from a labeled alignment.

    Output tokens aligned to a source token take that token's label;
    unaligned output tokens are ADDITION.
    """
    if len(labels) != alignment.source_len:
        raise InvalidArgumentError("Labels must cover every source token")
    source_kinds = [HighlightKind(label.value) for label in labels.labels]
    target_to_source = alignment.target_to_source()
    output_kinds = [
        HighlightKind(labels.labels[target_to_source[j]].value) if j in target_to_source else HighlightKind.ADDITION
        for j in range(alignment.target_len)
    ]
    return (
        _merge_runs(source_kinds, HighlightSide.SOURCE),
        _merge_runs(output_kinds, HighlightSide.OUTPUT),
    )


# =========================================================================
# Sampling
# =========================================================================

def _category_members(
    features: Sequence[QEFeatureSet],
    annotations: Sequence[Annotation],
) -> Dict[SampleCategory, Tuple[List[int], Callable[[int], float]]]:
    indices = range(len(features))
    replace_counts = [labels.count(Transformation.REPLACE) for _, _, _, labels in annotations]
    return {
        SampleCategory.SENTENCE_SPLITTING: (
            [i for i in indices if features[i].sentence_splits > 1],
            lambda i: -features[i].sentence_splits,
        ),
        SampleCategory.STRONG_REWRITE: (
            [i for i in indices if not features[i].exact_match],
            lambda i: features[i].levenshtein_similarity,
        ),
        SampleCategory.HIGH_COMPRESSION: (
            [i for i in indices if features[i].compression_ratio < 1],
            lambda i: features[i].compression_ratio,
        ),
        SampleCategory.LEXICAL_SIMPLIFICATION: (
            [i for i in indices if replace_counts[i] >= 1 and features[i].sentence_splits == 1],
            lambda i: -replace_counts[i],
        ),
        SampleCategory.EXACT_COPIES: (
            [i for i in indices if features[i].exact_match],
            lambda i: 0,
        ),
    }


def sample_instances(
    corpus: EvalCorpus,
    features: Sequence[QEFeatureSet],
    annotations: Sequence[Annotation],
    seed: int = DEFAULT_SEED,
) -> Dict[SampleCategory, List[SampledInstance]]:
    """Pick up to SAMPLES_PER_CATEGORY instances per behaviour.

    Each category sorts its members on its criterion; ties keep the order
    of one seeded shuffle of the corpus, so results repeat under a seed.
    """
    size = len(corpus)
    if len(features) != size or len(annotations) != size:
        raise InvalidArgumentError(
            f"Expected {size} features and annotations, got {len(features)} and {len(annotations)}"
        )

    shuffled = list(range(size))
    random.Random(seed).shuffle(shuffled)
    position = {index: rank for rank, index in enumerate(shuffled)}

    samples: Dict[SampleCategory, List[SampledInstance]] = {}
    for category, (members, criterion) in _category_members(features, annotations).items():
        ordered = sorted(members, key=lambda i: (criterion(i), position[i]))
        chosen = []
        for index in ordered[:SAMPLES_PER_CATEGORY]:
            source_tokens, output_tokens, alignment, labels = annotations[index]
            source_spans, output_spans = highlight_spans(alignment, labels)
            chosen.append(SampledInstance(
                index=index,
                source_tokens=source_tokens,
                output_tokens=output_tokens,
                source_spans=source_spans,
                output_spans=output_spans,
                features=features[index],
            ))
        samples[category] = chosen
    return samples


# =========================================================================
# Distributions
# =========================================================================

def build_histogram(
    values: Sequence[float],
    label: str,
    value_range: Tuple[float, float],
    bins: int = HISTOGRAM_BINS,
) -> Histogram:
    """Bin values with numpy; every value inside the range is counted once."""
    if not values:
        raise InvalidArgumentError("Cannot build a histogram of no values")
    counts, edges = np.histogram(np.asarray(values, dtype=float), bins=bins, range=value_range)
    return Histogram(label=label, counts=[int(c) for c in counts], edges=[float(e) for e in edges])


def feature_histograms(features: Sequence[QEFeatureSet]) -> Tuple[Histogram, Histogram]:
    """Compression-ratio and Levenshtein-similarity histograms."""
    ratios = [feature.compression_ratio for feature in features]
    similarities = [feature.levenshtein_similarity for feature in features]
    compression = build_histogram(ratios, "Compression ratio", (0.0, max(1.0, max(ratios))))
    similarity = build_histogram(similarities, "Levenshtein similarity", (0.0, 1.0))
    return compression, similarity


# =========================================================================
# Length breakdown
# =========================================================================

def length_breakdown(
    source_lengths: Sequence[int],
    features: Sequence[QEFeatureSet],
) -> List[LengthBucket]:
    """Split instances into source-length quartile buckets.

    Thresholds are nearest-rank quartiles q_k of the sorted lengths; bucket
    k holds lengths in (q_{k-1}, q_k]. With fewer than
    MIN_INSTANCES_FOR_BUCKETS instances a single bucket holds everything.
    """
    if len(source_lengths) != len(features):
        raise InvalidArgumentError("Every instance needs a source length and features")
    if not source_lengths:
        raise InvalidArgumentError("Cannot break down an empty corpus")

    ordered = sorted(source_lengths)
    count = len(ordered)
    if count < MIN_INSTANCES_FOR_BUCKETS:
        thresholds = [ordered[-1]]
    else:
        thresholds = [ordered[math.ceil(k * count / 4) - 1] for k in range(1, 5)]

    buckets = []
    lower: Optional[int] = None
    for upper in thresholds:
        indices = [
            i for i, length in enumerate(source_lengths)
            if length <= upper and (lower is None or length > lower)
        ]
        aggregate = aggregate_features([features[i] for i in indices]) if indices else None
        buckets.append(LengthBucket(lower=lower, upper=upper, indices=indices, aggregate=aggregate))
        lower = upper
    return buckets
