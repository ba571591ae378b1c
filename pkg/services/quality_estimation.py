"""Reference-independent quality estimation features.

Per instance: character compression ratio, Levenshtein similarity,
sentence-split ratio, exact match, added and deleted word proportions
and a lexical complexity score (third quartile of log word ranks in a
frequency table). Corpus aggregates are plain means; exact matches
become a proportion.
"""

import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from config import DEFAULT_TOKENIZER
from services.core_text import (
    levenshtein_similarity,
    normalize_whitespace,
    split_sentences,
    token_strings,
)
from services.errors import DatasetNotFoundError, InvalidArgumentError

logger = logging.getLogger(__name__)


class FrequencyTable:
    """Word ranks, 1 being the most frequent. Immutable once built."""

    def __init__(self, words: Iterable[str]):
        ranks: Dict[str, int] = {}
        for word in words:
            key = word.lower()
            if key in ranks:
                logger.warning("Duplicate word '%s' in frequency table, keeping first rank", key)
                continue
            ranks[key] = len(ranks) + 1
        if not ranks:
            raise InvalidArgumentError("Frequency table is empty")
        self._ranks = ranks

    @property
    def size(self) -> int:
        return len(self._ranks)

    def rank(self, word: str) -> int:
        """Rank of a word; unknown words get the table size."""
        return self._ranks.get(word.lower(), self.size)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._ranks


def load_frequency_table(path: Union[str, Path]) -> FrequencyTable:
    """Load a table with one `word<TAB>count` or `word` entry per line.

    Lines are in descending frequency order; blank lines are skipped.

    Raises:
        DatasetNotFoundError: If the file does not exist
        InvalidArgumentError: If it holds no entries
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetNotFoundError(f"Frequency table not found: {path}")
    words = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            word = line.rstrip("\r\n").split("\t", 1)[0].strip()
            if word:
                words.append(word)
    return FrequencyTable(words)


class QEFeatureBase(BaseModel):
    compression_ratio: float
    levenshtein_similarity: float
    sentence_splits: float
    added_proportion: float
    deleted_proportion: float
    lexical_complexity: Optional[float] = None


class QEFeatureSet(QEFeatureBase):
    """Features of one source/output pair."""
    exact_match: bool


class QEAggregate(QEFeatureBase):
    """Corpus means; exact_match is the proportion of untouched sources."""
    exact_match: float
    count: int


NUMERIC_FEATURES = (
    "compression_ratio",
    "levenshtein_similarity",
    "sentence_splits",
    "added_proportion",
    "deleted_proportion",
)


def nearest_rank_quantile(values: Sequence[float], quantile: float) -> float:
    """Quantile by the nearest-rank method (no interpolation)."""
    if not values:
        raise InvalidArgumentError("Cannot take a quantile of no values")
    ordered = sorted(values)
    rank = max(math.ceil(quantile * len(ordered)), 1)
    return ordered[rank - 1]


def lexical_complexity(
    text: str,
    table: FrequencyTable,
    tokenizer: str = DEFAULT_TOKENIZER,
) -> Optional[float]:
    """Third quartile of ln(rank) over the alphabetic tokens of a text."""
    words = [token for token in token_strings(text, tokenizer, lowercase=True) if token.isalpha()]
    if not words:
        return None
    return nearest_rank_quantile([math.log(table.rank(word)) for word in words], 0.75)


def compute_features(
    source: str,
    output: str,
    table: Optional[FrequencyTable] = None,
    tokenizer: str = DEFAULT_TOKENIZER,
) -> QEFeatureSet:
    """Compute the features of one simplification.

    Raises:
        InvalidArgumentError: If the source is empty
    """
    source_text = normalize_whitespace(source)
    output_text = normalize_whitespace(output)
    if not source_text:
        raise InvalidArgumentError("Source sentence must be non-empty")

    source_tokens = token_strings(source_text, tokenizer, lowercase=True)
    output_tokens = token_strings(output_text, tokenizer, lowercase=True)
    source_types = set(source_tokens)
    output_types = set(output_tokens)

    added = len(output_types - source_types) / len(output_tokens) if output_tokens else 0.0
    deleted = len(source_types - output_types) / len(source_tokens) if source_tokens else 0.0

    output_sentences = len(split_sentences(output_text))
    source_sentences = len(split_sentences(source_text))

    return QEFeatureSet(
        compression_ratio=len(output_text) / len(source_text),
        levenshtein_similarity=levenshtein_similarity(source_text, output_text),
        sentence_splits=output_sentences / source_sentences,
        exact_match=source_text == output_text,
        added_proportion=added,
        deleted_proportion=deleted,
        lexical_complexity=lexical_complexity(output_text, table, tokenizer) if table else None,
    )


def aggregate_features(features: Sequence[QEFeatureSet]) -> QEAggregate:
    """Average per-instance features over the corpus.

    lexical_complexity is averaged over instances that have one.

    Raises:
        InvalidArgumentError: If no features are given
    """
    if not features:
        raise InvalidArgumentError("Cannot aggregate an empty feature list")
    count = len(features)
    means = {
        name: sum(getattr(feature, name) for feature in features) / count
        for name in NUMERIC_FEATURES
    }
    complexities = [f.lexical_complexity for f in features if f.lexical_complexity is not None]
    return QEAggregate(
        **means,
        lexical_complexity=sum(complexities) / len(complexities) if complexities else None,
        exact_match=sum(1 for feature in features if feature.exact_match) / count,
        count=count,
    )


def compute_corpus_features(
    sources: Sequence[str],
    outputs: Sequence[str],
    table: Optional[FrequencyTable] = None,
    tokenizer: str = DEFAULT_TOKENIZER,
) -> Tuple[List[QEFeatureSet], QEAggregate]:
    """Per-instance features and their aggregate for a whole corpus."""
    if len(sources) != len(outputs):
        raise InvalidArgumentError(
            f"Corpus length mismatch: sources={len(sources)}, outputs={len(outputs)}"
        )
    per_instance = [
        compute_features(source, output, table, tokenizer)
        for source, output in zip(sources, outputs)
    ]
    return per_instance, aggregate_features(per_instance)
