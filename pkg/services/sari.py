"""Corpus-level SARI.

For each operation (add, del, keep) and n-gram order, candidate, correct
and reference-mass counts are accumulated over the whole corpus before
precision, recall and F1 are taken. F1 is used for all three operations.
Input and output counts are scaled by the number of references R so they
are comparable with reference counts summed over all R references.

Per n-gram g, with I/O the input/output counts, Rall the count summed over
references and Rmax the largest count in a single reference:

    keep  candidates  min(R*I, R*O)
          correct     min(min(R*I, R*O), Rall)
          mass        min(R*I, Rall)
    del   candidates  max(R*I - R*O, 0)
          correct     min(max(R*I - R*O, 0), max(R*I - Rall, 0))
          mass        max(R*I - Rall, 0)
    add   candidates  max(O - I, 0)
          correct     min(O, Rmax)   only when I == 0 and Rmax > 0
          mass        Rmax           only when I == 0

Any ratio with a zero denominator is 0. Each operation averages F1 over the
active orders only: those with at least one n-gram in some source, output
or reference of the corpus. A corpus without any tokens scores 0.
"""

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Sequence, Tuple

from pydantic import BaseModel

from config import DEFAULT_LOWERCASE, DEFAULT_MAX_ORDER, DEFAULT_TOKENIZER
from services.core_text import extract_ngrams, token_strings
from services.corpus import check_parallel
from services.errors import InvalidArgumentError


class SariOperation(str, Enum):
    """Edit operations scored by SARI."""
    ADD = "add"
    DELETE = "del"
    KEEP = "keep"


class OrderScores(BaseModel):
    """Precision, recall and F1 of one operation at one n-gram order."""
    precision: float
    recall: float
    f1: float


class SariOperationScores(BaseModel):
    """Per-order and averaged scores of one operation."""
    operation: SariOperation
    per_order: List[OrderScores]
    overall: float


@dataclass
class _OperationCounts:
    candidates: int = 0
    correct: int = 0
    mass: int = 0

    def scores(self) -> OrderScores:
        precision = self.correct / self.candidates if self.candidates else 0.0
        recall = self.correct / self.mass if self.mass else 0.0
        return OrderScores(precision=precision, recall=recall, f1=f1_score(precision, recall))


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean, 0 when both inputs are 0."""
    if precision + recall <= 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def accumulate_ngram_counts(
    source: Counter,
    output: Counter,
    references: Sequence[Counter],
    counts: Dict[SariOperation, _OperationCounts],
) -> None:
    """Add one instance's n-gram counts of a single order into `counts`."""
    num_refs = len(references)
    ref_all: Counter = Counter()
    ref_max: Counter = Counter()
    for reference in references:
        ref_all.update(reference)
        ref_max |= reference

    keep = counts[SariOperation.KEEP]
    delete = counts[SariOperation.DELETE]
    add = counts[SariOperation.ADD]

    for gram, source_count in source.items():
        scaled_source = num_refs * source_count
        scaled_output = num_refs * output.get(gram, 0)
        in_refs = ref_all.get(gram, 0)

        kept = min(scaled_source, scaled_output)
        keep.candidates += kept
        keep.correct += min(kept, in_refs)
        keep.mass += min(scaled_source, in_refs)

        deleted = max(scaled_source - scaled_output, 0)
        should_delete = max(scaled_source - in_refs, 0)
        delete.candidates += deleted
        delete.correct += min(deleted, should_delete)
        delete.mass += should_delete

    for gram, output_count in output.items():
        source_count = source.get(gram, 0)
        add.candidates += max(output_count - source_count, 0)
        if source_count == 0 and ref_max.get(gram, 0) > 0:
            add.correct += min(output_count, ref_max[gram])

    for gram, max_count in ref_max.items():
        if gram not in source:
            add.mass += max_count


def corpus_sari(
    originals: Sequence[str],
    outputs: Sequence[str],
    references: Sequence[Sequence[str]],
    max_order: int = DEFAULT_MAX_ORDER,
    tokenizer: str = DEFAULT_TOKENIZER,
    lowercase: bool = DEFAULT_LOWERCASE,
) -> Tuple[float, Dict[SariOperation, SariOperationScores]]:
    """Compute corpus SARI.

    Args:
        originals: Source sentences
        outputs: One system output per source
        references: R parallel lists of reference simplifications
        max_order: Highest n-gram order k
        tokenizer: Tokenization scheme name
        lowercase: Compare lowercased tokens

    Returns:
        (SARI in [0, 100], per-operation breakdown)

    Raises:
        InvalidArgumentError: On empty or misaligned input, or max_order < 1
    """
    if max_order < 1:
        raise InvalidArgumentError(f"max_order must be >= 1, got {max_order}")
    size = check_parallel(originals, outputs, references)

    per_order_counts = [
        {operation: _OperationCounts() for operation in SariOperation}
        for _ in range(max_order)
    ]

    active = [False] * max_order

    # Fixed instance order keeps the integer accumulation reproducible
    for index in range(size):
        source_tokens = token_strings(originals[index], tokenizer, lowercase)
        output_tokens = token_strings(outputs[index], tokenizer, lowercase)
        reference_tokens = [
            token_strings(reference_set[index], tokenizer, lowercase)
            for reference_set in references
        ]
        for order in range(1, max_order + 1):
            source_grams = Counter(extract_ngrams(source_tokens, order).counts)
            output_grams = Counter(extract_ngrams(output_tokens, order).counts)
            reference_grams = [Counter(extract_ngrams(tokens, order).counts) for tokens in reference_tokens]
            if source_grams or output_grams or any(reference_grams):
                active[order - 1] = True
            accumulate_ngram_counts(source_grams, output_grams, reference_grams, per_order_counts[order - 1])

    breakdown = {}
    for operation in SariOperation:
        per_order = [counts[operation].scores() for counts in per_order_counts]
        active_f1 = [scores.f1 for scores, is_active in zip(per_order, active) if is_active]
        overall = sum(active_f1) / len(active_f1) if active_f1 else 0.0
        breakdown[operation] = SariOperationScores(
            operation=operation, per_order=per_order, overall=overall
        )

    sari = 100 * sum(scores.overall for scores in breakdown.values()) / len(breakdown)
    return sari, breakdown
