"""Multi-reference corpus BLEU backed by sacrebleu.

Sentences are tokenized and optionally lowercased here, then scored by
sacrebleu with its own tokenization switched off. Clipping uses the largest
count of an n-gram in any single reference, and the brevity penalty uses the
closest reference length of each instance (ties go to the shorter one).
"""

from enum import Enum
from typing import List, Sequence, Union

from pydantic import BaseModel
from sacrebleu.metrics import BLEU

from config import BLEU_EPSILON, DEFAULT_LOWERCASE, DEFAULT_MAX_ORDER, DEFAULT_TOKENIZER
from services.core_text import token_strings
from services.corpus import check_parallel
from services.errors import InvalidArgumentError


class Smoothing(str, Enum):
    NONE = "none"
    EPSILON = "epsilon"


# sacrebleu's "floor" replaces a zero match count with smooth_value / total
SACREBLEU_SMOOTHING = {
    Smoothing.NONE: "none",
    Smoothing.EPSILON: "floor",
}


class BleuStatistics(BaseModel):
    """Sufficient statistics and the resulting score.

    Precisions are fractions in [0, 1].
    """
    score: float
    matches: List[int]
    totals: List[int]
    precisions: List[float]
    brevity_penalty: float
    output_length: int
    reference_length: int


def _pretokenize(sentences: Sequence[str], tokenizer: str, lowercase: bool) -> List[str]:
    return [" ".join(token_strings(sentence, tokenizer, lowercase)) for sentence in sentences]


def compute_bleu_statistics(
    outputs: Sequence[str],
    references: Sequence[Sequence[str]],
    max_order: int = DEFAULT_MAX_ORDER,
    smoothing: Union[Smoothing, str] = Smoothing.NONE,
    tokenizer: str = DEFAULT_TOKENIZER,
    lowercase: bool = DEFAULT_LOWERCASE,
) -> BleuStatistics:
    """Compute BLEU along with its sufficient statistics.

    Raises:
        InvalidArgumentError: On empty or misaligned input, or max_order < 1
    """
    if max_order < 1:
        raise InvalidArgumentError(f"max_order must be >= 1, got {max_order}")
    smoothing = Smoothing(smoothing)
    check_parallel(outputs=outputs, references=references)

    scorer = BLEU(
        lowercase=False,
        force=True,
        tokenize="none",
        smooth_method=SACREBLEU_SMOOTHING[smoothing],
        smooth_value=BLEU_EPSILON if smoothing == Smoothing.EPSILON else None,
        max_ngram_order=max_order,
        effective_order=False,
    )
    result = scorer.corpus_score(
        _pretokenize(outputs, tokenizer, lowercase),
        [_pretokenize(reference_set, tokenizer, lowercase) for reference_set in references],
    )

    return BleuStatistics(
        score=result.score,
        matches=[int(count) for count in result.counts],
        totals=[int(total) for total in result.totals],
        precisions=[precision / 100 for precision in result.precisions],
        brevity_penalty=result.bp,
        output_length=int(result.sys_len),
        reference_length=int(result.ref_len),
    )


def corpus_bleu(
    outputs: Sequence[str],
    references: Sequence[Sequence[str]],
    max_order: int = DEFAULT_MAX_ORDER,
    smoothing: Union[Smoothing, str] = Smoothing.NONE,
    tokenizer: str = DEFAULT_TOKENIZER,
    lowercase: bool = DEFAULT_LOWERCASE,
) -> float:
    """Corpus BLEU in [0, 100] against R parallel reference lists."""
    return compute_bleu_statistics(
        outputs, references, max_order, smoothing, tokenizer, lowercase
    ).score
