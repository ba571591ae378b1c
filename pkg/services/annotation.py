"""Word-level transformation analysis.

Aligns an original sentence with a simplification, labels every source
token as DELETE, MOVE, REPLACE or COPY, and scores a system's labels
against the labels derived from the references.

Labeling rules:
- unaligned source tokens are DELETE
- tokens aligned to a different form are REPLACE
- aligned pairs crossing another aligned pair are MOVE
- everything else is COPY
REPLACE takes precedence over MOVE, MOVE over COPY.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field

from config import (
    DEFAULT_TOKENIZER,
    EXACT_MATCH_SIMILARITY,
    MIN_CHAR_SIMILARITY,
    MIN_STEM_LENGTH,
    STEM_MATCH_SIMILARITY,
    STEM_SUFFIXES,
)
from services.core_text import Token, levenshtein_similarity, token_strings
from services.corpus import check_parallel
from services.errors import InvalidArgumentError


class Transformation(str, Enum):
    """Per-token transformation labels."""
    DELETE = "delete"
    MOVE = "move"
    REPLACE = "replace"
    COPY = "copy"


@dataclass(frozen=True)
class WordAlignment:
    """One-to-one token alignment between a source and a target sentence."""
    pairs: FrozenSet[Tuple[int, int]]
    source_len: int
    target_len: int

    def validate(self) -> None:
        """Raise InvalidArgumentError unless indices are in range and one-to-one."""
        sources = set()
        targets = set()
        for i, j in self.pairs:
            if not (0 <= i < self.source_len and 0 <= j < self.target_len):
                raise InvalidArgumentError(
                    f"Alignment pair ({i}, {j}) out of range for lengths "
                    f"{self.source_len}/{self.target_len}"
                )
            if i in sources or j in targets:
                raise InvalidArgumentError(f"Alignment pair ({i}, {j}) is not one-to-one")
            sources.add(i)
            targets.add(j)

    def source_to_target(self) -> Dict[int, int]:
        return {i: j for i, j in self.pairs}

    def target_to_source(self) -> Dict[int, int]:
        return {j: i for i, j in self.pairs}


@dataclass(frozen=True)
class TransformationLabels:
    """One label per source token."""
    labels: Tuple[Transformation, ...]

    def __len__(self) -> int:
        return len(self.labels)

    def count(self, transformation: Transformation) -> int:
        return sum(1 for label in self.labels if label == transformation)


class TransformationScores(BaseModel):
    """Per-transformation F1, averaged over sentences."""
    delete: float
    move: float
    replace: float
    copy_: float = Field(alias="copy")
    sentence_scores: List[Dict[str, float]] = Field(default_factory=list, exclude=True)

    model_config = {"populate_by_name": True}

    def as_dict(self) -> Dict[str, float]:
        return {
            Transformation.DELETE.value: self.delete,
            Transformation.MOVE.value: self.move,
            Transformation.REPLACE.value: self.replace,
            Transformation.COPY.value: self.copy_,
        }


TokenLike = Union[Token, str]


def _text(token: TokenLike) -> str:
    return token.surface if isinstance(token, Token) else token


def stem(word: str) -> str:
    """Strip one known suffix when at least MIN_STEM_LENGTH characters remain."""
    for suffix in STEM_SUFFIXES:
        if word.endswith(suffix) and len(word) - len(suffix) >= MIN_STEM_LENGTH:
            return word[: -len(suffix)]
    return word


def word_similarity(a: str, b: str) -> Optional[float]:
    """Lexical similarity of two words, None when below the acceptance threshold."""
    a = a.lower()
    b = b.lower()
    if a == b:
        return EXACT_MATCH_SIMILARITY
    if stem(a) == stem(b):
        return STEM_MATCH_SIMILARITY
    similarity = levenshtein_similarity(a, b)
    if similarity >= MIN_CHAR_SIMILARITY:
        return similarity
    return None


def align_words(source: Sequence[TokenLike], target: Sequence[TokenLike]) -> WordAlignment:
    """Greedy best-first one-to-one alignment by lexical similarity.

    Candidates are taken by descending similarity, then by smallest
    relative-position gap |i/len(source) - j/len(target)|, then by i, then j.
    """
    source_words = [_text(token) for token in source]
    target_words = [_text(token) for token in target]
    source_len = len(source_words)
    target_len = len(target_words)

    candidates = []
    for i, source_word in enumerate(source_words):
        for j, target_word in enumerate(target_words):
            similarity = word_similarity(source_word, target_word)
            if similarity is None:
                continue
            gap = abs(i / source_len - j / target_len)
            candidates.append((-similarity, gap, i, j))
    candidates.sort()

    used_sources = set()
    used_targets = set()
    pairs = set()
    for _, _, i, j in candidates:
        if i in used_sources or j in used_targets:
            continue
        pairs.add((i, j))
        used_sources.add(i)
        used_targets.add(j)

    return WordAlignment(pairs=frozenset(pairs), source_len=source_len, target_len=target_len)


def _crosses(pair: Tuple[int, int], other: Tuple[int, int]) -> bool:
    (i, j), (k, m) = pair, other
    return (i < k and j > m) or (i > k and j < m)


def label_transformations(
    source: Sequence[TokenLike],
    target: Sequence[TokenLike],
    alignment: WordAlignment,
) -> TransformationLabels:
    """Label every source token from an alignment.

    Raises:
        InvalidArgumentError: If the alignment does not fit the two sentences
    """
    if alignment.source_len != len(source) or alignment.target_len != len(target):
        raise InvalidArgumentError(
            f"Alignment lengths {alignment.source_len}/{alignment.target_len} do not match "
            f"sentences of length {len(source)}/{len(target)}"
        )
    alignment.validate()

    pairs = sorted(alignment.pairs)
    mapping = alignment.source_to_target()
    labels = []
    for i, token in enumerate(source):
        j = mapping.get(i)
        if j is None:
            labels.append(Transformation.DELETE)
        elif _text(token).lower() != _text(target[j]).lower():
            labels.append(Transformation.REPLACE)
        elif any(_crosses((i, j), other) for other in pairs):
            labels.append(Transformation.MOVE)
        else:
            labels.append(Transformation.COPY)
    return TransformationLabels(labels=tuple(labels))


def annotate_pair(
    source_text: str,
    target_text: str,
    tokenizer: str = DEFAULT_TOKENIZER,
) -> Tuple[List[str], List[str], WordAlignment, TransformationLabels]:
    """Tokenize, align and label one sentence pair."""
    source_tokens = token_strings(source_text, tokenizer, lowercase=False)
    target_tokens = token_strings(target_text, tokenizer, lowercase=False)
    alignment = align_words(source_tokens, target_tokens)
    labels = label_transformations(source_tokens, target_tokens, alignment)
    return source_tokens, target_tokens, alignment, labels


def labeling_f1(
    gold: TransformationLabels,
    predicted: TransformationLabels,
) -> Dict[Transformation, float]:
    """Per-transformation F1 over source-token positions.

    A transformation absent from both labelings scores 1.0.
    """
    if len(gold) != len(predicted):
        raise InvalidArgumentError("Labelings must cover the same source tokens")
    scores = {}
    for transformation in Transformation:
        true_pos = false_pos = false_neg = 0
        for gold_label, predicted_label in zip(gold.labels, predicted.labels):
            is_gold = gold_label == transformation
            is_predicted = predicted_label == transformation
            if is_gold and is_predicted:
                true_pos += 1
            elif is_predicted:
                false_pos += 1
            elif is_gold:
                false_neg += 1
        denominator = 2 * true_pos + false_pos + false_neg
        scores[transformation] = 1.0 if denominator == 0 else 2 * true_pos / denominator
    return scores


def transformation_f1(
    originals: Sequence[str],
    outputs: Sequence[str],
    references: Sequence[Sequence[str]],
    tokenizer: str = DEFAULT_TOKENIZER,
) -> TransformationScores:
    """Score a system's transformations against reference transformations.

    Per instance and transformation the best F1 over references is kept;
    the corpus score is the mean over instances.

    Raises:
        InvalidArgumentError: On empty or misaligned input
    """
    size = check_parallel(originals, outputs, references)

    sentence_scores: List[Dict[str, float]] = []
    for index in range(size):
        _, _, _, predicted = annotate_pair(originals[index], outputs[index], tokenizer)
        best = {transformation: 0.0 for transformation in Transformation}
        for reference_set in references:
            _, _, _, gold = annotate_pair(originals[index], reference_set[index], tokenizer)
            for transformation, score in labeling_f1(gold, predicted).items():
                best[transformation] = max(best[transformation], score)
        sentence_scores.append({t.value: score for t, score in best.items()})

    def mean(name: str) -> float:
        return sum(scores[name] for scores in sentence_scores) / size

    return TransformationScores(
        delete=mean(Transformation.DELETE.value),
        move=mean(Transformation.MOVE.value),
        replace=mean(Transformation.REPLACE.value),
        copy=mean(Transformation.COPY.value),
        sentence_scores=sentence_scores,
    )
