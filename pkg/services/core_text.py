"""Deterministic text primitives shared by every metric.

Tokenization, n-gram extraction, edit distance, syllable counting and
sentence segmentation. All functions are pure and safe to call from
multiple threads.

Tokenization schemes:
- standard: every run of word characters is a token, every other
  non-space character is a token on its own, any whitespace run
  (newlines included) separates tokens
- whitespace: split on whitespace only
"""

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Sequence, Tuple, Union

import Levenshtein

from services.errors import InvalidArgumentError


class TokenizationScheme(str, Enum):
    """Supported tokenization schemes."""
    STANDARD = "standard"
    WHITESPACE = "whitespace"


_STANDARD_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")
_SENTENCE_BOUNDARY_RE = re.compile(r"(?<=[.!?])\s+")


@dataclass(frozen=True)
class Token:
    """A single token with its case-folded form."""
    surface: str
    lowercased: str = field(init=False)

    def __post_init__(self):
        if not self.surface:
            raise InvalidArgumentError("Token surface must be non-empty")
        object.__setattr__(self, "lowercased", self.surface.lower())


@dataclass(frozen=True)
class NGramMultiset:
    """Counts of contiguous n-token sequences of a single order."""
    order: int
    counts: Dict[Tuple[str, ...], int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, ngram: Tuple[str, ...]) -> int:
        return self.counts.get(ngram, 0)

    def __len__(self) -> int:
        return len(self.counts)


TokenLike = Union[Token, str]


def tokenize(text: str, scheme: Union[TokenizationScheme, str] = TokenizationScheme.STANDARD) -> List[Token]:
    """Split text into tokens.

    Args:
        text: Input text, may be empty
        scheme: "standard" (punctuation split) or "whitespace"

    Returns:
        List of Token, empty for empty or all-whitespace input
    """
    scheme = TokenizationScheme(scheme)
    if scheme == TokenizationScheme.WHITESPACE:
        pieces = text.split()
    else:
        pieces = _STANDARD_TOKEN_RE.findall(text)
    return [Token(piece) for piece in pieces]


def token_strings(
    text: str,
    scheme: Union[TokenizationScheme, str] = TokenizationScheme.STANDARD,
    lowercase: bool = True,
) -> List[str]:
    """Tokenize and return plain strings, lowercased when requested."""
    tokens = tokenize(text, scheme)
    if lowercase:
        return [token.lowercased for token in tokens]
    return [token.surface for token in tokens]


def _as_string(token: TokenLike) -> str:
    return token.surface if isinstance(token, Token) else token


def extract_ngrams(tokens: Sequence[TokenLike], order: int) -> NGramMultiset:
    """Count contiguous n-grams of the given order.

    Raises:
        InvalidArgumentError: If order < 1
    """
    if order < 1:
        raise InvalidArgumentError(f"n-gram order must be >= 1, got {order}")
    words = [_as_string(token) for token in tokens]
    counts = Counter(
        tuple(words[i:i + order]) for i in range(len(words) - order + 1)
    )
    return NGramMultiset(order=order, counts=dict(counts))


def levenshtein_distance(a: str, b: str) -> int:
    """Minimum number of single-character edits turning a into b."""
    return Levenshtein.distance(a, b)


def levenshtein_similarity(a: str, b: str) -> float:
    """1 - distance / max(len), with two empty strings fully similar."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein_distance(a, b) / longest


def count_syllables(word: str) -> int:
    """Heuristic syllable count used by FKGL.

    Counts maximal vowel groups (a, e, i, o, u, y), drops a silent final
    'e' (not 'le') when more than one group exists, floors at 1.

    Raises:
        InvalidArgumentError: If word is empty
    """
    if not word:
        raise InvalidArgumentError("Cannot count syllables of an empty word")
    lowered = word.lower()
    groups = len(_VOWEL_GROUP_RE.findall(lowered))
    if lowered.endswith("e") and not lowered.endswith("le") and groups > 1:
        groups -= 1
    return max(groups, 1)


def split_sentences(text: str) -> List[str]:
    """Split after '.', '!' or '?' followed by whitespace.

    No abbreviation handling: "v. 2.0 done." yields ["v.", "2.0 done."].
    """
    segments = (segment.strip() for segment in _SENTENCE_BOUNDARY_RE.split(text))
    return [segment for segment in segments if segment]


def normalize_whitespace(text: str) -> str:
    """Collapse whitespace runs to single spaces and strip the ends."""
    return " ".join(text.split())


def is_word_token(token: TokenLike) -> bool:
    """A word token contains at least one letter or digit."""
    return any(ch.isalnum() for ch in _as_string(token))
