"""Flesch-Kincaid grade level.

0.39 * words/sentences + 11.8 * syllables/words - 15.59, with words taken
from the standard tokenizer (tokens holding a letter or digit), so
newlines and punctuation never count as words.
"""

from typing import Sequence, Union

from config import FKGL_OFFSET, FKGL_SENTENCE_WEIGHT, FKGL_SYLLABLE_WEIGHT
from services.core_text import (
    TokenizationScheme,
    count_syllables,
    is_word_token,
    split_sentences,
    tokenize,
)
from services.errors import InvalidArgumentError


def fkgl(text: Union[str, Sequence[str]]) -> float:
    """Compute FKGL over a text or a list of sentences.

    Each list item is segmented on its own, so a list counts at least one
    sentence per non-empty item.

    Raises:
        InvalidArgumentError: If the input holds no words
    """
    items = [text] if isinstance(text, str) else list(text)

    sentences = 0
    words = 0
    syllables = 0
    for item in items:
        item_words = [
            token.surface
            for token in tokenize(item, TokenizationScheme.STANDARD)
            if is_word_token(token)
        ]
        if not item_words:
            continue
        sentences += max(len(split_sentences(item)), 1)
        words += len(item_words)
        syllables += sum(count_syllables(word) for word in item_words)

    if words == 0:
        raise InvalidArgumentError("FKGL needs at least one word")

    return (
        FKGL_SENTENCE_WEIGHT * (words / sentences)
        + FKGL_SYLLABLE_WEIGHT * (syllables / words)
        - FKGL_OFFSET
    )
