"""Tests for quality estimation features."""

import math
import random

import pytest

from services.errors import DatasetNotFoundError, InvalidArgumentError
from services.quality_estimation import (
    NUMERIC_FEATURES,
    FrequencyTable,
    aggregate_features,
    compute_corpus_features,
    compute_features,
    lexical_complexity,
    load_frequency_table,
    nearest_rank_quantile,
)


RANKED_WORDS = ["alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "india", "juliet"]


def random_text(rng: random.Random) -> str:
    words = [rng.choice(RANKED_WORDS) for _ in range(rng.randint(1, 8))]
    return " ".join(words) + rng.choice(["", ".", " !"])


@pytest.fixture
def table():
    return FrequencyTable(["the", "cat", "perambulate"])


class TestFeatures:
    """Test suite for compute_features."""

    def test_identity(self):
        """An untouched sentence has unit ratios and no edits."""
        features = compute_features("The cat sat on the mat.", "The cat sat on the mat.")
        assert (
            features.compression_ratio,
            features.levenshtein_similarity,
            features.sentence_splits,
            features.exact_match,
            features.added_proportion,
            features.deleted_proportion,
        ) == (1.0, 1.0, 1.0, True, 0.0, 0.0)
        assert features.lexical_complexity is None

    def test_whitespace_is_normalized(self):
        """Whitespace differences do not break an exact match."""
        assert compute_features("a  b", " a b ").exact_match

    def test_split(self):
        """Two output sentences from one source give a split ratio of 2."""
        features = compute_features("John was tired and went home.", "John was tired. He went home.")
        assert features.sentence_splits == 2.0
        assert not features.exact_match

    def test_compression(self):
        """Compression is the character length ratio."""
        features = compute_features("abcdefgh", "abcd")
        assert features.compression_ratio == 0.5

    def test_added_and_deleted(self):
        """Proportions count word types against token counts."""
        features = compute_features("a b c d", "a b e")
        assert features.added_proportion == pytest.approx(1 / 3)
        assert features.deleted_proportion == pytest.approx(2 / 4)

    def test_empty_output(self):
        """An empty output compresses to zero and deletes everything."""
        features = compute_features("a b", "")
        assert features.compression_ratio == 0.0
        assert features.sentence_splits == 0.0
        assert features.added_proportion == 0.0
        assert features.deleted_proportion == 1.0

    def test_similarity_to_empty_output_is_zero(self):
        """Any non-empty source is fully dissimilar to an empty output."""
        rng = random.Random(37)
        for _ in range(100):
            assert compute_features(random_text(rng), "").levenshtein_similarity == 0.0

    def test_duplicated_output_compresses_less(self):
        """Repeating the output raises its compression ratio."""
        rng = random.Random(43)
        for _ in range(100):
            source, output = random_text(rng), random_text(rng)
            single = compute_features(source, output).compression_ratio
            doubled = compute_features(source, f"{output} {output}").compression_ratio
            assert doubled > single

    def test_empty_source(self):
        """Sources must be non-empty."""
        with pytest.raises(InvalidArgumentError):
            compute_features("  ", "a")


class TestLexicalComplexity:
    """Test suite for frequency-table features."""

    def test_hand_computed(self, table):
        """Ranks 1 and 2 give a third quartile of ln 2."""
        assert lexical_complexity("the cat", table) == pytest.approx(math.log(2), abs=1e-9)

    def test_unknown_words_take_table_size(self, table):
        """Out-of-vocabulary words rank last."""
        assert table.rank("zebra") == 3
        assert lexical_complexity("zebra", table) == pytest.approx(math.log(3))

    def test_rarer_replacement_never_lowers_complexity(self):
        """Swapping a word for one of equal or higher rank cannot lower complexity."""
        ranked = FrequencyTable(RANKED_WORDS)
        rng = random.Random(47)
        for _ in range(200):
            words = [rng.choice(RANKED_WORDS) for _ in range(rng.randint(1, 10))]
            position = rng.randrange(len(words))
            rank = ranked.rank(words[position])
            replaced = list(words)
            replaced[position] = RANKED_WORDS[rng.randint(rank, len(RANKED_WORDS)) - 1]
            before = lexical_complexity(" ".join(words), ranked)
            after = lexical_complexity(" ".join(replaced), ranked)
            assert after >= before

    def test_no_alphabetic_tokens(self, table):
        """Numbers and punctuation have no complexity."""
        assert lexical_complexity("1999 .", table) is None

    def test_duplicates_keep_first_rank(self):
        """A repeated word keeps its first rank."""
        table = FrequencyTable(["the", "cat", "the", "dog"])
        assert table.rank("dog") == 3
        assert table.size == 3

    def test_empty_table(self):
        """A table needs entries."""
        with pytest.raises(InvalidArgumentError):
            FrequencyTable([])

    def test_load(self, temp_data_dir, line_writer):
        """Tables load from word or word<TAB>count lines."""
        from pathlib import Path

        path = line_writer(Path(temp_data_dir) / "freq.tsv", ["the\t100", "", "Cat\t50", "perambulate"])
        table = load_frequency_table(path)
        assert table.rank("cat") == 2
        assert "perambulate" in table

    def test_load_missing(self, temp_data_dir):
        """A missing table is not found."""
        with pytest.raises(DatasetNotFoundError):
            load_frequency_table(f"{temp_data_dir}/missing.tsv")

    def test_quantile(self):
        """Nearest-rank quantiles never interpolate."""
        assert nearest_rank_quantile([4, 1, 3, 2], 0.75) == 3
        assert nearest_rank_quantile([5], 0.75) == 5


class TestAggregates:
    """Test suite for corpus aggregates."""

    def test_means_match_direct_recomputation(self, six_instance_corpus, table):
        """Aggregates equal plain means of the per-instance values."""
        corpus = six_instance_corpus
        per_instance, aggregate = compute_corpus_features(corpus.originals, corpus.outputs, table)
        assert aggregate.count == 6
        for name in NUMERIC_FEATURES:
            expected = sum(getattr(f, name) for f in per_instance) / 6
            assert getattr(aggregate, name) == pytest.approx(expected)
        assert aggregate.exact_match == pytest.approx(2 / 6)
        complexities = [f.lexical_complexity for f in per_instance if f.lexical_complexity is not None]
        assert aggregate.lexical_complexity == pytest.approx(sum(complexities) / len(complexities))

    def test_without_table(self, six_instance_corpus):
        """No table means no lexical complexity."""
        corpus = six_instance_corpus
        _, aggregate = compute_corpus_features(corpus.originals, corpus.outputs)
        assert aggregate.lexical_complexity is None

    def test_empty(self):
        """No features, no aggregate."""
        with pytest.raises(InvalidArgumentError):
            aggregate_features([])

    def test_mismatch(self):
        """Sources and outputs must align."""
        with pytest.raises(InvalidArgumentError):
            compute_corpus_features(["a", "b"], ["a"])
