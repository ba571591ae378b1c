"""Tests for word alignment and transformation labeling."""

import random

import pytest

from services.annotation import (
    Transformation,
    TransformationLabels,
    WordAlignment,
    align_words,
    annotate_pair,
    label_transformations,
    labeling_f1,
    stem,
    transformation_f1,
    word_similarity,
)
from services.errors import InvalidArgumentError

COPY = Transformation.COPY
DELETE = Transformation.DELETE
MOVE = Transformation.MOVE
REPLACE = Transformation.REPLACE

VOCAB = ["the", "cat", "cats", "sat", "sit", "mat", "on", "a", "dog", "dogs", "ran", "running"]


def random_sentence(rng: random.Random) -> str:
    return " ".join(rng.choice(VOCAB) for _ in range(rng.randint(1, 8)))


def labels_for(source: str, target: str):
    _, _, _, labels = annotate_pair(source, target)
    return list(labels.labels)


class TestSimilarity:
    """Test suite for lexical similarity."""

    def test_stem(self):
        """One suffix is stripped when the stem keeps three characters."""
        assert stem("cats") == "cat"
        assert stem("running") == "runn"
        assert stem("is") == "is"

    def test_exact_and_stem_matches(self):
        """Exact matches beat stem matches."""
        assert word_similarity("Cat", "cat") == 1.0
        assert word_similarity("cats", "cat") == 0.9

    def test_below_threshold(self):
        """Dissimilar words are not candidates."""
        assert word_similarity("running", "run") is None
        assert word_similarity("big", "dog") is None


class TestAlignment:
    """Test suite for align_words."""

    def test_identity(self):
        """Identical sentences align position by position."""
        tokens = ["the", "cat", "sat"]
        alignment = align_words(tokens, tokens)
        assert alignment.pairs == frozenset({(0, 0), (1, 1), (2, 2)})

    def test_repeated_words_prefer_close_positions(self):
        """Among equal candidates the smallest relative gap wins."""
        alignment = align_words(["the", "cat", "saw", "the", "dog"], ["the", "dog", "saw", "the", "cat"])
        assert (0, 0) in alignment.pairs
        assert (3, 3) in alignment.pairs

    def test_one_to_one(self):
        """No token is aligned twice."""
        alignment = align_words(["a", "a", "a"], ["a"])
        assert len(alignment.pairs) == 1
        alignment.validate()

    def test_random_alignments_are_one_to_one(self):
        """Alignments of random sentences are valid and one-to-one."""
        rng = random.Random(23)
        for _ in range(200):
            source = [rng.choice(VOCAB) for _ in range(rng.randint(0, 9))]
            target = [rng.choice(VOCAB) for _ in range(rng.randint(0, 9))]
            alignment = align_words(source, target)
            alignment.validate()
            assert len(alignment.source_to_target()) == len(alignment.pairs)
            assert len(alignment.target_to_source()) == len(alignment.pairs)
            assert len(alignment.pairs) <= min(len(source), len(target))

    def test_validate_rejects_out_of_range(self):
        """Pairs must index into both sentences."""
        with pytest.raises(InvalidArgumentError):
            WordAlignment(pairs=frozenset({(0, 3)}), source_len=1, target_len=1).validate()

    def test_validate_rejects_many_to_one(self):
        """Pairs must be one-to-one."""
        with pytest.raises(InvalidArgumentError):
            WordAlignment(pairs=frozenset({(0, 0), (1, 0)}), source_len=2, target_len=1).validate()


class TestLabeling:
    """Test suite for label_transformations."""

    def test_identity_is_all_copy(self):
        """Untouched sentences are all COPY."""
        assert labels_for("The cat sat on the mat .", "The cat sat on the mat .") == [COPY] * 7

    def test_unaligned_is_delete(self):
        """Dropped words are DELETE."""
        assert labels_for("the big dog barked", "the dog barked") == [COPY, DELETE, COPY, COPY]

    def test_crossing_is_move(self):
        """Swapped words are MOVE, the rest COPY."""
        assert labels_for("I really like it", "really I like it") == [MOVE, MOVE, COPY, COPY]

    def test_changed_form_is_replace(self):
        """Aligned words with a different form are REPLACE."""
        assert labels_for("cats sleep", "cat sleep") == [REPLACE, COPY]

    def test_replace_beats_move(self):
        """A crossing pair with a different form stays REPLACE."""
        assert labels_for("cats really sleep", "really cat sleep") == [REPLACE, MOVE, COPY]

    def test_mismatched_alignment(self):
        """The alignment must fit both sentences."""
        alignment = WordAlignment(pairs=frozenset(), source_len=2, target_len=2)
        with pytest.raises(InvalidArgumentError):
            label_transformations(["a"], ["a"], alignment)

    def test_case_insensitive_copy(self):
        """Case changes are not replacements."""
        assert labels_for("The cat", "the cat") == [COPY, COPY]


class TestTransformationF1:
    """Test suite for labeling_f1 and transformation_f1."""

    def test_labeling_f1_perfect(self):
        """Identical labelings score 1 for every transformation."""
        labels = TransformationLabels(labels=(COPY, DELETE, MOVE))
        assert all(score == 1.0 for score in labeling_f1(labels, labels).values())

    def test_labeling_f1_partial(self):
        """F1 is computed per transformation over positions."""
        gold = TransformationLabels(labels=(DELETE, DELETE, COPY))
        predicted = TransformationLabels(labels=(DELETE, COPY, COPY))
        scores = labeling_f1(gold, predicted)
        assert scores[DELETE] == pytest.approx(2 / 3)
        assert scores[COPY] == pytest.approx(2 / 3)
        assert scores[MOVE] == 1.0

    def test_labeling_length_mismatch(self):
        """Labelings must cover the same tokens."""
        with pytest.raises(InvalidArgumentError):
            labeling_f1(TransformationLabels(labels=(COPY,)), TransformationLabels(labels=()))

    def test_output_equal_to_reference(self, six_instance_corpus):
        """An output identical to a reference scores 1 everywhere."""
        corpus = six_instance_corpus
        scores = transformation_f1(corpus.originals, corpus.references[0], corpus.references)
        assert scores.as_dict() == {"delete": 1.0, "move": 1.0, "replace": 1.0, "copy": 1.0}
        assert len(scores.sentence_scores) == len(corpus)

    def test_scores_in_range(self, six_instance_corpus):
        """Corpus F1s are means of per-sentence values in [0, 1]."""
        corpus = six_instance_corpus
        scores = transformation_f1(corpus.originals, corpus.outputs, corpus.references)
        for value in scores.as_dict().values():
            assert 0.0 <= value <= 1.0

    def test_reference_order_does_not_matter(self):
        """Permuting reference sets leaves every score unchanged."""
        rng = random.Random(31)
        for _ in range(30):
            size = rng.randint(1, 4)
            originals = [random_sentence(rng) for _ in range(size)]
            outputs = [random_sentence(rng) for _ in range(size)]
            references = [[random_sentence(rng) for _ in range(size)] for _ in range(3)]
            shuffled = list(references)
            rng.shuffle(shuffled)
            expected = transformation_f1(originals, outputs, references)
            assert transformation_f1(originals, outputs, shuffled) == expected

    def test_copy_field_serializes_by_name(self):
        """The copy score dumps under its plain name."""
        from services.annotation import TransformationScores

        scores = TransformationScores(delete=1.0, move=1.0, replace=1.0, copy=0.5)
        assert scores.model_dump(by_alias=True)["copy"] == 0.5
