"""Configuration constants and dataset definitions for SimpEval."""

from dataclasses import dataclass, field
from typing import Dict


@dataclass
class DatasetConfig:
    """Shape of a public simplification test set."""
    name: str
    instance_count: int
    reference_count: int
    alignment_type: str  # "one-to-one" or "mixed"
    description: str
    alignment_breakdown: Dict[str, int] = field(default_factory=dict)


# Built-in test sets. Data is never bundled: files and URLs come from the
# user registry (see SIMPEVAL_REGISTRY) or are placed in the cache directory.
DATASETS = {
    "pwkp": DatasetConfig(
        name="pwkp",
        instance_count=100,
        reference_count=1,
        alignment_type="mixed",
        description="PWKP test split, single reference, includes sentence splits",
        alignment_breakdown={"1-to-1": 93, "1-to-N": 7},
    ),
    "turkcorpus-test": DatasetConfig(
        name="turkcorpus-test",
        instance_count=359,
        reference_count=8,
        alignment_type="one-to-one",
        description="TurkCorpus test split, 8 crowdsourced references",
        alignment_breakdown={"1-to-1": 359},
    ),
    "turkcorpus-valid": DatasetConfig(
        name="turkcorpus-valid",
        instance_count=2000,
        reference_count=8,
        alignment_type="one-to-one",
        description="TurkCorpus tuning split, 8 crowdsourced references",
        alignment_breakdown={"1-to-1": 2000},
    ),
    "hsplit": DatasetConfig(
        name="hsplit",
        instance_count=359,
        reference_count=4,
        alignment_type="mixed",
        description="HSplit, 4 sentence-splitting references over the TurkCorpus test sources",
        alignment_breakdown={"1-to-N": 359},
    ),
    "hsplit-70": DatasetConfig(
        name="hsplit-70",
        instance_count=70,
        reference_count=4,
        alignment_type="mixed",
        description="Early HSplit release covering the first 70 TurkCorpus test sources",
        alignment_breakdown={"1-to-N": 70},
    ),
}

# Corpus file layout inside a dataset directory
ORIGINAL_FILENAME = "orig.txt"
REFERENCE_FILENAME = "ref.{index}.txt"
SYSTEM_FILENAME = "sys.txt"

# Environment variables
ENV_CACHE_DIR = "SIMPEVAL_CACHE_DIR"
ENV_REGISTRY = "SIMPEVAL_REGISTRY"
ENV_LOG_LEVEL = "SIMPEVAL_LOG_LEVEL"

# Logging
DEFAULT_LOG_LEVEL = "WARNING"
LOG_FORMAT = "[%(name)s] %(levelname)s: %(message)s"

# Storage paths
DEFAULT_CACHE_DIR = "data/datasets"
DEFAULT_REGISTRY_PATH = "data/registry.json"

# Metrics
AVAILABLE_METRICS = ("sari", "bleu", "fkgl")
DEFAULT_METRICS = ("sari", "bleu", "fkgl")
DEFAULT_MAX_ORDER = 4
DEFAULT_TOKENIZER = "standard"
DEFAULT_LOWERCASE = True
BLEU_EPSILON = 0.1  # replaces zero match counts under epsilon smoothing

# Flesch-Kincaid grade level
FKGL_SENTENCE_WEIGHT = 0.39
FKGL_SYLLABLE_WEIGHT = 11.8
FKGL_OFFSET = 15.59

# Word alignment
STEM_SUFFIXES = ("ing", "es", "ed", "ly", "s")  # tried longest first
MIN_STEM_LENGTH = 3
EXACT_MATCH_SIMILARITY = 1.0
STEM_MATCH_SIMILARITY = 0.9
MIN_CHAR_SIMILARITY = 0.5

# Report
HISTOGRAM_BINS = 20
SAMPLES_PER_CATEGORY = 10
MIN_INSTANCES_FOR_BUCKETS = 4
DEFAULT_SEED = 42
DEFAULT_REPORT_PATH = "report.html"

# Fetching
FETCH_TIMEOUT_SECONDS = 30
FETCH_LOCK_TIMEOUT_SECONDS = 120
FETCH_LOCK_POLL_SECONDS = 0.2
