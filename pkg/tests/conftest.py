"""Pytest configuration and fixtures."""

import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Dict, Generator

import pytest

# Add project root to Python path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)


@pytest.fixture
def temp_data_dir() -> Generator[str, None, None]:
    """Create a temporary data directory for tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield tmpdir


@pytest.fixture
def isolated_env(monkeypatch, temp_data_dir):
    """Point cache and registry at the temporary directory."""
    monkeypatch.setenv("SIMPEVAL_CACHE_DIR", os.path.join(temp_data_dir, "datasets"))
    monkeypatch.setenv("SIMPEVAL_REGISTRY", os.path.join(temp_data_dir, "registry.json"))
    monkeypatch.delenv("SIMPEVAL_LOG_LEVEL", raising=False)
    return monkeypatch


@pytest.fixture
def six_instance_corpus():
    """Six instances covering copies, splits, rewrites, deletions and replacements."""
    from services.corpus import EvalCorpus

    originals = [
        "The cat sat on the mat .",
        "The committee postponed the decision because of the storm .",
        "John , who was tired , went home early .",
        "He purchased a large quantity of apples .",
        "The old bridge was demolished in 1999 after years of neglect .",
        "She plays the violin beautifully .",
    ]
    outputs = [
        "The cat sat on the mat .",
        "The committee delayed the decision . There was a storm .",
        "John went home early .",
        "He bought a lot of apples .",
        "The bridge was destroyed in 1999 .",
        "She plays the violin beautifully .",
    ]
    references = [
        [
            "The cat sat on the mat .",
            "The committee delayed the decision . This was because of the storm .",
            "John was tired . He went home early .",
            "He bought many apples .",
            "The old bridge was knocked down in 1999 .",
            "She plays the violin well .",
        ],
        [
            "The cat sat on the mat .",
            "The storm made the committee delay the decision .",
            "John went home early because he was tired .",
            "He bought a lot of apples .",
            "The bridge was demolished in 1999 .",
            "She plays the violin beautifully .",
        ],
    ]
    return EvalCorpus(originals=originals, outputs=outputs, references=references)


def write_lines(path: Path, lines) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
    return path


@pytest.fixture
def corpus_files(temp_data_dir, six_instance_corpus) -> Dict[str, object]:
    """The six-instance corpus written as orig/ref/sys files."""
    root = Path(temp_data_dir) / "custom"
    return {
        "orig": write_lines(root / "orig.txt", six_instance_corpus.originals),
        "refs": [
            write_lines(root / f"ref.{i}.txt", references)
            for i, references in enumerate(six_instance_corpus.references)
        ],
        "sys": write_lines(root / "sys.txt", six_instance_corpus.outputs),
    }


@pytest.fixture
def registered_dataset(isolated_env, temp_data_dir, six_instance_corpus):
    """A custom two-reference dataset in the user registry, files in the cache layout."""
    cache = Path(temp_data_dir) / "datasets" / "tiny"
    write_lines(cache / "orig.txt", six_instance_corpus.originals)
    for i, references in enumerate(six_instance_corpus.references):
        write_lines(cache / f"ref.{i}.txt", references)
    registry = {
        "datasets": {
            "tiny": {"instance_count": 6, "reference_count": 2, "description": "test fixture"}
        }
    }
    Path(temp_data_dir, "registry.json").write_text(json.dumps(registry), encoding="utf-8")
    return cache


@pytest.fixture
def line_writer():
    """Helper that writes one entry per line."""
    return write_lines
