"""Dataset registry resolution.

Descriptors are resolved with priority: built-in shapes < user registry.
Built-in test sets come from `config.DATASETS`; the user registry (a JSON
file, SIMPEVAL_REGISTRY) adds file locations, download URLs, digests and
custom datasets. File paths default to the cache directory layout:

    <cache>/<name>/orig.txt
    <cache>/<name>/ref.0.txt ... ref.{R-1}.txt

Registry file format:

    {
      "datasets": {
        "turkcorpus-test": {
          "original_url": "https://...",
          "reference_urls": ["https://...", "..."],
          "original_sha256": "...",
          "reference_sha256": ["...", "..."]
        },
        "my-set": {
          "instance_count": 120,
          "reference_count": 2,
          "original_file": "corpora/my-set.orig",
          "reference_files": ["corpora/my-set.ref0", "corpora/my-set.ref1"]
        }
      }
    }
"""

import json
import logging
import os
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError, model_validator

from config import (
    DATASETS,
    DEFAULT_CACHE_DIR,
    DEFAULT_REGISTRY_PATH,
    ENV_CACHE_DIR,
    ENV_REGISTRY,
    ORIGINAL_FILENAME,
    REFERENCE_FILENAME,
    DatasetConfig,
)
from services.errors import CorruptDatasetError, DatasetNotFoundError, InvalidArgumentError

logger = logging.getLogger(__name__)


class DatasetFile(BaseModel):
    """One corpus file with its optional download location and digest."""
    path: Path
    url: Optional[str] = None
    sha256: Optional[str] = None


class DatasetDescriptor(BaseModel):
    """Everything needed to locate, fetch and validate a test set."""
    name: str
    instance_count: int
    reference_count: int
    alignment_type: str = "one-to-one"
    description: str = ""
    alignment_breakdown: Dict[str, int] = Field(default_factory=dict)
    original: DatasetFile
    references: List[DatasetFile]

    @model_validator(mode="after")
    def _check_counts(self) -> "DatasetDescriptor":
        if self.instance_count < 1:
            raise ValueError("instance_count must be >= 1")
        if self.reference_count < 1:
            raise ValueError("reference_count must be >= 1")
        if len(self.references) != self.reference_count:
            raise ValueError(
                f"{len(self.references)} reference files given for reference_count={self.reference_count}"
            )
        return self

    def files(self) -> List[DatasetFile]:
        return [self.original, *self.references]

    @property
    def has_urls(self) -> bool:
        return all(f.url for f in self.files())

    def summary(self) -> str:
        """One line in the shape of the test-set table."""
        refs = "ref" if self.reference_count == 1 else "refs"
        line = f"{self.name} {self.instance_count} instances {self.reference_count} {refs} {self.alignment_type}"
        if self.alignment_breakdown:
            parts = ", ".join(f"{count} {kind}" for kind, count in self.alignment_breakdown.items())
            line += f" ({parts})"
        return line


class RegistryEntry(BaseModel):
    """User overrides for one dataset. None values never override."""
    instance_count: Optional[int] = None
    reference_count: Optional[int] = None
    alignment_type: Optional[str] = None
    description: Optional[str] = None
    original_file: Optional[str] = None
    reference_files: Optional[List[str]] = None
    original_url: Optional[str] = None
    reference_urls: Optional[List[str]] = None
    original_sha256: Optional[str] = None
    reference_sha256: Optional[List[Optional[str]]] = None


def get_cache_dir() -> Path:
    """Cache directory, overridable through SIMPEVAL_CACHE_DIR."""
    return Path(os.environ.get(ENV_CACHE_DIR) or DEFAULT_CACHE_DIR)


def get_registry_path() -> Path:
    return Path(os.environ.get(ENV_REGISTRY) or DEFAULT_REGISTRY_PATH)


def load_registry_entries(path: Path) -> Dict[str, RegistryEntry]:
    """Load user registry entries; a missing file means no entries.

    Raises:
        CorruptDatasetError: If the file exists but is not a valid registry
    """
    if not path.exists():
        return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        raw = data.get("datasets", {})
        return {name: RegistryEntry.model_validate(entry) for name, entry in raw.items()}
    except (json.JSONDecodeError, AttributeError, ValidationError) as e:
        raise CorruptDatasetError(f"Invalid registry file {path}: {e}", path=str(path)) from e


class DatasetRegistry:
    """Resolves dataset names to descriptors."""

    def __init__(
        self,
        cache_dir: Optional[Path] = None,
        registry_path: Optional[Path] = None,
        entries: Optional[Dict[str, RegistryEntry]] = None,
    ):
        self.cache_dir = Path(cache_dir) if cache_dir else get_cache_dir()
        self.registry_path = Path(registry_path) if registry_path else get_registry_path()
        self._entries = entries if entries is not None else load_registry_entries(self.registry_path)

    def names(self) -> List[str]:
        """Built-in names first, then custom registry names, each sorted."""
        custom = sorted(name for name in self._entries if name not in DATASETS)
        return sorted(DATASETS) + custom

    def resolve(self, name: str) -> DatasetDescriptor:
        """Build the descriptor for a dataset name.

        Raises:
            DatasetNotFoundError: If the name is neither built-in nor registered
            InvalidArgumentError: If a custom entry lacks required fields
        """
        builtin = DATASETS.get(name)
        entry = self._entries.get(name)
        if builtin is None and entry is None:
            raise DatasetNotFoundError(
                f"Unknown dataset '{name}' (known: {', '.join(self.names())})"
            )
        return self._build(name, builtin, entry or RegistryEntry())

    def descriptors(self) -> List[DatasetDescriptor]:
        return [self.resolve(name) for name in self.names()]

    def _build(
        self,
        name: str,
        builtin: Optional[DatasetConfig],
        entry: RegistryEntry,
    ) -> DatasetDescriptor:
        # Start with built-in shape, override with non-None registry values
        resolved = {}
        if builtin is not None:
            resolved.update(
                instance_count=builtin.instance_count,
                reference_count=builtin.reference_count,
                alignment_type=builtin.alignment_type,
                description=builtin.description,
                alignment_breakdown=dict(builtin.alignment_breakdown),
            )
        resolved.update({k: v for k, v in entry.model_dump().items() if v is not None})

        reference_count = resolved.get("reference_count")
        if reference_count is None:
            listed = entry.reference_files or entry.reference_urls
            reference_count = len(listed) if listed else None
        if resolved.get("instance_count") is None or reference_count is None:
            raise InvalidArgumentError(
                f"Registry entry '{name}' needs instance_count and reference_count"
            )

        dataset_dir = self.cache_dir / name
        original_path = Path(entry.original_file) if entry.original_file else dataset_dir / ORIGINAL_FILENAME
        reference_paths = (
            [Path(p) for p in entry.reference_files]
            if entry.reference_files
            else [dataset_dir / REFERENCE_FILENAME.format(index=i) for i in range(reference_count)]
        )
        reference_urls = entry.reference_urls or [None] * len(reference_paths)
        reference_digests = entry.reference_sha256 or [None] * len(reference_paths)
        if len(reference_urls) != len(reference_paths) or len(reference_digests) != len(reference_paths):
            raise InvalidArgumentError(
                f"Registry entry '{name}' lists {len(reference_paths)} reference files, "
                f"{len(reference_urls)} URLs and {len(reference_digests)} digests"
            )

        try:
            return DatasetDescriptor(
                name=name,
                instance_count=resolved["instance_count"],
                reference_count=reference_count,
                alignment_type=resolved.get("alignment_type", "one-to-one"),
                description=resolved.get("description", ""),
                alignment_breakdown=resolved.get("alignment_breakdown", {}),
                original=DatasetFile(
                    path=original_path, url=entry.original_url, sha256=entry.original_sha256
                ),
                references=[
                    DatasetFile(path=path, url=url, sha256=digest)
                    for path, url, digest in zip(reference_paths, reference_urls, reference_digests)
                ],
            )
        except ValidationError as e:
            raise InvalidArgumentError(f"Invalid dataset '{name}': {e}") from e


def builtin_descriptors(cache_dir: Optional[Path] = None) -> List[DatasetDescriptor]:
    """Descriptors of the built-in test sets, ignoring any user registry."""
    registry = DatasetRegistry(cache_dir=cache_dir, entries={})
    return [registry.resolve(name) for name in sorted(DATASETS)]
