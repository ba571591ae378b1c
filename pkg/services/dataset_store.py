"""Line-aligned corpus files: loading, writing, validation and fetching.

Every corpus file is UTF-8 with one instance per line. LF and CRLF are
accepted on read, LF is written. A trailing newline is tolerated.
"""

import hashlib
import logging
import os
import tempfile
import time
import urllib.error
import urllib.request
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Union

from pydantic import BaseModel, Field

from config import (
    FETCH_LOCK_POLL_SECONDS,
    FETCH_LOCK_TIMEOUT_SECONDS,
    FETCH_TIMEOUT_SECONDS,
    ORIGINAL_FILENAME,
    REFERENCE_FILENAME,
    SYSTEM_FILENAME,
)
from services.corpus import EvalCorpus
from services.dataset_registry import DatasetDescriptor, DatasetFile
from services.errors import (
    CorruptDatasetError,
    DatasetNotFoundError,
    FetchError,
    InvalidArgumentError,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


# =========================================================================
# File Operations
# =========================================================================

def read_lines(path: PathLike) -> List[str]:
    """Read one entry per line.

    Raises:
        DatasetNotFoundError: If the file does not exist
        CorruptDatasetError: If the file is not valid UTF-8
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetNotFoundError(f"File not found: {path}")
    try:
        text = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as e:
        raise CorruptDatasetError(f"{path} is not valid UTF-8: {e}", path=str(path)) from e
    if not text:
        return []
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    return [line[:-1] if line.endswith("\r") else line for line in lines]


def write_lines(path: PathLike, lines: Sequence[str]) -> Path:
    """Write entries with LF endings through a temp file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    for line in lines:
        if "\n" in line or "\r" in line:
            raise InvalidArgumentError(f"Entry for {path} contains a line break: {line!r}")
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.writelines(f"{line}\n" for line in lines)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    return path


def file_sha256(path: PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _check_digest(dataset_file: DatasetFile) -> None:
    if dataset_file.sha256 and file_sha256(dataset_file.path) != dataset_file.sha256.lower():
        raise CorruptDatasetError(
            f"Digest mismatch for {dataset_file.path}", path=str(dataset_file.path)
        )


def _check_count(path: PathLike, lines: Sequence[str], expected: int) -> None:
    if len(lines) != expected:
        raise CorruptDatasetError(
            f"{path} has {len(lines)} lines, expected {expected}",
            path=str(path),
            expected=expected,
            actual=len(lines),
        )


def _check_non_empty(path: PathLike, lines: Sequence[str]) -> None:
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            raise CorruptDatasetError(f"{path} line {number} is empty", path=str(path))


# =========================================================================
# Loading
# =========================================================================

def load_corpus(
    descriptor: DatasetDescriptor,
    output_path: Optional[PathLike] = None,
    verify_digests: bool = True,
) -> EvalCorpus:
    """Load a registered test set, optionally with system outputs.

    Raises:
        DatasetNotFoundError: If a file is missing
        CorruptDatasetError: On wrong line counts, empty lines or digest mismatch
    """
    columns = []
    for dataset_file in descriptor.files():
        lines = read_lines(dataset_file.path)
        _check_count(dataset_file.path, lines, descriptor.instance_count)
        _check_non_empty(dataset_file.path, lines)
        if verify_digests:
            _check_digest(dataset_file)
        columns.append(lines)

    outputs = None
    if output_path is not None:
        outputs = read_lines(output_path)
        _check_count(output_path, outputs, descriptor.instance_count)

    return EvalCorpus(originals=columns[0], outputs=outputs, references=columns[1:])


def load_corpus_from_files(
    original_path: PathLike,
    reference_paths: Sequence[PathLike],
    output_path: Optional[PathLike] = None,
) -> EvalCorpus:
    """Load a custom corpus from explicit paths.

    Every file must have as many lines as the originals file.

    Raises:
        InvalidArgumentError: If no reference files are given
        DatasetNotFoundError: If a file is missing
        CorruptDatasetError: On line-count mismatch or empty original/reference lines
    """
    if not reference_paths:
        raise InvalidArgumentError("At least one reference file is required")
    originals = read_lines(original_path)
    if not originals:
        raise CorruptDatasetError(f"{original_path} is empty", path=str(original_path))
    _check_non_empty(original_path, originals)

    references = []
    for path in reference_paths:
        lines = read_lines(path)
        _check_count(path, lines, len(originals))
        _check_non_empty(path, lines)
        references.append(lines)

    outputs = None
    if output_path is not None:
        outputs = read_lines(output_path)
        _check_count(output_path, outputs, len(originals))

    return EvalCorpus(originals=originals, outputs=outputs, references=references)


def write_corpus(corpus: EvalCorpus, directory: PathLike) -> Dict[str, Path]:
    """Write a corpus in the dataset directory layout.

    Returns:
        Paths keyed by "original", "reference.<i>" and "output"
    """
    directory = Path(directory)
    paths = {"original": write_lines(directory / ORIGINAL_FILENAME, corpus.originals)}
    for index, reference_set in enumerate(corpus.references):
        paths[f"reference.{index}"] = write_lines(
            directory / REFERENCE_FILENAME.format(index=index), reference_set
        )
    if corpus.outputs is not None:
        paths["output"] = write_lines(directory / SYSTEM_FILENAME, corpus.outputs)
    return paths


# =========================================================================
# Validation
# =========================================================================

class ValidationResult(BaseModel):
    """Outcome of checking a dataset's files against its descriptor."""
    name: str
    ok: bool
    line_counts: Dict[str, Optional[int]] = Field(default_factory=dict)
    problems: List[str] = Field(default_factory=list)


def validate_dataset(descriptor: DatasetDescriptor) -> ValidationResult:
    """Check presence, line counts and digests of every file."""
    result = ValidationResult(name=descriptor.name, ok=True)
    for dataset_file in descriptor.files():
        key = str(dataset_file.path)
        try:
            lines = read_lines(dataset_file.path)
            result.line_counts[key] = len(lines)
            _check_count(dataset_file.path, lines, descriptor.instance_count)
            _check_non_empty(dataset_file.path, lines)
            _check_digest(dataset_file)
        except DatasetNotFoundError as e:
            result.line_counts.setdefault(key, None)
            result.problems.append(str(e))
        except CorruptDatasetError as e:
            result.problems.append(str(e))
    result.ok = not result.problems
    return result


# =========================================================================
# Fetching
# =========================================================================

class FetchResult(BaseModel):
    """Per-file status of a fetch: "cached" or "downloaded"."""
    name: str
    statuses: Dict[str, str] = Field(default_factory=dict)

    @property
    def all_cached(self) -> bool:
        return all(status == "cached" for status in self.statuses.values())


def process_alive(pid: int) -> bool:
    """Whether a process with this PID exists on this host."""
    try:
        os.kill(pid, 0)
    except ProcessLookupError:
        return False
    except PermissionError:
        return True
    return True


def _break_stale_lock(lock_path: Path) -> bool:
    """Remove a lock file whose owner PID is gone. An unreadable owner counts as alive."""
    try:
        pid = int(lock_path.read_text(encoding="ascii").strip())
    except (OSError, ValueError):
        return False
    if process_alive(pid):
        return False
    logger.warning("Removing stale fetch lock %s held by exited process %d", lock_path, pid)
    lock_path.unlink(missing_ok=True)
    return True


@contextmanager
def fetch_lock(directory: Path, timeout: float = FETCH_LOCK_TIMEOUT_SECONDS) -> Iterator[None]:
    """Serialize fetches of one dataset across processes with a lock file.

    The lock file holds the owner PID. A lock left by a process that no
    longer exists is removed instead of waited on.
    """
    directory.mkdir(parents=True, exist_ok=True)
    lock_path = directory / ".fetch.lock"
    deadline = time.monotonic() + timeout
    while True:
        try:
            fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            break
        except FileExistsError:
            if _break_stale_lock(lock_path):
                continue
            if time.monotonic() >= deadline:
                raise FetchError(f"Timed out waiting for fetch lock {lock_path}")
            time.sleep(FETCH_LOCK_POLL_SECONDS)
    try:
        os.write(fd, str(os.getpid()).encode("ascii"))
        yield
    finally:
        os.close(fd)
        lock_path.unlink(missing_ok=True)


def download(url: str, destination: Path) -> None:
    """Download a URL to a file through a temp file and rename.

    Raises:
        FetchError: On any network failure
    """
    destination.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=destination.parent, prefix=f".{destination.name}.", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as f, urllib.request.urlopen(url, timeout=FETCH_TIMEOUT_SECONDS) as response:
            while True:
                chunk = response.read(1 << 16)
                if not chunk:
                    break
                f.write(chunk)
        os.replace(tmp_name, destination)
    except (urllib.error.URLError, OSError) as e:
        Path(tmp_name).unlink(missing_ok=True)
        raise FetchError(f"Failed to fetch {url}: {e}", url=url) from e


def _is_cached(dataset_file: DatasetFile, expected_count: int) -> bool:
    if not dataset_file.path.is_file():
        return False
    if dataset_file.sha256:
        return file_sha256(dataset_file.path) == dataset_file.sha256.lower()
    try:
        return len(read_lines(dataset_file.path)) == expected_count
    except CorruptDatasetError:
        return False


def fetch_dataset(descriptor: DatasetDescriptor) -> FetchResult:
    """Download a dataset's files, skipping files already valid in the cache.

    Raises:
        InvalidArgumentError: If the descriptor has no URLs
        FetchError: On network failure
        CorruptDatasetError: If a downloaded file fails its digest check
    """
    if not descriptor.has_urls:
        raise InvalidArgumentError(
            f"Dataset '{descriptor.name}' has no download URLs; add them to the registry file"
        )

    result = FetchResult(name=descriptor.name)
    with fetch_lock(descriptor.original.path.parent):
        for dataset_file in descriptor.files():
            key = str(dataset_file.path)
            if _is_cached(dataset_file, descriptor.instance_count):
                logger.info("Cached %s", dataset_file.path)
                result.statuses[key] = "cached"
                continue
            logger.info("Downloading %s -> %s", dataset_file.url, dataset_file.path)
            download(dataset_file.url, dataset_file.path)
            try:
                _check_digest(dataset_file)
            except CorruptDatasetError:
                dataset_file.path.unlink(missing_ok=True)
                raise
            result.statuses[key] = "downloaded"
    return result
