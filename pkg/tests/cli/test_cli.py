"""End-to-end tests for the simpeval command line."""

import json
from pathlib import Path

import pytest

import app
from services.corpus import EvalCorpus


def output_count(corpus: EvalCorpus) -> float:
    """Scorer loaded through --external-metric."""
    return float(len(corpus.outputs))


def corpus_args(files):
    return ["--orig", str(files["orig"]), "--refs", *[str(p) for p in files["refs"]], "--sys", str(files["sys"])]


def run(capsys, *argv):
    code = app.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def identity_files(temp_data_dir, line_writer):
    """Outputs equal to the sources, with the sources as the only reference."""
    sentences = ["the cat sat on the mat .", "a dog barked at the mailman ."]
    root = Path(temp_data_dir) / "identity"
    return {
        "orig": line_writer(root / "orig.txt", sentences),
        "refs": [line_writer(root / "ref.0.txt", sentences)],
        "sys": line_writer(root / "sys.txt", sentences),
    }


class TestEvaluate:
    """Test suite for the evaluate command."""

    def test_json_document(self, capsys, isolated_env, corpus_files):
        """Default metrics, transformations and QE appear in the JSON."""
        code, out, _ = run(capsys, "evaluate", *corpus_args(corpus_files))
        assert code == 0
        document = json.loads(out)
        assert {"sari", "sari_breakdown", "bleu", "fkgl", "transformations", "quality_estimation"} <= set(document)
        assert set(document["transformations"]) == {"delete", "move", "replace", "copy"}
        assert document["quality_estimation"]["count"] == 6

    def test_metric_selection(self, capsys, isolated_env, corpus_files):
        """Unselected metrics are left out."""
        code, out, _ = run(capsys, "evaluate", *corpus_args(corpus_files), "--metrics", "sari,bleu")
        assert code == 0
        document = json.loads(out)
        assert "fkgl" not in document
        assert "sari" in document and "bleu" in document

    def test_identity_scores(self, capsys, isolated_env, identity_files):
        """Copying the source with the source as reference."""
        code, out, _ = run(capsys, "evaluate", *corpus_args(identity_files))
        assert code == 0
        document = json.loads(out)
        assert document["sari"] == pytest.approx(100 / 3, abs=1e-6)
        assert document["bleu"] == pytest.approx(100.0)

    def test_deterministic(self, capsys, isolated_env, corpus_files):
        """The same inputs print the same document."""
        _, first, _ = run(capsys, "evaluate", *corpus_args(corpus_files))
        _, second, _ = run(capsys, "evaluate", *corpus_args(corpus_files))
        assert first == second

    def test_table(self, capsys, isolated_env, corpus_files):
        """--table prints labeled rows."""
        code, out, _ = run(capsys, "evaluate", *corpus_args(corpus_files), "--table")
        assert code == 0
        assert out.startswith("SARI")
        assert "delete F1" in out

    def test_line_count_mismatch(self, capsys, isolated_env, corpus_files, line_writer, temp_data_dir):
        """Short system output exits 2 naming both counts."""
        short = line_writer(Path(temp_data_dir) / "short.txt", ["one", "two"])
        files = dict(corpus_files, sys=short)
        code, out, err = run(capsys, "evaluate", *corpus_args(files))
        assert code == 2
        assert out == ""
        assert "2 lines" in err and "expected 6" in err

    def test_unknown_metric(self, capsys, isolated_env, corpus_files):
        """Unknown metric names are usage errors."""
        code, _, err = run(capsys, "evaluate", *corpus_args(corpus_files), "--metrics", "sari,samsa")
        assert code == 2
        assert "samsa" in err

    def test_orig_and_test_set_exclusive(self, capsys, isolated_env, corpus_files):
        """A run has exactly one corpus source."""
        code, _, _ = run(capsys, "evaluate", *corpus_args(corpus_files), "--test-set", "pwkp")
        assert code == 2

    def test_missing_sys_argument(self, capsys, isolated_env):
        """argparse errors exit 2."""
        code, _, _ = run(capsys, "evaluate", "--test-set", "pwkp")
        assert code == 2

    def test_registered_test_set(self, capsys, registered_dataset, corpus_files):
        """Registered datasets load from the cache."""
        code, out, _ = run(capsys, "evaluate", "--test-set", "tiny", "--sys", str(corpus_files["sys"]))
        assert code == 0
        assert json.loads(out)["quality_estimation"]["count"] == 6

    def test_external_metric(self, capsys, isolated_env, corpus_files):
        """External scorers are registered and reported under their name."""
        code, out, _ = run(
            capsys,
            "evaluate",
            *corpus_args(corpus_files),
            "--external-metric",
            "count=tests.cli.test_cli:output_count",
        )
        assert code == 0
        assert json.loads(out)["extras"] == {"count": 6.0}

    def test_bad_external_metric(self, capsys, isolated_env, corpus_files):
        """Unloadable scorers are usage errors."""
        code, _, _ = run(
            capsys, "evaluate", *corpus_args(corpus_files), "--external-metric", "count=no.such.module:fn"
        )
        assert code == 2

    def test_frequency_table(self, capsys, isolated_env, corpus_files, line_writer, temp_data_dir):
        """A frequency table adds lexical complexity."""
        table = line_writer(Path(temp_data_dir) / "freq.tsv", ["the", "a", "of", "was", "he"])
        code, out, _ = run(capsys, "evaluate", *corpus_args(corpus_files), "--freq-table", str(table))
        assert code == 0
        assert json.loads(out)["quality_estimation"]["lexical_complexity"] > 0


class TestReport:
    """Test suite for the report command."""

    def test_writes_report(self, capsys, isolated_env, corpus_files, temp_data_dir):
        """The report is written and its path printed."""
        destination = Path(temp_data_dir) / "out" / "report.html"
        code, out, _ = run(capsys, "report", *corpus_args(corpus_files), "-o", str(destination))
        assert code == 0
        assert out.strip() == str(destination)
        content = destination.read_text(encoding="utf-8")
        assert content.startswith("<!DOCTYPE html>")
        assert "sys.txt on orig.txt" in content

    def test_identical_bytes(self, capsys, isolated_env, corpus_files, temp_data_dir):
        """Two runs with one seed write the same bytes."""
        first = Path(temp_data_dir) / "first.html"
        second = Path(temp_data_dir) / "second.html"
        run(capsys, "report", *corpus_args(corpus_files), "-o", str(first))
        run(capsys, "report", *corpus_args(corpus_files), "-o", str(second))
        assert first.read_bytes() == second.read_bytes()

    def test_missing_frequency_table_warns(self, capsys, isolated_env, corpus_files, temp_data_dir):
        """An unreadable table is a warning, not a failure."""
        destination = Path(temp_data_dir) / "report.html"
        code, _, err = run(
            capsys,
            "report",
            *corpus_args(corpus_files),
            "--freq-table",
            str(Path(temp_data_dir) / "missing.tsv"),
            "-o",
            str(destination),
        )
        assert code == 0
        assert "WARNING" in err
        assert destination.exists()

    def test_unwritable_destination(self, capsys, isolated_env, corpus_files, temp_data_dir):
        """Write failures exit 1 and leave nothing behind."""
        blocker = Path(temp_data_dir) / "blocker"
        blocker.write_text("not a directory", encoding="utf-8")
        code, _, err = run(capsys, "report", *corpus_args(corpus_files), "-o", str(blocker / "report.html"))
        assert code == 1
        assert err.startswith("error:")
        assert blocker.read_text(encoding="utf-8") == "not a directory"


class TestDatasets:
    """Test suite for the datasets command."""

    def test_list(self, capsys, isolated_env):
        """Built-in sets are listed with their shapes."""
        code, out, _ = run(capsys, "datasets", "list")
        assert code == 0
        assert "turkcorpus-test 359 instances 8 refs" in out
        assert "hsplit 359 instances 4 refs" in out

    def test_validate_ok(self, capsys, registered_dataset):
        """Complete files validate."""
        code, out, _ = run(capsys, "datasets", "validate", "tiny")
        assert code == 0
        assert out.strip().endswith("tiny: ok")

    def test_validate_truncated(self, capsys, registered_dataset):
        """A truncated reference file fails validation."""
        (registered_dataset / "ref.0.txt").write_text("one line\n", encoding="utf-8")
        code, out, _ = run(capsys, "datasets", "validate", "tiny")
        assert code != 0
        assert "1 lines" in out

    def test_validate_unknown(self, capsys, isolated_env):
        """Unknown datasets are usage errors."""
        code, _, err = run(capsys, "datasets", "validate", "nope")
        assert code == 2
        assert "nope" in err

    def test_fetch_warm_cache(self, capsys, registered_dataset, temp_data_dir):
        """Files already present are reported as cached without downloading."""
        registry = {
            "datasets": {
                "tiny": {
                    "instance_count": 6,
                    "reference_count": 2,
                    "original_url": "https://example.org/orig.txt",
                    "reference_urls": ["https://example.org/ref.0.txt", "https://example.org/ref.1.txt"],
                }
            }
        }
        Path(temp_data_dir, "registry.json").write_text(json.dumps(registry), encoding="utf-8")
        code, out, _ = run(capsys, "datasets", "fetch", "tiny")
        assert code == 0
        assert out.strip().endswith("tiny: cached")
        assert out.count("cached ") == 3

    def test_fetch_without_urls(self, capsys, isolated_env):
        """Sets without URLs cannot be fetched."""
        code, _, err = run(capsys, "datasets", "fetch", "pwkp")
        assert code == 2
        assert err.startswith("error:")

    def test_fetch_network_failure(self, capsys, isolated_env, temp_data_dir, monkeypatch):
        """Network failures are runtime errors and exit 1."""
        from services import dataset_store
        from services.errors import FetchError

        registry = {
            "datasets": {
                "remote": {
                    "instance_count": 2,
                    "reference_count": 1,
                    "original_url": "https://example.org/orig.txt",
                    "reference_urls": ["https://example.org/ref.0.txt"],
                }
            }
        }
        Path(temp_data_dir, "registry.json").write_text(json.dumps(registry), encoding="utf-8")

        def unreachable(url, destination):
            raise FetchError(f"Failed to fetch {url}", url=url)

        monkeypatch.setattr(dataset_store, "download", unreachable)
        code, _, err = run(capsys, "datasets", "fetch", "remote")
        assert code == 1
        assert err.startswith("error:")
