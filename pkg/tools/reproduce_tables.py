#!/usr/bin/env python3
"""Print metric, transformation and QE tables for several systems.

Usage:
    python tools/reproduce_tables.py --test-set turkcorpus-test outputs/dmass.txt outputs/pbmt.txt

Each system output file is scored against the test set; a "Reference" row
scores one sampled human reference against the remaining ones. The test
set must have been fetched first (`python app.py datasets fetch NAME`).
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from config import DEFAULT_SEED, LOG_FORMAT  # noqa: E402
from services.dataset_registry import DatasetRegistry  # noqa: E402
from services.dataset_store import load_corpus  # noqa: E402
from services.errors import SimpEvalError  # noqa: E402
from services.evaluation_service import get_evaluation_service  # noqa: E402
from services.metrics import reference_baseline  # noqa: E402
from services.quality_estimation import compute_corpus_features, load_frequency_table  # noqa: E402

QE_COLUMNS = [
    ("compression_ratio", "Compression"),
    ("sentence_splits", "Splits"),
    ("levenshtein_similarity", "Lev. sim"),
    ("exact_match", "Exact copies"),
    ("added_proportion", "Additions"),
    ("deleted_proportion", "Deletions"),
    ("lexical_complexity", "Lexical compl."),
]


def format_rows(header: Sequence[str], rows: List[List[object]]) -> str:
    cells = [list(header)] + [
        [row[0]] + ["n/a" if value is None else f"{value:.2f}" for value in row[1:]]
        for row in rows
    ]
    widths = [max(len(str(line[i])) for line in cells) for i in range(len(header))]
    return "\n".join(
        "  ".join(str(cell).ljust(width) for cell, width in zip(line, widths))
        for line in cells
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Reproduce evaluation tables")
    parser.add_argument("systems", type=Path, nargs="+", help="System output files")
    parser.add_argument("--test-set", default="turkcorpus-test")
    parser.add_argument("--freq-table", type=Path)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.WARNING, format=LOG_FORMAT)

    try:
        descriptor = DatasetRegistry().resolve(args.test_set)
        table = load_frequency_table(args.freq_table) if args.freq_table else None
        service = get_evaluation_service()

        metric_rows: List[List[object]] = []
        transformation_rows: List[List[object]] = []
        qe_rows: List[List[object]] = []
        aggregates: Dict[str, object] = {}

        for path in args.systems:
            corpus = load_corpus(descriptor, path)
            report = service.score(corpus)
            metric_rows.append([path.stem, report.sari, report.bleu, report.fkgl])
            scores = service.transformations(corpus).as_dict()
            transformation_rows.append([path.stem] + [100 * value for value in scores.values()])
            _, aggregates[path.stem] = compute_corpus_features(
                corpus.originals, corpus.outputs, table
            )

        reference_outputs = service.reference_outputs(corpus, args.seed)
        if corpus.reference_count >= 2:
            baseline = reference_baseline(corpus, seed=args.seed)
            metric_rows.insert(0, ["Reference", baseline.sari, baseline.bleu, baseline.fkgl])
        _, reference_aggregate = compute_corpus_features(corpus.originals, reference_outputs, table)
        qe_rows.append(["Reference"] + [getattr(reference_aggregate, key) for key, _ in QE_COLUMNS])
        for name, aggregate in aggregates.items():
            qe_rows.append([name] + [getattr(aggregate, key) for key, _ in QE_COLUMNS])
    except SimpEvalError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1

    print(format_rows(["System", "SARI", "BLEU", "FKGL"], metric_rows))
    print()
    print(format_rows(["System", "Delete", "Move", "Replace", "Copy"], transformation_rows))
    print()
    print(format_rows(["System"] + [label for _, label in QE_COLUMNS], qe_rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())
