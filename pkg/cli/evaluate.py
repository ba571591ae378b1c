"""`evaluate` command: corpus scores as a JSON document on stdout."""

import argparse
import json
from typing import Any, Dict, List

from cli.run_config import RunConfig, add_run_arguments, run_config_from_args
from services.evaluation_service import EvaluationService


def format_table(document: Dict[str, Any]) -> str:
    """Two-column human-readable rendering of an evaluation document."""
    rows: List[tuple] = []
    for key in ("sari", "bleu", "fkgl"):
        if key in document:
            rows.append((key.upper(), document[key]))
    for operation, scores in document.get("sari_breakdown", {}).items():
        rows.append((f"SARI {operation}", scores["overall"]))
    for name, value in sorted(document.get("extras", {}).items()):
        rows.append((name, value))
    for name, value in document.get("transformations", {}).items():
        rows.append((f"{name} F1", 100 * value))
    for name, value in document.get("quality_estimation", {}).items():
        rows.append((name, value))

    width = max(len(label) for label, _ in rows)
    lines = [f"{label:<{width}}  {value:.2f}" for label, value in rows]
    for name, message in sorted(document.get("diagnostics", {}).items()):
        lines.append(f"{name:<{width}}  failed: {message}")
    return "\n".join(lines)


def run_evaluate(config: RunConfig, table: bool = False) -> str:
    """Evaluate and return the text to print."""
    service = EvaluationService(
        tokenizer=config.tokenizer.value,
        lowercase=config.lowercase,
        registry=config.build_registry(),
    )
    corpus = config.load_corpus()
    document = service.evaluate(corpus, config.metrics, config.load_frequency_table())
    if table:
        return format_table(document)
    return json.dumps(document, indent=2, sort_keys=True)


def handle(args: argparse.Namespace) -> int:
    print(run_evaluate(run_config_from_args(args), table=args.table))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("evaluate", help="Score system outputs and print JSON")
    add_run_arguments(parser)
    parser.add_argument("--table", action="store_true", help="Print a readable table instead of JSON")
    parser.set_defaults(handler=handle)
