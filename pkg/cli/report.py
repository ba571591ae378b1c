"""`report` command: write the self-contained HTML report."""

import argparse
from pathlib import Path

from cli.run_config import RunConfig, add_run_arguments, run_config_from_args
from config import DEFAULT_REPORT_PATH
from services.evaluation_service import EvaluationService
from services.html_renderer import write_report


def report_title(config: RunConfig) -> str:
    corpus_name = config.test_set or config.original_path.name
    return f"{config.system_path.name} on {corpus_name}"


def run_report(config: RunConfig) -> Path:
    service = EvaluationService(
        tokenizer=config.tokenizer.value,
        lowercase=config.lowercase,
        registry=config.build_registry(),
    )
    corpus = config.load_corpus()
    bundle = service.build_report_bundle(
        corpus,
        config.metrics,
        table=config.load_frequency_table(),
        seed=config.seed,
        title=report_title(config),
    )
    return write_report(bundle, config.report_path or Path(DEFAULT_REPORT_PATH))


def handle(args: argparse.Namespace) -> int:
    print(run_report(run_config_from_args(args, report_path=args.output)))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("report", help="Write an HTML report")
    add_run_arguments(parser)
    parser.add_argument("--output", "-o", type=Path, default=Path(DEFAULT_REPORT_PATH), help="Report destination")
    parser.set_defaults(handler=handle)
