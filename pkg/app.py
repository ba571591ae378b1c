"""Command-line entry point for SimpEval.

Usage:
    python app.py evaluate --test-set turkcorpus-test --sys out.txt --metrics sari,bleu
    python app.py report --orig orig.txt --refs ref.0.txt ref.1.txt --sys out.txt -o report.html
    python app.py datasets list | fetch NAME | validate NAME

Exit codes: 0 success, 1 runtime error, 2 usage or validation error.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv

from cli import register_datasets, register_evaluate, register_report
from config import DEFAULT_LOG_LEVEL, ENV_LOG_LEVEL, LOG_FORMAT
from services.errors import FetchError, SimpEvalError

# Load environment variables
load_dotenv()

EXIT_RUNTIME = 1
EXIT_USAGE = 2

logger = logging.getLogger("simpeval")


def configure_logging(verbosity: int = 0) -> None:
    """Log to stderr; -v raises the level to INFO, -vv to DEBUG."""
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = os.environ.get(ENV_LOG_LEVEL, DEFAULT_LOG_LEVEL).upper()
        if not isinstance(logging.getLevelName(level), int):
            level = DEFAULT_LOG_LEVEL
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simpeval",
        description="Evaluate sentence simplification systems",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="More logging (repeatable)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    register_evaluate(subparsers)
    register_report(subparsers)
    register_datasets(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except FetchError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except (SimpEvalError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
