"""`datasets` command: list, fetch and validate registered test sets."""

import argparse

from services.dataset_registry import DatasetRegistry
from services.dataset_store import fetch_dataset, validate_dataset

EXIT_INVALID = 2


def handle_list(args: argparse.Namespace) -> int:
    for descriptor in DatasetRegistry().descriptors():
        print(descriptor.summary())
    return 0


def handle_fetch(args: argparse.Namespace) -> int:
    descriptor = DatasetRegistry().resolve(args.name)
    result = fetch_dataset(descriptor)
    for path, status in result.statuses.items():
        print(f"{status} {path}")
    print(f"{descriptor.name}: {'cached' if result.all_cached else 'fetched'}")
    return 0


def handle_validate(args: argparse.Namespace) -> int:
    descriptor = DatasetRegistry().resolve(args.name)
    result = validate_dataset(descriptor)
    for path, count in result.line_counts.items():
        print(f"{path}: {'missing' if count is None else f'{count} lines'}")
    if result.ok:
        print(f"{descriptor.name}: ok")
        return 0
    for problem in result.problems:
        print(f"{descriptor.name}: {problem}")
    return EXIT_INVALID


def register(subparsers) -> None:
    parser = subparsers.add_parser("datasets", help="Manage evaluation test sets")
    actions = parser.add_subparsers(dest="action", required=True)

    list_parser = actions.add_parser("list", help="Show registered test sets")
    list_parser.set_defaults(handler=handle_list)

    fetch_parser = actions.add_parser("fetch", help="Download a test set into the cache")
    fetch_parser.add_argument("name")
    fetch_parser.set_defaults(handler=handle_fetch)

    validate_parser = actions.add_parser("validate", help="Check a test set's files")
    validate_parser.add_argument("name")
    validate_parser.set_defaults(handler=handle_validate)
