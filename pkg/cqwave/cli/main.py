"""Main CLI entry point for cqwave."""

import argparse
import sys
from typing import Optional

from cqwave.cli.commands import diagnose, evolve, reduce, scan, solve, verify
from cqwave.cli.common import add_global_args
from cqwave.cli.output import configure_logging, print_error
from cqwave.core.errors import CqwaveError

COMMANDS = (reduce, solve, evolve, diagnose, verify, scan)


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqwave",
        description="cqwave - cubic-quintic traveling waves: reduction, solvers, "
        "dynamics and checks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version="%(prog)s 0.1.0")
    add_global_args(parser)

    subparsers = parser.add_subparsers(
        dest="command", help="Available commands", required=True
    )
    for command in COMMANDS:
        sub = command.add_parser(subparsers)
        add_global_args(sub, suppress=True)
    return parser


def main(argv: Optional[list] = None) -> int:
    """Main CLI entry point.

    Returns:
        0 on success, 1 when verification fails, the error's exit code otherwise
    """
    parser = create_parser()
    args = parser.parse_args(argv)
    configure_logging(verbose=args.verbose, quiet=args.quiet)
    try:
        return int(args.func(args))
    except CqwaveError as exc:
        print_error(str(exc))
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
