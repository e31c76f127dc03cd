"""Common utilities for CLI commands."""

import argparse
import sys
from pathlib import Path
from typing import Any, Optional

from tqdm import tqdm

from cqwave.analysis.export import RunExporter, Snapshot, read_snapshot
from cqwave.analysis.loading import get_snapshot_path_with_fallback, new_run_directory
from cqwave.cli.config import RunConfig, load_config
from cqwave.core.grid import Grid


def add_global_args(parser: argparse.ArgumentParser, suppress: bool = False) -> None:
    """Flags accepted both before and after the subcommand name.

    With ``suppress`` the subcommand parser leaves unset flags alone, so values
    given before the subcommand survive.
    """

    def default(value: Any) -> Any:
        return argparse.SUPPRESS if suppress else value

    parser.add_argument(
        "--config", type=str, default=default(None), help="YAML run configuration"
    )
    parser.add_argument(
        "--seed", type=int, default=default(None), help="Seed (overrides the config)"
    )
    parser.add_argument(
        "--out",
        type=str,
        default=default(None),
        help="Output directory (default: runs/run_YYYYMMDD_HHMMSS)",
    )
    parser.add_argument(
        "--parquet",
        action="store_true",
        default=default(False),
        help="Also write Parquet copies of tables (needs pyarrow)",
    )
    parser.add_argument(
        "--quiet",
        action="store_true",
        default=default(False),
        help="Suppress progress bars and info logging",
    )
    parser.add_argument(
        "--verbose",
        action="store_true",
        default=default(False),
        help="Debug logging of every iteration",
    )


def add_snapshot_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "snapshot",
        nargs="?",
        default=None,
        help="CQWF snapshot (default: $CQWAVE_RUN_PATH, then the latest run)",
    )


def load_run_config(args: argparse.Namespace) -> RunConfig:
    return load_config(args.config).with_seed(args.seed)


def output_directory(args: argparse.Namespace) -> Path:
    return Path(args.out) if args.out else new_run_directory()


def make_exporter(
    args: argparse.Namespace, cfg: RunConfig, grid: Optional[Grid] = None
) -> RunExporter:
    return RunExporter(
        output_directory(args),
        seed=cfg.seed,
        command=args.command,
        grid=grid,
        parquet=args.parquet,
    )


def load_snapshot(args: argparse.Namespace) -> Snapshot:
    return read_snapshot(get_snapshot_path_with_fallback(args.snapshot))


def progress_bar(args: argparse.Namespace, total: int, desc: str) -> tqdm:
    """tqdm on stderr, so stdout stays machine-readable."""
    return tqdm(total=total, desc=desc, file=sys.stderr, disable=args.quiet, leave=False)
