"""Diagnose command: functional values of a snapshot as one CSV row."""

import argparse
import sys

from cqwave.analysis.export import header_comment
from cqwave.analysis.export.schema import DIAGNOSTICS_COLUMNS
from cqwave.cli.common import add_snapshot_arg, load_run_config, load_snapshot, make_exporter
from cqwave.cli.output import format_value
from cqwave.core.functionals import diagnose


def add_parser(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:  # type: ignore
    parser = subparsers.add_parser(
        "diagnose",
        help="Print the diagnostics of a snapshot",
        description="E, P, Ic, Apoho, Bpoho, residual_norm, sup_mod, pohozaev_residual",
    )
    add_snapshot_arg(parser)
    parser.set_defaults(func=execute)
    return parser


def execute(args: argparse.Namespace) -> int:
    cfg = load_run_config(args)
    snapshot = load_snapshot(args)
    row = diagnose(snapshot.field, snapshot.c, snapshot.A).as_row()
    out = sys.stdout
    out.write(f"# {header_comment(cfg.seed, snapshot.field.grid)}\n")
    out.write(",".join(DIAGNOSTICS_COLUMNS) + "\n")
    out.write(",".join(format_value(row[k]) for k in DIAGNOSTICS_COLUMNS) + "\n")
    if args.out:
        exporter = make_exporter(args, cfg, snapshot.field.grid)
        exporter.write_table("diagnostics", [row])
        exporter.finalize()
    return 0
