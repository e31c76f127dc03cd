"""Verify command: the full check battery on a snapshot and parameter space."""

import argparse

from cqwave.cli.common import add_snapshot_arg, load_run_config, load_snapshot, make_exporter
from cqwave.cli.output import print_check, print_error, print_success
from cqwave.core.verify import run_battery

VERIFICATION_FAILED = 1


def add_parser(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:  # type: ignore
    parser = subparsers.add_parser(
        "verify",
        help="Run every automated check",
        description="Exit 0 iff every applicable check passes; writes verify.csv",
    )
    add_snapshot_arg(parser)
    parser.add_argument(
        "--params-only",
        action="store_true",
        help="Skip the field checks and use A, c from the config",
    )
    parser.set_defaults(func=execute)
    return parser


def execute(args: argparse.Namespace) -> int:
    cfg = load_run_config(args)
    if args.params_only:
        psi, A, c = None, cfg.params.A, cfg.params.c
    else:
        snapshot = load_snapshot(args)
        psi, A, c = snapshot.field, snapshot.A, snapshot.c
    reports = run_battery(
        psi,
        c,
        A,
        seed=cfg.seed,
        n_identity_samples=cfg.verify.identity_samples,
        keylem_nodes=cfg.verify.keylem_nodes,
        keylem_samples=cfg.verify.keylem_samples,
    )
    exporter = make_exporter(args, cfg, None if psi is None else psi.grid)
    exporter.write_table("verify", (r.as_row() for r in reports))
    exporter.finalize()

    for r in reports:
        print_check(r.name, r.passed, r.applicable, r.margin)
    failed = [r.name for r in reports if not r.ok]
    if failed:
        print_error(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        return VERIFICATION_FAILED
    if not args.quiet:
        print_success(f"All applicable checks passed; report in {exporter.output_dir}")
    return 0
