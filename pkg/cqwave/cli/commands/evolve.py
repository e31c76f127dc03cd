"""Evolve command: split-step time integration of a snapshot."""

import argparse

from cqwave.cli.common import (
    add_snapshot_arg,
    load_run_config,
    load_snapshot,
    make_exporter,
    progress_bar,
)
from cqwave.cli.output import print_key_values, print_success
from cqwave.core.dynamics import evolve, propagation_test


def add_parser(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:  # type: ignore
    parser = subparsers.add_parser(
        "evolve",
        help="Evolve a snapshot in time",
        description="Strang split-step evolution; writes trajectory.csv and final.cqwf",
    )
    add_snapshot_arg(parser)
    parser.add_argument(
        "--propagation",
        action="store_true",
        help="Measure the propagation speed and shape drift instead",
    )
    parser.set_defaults(func=execute)
    return parser


def execute(args: argparse.Namespace) -> int:
    cfg = load_run_config(args)
    snapshot = load_snapshot(args)
    psi, A, c = snapshot.field, snapshot.A, snapshot.c
    exporter = make_exporter(args, cfg, psi.grid)

    if args.propagation:
        result = propagation_test(psi, c, A, cfg.dynamics.T, cfg.dynamics)
        exporter.write_table(
            "propagation",
            ({"t": t, "shift": s} for t, s in zip(result.times, result.shifts)),
        )
        print_key_values(
            {
                "c": c,
                "speed": "none" if result.speed is None else result.speed,
                "shape_error": result.shape_error,
            }
        )
    else:
        with progress_bar(args, cfg.dynamics.n_steps, "Time steps") as bar:
            final, trajectory = evolve(
                psi, cfg.dynamics, A, progress=lambda k: bar.update(1)
            )
        exporter.write_table("trajectory", trajectory.rows())
        exporter.save_snapshot(final, A, c)
        print_key_values(
            {
                "t": trajectory.t[-1],
                "energy_drift": trajectory.energy_drift,
                "momentum_drift": trajectory.momentum_drift,
                "sup_mod": trajectory.sup_mod[-1],
            }
        )

    exporter.finalize()
    if not args.quiet:
        print_success(f"Run written to: {exporter.output_dir}")
    return 0
