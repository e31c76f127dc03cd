"""Scan command: constants over an (A, c) grid, optionally endpoint searches."""

import argparse
import math

import numpy as np

from cqwave.cli.common import load_run_config, make_exporter, progress_bar
from cqwave.cli.output import print_success, print_warning
from cqwave.core.errors import NotFound
from cqwave.core.params import sound_speed
from cqwave.core.solvers import find_negative_endpoint
from cqwave.core.verify import constants_scan


def add_parser(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:  # type: ignore
    parser = subparsers.add_parser(
        "scan",
        help="Scan the (A, c) parameter plane",
        description="Write constants_scan.csv and thresholds.csv; speeds are "
        "fractions of each sound speed",
    )
    parser.add_argument(
        "--endpoints",
        action="store_true",
        help="Also search a negative-Lagrangian endpoint at every node (endpoints.csv)",
    )
    parser.set_defaults(func=execute)
    return parser


def execute(args: argparse.Namespace) -> int:
    cfg = load_run_config(args)
    scan = cfg.scan
    A_values = np.linspace(scan.A_min, scan.A_max, scan.n_A)
    fractions = np.linspace(scan.c_fraction_min, scan.c_fraction_max, scan.n_c)
    grid = cfg.grid.build() if args.endpoints else None
    exporter = make_exporter(args, cfg, grid)

    tables = []
    thresholds = []
    with progress_bar(args, scan.n_A, "Constants") as bar:
        for A in A_values:
            result = constants_scan(
                [A], fractions * sound_speed(float(A)), s_max=scan.s_max, n_samples=scan.n_samples
            )
            tables.append(result.table)
            thresholds.append(result.thresholds)
            bar.update(1)
    for table in tables:
        exporter.writer("constants_scan").write_rows(table.to_dict("records"))
    for table in thresholds:
        exporter.writer("thresholds").write_rows(table.to_dict("records"))

    subsonic_failures = sum(
        int((~t["ordering"] & t["subsonic"]).sum()) for t in tables
    )
    if subsonic_failures:
        print_warning(f"ordering r1 < r2 < r3 fails at {subsonic_failures} subsonic node(s)")

    if grid is not None:
        with progress_bar(args, scan.n_A * scan.n_c, "Endpoints") as bar:
            for A in A_values:
                for fraction in fractions:
                    A_f = float(A)
                    c = float(fraction * sound_speed(A_f))
                    row = {"A": A_f, "c": c, "family": cfg.ansatz.family}
                    try:
                        endpoint = find_negative_endpoint(
                            c,
                            A_f,
                            grid,
                            cfg.ansatz.family,
                            budget=scan.endpoint_budget,
                            spec=cfg.ansatz,
                        )
                    except NotFound as exc:
                        row.update(
                            found=False,
                            lagrangian=exc.best_lagrangian,
                            momentum=math.nan,
                            t_star=math.nan,
                            evaluations=scan.endpoint_budget,
                        )
                    else:
                        row.update(
                            found=True,
                            lagrangian=endpoint.lagrangian,
                            momentum=endpoint.momentum,
                            t_star=endpoint.t_star,
                            evaluations=endpoint.evaluations,
                        )
                    exporter.writer("endpoints").write_row(row)
                    bar.update(1)

    exporter.finalize()
    if not args.quiet:
        print_success(f"Scan written to: {exporter.output_dir}")
    return 0
