"""Reduce command: parameter reduction and explicit constants."""

import argparse

import numpy as np

from cqwave.cli.common import load_run_config, make_exporter
from cqwave.cli.output import print_key_values, print_success
from cqwave.core.params import linf_constants, potential_profile


def add_parser(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:  # type: ignore
    parser = subparsers.add_parser(
        "reduce",
        help="Reduce raw coefficients to A and print the L-infinity constants",
        description="Print A, gamma, vs, r1, r2, r3, rbar and C_A as key=value lines",
    )
    parser.add_argument(
        "--profile",
        action="store_true",
        help="Write potential_profile.csv and critical_points.csv",
    )
    parser.add_argument("--u-max", type=float, default=1.5, help="Profile range [-u, u]")
    parser.add_argument("--points", type=int, default=601, help="Profile samples")
    parser.set_defaults(func=execute)
    return parser


def execute(args: argparse.Namespace) -> int:
    cfg = load_run_config(args)
    params = cfg.params
    consts = linf_constants(params.A, params.c)
    values = {
        "A": params.A,
        "gamma": params.gamma,
        "vs": params.vs,
        "c": params.c,
        "r1": consts.r1,
        "r2": consts.r2,
        "r3": consts.r3,
        "rbar": consts.rbar,
        "C_A": consts.C_A,
    }
    print_key_values(values)

    if args.out or args.profile:
        exporter = make_exporter(args, cfg)
        exporter.write_table("reduce", [values])
        if args.profile:
            profile = potential_profile(
                params.A, np.linspace(-args.u_max, args.u_max, args.points)
            )
            exporter.write_table(
                "potential_profile",
                (
                    {"u": u, "W": w, "W_GP": g}
                    for u, w, g in zip(profile.u, profile.W, profile.W_gp)
                ),
            )
            exporter.write_table(
                "critical_points",
                ({"u": p.u, "kind": p.kind} for p in profile.critical_points),
            )
        exporter.finalize()
        if not args.quiet:
            print_success(f"Tables written to: {exporter.output_dir}")
    return 0
