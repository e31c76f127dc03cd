"""Solve command: mountain-pass start, descent and Newton, optional continuation."""

import argparse
import logging

from cqwave.analysis.export import RunExporter
from cqwave.cli.common import load_run_config, make_exporter, progress_bar
from cqwave.cli.config import RunConfig
from cqwave.cli.output import print_key_values, print_success, print_warning
from cqwave.core.data_logger import DataLogger
from cqwave.core.errors import Divergence, Stagnation
from cqwave.core.grid import ComplexField, Grid
from cqwave.core.solvers import (
    SolveReport,
    continuation,
    continuity_gaps,
    find_negative_endpoint,
    make_ansatz,
    path_max,
    path_point,
    solve,
)

logger = logging.getLogger(__name__)

GAP_THRESHOLD = 1.0


def add_parser(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:  # type: ignore
    parser = subparsers.add_parser(
        "solve",
        help="Compute a traveling wave on the slab",
        description="Search a negative-Lagrangian endpoint, start from the path "
        "maximum (or the ansatz) and converge with descent and Newton",
    )
    parser.add_argument(
        "--start",
        choices=["peak", "ansatz"],
        default="peak",
        help="Initial guess: mountain-pass path peak or the raw ansatz",
    )
    parser.add_argument(
        "--continue-to",
        type=float,
        default=None,
        metavar="C",
        help="Continue the solution in c up to C",
    )
    parser.add_argument("--steps", type=int, default=10, help="Continuation steps")
    parser.set_defaults(func=execute)
    return parser


def _summary_row(report: SolveReport, c: float, A: float) -> dict:
    return {
        "c": c,
        "A": A,
        "method": report.method,
        "converged": report.converged,
        "fallback_used": report.fallback_used,
        "iterations": report.iterations,
        **report.diagnostics.as_row(),
    }


def _initial_field(args: argparse.Namespace, cfg: RunConfig, grid: Grid) -> ComplexField:
    c, A = cfg.params.c, cfg.params.A
    if args.start == "ansatz":
        return ComplexField(grid, 1.0 + make_ansatz(cfg.ansatz, grid).values)
    endpoint = find_negative_endpoint(c, A, grid, cfg.ansatz.family, spec=cfg.ansatz)
    t_peak, chi = path_max(endpoint.psi0, c, A)
    logger.info(
        "endpoint I^c=%.6g after %d evaluations; path peak %.6g at t=%.4g",
        endpoint.lagrangian,
        endpoint.evaluations,
        chi,
        t_peak,
    )
    return path_point(endpoint.psi0, t_peak)


def _write_logs(exporter: RunExporter, data_logger: DataLogger) -> None:
    exporter.write_table("solve_history", data_logger.all_rows())
    exporter.write_table("solve_notes", data_logger.note_rows())


def execute(args: argparse.Namespace) -> int:
    cfg = load_run_config(args)
    grid = cfg.grid.build()
    c, A = cfg.params.c, cfg.params.A
    exporter = make_exporter(args, cfg, grid)
    data_logger = DataLogger()

    initial = _initial_field(args, cfg, grid)
    try:
        report = solve(initial, c, A, cfg.solver, data_logger=data_logger)
    except (Stagnation, Divergence) as exc:
        if exc.report is not None:
            exporter.write_table("solve_summary", [_summary_row(exc.report, c, A)])
            exporter.save_snapshot(exc.report.field, A, c)
        _write_logs(exporter, data_logger)
        outcome = "stagnation" if isinstance(exc, Stagnation) else "divergence"
        exporter.finalize({"outcome": outcome})
        raise

    exporter.write_table("solve_summary", [_summary_row(report, c, A)])
    exporter.save_snapshot(report.field, A, c)
    print_key_values({"converged": report.converged, **report.diagnostics.as_row()})
    if not report.converged:
        print_warning(f"not converged: residual {report.residual_norm:.3e}")

    if args.continue_to is not None:
        with progress_bar(args, args.steps, "Continuation") as bar:
            result = continuation(
                c,
                args.continue_to,
                args.steps,
                A,
                grid,
                initial=report.field,
                cfg=cfg.solver,
                data_logger=data_logger,
                progress=lambda k: bar.update(1),
            )
        exporter.write_table("continuation", (p.as_row() for p in result.points))
        for i in continuity_gaps(result.points, GAP_THRESHOLD):
            print_warning(f"E or P jumps at c={result.points[i].c:.6g}")
        for gap in result.gaps:
            print_warning(f"no solution at c={gap:.6g}")

    _write_logs(exporter, data_logger)
    exporter.finalize({"converged": report.converged})
    if not args.quiet:
        print_success(f"Run written to: {exporter.output_dir}")
    return 0
