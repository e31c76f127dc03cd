"""Descent-then-Newton pipeline and continuation in the speed c."""

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from cqwave.core.data_logger import DataLogger
from cqwave.core.errors import SolverError
from cqwave.core.grid import ComplexField, Grid
from cqwave.core.params import sound_speed
from cqwave.core.solvers.config import SolveReport, SolverConfig
from cqwave.core.solvers.descent import descend
from cqwave.core.solvers.newton import newton_refine

logger = logging.getLogger(__name__)


def solve(
    psi_init: ComplexField,
    c: float,
    A: float,
    cfg: SolverConfig,
    data_logger: Optional[DataLogger] = None,
    run: str = "solve",
) -> SolveReport:
    """Descend down to the Newton switchover, then refine with Newton."""
    data_logger = data_logger or DataLogger()
    coarse_cfg = replace(cfg, tol_residual=max(cfg.switchover, cfg.tol_residual))
    coarse = descend(psi_init, c, A, coarse_cfg, data_logger=data_logger, run=f"{run}/descent")
    if coarse.residual_norm > cfg.switchover:
        coarse.converged = False
        return coarse
    if coarse.residual_norm <= cfg.tol_residual:
        return coarse
    fine = newton_refine(coarse.field, c, A, cfg, data_logger=data_logger, run=f"{run}/newton")
    return replace(
        fine,
        iterations=coarse.iterations + fine.iterations,
        residual_history=coarse.residual_history + fine.residual_history[1:],
        method="descent+" + fine.method,
    )


@dataclass
class ContinuationPoint:
    c: float
    report: Optional[SolveReport] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.report is not None

    def as_row(self) -> dict:
        row: dict = {"c": self.c, "ok": self.ok, "error": self.error or ""}
        if self.report is not None:
            row.update(self.report.diagnostics.as_row())
            row["converged"] = self.report.converged
            row["iterations"] = self.report.iterations
        else:
            row["converged"] = False
        return row


@dataclass
class ContinuationResult:
    points: list[ContinuationPoint] = field(default_factory=list)

    @property
    def gaps(self) -> list[float]:
        return [p.c for p in self.points if not p.ok]


def continuation(
    c_from: float,
    c_to: float,
    steps: int,
    A: float,
    grid: Grid,
    initial: Optional[ComplexField] = None,
    cfg: Optional[SolverConfig] = None,
    data_logger: Optional[DataLogger] = None,
    progress: Optional[Callable[[int], None]] = None,
) -> ContinuationResult:
    """March c from c_from to c_to, warm-starting each solve from the last success.

    Solver errors are recorded as gaps and the march continues.

    Raises:
        ValueError: fewer than one step, or an end speed outside (0, vs)
    """
    if steps < 1:
        raise ValueError(f"steps must be at least 1, got {steps}")
    vs = sound_speed(A)
    for end in (c_from, c_to):
        if not 0.0 < end < vs:
            raise ValueError(f"continuation speeds must lie in (0, {vs:.17g}), got {end}")
    cfg = cfg or SolverConfig()
    data_logger = data_logger or DataLogger()
    current = initial if initial is not None else ComplexField.constant(grid)
    result = ContinuationResult()
    for k, c in enumerate(np.linspace(c_from, c_to, steps)):
        c = float(c)
        try:
            report = solve(current, c, A, cfg, data_logger=data_logger, run=f"c={c:.17g}")
        except SolverError as exc:
            logger.warning("continuation gap at c=%.6g: %s", c, exc)
            result.points.append(ContinuationPoint(c=c, error=str(exc)))
        else:
            result.points.append(ContinuationPoint(c=c, report=report))
            if report.converged:
                current = report.field
        if progress is not None:
            progress(k + 1)
    return result


def continuity_gaps(points: list[ContinuationPoint], threshold: float) -> list[int]:
    """Indices where E or P jumps by more than ``threshold`` from the previous solved point."""
    jumps = []
    previous = None
    for i, point in enumerate(points):
        if point.report is None:
            continue
        diag = point.report.diagnostics
        if previous is not None and (
            abs(diag.E - previous.E) > threshold or abs(diag.P - previous.P) > threshold
        ):
            jumps.append(i)
        previous = diag
    return jumps
