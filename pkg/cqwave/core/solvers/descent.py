"""Preconditioned descent on Omega(psi) = 1/2 ||R(psi)||^2."""

import logging
from typing import Optional

import numpy as np

from cqwave.core.data_logger import DataLogger
from cqwave.core.errors import Stagnation
from cqwave.core.functionals import diagnose, el_residual_values, hessian_apply_values
from cqwave.core.grid import ComplexField, inner
from cqwave.core.solvers.config import SolveReport, SolverConfig
from cqwave.core.solvers.preconditioner import HelmholtzPreconditioner

logger = logging.getLogger(__name__)


class _Identity:
    def apply(self, r: np.ndarray) -> np.ndarray:
        out = r.copy()
        out[0] = 0.0
        out[-1] = 0.0
        return out


def make_preconditioner(
    psi: ComplexField, A: float, cfg: SolverConfig
) -> HelmholtzPreconditioner | _Identity:
    if cfg.preconditioner == "none":
        return _Identity()
    return HelmholtzPreconditioner(psi.grid, A)


def descend(
    psi_init: ComplexField,
    c: float,
    A: float,
    cfg: SolverConfig,
    data_logger: Optional[DataLogger] = None,
    run: str = "descent",
) -> SolveReport:
    """Backtracking descent with direction -M grad Omega, M = P^-2.

    The Hessian of Omega is L^2, so the squared inverse Helmholtz operator
    is used as metric. Omega never increases on an accepted step.

    Raises:
        Stagnation: the line search fell below ``cfg.min_step``; the
            exception carries the best-so-far report
    """
    data_logger = data_logger or DataLogger()
    grid = psi_init.grid
    precond = make_preconditioner(psi_init, A, cfg)
    f = psi_init.with_boundary().values.copy()
    r = el_residual_values(grid, f, c, A)
    omega = 0.5 * inner(grid, r, r)
    history = [float(np.sqrt(2.0 * omega))]
    data_logger.log_metrics(run, 0, residual_norm=history[0], omega=omega)
    step = cfg.step0
    converged = history[0] <= cfg.tol_residual
    iterations = 0

    def report(message: str = "") -> SolveReport:
        field = ComplexField(grid, f)
        return SolveReport(
            field=field,
            iterations=iterations,
            residual_history=list(history),
            converged=converged,
            diagnostics=diagnose(field, c, A),
            method="descent",
            message=message,
        )

    while not converged and iterations < cfg.max_iters:
        grad = hessian_apply_values(grid, f, r, c, A)
        direction = -precond.apply(precond.apply(grad))
        slope = inner(grid, grad, direction)
        s = step
        while True:
            trial = f + s * direction
            r_trial = el_residual_values(grid, trial, c, A)
            omega_trial = 0.5 * inner(grid, r_trial, r_trial)
            if omega_trial <= omega + cfg.armijo * s * slope:
                break
            s *= cfg.backtracking
            if s < cfg.min_step:
                data_logger.log_note(run, iterations, "line search stagnated")
                raise Stagnation(
                    f"descent stagnated at residual {history[-1]:.3e} "
                    f"after {iterations} iterations",
                    report=report("stagnated"),
                )
        iterations += 1
        f, r, omega = trial, r_trial, omega_trial
        history.append(float(np.sqrt(2.0 * omega)))
        data_logger.log_metrics(
            run, iterations, residual_norm=history[-1], omega=omega, step=s
        )
        step = min(cfg.step0, s / cfg.backtracking)
        converged = history[-1] <= cfg.tol_residual
        logger.debug("descent %d: residual %.3e step %.3e", iterations, history[-1], s)

    logger.info(
        "descent finished after %d iterations, residual %.3e (converged=%s)",
        iterations,
        history[-1],
        converged,
    )
    return report()
