"""Inexact Newton refinement with GMRES on the linearised residual."""

import logging
from dataclasses import replace
from typing import Any, Callable, Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from cqwave.core.data_logger import DataLogger
from cqwave.core.errors import Divergence, LinearSolveFailure
from cqwave.core.functionals import diagnose, el_residual_values, hessian_apply_values
from cqwave.core.grid import ComplexField, Grid, norm
from cqwave.core.solvers.config import SolveReport, SolverConfig
from cqwave.core.solvers.descent import descend, make_preconditioner

logger = logging.getLogger(__name__)

DIVERGENCE_FACTOR = 10.0
DIVERGENCE_WINDOW = 5


Packer = Callable[[np.ndarray], np.ndarray]


def _packer(grid: Grid) -> tuple[Packer, Packer, int]:
    """Maps between complex interior arrays and real vectors [Re; Im]."""
    interior_shape = (grid.n1 - 2,) + grid.shape[1:]
    size = int(np.prod(interior_shape))

    def pack(z: np.ndarray) -> np.ndarray:
        inner_rows = z[1:-1]
        return np.concatenate([inner_rows.real.ravel(), inner_rows.imag.ravel()])

    def unpack(x: np.ndarray) -> np.ndarray:
        out = np.zeros(grid.shape, dtype=np.complex128)
        out[1:-1] = (x[:size] + 1j * x[size:]).reshape(interior_shape)
        return out

    return pack, unpack, 2 * size


def newton_step(
    grid: Grid, f: np.ndarray, r: np.ndarray, c: float, A: float, cfg: SolverConfig
) -> np.ndarray:
    """Solve L_psi(delta) = -R(psi).

    Raises:
        LinearSolveFailure: GMRES did not reach ``cfg.linear_tol``
    """
    pack, unpack, n = _packer(grid)
    precond = make_preconditioner(ComplexField(grid, f), A, cfg)
    op = LinearOperator(
        (n, n),
        matvec=lambda x: pack(hessian_apply_values(grid, f, unpack(x), c, A)),
        dtype=np.float64,
    )
    m = LinearOperator((n, n), matvec=lambda x: pack(precond.apply(unpack(x))), dtype=np.float64)
    x, info = gmres(
        op,
        -pack(r),
        rtol=cfg.linear_tol,
        atol=0.0,
        restart=cfg.linear_restart,
        maxiter=cfg.linear_maxiter,
        M=m,
    )
    if info != 0:
        raise LinearSolveFailure(f"GMRES did not converge (info={info})", info=info)
    return unpack(x)


def newton_refine(
    psi: ComplexField,
    c: float,
    A: float,
    cfg: SolverConfig,
    data_logger: Optional[DataLogger] = None,
    run: str = "newton",
) -> SolveReport:
    """Refine a near-solution; falls back to descent when Newton cannot proceed.

    Starting residuals above ``cfg.switchover`` and linear-solve failures both
    hand the current iterate to ``descend`` and set ``fallback_used``.

    Raises:
        Divergence: the residual grew tenfold over five iterations
    """
    data_logger = data_logger or DataLogger()
    grid = psi.grid
    f = psi.with_boundary().values.copy()
    r = el_residual_values(grid, f, c, A)
    history = [norm(grid, r)]
    data_logger.log_metrics(run, 0, residual_norm=history[0])
    iterations = 0

    def report(converged: bool, method: str = "newton", **kw: Any) -> SolveReport:
        field = ComplexField(grid, f)
        return SolveReport(
            field=field,
            iterations=iterations,
            residual_history=list(history),
            converged=converged,
            diagnostics=diagnose(field, c, A),
            method=method,
            **kw,
        )

    def fall_back(reason: str) -> SolveReport:
        logger.info("newton falls back to descent: %s", reason)
        data_logger.log_note(run, iterations, f"fallback: {reason}")
        fallback = descend(
            ComplexField(grid, f), c, A, cfg, data_logger=data_logger, run=f"{run}-fallback"
        )
        return replace(
            fallback,
            iterations=iterations + fallback.iterations,
            residual_history=history + fallback.residual_history[1:],
            method="newton+descent",
            fallback_used=True,
            message=reason,
        )

    if history[0] > cfg.switchover:
        return fall_back(
            f"residual {history[0]:.3e} above switchover {cfg.switchover:.3e}"
        )

    while history[-1] > cfg.tol_residual and iterations < cfg.newton_max_iters:
        try:
            delta = newton_step(grid, f, r, c, A, cfg)
        except LinearSolveFailure as exc:
            return fall_back(str(exc))
        s = 1.0
        while True:
            trial = f + s * delta
            r_trial = el_residual_values(grid, trial, c, A)
            res_trial = norm(grid, r_trial)
            if res_trial <= (1.0 - 1e-4 * s) * history[-1] or s <= 1.0 / 64.0:
                break
            s *= 0.5
        iterations += 1
        f, r = trial, r_trial
        history.append(res_trial)
        data_logger.log_metrics(run, iterations, residual_norm=res_trial, step=s)
        logger.debug("newton %d: residual %.3e step %.3g", iterations, res_trial, s)
        if (
            len(history) > DIVERGENCE_WINDOW
            and history[-1] > DIVERGENCE_FACTOR * history[-1 - DIVERGENCE_WINDOW]
        ):
            raise Divergence(
                f"newton residual grew to {history[-1]:.3e}", report=report(False)
            )

    converged = history[-1] <= cfg.tol_residual
    logger.info(
        "newton finished after %d iterations, residual %.3e (converged=%s)",
        iterations,
        history[-1],
        converged,
    )
    return report(converged)
