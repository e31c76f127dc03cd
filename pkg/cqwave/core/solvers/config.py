"""Solver configuration and outcome records."""

from dataclasses import dataclass

from cqwave.core.functionals import Diagnostics
from cqwave.core.grid import ComplexField

PRECONDITIONERS = ("inverse_helmholtz", "none")


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for descent, Newton refinement and continuation.

    ``switchover`` is the residual norm below which Newton takes over from
    descent.
    """

    max_iters: int = 500
    step0: float = 1.0
    tol_residual: float = 1e-8
    backtracking: float = 0.5
    preconditioner: str = "inverse_helmholtz"
    armijo: float = 1e-4
    min_step: float = 1e-12
    switchover: float = 1e-3
    newton_max_iters: int = 30
    linear_tol: float = 1e-10
    linear_restart: int = 50
    linear_maxiter: int = 20

    def __post_init__(self) -> None:
        if self.max_iters < 0 or self.newton_max_iters < 0:
            raise ValueError("iteration budgets must be nonnegative")
        if not 0.0 < self.backtracking < 1.0:
            raise ValueError(
                f"backtracking must be between 0 and 1, got {self.backtracking}"
            )
        if self.step0 <= 0.0 or self.tol_residual <= 0.0:
            raise ValueError("step0 and tol_residual must be positive")
        if self.preconditioner not in PRECONDITIONERS:
            raise ValueError(
                f"preconditioner must be one of {PRECONDITIONERS}, "
                f"got {self.preconditioner!r}"
            )


@dataclass
class SolveReport:
    field: ComplexField
    iterations: int
    residual_history: list[float]
    converged: bool
    diagnostics: Diagnostics
    method: str
    fallback_used: bool = False
    message: str = ""

    @property
    def residual_norm(self) -> float:
        return self.diagnostics.residual_norm
