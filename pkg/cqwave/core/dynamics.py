"""Strang split-step integration of i dPsi/dt - Laplace Psi = Psi (|Psi|^2 - 1)(2A + 1 - 3|Psi|^2).

The equation is advanced as i dPsi/dt = Laplace Psi + Psi n(|Psi|^2) with
n(rho) = (rho - 1)(2A + 1 - 3 rho). The nonlinear part is an exact pointwise
phase rotation. The linear part acts on delta = Psi - 1 (zero on the Dirichlet
rows): transverse modes are rotated exactly and x1 is advanced by
Crank-Nicolson, both diagonal in the sine (x1) x Fourier (transverse) basis.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import fft

from cqwave.core.data_logger import DataLogger
from cqwave.core.errors import BlowupDetected
from cqwave.core.functionals import energy, momentum
from cqwave.core.grid import ComplexField, Grid
from cqwave.core.params import linf_constants
from cqwave.core.solvers.preconditioner import dirichlet_eigenvalues, from_spectral, to_spectral

logger = logging.getLogger(__name__)

BLOWUP_FACTOR = 10.0


@dataclass(frozen=True)
class EvolutionConfig:
    dt: float = 1e-2
    T: float = 1.0
    monitor_stride: int = 10

    def __post_init__(self) -> None:
        if self.dt <= 0.0 or self.T <= 0.0:
            raise ValueError(f"dt and T must be positive, got dt={self.dt}, T={self.T}")
        if self.dt > self.T:
            raise ValueError(f"dt must not exceed T, got dt={self.dt}, T={self.T}")
        if self.monitor_stride < 1:
            raise ValueError(
                f"monitor_stride must be at least 1, got {self.monitor_stride}"
            )

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.T / self.dt)))


@dataclass
class TrajectoryDiagnostics:
    t: list[float] = field(default_factory=list)
    E: list[float] = field(default_factory=list)
    P: list[float] = field(default_factory=list)
    sup_mod: list[float] = field(default_factory=list)
    bdry_dev: list[float] = field(default_factory=list)

    def record(self, t: float, psi: ComplexField, A: float) -> None:
        self.t.append(t)
        self.E.append(energy(psi, A))
        self.P.append(momentum(psi))
        self.sup_mod.append(psi.sup_modulus)
        self.bdry_dev.append(psi.boundary_deviation())

    def rows(self) -> list[dict[str, float]]:
        return [
            {"t": t, "E": e, "P": p, "sup_mod": s, "bdry_dev": b}
            for t, e, p, s, b in zip(self.t, self.E, self.P, self.sup_mod, self.bdry_dev)
        ]

    @property
    def energy_drift(self) -> float:
        return abs(self.E[-1] - self.E[0])

    @property
    def momentum_drift(self) -> float:
        return abs(self.P[-1] - self.P[0])


def nonlinear_phase(rho: np.ndarray, A: float) -> np.ndarray:
    return (rho - 1.0) * (2.0 * A + 1.0 - 3.0 * rho)


class SplitStepper:
    """Precomputed Strang step for a fixed grid, A and dt."""

    def __init__(self, grid: Grid, A: float, dt: float):
        self.grid = grid
        self.A = A
        self.dt = dt
        transverse = np.exp(1j * grid.kt_sq * dt)
        if grid.periodic_x1:
            k1 = 2.0 * np.pi * fft.fftfreq(grid.n1, d=grid.h1)
            lam = 4.0 / grid.h1**2 * np.sin(0.5 * k1 * grid.h1) ** 2
            lam = lam.reshape((grid.n1,) + (1,) * (grid.d - 1))
        else:
            lam = dirichlet_eigenvalues(grid)
        crank_nicolson = (1.0 + 0.5j * dt * lam) / (1.0 - 0.5j * dt * lam)
        self._linear = crank_nicolson * transverse

    def nonlinear(self, f: np.ndarray, tau: float) -> np.ndarray:
        rho = f.real**2 + f.imag**2
        return f * np.exp(-1j * tau * nonlinear_phase(rho, self.A))

    def linear(self, f: np.ndarray) -> np.ndarray:
        if self.grid.periodic_x1:
            return fft.ifftn(self._linear * fft.fftn(f))
        out = np.ones_like(f)
        delta = f[1:-1] - 1.0
        out[1:-1] += from_spectral(self.grid, self._linear * to_spectral(self.grid, delta))
        return out

    def step(self, f: np.ndarray) -> np.ndarray:
        half = 0.5 * self.dt
        return self.nonlinear(self.linear(self.nonlinear(f, half)), half)


def step(psi: ComplexField, dt: float, A: float) -> ComplexField:
    return psi.with_values(SplitStepper(psi.grid, A, dt).step(psi.values))


def _check_blowup(t: float, f: np.ndarray, bound: float) -> None:
    sup = float(np.abs(f).max())
    if not sup <= bound:
        raise BlowupDetected(time=t, sup_mod=sup, bound=bound)


def evolve(
    psi: ComplexField,
    cfg: EvolutionConfig,
    A: float,
    on_monitor: Optional[Callable[[float, ComplexField], None]] = None,
    data_logger: Optional[DataLogger] = None,
    progress: Optional[Callable[[int], None]] = None,
) -> tuple[ComplexField, TrajectoryDiagnostics]:
    """Advance psi to T; records diagnostics at t = 0, every stride and t = T.

    Raises:
        BlowupDetected: sup |psi| exceeds 10 C_A
    """
    grid = psi.grid
    bound = BLOWUP_FACTOR * linf_constants(A, 0.0).C_A
    stepper = SplitStepper(grid, A, cfg.dt)
    trajectory = TrajectoryDiagnostics()
    f = psi.values.copy()
    n_steps = cfg.n_steps

    def monitor(k: int) -> None:
        t = k * cfg.dt
        current = ComplexField(grid, f)
        trajectory.record(t, current, A)
        if data_logger is not None:
            data_logger.log_metrics(
                "evolve", k, t=t, E=trajectory.E[-1], P=trajectory.P[-1]
            )
        if on_monitor is not None:
            on_monitor(t, current)

    _check_blowup(0.0, f, bound)
    monitor(0)
    for k in range(1, n_steps + 1):
        f = stepper.step(f)
        _check_blowup(k * cfg.dt, f, bound)
        if k % cfg.monitor_stride == 0 or k == n_steps:
            monitor(k)
        if progress is not None:
            progress(k)
    logger.info(
        "evolved %d steps to t=%.6g: energy drift %.3e, momentum drift %.3e",
        n_steps,
        n_steps * cfg.dt,
        trajectory.energy_drift,
        trajectory.momentum_drift,
    )
    return ComplexField(grid, f), trajectory


# --- propagation -------------------------------------------------------


@dataclass(frozen=True)
class PropagationResult:
    speed: Optional[float]
    shape_error: float
    times: tuple[float, ...]
    shifts: tuple[float, ...]


def _shift_fit(grid: Grid, q: np.ndarray, p: np.ndarray) -> tuple[float, int]:
    """Sub-grid x1 shift s maximising sum Re(conj(q(x)) p(x + s)), and the best lag."""
    n = grid.n1
    axes = grid.transverse_axes
    corr = fft.ifft(
        np.conj(fft.fft(q, n=2 * n, axis=0)) * fft.fft(p, n=2 * n, axis=0), axis=0
    )
    c = corr.real.sum(axis=axes)
    idx = int(np.argmax(c))
    lag = idx if idx < n else idx - 2 * n
    left, mid, right = c[(idx - 1) % (2 * n)], c[idx], c[(idx + 1) % (2 * n)]
    denom = left - 2.0 * mid + right
    frac = 0.5 * (left - right) / denom if denom < 0.0 else 0.0
    return (lag + frac) * grid.h1, lag


def _shifted(p: np.ndarray, lag: int) -> np.ndarray:
    """p(x + lag h1) with zero outside the slab."""
    out = np.zeros_like(p)
    if lag >= 0:
        out[: p.shape[0] - lag] = p[lag:]
    else:
        out[-lag:] = p[: p.shape[0] + lag]
    return out


def propagation_test(
    psi_tw: ComplexField,
    c: float,
    A: float,
    T: float,
    cfg: Optional[EvolutionConfig] = None,
) -> PropagationResult:
    """Evolve a traveling-wave candidate and measure its speed and shape drift."""
    cfg = cfg or EvolutionConfig(dt=min(1e-2, T / 10.0), T=T, monitor_stride=10)
    grid = psi_tw.grid
    q = psi_tw.values - 1.0
    q_norm = float(np.sqrt(np.sum(np.abs(q) ** 2)))
    times: list[float] = []
    shifts: list[float] = []
    errors: list[float] = []

    def on_monitor(t: float, field_t: ComplexField) -> None:
        if q_norm == 0.0:
            errors.append(float(np.sqrt(np.sum(np.abs(field_t.values - 1.0) ** 2))))
            return
        p = field_t.values - 1.0
        s, lag = _shift_fit(grid, q, p)
        times.append(t)
        shifts.append(s)
        errors.append(
            min(
                float(np.sqrt(np.sum(np.abs(_shifted(p, m) - q) ** 2))) / q_norm
                for m in (lag - 1, lag, lag + 1)
            )
        )

    evolve(psi_tw, cfg, A, on_monitor=on_monitor)
    speed = None
    if q_norm > 0.0 and len(times) >= 2:
        speed = float(np.polyfit(times, shifts, 1)[0])
    logger.info("propagation at c=%.6g: measured speed %s", c, speed)
    return PropagationResult(
        speed=speed,
        shape_error=max(errors) if errors else 0.0,
        times=tuple(times),
        shifts=tuple(shifts),
    )
