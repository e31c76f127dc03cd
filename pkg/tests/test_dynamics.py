"""Tests for split-step time integration and the propagation check."""

import math

import numpy as np
import pytest

from cqwave.core.data_logger import DataLogger
from cqwave.core.dynamics import (
    EvolutionConfig,
    SplitStepper,
    _shift_fit,
    _shifted,
    evolve,
    nonlinear_phase,
    propagation_test,
    step,
)
from cqwave.core.errors import BlowupDetected
from cqwave.core.grid import ComplexField, embed, laplacian, make_grid

from .helpers import smooth_bump, smooth_field

A = 0.25
LADDER = (1e-2, 5e-3, 2.5e-3)


def rk4_step(grid, f: np.ndarray, dt: float) -> np.ndarray:
    """Classical RK4 on df/dt = -i (Delta f + (|f|^2 - 1)(2A + 1 - 3|f|^2) f)."""

    def rhs(g: np.ndarray) -> np.ndarray:
        return -1j * (laplacian(grid, g) + nonlinear_phase(np.abs(g) ** 2, A) * g)

    k1 = rhs(f)
    k2 = rhs(f + 0.5 * dt * k1)
    k3 = rhs(f + 0.5 * dt * k2)
    k4 = rhs(f + dt * k3)
    return f + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


class TestEvolutionConfig:
    """Tests for EvolutionConfig validation."""

    def test_step_count(self):
        assert EvolutionConfig(dt=0.01, T=0.5).n_steps == 50

    @pytest.mark.parametrize(
        "kwargs", [{"dt": 0.0}, {"T": -1.0}, {"dt": 2.0, "T": 1.0}, {"monitor_stride": 0}]
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            EvolutionConfig(**kwargs)


class TestSplitStepper:
    """Tests for the individual sub-steps."""

    def test_nonlinear_phase_vanishes_at_roots(self):
        rho = np.array([1.0, (2 * A + 1) / 3])
        np.testing.assert_allclose(nonlinear_phase(rho, A), 0.0, atol=1e-15)

    def test_nonlinear_step_preserves_modulus(self, bump_field):
        stepper = SplitStepper(bump_field.grid, A, 0.1)
        out = stepper.nonlinear(bump_field.values, 0.05)
        np.testing.assert_allclose(np.abs(out), np.abs(bump_field.values), rtol=1e-14)

    def test_periodic_plane_wave(self):
        """A unit-modulus plane wave only picks up the Crank-Nicolson factor."""
        grid = make_grid(d=2, N=4.0, L=4.0, n1=32, nt=8, periodic_x1=True)
        k = math.pi * 3 / grid.N
        x1 = grid.mesh()[0]
        psi = ComplexField(grid, np.broadcast_to(np.exp(1j * k * x1), grid.shape))
        dt = 0.01
        lam = 4.0 * math.sin(0.5 * k * grid.h1) ** 2 / grid.h1**2
        factor = (1 + 0.5j * lam * dt) / (1 - 0.5j * lam * dt)
        np.testing.assert_allclose(step(psi, dt, A).values, factor * psi.values, atol=1e-12)

    def test_one_step_against_rk4(self):
        """Constant-modulus plane wave on the torus: the step deviates from RK4 by O(dt^3)."""
        grid = make_grid(d=2, N=4.0, L=4.0, n1=32, nt=8, periodic_x1=True)
        x1, x2 = grid.mesh()
        k1 = math.pi * 3 / grid.N
        k2 = 2.0 * math.pi / grid.L
        f = 1.1 * np.exp(1j * (k1 * x1 + k2 * x2)) * np.ones(grid.shape)
        psi = ComplexField(grid, f)
        deviations = []
        for dt in (0.01, 0.005):
            split = step(psi, dt, A).values
            deviations.append(np.abs(split - rk4_step(grid, f, dt)).max())
        assert deviations[0] < 1e-4
        assert math.log2(deviations[0] / deviations[1]) == pytest.approx(3.0, abs=0.1)

    def test_boundary_rows_stay_one(self, bump_field):
        out = step(bump_field, 0.01, A)
        assert out.boundary_deviation() == 0.0


class TestEvolve:
    """Tests for evolve."""

    def test_constant_state_is_fixed(self, unit_field):
        """psi = 1 survives 10^4 steps unchanged."""
        cfg = EvolutionConfig(dt=0.01, T=100.0, monitor_stride=1000)
        assert cfg.n_steps == 10_000
        final, trajectory = evolve(unit_field, cfg, A)
        assert np.abs(final.values - 1.0).max() < 1e-13
        assert max(abs(e) for e in trajectory.E) < 1e-13

    def test_monitor_schedule(self, bump_field):
        logger = DataLogger()
        seen = []
        cfg = EvolutionConfig(dt=0.01, T=0.1, monitor_stride=3)
        _, trajectory = evolve(
            bump_field, cfg, A, on_monitor=lambda t, f: seen.append(t), data_logger=logger
        )
        assert trajectory.t == pytest.approx([0.0, 0.03, 0.06, 0.09, 0.1])
        assert seen == trajectory.t
        assert len(logger.get_history("evolve", "E")) == 5
        assert set(trajectory.rows()[0]) == {"t", "E", "P", "sup_mod", "bdry_dev"}
        assert max(trajectory.bdry_dev) == 0.0

    def test_progress_callback(self, bump_field):
        steps = []
        evolve(bump_field, EvolutionConfig(dt=0.01, T=0.05), A, progress=steps.append)
        assert steps == [1, 2, 3, 4, 5]

    def test_blowup_detected(self, grid):
        psi = embed(smooth_bump(grid, amplitude=20.0))
        with pytest.raises(BlowupDetected) as exc_info:
            evolve(psi, EvolutionConfig(dt=0.01, T=0.1), A)
        assert exc_info.value.time == 0.0

    def test_three_dimensional_energy(self):
        grid = make_grid(d=3, N=6.0, L=6.0, n1=25, nt=12)
        psi = smooth_field(grid, 0.1)
        _, trajectory = evolve(psi, EvolutionConfig(dt=0.005, T=0.05), A)
        assert trajectory.energy_drift < 1e-3 * max(1.0, abs(trajectory.E[0]))


class TestConvergence:
    """Second-order self-convergence of the Strang splitting."""

    @pytest.fixture(scope="class")
    def ladder_runs(self):
        grid = make_grid(d=2, N=8.0, L=8.0, n1=65, nt=16)
        psi = smooth_field(grid, 0.2)
        runs = []
        for dt in LADDER:
            n_steps = int(round(0.5 / dt))
            cfg = EvolutionConfig(dt=dt, T=0.5, monitor_stride=n_steps // 10)
            runs.append(evolve(psi, cfg, A))
        return runs

    def test_order_two(self, ladder_runs):
        (u1, _), (u2, _), (u3, _) = ladder_runs
        coarse = np.linalg.norm(u1.values - u2.values)
        fine = np.linalg.norm(u2.values - u3.values)
        assert math.log2(coarse / fine) == pytest.approx(2.0, abs=0.2)

    def test_energy_drift_decreases(self, ladder_runs):
        drifts = [
            max(abs(e - traj.E[0]) for e in traj.E) for _, traj in ladder_runs
        ]
        assert drifts[0] > drifts[1] > drifts[2]

    def test_energy_recorded_at_same_times(self, ladder_runs):
        times = [traj.t for _, traj in ladder_runs]
        assert len(times[0]) == 11
        assert times[0] == pytest.approx(times[1])
        assert times[1] == pytest.approx(times[2])


class TestPropagation:
    """Tests for the propagation check and its shift estimate."""

    def test_constant_state_has_no_speed(self, unit_field):
        result = propagation_test(unit_field, 0.5, A, T=0.1)
        assert result.speed is None
        assert result.shape_error == 0.0

    def test_shift_fit_integer_lag(self, bump_field):
        grid = bump_field.grid
        q = bump_field.values - 1.0
        p = np.roll(q, 5, axis=0)
        shift, lag = _shift_fit(grid, q, p)
        assert lag == 5
        assert shift == pytest.approx(5 * grid.h1, abs=1e-9)

    def test_shifted_pads_with_zeros(self):
        p = np.arange(1.0, 7.0).reshape(6, 1)
        np.testing.assert_array_equal(_shifted(p, 2).ravel(), [3, 4, 5, 6, 0, 0])
        np.testing.assert_array_equal(_shifted(p, -1).ravel(), [0, 1, 2, 3, 4, 5])

    def test_small_bump_moves_little(self, grid):
        psi = smooth_field(grid, 0.01)
        result = propagation_test(psi, 0.0, A, T=0.2)
        assert result.speed is not None
        assert len(result.times) == len(result.shifts) >= 2
        assert math.isfinite(result.shape_error)
