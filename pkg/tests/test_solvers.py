"""Tests for descent, Newton refinement, the mountain-pass construction and continuation."""

from dataclasses import replace

import numpy as np
import pytest

from cqwave.core.data_logger import DataLogger
from cqwave.core.errors import Divergence, FamilyDimensionMismatch, NotFound, Stagnation
from cqwave.core.functionals import hessian_apply_values, lagrangian, residual_norm
from cqwave.core.grid import ComplexField, Grid, PerturbationField, embed, make_grid
from cqwave.core.params import sound_speed
from cqwave.core.solvers import (
    AnsatzSpec,
    ContinuationPoint,
    SolverConfig,
    continuation,
    continuity_gaps,
    descend,
    find_negative_endpoint,
    golden_section_max,
    make_ansatz,
    newton_refine,
    path_max,
    path_point,
    path_values,
    solve,
    winding_number,
)
from cqwave.core.solvers.ansatz import slab_window
from cqwave.core.solvers.preconditioner import HelmholtzPreconditioner
from cqwave.core.verify import check_linf, check_pohozaev

from .helpers import smooth_bump, smooth_field

A, C = 0.25, 0.3


def deviation_from_one(psi: ComplexField) -> float:
    return float(np.abs(psi.values - 1.0).max())


def deep_dip(grid: Grid) -> ComplexField:
    """psi0 = (x1/N)^8, below the inner root over most of the slab, so I^c(psi0) < 0."""
    window = np.broadcast_to(slab_window(grid), grid.shape).astype(complex)
    return embed(PerturbationField(grid, -window))


class TestSolverConfig:
    """Tests for SolverConfig validation."""

    def test_defaults(self):
        cfg = SolverConfig()
        assert cfg.preconditioner == "inverse_helmholtz"
        assert cfg.switchover == 1e-3

    @pytest.mark.parametrize(
        "kwargs",
        [{"backtracking": 1.0}, {"preconditioner": "jacobi"}, {"step0": 0.0}, {"max_iters": -1}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SolverConfig(**kwargs)


class TestPreconditioner:
    """Tests for the inverse Helmholtz operator."""

    def test_inverts_linearisation_at_one(self, grid):
        """P applied to L_1 phi at c = 0 gives -phi."""
        phi = smooth_bump(grid).values
        lphi = hessian_apply_values(grid, np.ones(grid.shape, dtype=complex), phi, 0.0, A)
        recovered = HelmholtzPreconditioner(grid, A).apply(lphi)
        np.testing.assert_allclose(recovered, -phi, atol=1e-12)

    def test_rejects_periodic_grid(self):
        grid = make_grid(d=2, N=4.0, L=4.0, n1=16, nt=8, periodic_x1=True)
        with pytest.raises(ValueError):
            HelmholtzPreconditioner(grid, A)


class TestDescent:
    """Tests for preconditioned descent on Omega = |R|^2 / 2."""

    def test_residual_never_increases(self, grid):
        report = descend(smooth_field(grid, 0.05), C, A, SolverConfig(max_iters=15))
        history = report.residual_history
        assert len(history) == report.iterations + 1
        assert all(b <= a for a, b in zip(history, history[1:]))
        assert history[-1] < history[0]
        assert report.method == "descent"

    def test_converged_start(self, unit_field):
        report = descend(unit_field, C, A, SolverConfig())
        assert report.converged
        assert report.iterations == 0

    def test_unpreconditioned(self, grid):
        cfg = SolverConfig(max_iters=5, preconditioner="none")
        report = descend(smooth_field(grid, 0.05), C, A, cfg)
        assert report.residual_history[-1] <= report.residual_history[0]


class TestNewton:
    """Tests for Newton refinement and its fallback."""

    def test_quadratic_convergence_near_one(self, grid):
        report = newton_refine(smooth_field(grid, 1e-5), C, A, SolverConfig(tol_residual=1e-10))
        assert report.converged
        assert report.method == "newton"
        assert not report.fallback_used
        assert report.iterations <= 5
        assert deviation_from_one(report.field) < 1e-8

    def test_linear_failure_falls_back(self, grid):
        cfg = SolverConfig(linear_maxiter=1, linear_restart=1, linear_tol=1e-14, max_iters=5)
        report = newton_refine(smooth_field(grid, 1e-5), C, A, cfg)
        assert report.fallback_used
        assert report.method == "newton+descent"
        assert "GMRES" in report.message

    def test_fallback_is_logged(self, grid):
        cfg = SolverConfig(linear_maxiter=1, linear_restart=1, linear_tol=1e-14, max_iters=5)
        data_logger = DataLogger()
        newton_refine(smooth_field(grid, 1e-5), C, A, cfg, data_logger=data_logger)
        notes = data_logger.note_rows()
        assert notes[0]["run"] == "newton"
        assert notes[0]["note"].startswith("fallback: GMRES")
        assert "newton-fallback" in data_logger.runs()
        fallback_rows = data_logger.rows("newton-fallback")
        assert all("omega" in row for row in fallback_rows)

    def test_far_start_falls_back(self, grid):
        cfg = SolverConfig(switchover=1e-12, max_iters=3)
        report = newton_refine(smooth_field(grid, 1e-3), C, A, cfg)
        assert report.fallback_used
        assert "switchover" in report.message


class TestSolve:
    """Tests for the descent-then-Newton pipeline and continuation."""

    def test_pipeline_converges_to_constant(self, grid):
        report = solve(smooth_field(grid, 0.05), C, A, SolverConfig())
        assert report.converged
        assert report.residual_norm <= 1e-8
        assert report.method.startswith("descent")
        assert deviation_from_one(report.field) < 1e-6

    def test_solution_satisfies_linf_bound(self, grid):
        report = solve(smooth_field(grid, 0.05), C, A, SolverConfig())
        assert check_linf(report.field, A, C, residual=report.residual_norm).ok

    def test_continuation_from_constant(self, grid):
        result = continuation(0.1, 0.3, 3, A, grid)
        assert [p.c for p in result.points] == pytest.approx([0.1, 0.2, 0.3])
        assert all(p.ok and p.report.converged for p in result.points)
        assert result.gaps == []
        assert continuity_gaps(result.points, 1e-8) == []
        assert result.points[0].as_row()["converged"]

    def test_continuation_rejects_no_steps(self, grid):
        with pytest.raises(ValueError):
            continuation(0.1, 0.2, 0, A, grid)

    @pytest.mark.parametrize("c_from, c_to", [(0.0, 0.2), (0.1, 2.0), (-0.1, 0.2)])
    def test_continuation_rejects_speeds_outside_subsonic_range(self, grid, c_from, c_to):
        with pytest.raises(ValueError, match="continuation speeds"):
            continuation(c_from, c_to, 2, A, grid)

    def test_continuity_gaps_flag_jumps(self, unit_field):
        report = solve(unit_field, C, A, SolverConfig())
        jumped = replace(report, diagnostics=replace(report.diagnostics, E=5.0))
        points = [
            ContinuationPoint(c=0.0, report=report),
            ContinuationPoint(c=0.1, error="stagnated"),
            ContinuationPoint(c=0.2, report=jumped),
            ContinuationPoint(c=0.3, report=jumped),
        ]
        assert continuity_gaps(points, 1.0) == [2]
        assert not points[1].ok
        assert points[1].as_row()["error"] == "stagnated"


class TestAnsatz:
    """Tests for the initial perturbations."""

    @pytest.mark.parametrize("family", ["amplitude_dip", "vortex_pair", "bubble"])
    def test_zero_on_dirichlet_rows(self, grid, family):
        phi = make_ansatz(AnsatzSpec(family=family), grid)
        assert not np.any(phi.values[0]) and not np.any(phi.values[-1])

    def test_vortex_pair_needs_two_dimensions(self):
        grid = make_grid(d=3, N=4.0, L=4.0, n1=16, nt=8)
        with pytest.raises(FamilyDimensionMismatch):
            make_ansatz(AnsatzSpec(family="vortex_pair"), grid)

    def test_vortex_pair_winding(self):
        grid = make_grid(d=2, N=8.0, L=16.0, n1=65, nt=64)
        spec = AnsatzSpec(family="vortex_pair", amplitude=1.0, width=0.5, separation=6.0)
        psi = embed(make_ansatz(spec, grid))
        assert winding_number(psi, (0.0, 3.0), 1.0) == 1
        assert winding_number(psi, (0.0, -3.0), 1.0) == -1
        assert winding_number(psi, (4.0, 0.0), 1.0) == 0

    def test_bubble_dips_to_inner_root(self, grid):
        spec = AnsatzSpec.bubble(A)
        psi = embed(make_ansatz(spec, grid))
        assert np.abs(psi.values).min() == pytest.approx(np.sqrt(A), abs=1e-3)

    def test_invalid_family(self):
        with pytest.raises(ValueError):
            AnsatzSpec(family="soliton")


class TestMountainPass:
    """Tests for the endpoint search and the path maximum."""

    def test_path_decomposition(self, grid):
        psi0 = embed(make_ansatz(AnsatzSpec(), grid))
        ts = np.linspace(0.0, 2.0, 7)
        direct = [lagrangian(path_point(psi0, t), C, A) for t in ts]
        np.testing.assert_allclose(path_values(psi0, C, A, ts), direct, rtol=1e-10, atol=1e-14)

    def test_golden_section(self):
        t, value = golden_section_max(lambda x: -((x - 0.3) ** 2), 0.0, 0.25, 1.0)
        assert t == pytest.approx(0.3, abs=1e-6)
        assert value == pytest.approx(0.0, abs=1e-10)

    def test_path_max_on_flat_path(self, unit_field):
        """A constant path reports its leftmost point."""
        t_peak, chi = path_max(unit_field, C, A)
        assert t_peak == 0.0
        assert chi == pytest.approx(0.0, abs=1e-14)

    def test_path_max_bounds_samples(self, grid):
        psi0 = embed(make_ansatz(AnsatzSpec(), grid))
        t_peak, chi = path_max(psi0, C, A, n_t=16)
        assert 0.0 <= t_peak <= 1.0
        assert chi >= path_values(psi0, C, A, np.linspace(0.0, 1.0, 16)).max() - 1e-12

    def test_zero_budget_reports_not_found(self, grid):
        with pytest.raises(NotFound) as exc_info:
            find_negative_endpoint(1.0, A, grid, "amplitude_dip", budget=0)
        assert exc_info.value.best_lagrangian == np.inf

    def test_endpoint_near_sound_speed(self, grid):
        """Either a genuine negative endpoint or a reported NotFound."""
        c = 0.95 * sound_speed(A)
        try:
            result = find_negative_endpoint(c, A, grid, "amplitude_dip", budget=200)
        except NotFound as exc:
            assert np.isfinite(exc.best_lagrangian)
        else:
            assert result.lagrangian < 0.0
            assert result.evaluations <= 200
            assert result.psi0.boundary_deviation() == 0.0
            assert lagrangian(result.psi0, c, A) == pytest.approx(result.lagrangian, rel=1e-10)

    def test_path_max_with_negative_endpoint(self, grid):
        psi0 = deep_dip(grid)
        end = lagrangian(psi0, C, A)
        assert end < 0.0
        t_peak, chi = path_max(psi0, C, A)
        assert 0.0 < t_peak < 1.0
        assert chi >= max(0.0, end)
        assert chi > 0.0
        assert chi == pytest.approx(lagrangian(path_point(psi0, t_peak), C, A), rel=1e-10)

    def test_solve_from_path_peak(self, grid):
        """The peak either converges within the bounds or is reported as stagnated."""
        psi0 = deep_dip(grid)
        t_peak, _ = path_max(psi0, C, A)
        start = path_point(psi0, t_peak)
        try:
            report = solve(start, C, A, SolverConfig(max_iters=300))
        except Stagnation as exc:
            assert exc.report.residual_norm <= residual_norm(start, C, A)
            return
        except Divergence as exc:
            assert exc.report is not None
            return
        assert np.isfinite(report.residual_norm)
        if report.converged and deviation_from_one(report.field) > 1e-3:
            assert check_linf(report.field, A, C, residual=report.residual_norm).passed
            poho = check_pohozaev(
                report.field, C, A, tol=2.0 * grid.h1**2, residual=report.residual_norm
            )
            assert poho.ok
        else:
            assert check_linf(report.field, A, C, residual=report.residual_norm).ok
