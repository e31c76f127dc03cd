"""Tests for the discrete Lagrangian and its variations."""

import math

import numpy as np
import pytest

from cqwave.core.functionals import (
    ab_split,
    diagnose,
    el_residual,
    el_residual_values,
    energy,
    first_variation,
    hessian_apply,
    CORE_IDENTITIES,
    identity_deviations,
    identity_suite,
    kinetic_energy,
    kopv_energy,
    lagrangian,
    lagrangian_direct,
    momentum,
    nehari_functional,
    nonlinear_coefficient,
    pohozaev_residual,
    raw_energy,
    residual_norm,
    sampled_identity_deviations,
    second_variation,
)
from cqwave.core.grid import (
    ComplexField,
    PerturbationField,
    embed,
    inner,
    integrate,
    make_grid,
    random_perturbation,
)
from cqwave.core.params import CubicQuinticParams, kopv_normalize, kopv_reduce

from .helpers import smooth_bump, x1_profile

STEP = 1e-3
PAIRS = 10
A, C = 0.25, 0.8


def shifted(psi: ComplexField, phi: PerturbationField, t: float) -> ComplexField:
    return psi.with_values(psi.values + t * phi.values)


def first_difference(f, t: float = STEP) -> float:
    return (f(-2 * t) - 8 * f(-t) + 8 * f(t) - f(2 * t)) / (12 * t)


def second_difference(f, t: float = STEP) -> float:
    return (-f(2 * t) + 16 * f(t) - 30 * f(0.0) + 16 * f(-t) - f(-2 * t)) / (12 * t * t)


def random_pairs(grid, rng):
    for _ in range(PAIRS):
        psi = embed(random_perturbation(grid, rng, 0.3))
        phi = random_perturbation(grid, rng, 0.1)
        yield psi, phi


class TestVariations:
    """first_variation and second_variation against finite differences of I^c."""

    def test_first_variation(self, fd_grid, rng):
        for psi, phi in random_pairs(fd_grid, rng):
            exact = first_variation(psi, phi, C, A)
            fd = first_difference(lambda t: lagrangian(shifted(psi, phi, t), C, A))
            assert fd == pytest.approx(exact, rel=1e-6)

    def test_second_variation(self, fd_grid, rng):
        for psi, phi in random_pairs(fd_grid, rng):
            exact = second_variation(psi, phi, C, A)
            fd = second_difference(lambda t: lagrangian(shifted(psi, phi, t), C, A))
            assert fd == pytest.approx(exact, rel=1e-5)

    def test_residual_duality(self, fd_grid, rng):
        """(I^c)'(psi) phi = -<R(psi), phi>."""
        for psi, phi in random_pairs(fd_grid, rng):
            r, _ = el_residual(psi, C, A)
            assert first_variation(psi, phi, C, A) == pytest.approx(
                -inner(fd_grid, r.values, phi.values), rel=1e-10
            )

    def test_hessian_duality(self, fd_grid, rng):
        """(I^c)''(psi)(phi, phi) = -<L_psi phi, phi>."""
        for psi, phi in random_pairs(fd_grid, rng):
            lphi = hessian_apply(psi, phi, C, A)
            assert second_variation(psi, phi, C, A) == pytest.approx(
                -inner(fd_grid, lphi.values, phi.values), rel=1e-10
            )

    def test_residual_zero_on_boundary(self, bump_field):
        r, norm = el_residual(bump_field, C, A)
        assert not np.any(r.values[0]) and not np.any(r.values[-1])
        assert norm == pytest.approx(residual_norm(bump_field, C, A))


class TestConstantState:
    """psi = 1 is an exact critical point with zero Lagrangian."""

    def test_functionals_vanish(self, unit_field):
        assert energy(unit_field, A) == pytest.approx(0.0, abs=1e-14)
        assert momentum(unit_field) == 0.0
        assert lagrangian(unit_field, C, A) == pytest.approx(0.0, abs=1e-14)
        assert pohozaev_residual(unit_field, C, A) == pytest.approx(0.0, abs=1e-14)
        assert nehari_functional(unit_field, C, A) == pytest.approx(0.0, abs=1e-14)

    def test_residual_vanishes(self, unit_field):
        assert residual_norm(unit_field, C, A) < 1e-13

    def test_energy_expansion(self, grid):
        """E(1 + eps b) = eps^2 (1/2 |grad b|^2 + 2(1 - A) |Re b|^2) + O(eps^3)."""
        bump = smooth_bump(grid, amplitude=1.0)
        quadratic = kinetic_energy(embed(bump)) + integrate(
            grid, 2.0 * (1.0 - A) * bump.values.real**2
        )
        half_q = 0.5 * second_variation(ComplexField.constant(grid), bump, 0.0, A)
        assert half_q == pytest.approx(quadratic, rel=1e-10)
        errors = []
        for eps in (1e-3, 5e-4):
            psi = embed(PerturbationField(grid, eps * bump.values))
            errors.append(abs(energy(psi, A) / eps**2 - quadratic))
        assert math.log2(errors[0] / errors[1]) == pytest.approx(1.0, abs=0.1)

    def test_nonlinear_term_vanishes_on_inner_root_patch(self, grid):
        """|psi|^2 = (2A + 1)/3 away from the Dirichlet rows leaves no residual there."""
        modulus = math.sqrt((2.0 * A + 1.0) / 3.0)
        rho = np.array([modulus**2])
        assert nonlinear_coefficient(rho, A)[0] == pytest.approx(0.0, abs=1e-15)
        values = np.full(grid.shape, modulus * np.exp(0.7j))
        psi = ComplexField(grid, values).with_boundary()
        r = el_residual_values(grid, psi.values, C, A)
        assert np.abs(r[2:-2]).max() < 1e-13
        assert np.abs(r[1]).max() > 0.1


class TestFunctionals:
    """Momentum, Lagrangian forms and diagnostics."""

    def test_momentum_of_x1_profile(self):
        """P(1 + a + i b) = -L int b' a for transversally uniform fields."""
        grid = make_grid(d=2, N=10.0, L=4.0, n1=801, nt=8)
        psi = x1_profile(grid, amplitude=0.3)
        # a = 0.3 g, b = 0.15 x g with g = exp(-x^2/2)
        expected = -grid.L * 0.045 * math.sqrt(math.pi) / 2.0
        assert momentum(psi) == pytest.approx(expected, rel=1e-3)

    def test_momentum_sign_under_conjugation(self, bump_field):
        conj = bump_field.with_values(np.conj(bump_field.values))
        assert momentum(conj) == pytest.approx(-momentum(bump_field), rel=1e-12)
        assert momentum(bump_field) != 0.0

    def test_lagrangian_forms_agree(self, bump_field):
        assert lagrangian_direct(bump_field, C, A) == pytest.approx(
            lagrangian(bump_field, C, A), rel=1e-12
        )

    def test_diagnostics_consistent(self, bump_field):
        diag = diagnose(bump_field, C, A)
        assert diag.Ic == pytest.approx(diag.E - C * diag.P, rel=1e-12)
        assert diag.Apoho + diag.Bpoho == pytest.approx(diag.Ic, rel=1e-12)
        assert diag.pohozaev_residual == pytest.approx(-diag.Apoho + diag.Bpoho, rel=1e-12)
        assert diag.residual_norm == pytest.approx(residual_norm(bump_field, C, A))
        assert diag.sup_mod == bump_field.sup_modulus
        assert set(diag.as_row()) == {
            "E", "P", "Ic", "Apoho", "Bpoho", "residual_norm", "sup_mod", "pohozaev_residual"
        }

    def test_pohozaev_dimension_override(self, bump_field):
        a_part, b_part = ab_split(bump_field, C, A)
        assert pohozaev_residual(bump_field, C, A, d=3) == pytest.approx(2.0 * b_part)
        assert a_part > 0.0


class TestNormalisations:
    """Energies of the unscaled and alternative normalisations."""

    @pytest.mark.parametrize("A_value", [0.1, 0.25, 0.6])
    def test_raw_energy_of_reduced_form(self, bump_field, A_value):
        p = CubicQuinticParams(2.0 * A_value + 1.0, 2.0 * A_value + 4.0, 3.0)
        assert raw_energy(bump_field, p) == pytest.approx(
            energy(bump_field, A_value), rel=1e-10
        )

    def test_kopv_energy(self, bump_field):
        p = kopv_normalize(CubicQuinticParams(0.9, 2.0, 1.0))
        assert kopv_energy(bump_field, kopv_reduce(p)) == pytest.approx(
            raw_energy(bump_field, p), rel=1e-10
        )


class TestIdentities:
    """Algebraic splitting identities."""

    def test_suite_below_tolerance(self):
        assert identity_suite(10_000, seed=0) < 1e-12

    def test_every_identity_checked(self, rng):
        u, v, a = rng.uniform(-3, 3, 100), rng.uniform(-3, 3, 100), rng.uniform(0, 1, 100)
        deviations = identity_deviations(u, v, a)
        assert set(CORE_IDENTITIES) <= set(deviations)
        assert max(deviations[name] for name in CORE_IDENTITIES) < 1e-12
        assert max(deviations.values()) < 1e-10

    def test_suite_is_absolute_core_maximum(self):
        deviations = sampled_identity_deviations(2000, seed=3)
        expected = max(deviations[name] for name in CORE_IDENTITIES)
        assert identity_suite(2000, seed=3) == expected

    def test_hand_evaluated_points(self):
        """Both sides vanish at (1, 0); eq1s gives 16 on both sides at (2, 1, 1/5)."""
        one = np.array([1.0])
        zero = np.array([0.0])
        at_unit = identity_deviations(one, zero, np.array([0.2]))
        assert at_unit["eq1s"] == at_unit["one_minus_psipsi"] == 0.0
        deviations = identity_deviations(np.array([2.0]), one, np.array([0.2]))
        assert deviations["eq1s"] == 0.0

    def test_rejects_empty_sample(self):
        with pytest.raises(ValueError):
            identity_suite(0)
