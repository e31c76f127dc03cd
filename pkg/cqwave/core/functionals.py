"""Energy, momentum, Lagrangian and their variations on discrete fields.

All quantities are evaluated with one discrete Lagrangian

    I^c(psi) = K_1(psi) + K_t(psi) + V(psi) - c P(psi)

where K_1 sums squared edge differences along x1, K_t squares the spectral
transverse derivatives, V is the trapezoid/rectangle quadrature of the
potential and P uses centered differences. ``first_variation``,
``second_variation`` and ``hessian_apply`` are the exact derivatives of this
discrete functional, and ``el_residual`` is its gradient divided by the
cell volume, so the finite-difference and duality relations hold to rounding.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from cqwave.core.grid import (
    ComplexField,
    Grid,
    PerturbationField,
    d_transverse,
    d_x1,
    inner,
    integrate,
    laplacian,
    norm,
    x1_edge_differences,
)
from cqwave.core.params import CubicQuinticParams, validate_and_roots

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Diagnostics:
    E: float
    P: float
    Ic: float
    Apoho: float
    Bpoho: float
    residual_norm: float
    sup_mod: float
    pohozaev_residual: float

    def as_row(self) -> dict[str, float]:
        return {
            "E": self.E,
            "P": self.P,
            "Ic": self.Ic,
            "Apoho": self.Apoho,
            "Bpoho": self.Bpoho,
            "residual_norm": self.residual_norm,
            "sup_mod": self.sup_mod,
            "pohozaev_residual": self.pohozaev_residual,
        }


# --- pieces ------------------------------------------------------------


def _x1_kinetic(grid: Grid, f: np.ndarray) -> float:
    e = x1_edge_differences(grid, f)
    return 0.5 * grid.cell_volume * float(np.sum(np.abs(e) ** 2))


def _transverse_kinetic(grid: Grid, f: np.ndarray) -> float:
    total = 0.0
    for axis in grid.transverse_axes:
        total += integrate(grid, np.abs(d_transverse(grid, f, axis)) ** 2)
    return 0.5 * total


def potential_density(rho: np.ndarray, A: float) -> np.ndarray:
    return 0.5 * (rho - 1.0) ** 2 * (rho - A)


def _potential(grid: Grid, f: np.ndarray, A: float) -> float:
    return integrate(grid, potential_density(np.abs(f) ** 2, A))


def _momentum(grid: Grid, f: np.ndarray) -> float:
    return -integrate(grid, d_x1(grid, f.imag) * (f.real - 1.0))


def nonlinear_coefficient(rho: np.ndarray, A: float) -> np.ndarray:
    """(|psi|^2 - 1)(3|psi|^2 - 2A - 1), the derivative of the potential in psi."""
    return (rho - 1.0) * (3.0 * rho - 2.0 * A - 1.0)


def _pairing(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Pointwise real inner product <f, g> = Re(conj(f) g)."""
    return (np.conj(f) * g).real


# --- functionals -------------------------------------------------------


def kinetic_energy(psi: ComplexField) -> float:
    return _x1_kinetic(psi.grid, psi.values) + _transverse_kinetic(psi.grid, psi.values)


def energy(psi: ComplexField, A: float) -> float:
    return kinetic_energy(psi) + _potential(psi.grid, psi.values, A)


def momentum(psi: ComplexField) -> float:
    """P(psi) = -int d_x1(Im psi) (Re psi - 1)."""
    return _momentum(psi.grid, psi.values)


def lagrangian(psi: ComplexField, c: float, A: float) -> float:
    return energy(psi, A) - c * momentum(psi)


def lagrangian_direct(psi: ComplexField, c: float, A: float) -> float:
    """I^c written as E + c int d_x1(Im psi)(Re psi - 1)."""
    f = psi.values
    return energy(psi, A) + c * integrate(psi.grid, d_x1(psi.grid, f.imag) * (f.real - 1.0))


def first_variation(
    psi: ComplexField, phi: PerturbationField, c: float, A: float
) -> float:
    grid = psi.grid
    f, g = psi.values, phi.values
    kinetic = grid.cell_volume * float(
        np.sum(_pairing(x1_edge_differences(grid, f), x1_edge_differences(grid, g)))
    )
    for axis in grid.transverse_axes:
        kinetic += integrate(
            grid, _pairing(d_transverse(grid, f, axis), d_transverse(grid, g, axis))
        )
    transport = c * integrate(
        grid, d_x1(grid, g.imag) * (f.real - 1.0) + d_x1(grid, f.imag) * g.real
    )
    rho = np.abs(f) ** 2
    nonlinear = integrate(grid, nonlinear_coefficient(rho, A) * _pairing(f, g))
    return kinetic + transport + nonlinear


def el_residual_values(grid: Grid, f: np.ndarray, c: float, A: float) -> np.ndarray:
    """i c d_x1 psi + Laplace psi + psi (|psi|^2 - 1)(2A + 1 - 3|psi|^2)."""
    rho = np.abs(f) ** 2
    r = laplacian(grid, f) - nonlinear_coefficient(rho, A) * f + 1j * c * d_x1(grid, f)
    if not grid.periodic_x1:
        r[0] = 0.0
        r[-1] = 0.0
    return r


def el_residual(psi: ComplexField, c: float, A: float) -> tuple[ComplexField, float]:
    """Residual field (zero on the Dirichlet rows) and its discrete L2 norm."""
    r = el_residual_values(psi.grid, psi.values, c, A)
    return ComplexField(psi.grid, r), norm(psi.grid, r)


def residual_norm(psi: ComplexField, c: float, A: float) -> float:
    return norm(psi.grid, el_residual_values(psi.grid, psi.values, c, A))


def hessian_apply_values(
    grid: Grid, f: np.ndarray, g: np.ndarray, c: float, A: float
) -> np.ndarray:
    """Linearisation L_psi(phi) of the residual; second_variation = -<L phi, phi>."""
    rho = np.abs(f) ** 2
    out = (
        laplacian(grid, g)
        + 1j * c * d_x1(grid, g)
        - nonlinear_coefficient(rho, A) * g
        - 4.0 * (3.0 * rho - A - 2.0) * _pairing(f, g) * f
    )
    if not grid.periodic_x1:
        out[0] = 0.0
        out[-1] = 0.0
    return out


def hessian_apply(
    psi: ComplexField, phi: PerturbationField, c: float, A: float
) -> PerturbationField:
    return PerturbationField(
        psi.grid, hessian_apply_values(psi.grid, psi.values, phi.values, c, A)
    )


def second_variation(
    psi: ComplexField, phi: PerturbationField, c: float, A: float
) -> float:
    grid = psi.grid
    f, g = psi.values, phi.values
    quadratic = 2.0 * (_x1_kinetic(grid, g) + _transverse_kinetic(grid, g))
    transport = 2.0 * c * integrate(grid, g.real * d_x1(grid, g.imag))
    rho = np.abs(f) ** 2
    nonlinear = integrate(
        grid,
        nonlinear_coefficient(rho, A) * np.abs(g) ** 2
        + 4.0 * (3.0 * rho - 2.0 - A) * _pairing(f, g) ** 2,
    )
    return quadratic + transport + nonlinear


def ab_split(psi: ComplexField, c: float, A: float) -> tuple[float, float]:
    """(A(psi), B(psi)) with I^c = A + B."""
    grid, f = psi.grid, psi.values
    a_part = _transverse_kinetic(grid, f)
    b_part = _x1_kinetic(grid, f) + _potential(grid, f, A) - c * _momentum(grid, f)
    return a_part, b_part


def pohozaev_residual(
    psi: ComplexField, c: float, A: float, d: Optional[int] = None
) -> float:
    d = psi.grid.d if d is None else d
    a_part, b_part = ab_split(psi, c, A)
    return (d - 3) * a_part + (d - 1) * b_part


def nehari_functional(psi: ComplexField, c: float, A: float) -> float:
    """(I^c)'(psi)(psi - 1); zero at solutions."""
    phi = PerturbationField(psi.grid, psi.values - 1.0)
    return first_variation(psi, phi, c, A)


def diagnose(psi: ComplexField, c: float, A: float) -> Diagnostics:
    grid, f = psi.grid, psi.values
    k1 = _x1_kinetic(grid, f)
    kt = _transverse_kinetic(grid, f)
    pot = _potential(grid, f, A)
    p = _momentum(grid, f)
    b_part = k1 + pot - c * p
    return Diagnostics(
        E=k1 + kt + pot,
        P=p,
        Ic=k1 + kt + pot - c * p,
        Apoho=kt,
        Bpoho=b_part,
        residual_norm=residual_norm(psi, c, A),
        sup_mod=psi.sup_modulus,
        pohozaev_residual=(grid.d - 3) * kt + (grid.d - 1) * b_part,
    )


# --- other normalisations ----------------------------------------------


def raw_energy(psi: ComplexField, p: CubicQuinticParams) -> float:
    """Energy of the unscaled equation, renormalised to vanish at |psi|^2 = r0^2."""
    r0sq = validate_and_roots(p).r0sq

    def v(rho: np.ndarray) -> np.ndarray:
        return p.alpha1 * rho / 2.0 - p.alpha3 * rho**2 / 4.0 + p.alpha5 * rho**3 / 6.0

    rho = np.abs(psi.values) ** 2
    return kinetic_energy(psi) + integrate(psi.grid, v(rho) - v(np.float64(r0sq)))


def kopv_energy(psi: ComplexField, gamma: float) -> float:
    r = np.abs(psi.values) ** 2 - 1.0
    return kinetic_energy(psi) + integrate(
        psi.grid, gamma / 4.0 * r**2 + r**3 / 6.0
    )


# --- algebraic identities ----------------------------------------------


def _identity_pairs(u: np.ndarray, v: np.ndarray, A: np.ndarray) -> dict:
    a = u - 1.0
    rho = u * u + v * v
    s = a * a + v * v
    bracket = u * (1.0 - u) - v * v
    mid = (1.0 - A) * (s * s + 4.0 * a * s) + 6.0 * a * s * s + 12.0 * a * a * s + 8.0 * a**3
    return {
        "eq1s": (
            (1.0 - rho) ** 2,
            4 * a * a + a**4 + v**4 + 4 * a**3 + 4 * a * v * v + 2 * a * a * v * v,
        ),
        "shifted_modulus": (rho - A, v * v + a * a + 2.0 * a + 1.0 - A),
        "one_minus_modulus": (1.0 - rho, -a * a - 2.0 * a - v * v),
        "eq2s": (
            1.0 + 2.0 * A - 3.0 * rho,
            -3.0 * a * a - 6.0 * a - 3.0 * v * v + 2.0 * (A - 1.0),
        ),
        "one_minus_psipsi": (
            (1.0 - rho) * (u - 1.0),
            -2.0 * (1.0 - u) ** 2 + (1.0 - u) ** 3 + v * v * (1.0 - u),
        ),
        "product_split": (
            (1.0 - rho) * (1.0 + 2.0 * A - 3.0 * rho) * bracket,
            (1.0 - rho) ** 2 * (1.0 + 2.0 * A - 3.0 * rho)
            + (1.0 - rho) * (u - 1.0) * (1.0 + 2.0 * A - 3.0 * rho),
        ),
        "nehari_bracket": (
            (1.0 - rho) * bracket,
            2 * a * a + 3 * a**3 + 3 * a * v * v + 2 * a * a * v * v + a**4 + v**4,
        ),
        "vanishing_split": (
            (1.0 - rho) ** 2 * (rho - A),
            4.0 * (1.0 - A) * a * a + s**3 + mid,
        ),
    }


CORE_IDENTITIES = ("eq1s", "eq2s", "one_minus_psipsi")


def identity_deviations(
    u: np.ndarray, v: np.ndarray, A: np.ndarray
) -> dict[str, float]:
    """Worst absolute deviation |lhs - rhs| per identity."""
    return {
        name: float(np.max(np.abs(lhs - rhs)))
        for name, (lhs, rhs) in _identity_pairs(u, v, A).items()
    }


def sampled_identity_deviations(n_samples: int, seed: int = 0) -> dict[str, float]:
    """identity_deviations at n_samples random (u, v, A) in [-3,3]^2 x (0,1)."""
    if n_samples < 1:
        raise ValueError(f"n_samples must be at least 1, got {n_samples}")
    rng = np.random.default_rng(seed)
    u = rng.uniform(-3.0, 3.0, n_samples)
    v = rng.uniform(-3.0, 3.0, n_samples)
    A = rng.uniform(0.0, 1.0, n_samples)
    return identity_deviations(u, v, A)


def identity_suite(n_samples: int, seed: int = 0) -> float:
    """Worst absolute deviation of the three splitting identities used in the proofs."""
    deviations = sampled_identity_deviations(n_samples, seed=seed)
    worst = max(deviations[name] for name in CORE_IDENTITIES)
    logger.debug("identity suite over %d samples: worst deviation %.3e", n_samples, worst)
    return worst
