"""Automated checks of the analytical claims: constants, identities, dispersion, gauge."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from cqwave.core.functionals import (
    ab_split,
    el_residual_values,
    CORE_IDENTITIES,
    identity_suite,
    nonlinear_coefficient,
    pohozaev_residual,
    residual_norm,
    sampled_identity_deviations,
    second_variation,
)
from cqwave.core.grid import (
    ComplexField,
    PerturbationField,
    gauge_transform,
    laplacian,
    make_grid,
    max_boundary_face_deviation,
)
from cqwave.core.params import (
    keylem_margin,
    linf_constants,
    ordering_threshold,
    sound_speed,
)

logger = logging.getLogger(__name__)

LINF_TOL = 1e-6
CONVERGED_RESIDUAL = 1e-6
IDENTITY_TOL = 1e-12
EXPANSION_TOL = 1e-10
POHOZAEV_TOL = 1e-3
FACE_TOL = 1e-3
MODE_TOL = 1e-8


@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    margin: float
    context: dict[str, Any] = field(default_factory=dict)
    applicable: bool = True

    @property
    def ok(self) -> bool:
        """Passed, or not applicable to the field at hand."""
        return self.passed or not self.applicable

    def as_row(self) -> dict[str, Any]:
        context = ";".join(
            f"{k}={v:.17g}" if isinstance(v, float) else f"{k}={v}"
            for k, v in sorted(self.context.items())
        )
        return {
            "check": self.name,
            "passed": self.passed,
            "applicable": self.applicable,
            "margin": self.margin,
            "context": context,
        }


def _report(
    name: str, margin: float, tol: float, applicable: bool = True, **context: Any
) -> CheckReport:
    return CheckReport(
        name=name,
        passed=bool(margin >= -tol),
        margin=float(margin),
        context=context,
        applicable=applicable,
    )


# --- bounds at solutions -----------------------------------------------


def check_linf(
    psi: ComplexField,
    A: float,
    c: float,
    residual: Optional[float] = None,
    delta: float = CONVERGED_RESIDUAL,
) -> CheckReport:
    """sup |psi| against C_A; applicable to fields with residual at most delta."""
    consts = linf_constants(A, c)
    if residual is None:
        residual = residual_norm(psi, c, A)
    sup = psi.sup_modulus
    return _report(
        "linf",
        consts.C_A - sup,
        LINF_TOL,
        applicable=residual <= delta,
        A=A,
        c=c,
        sup_mod=sup,
        C_A=consts.C_A,
        r1=consts.r1,
        r2=consts.r2,
        r3=consts.r3,
        rbar=consts.rbar,
        gp_bound=math.sqrt(1.0 + c * c / 4.0),
        residual=residual,
    )


def check_pohozaev(
    psi: ComplexField,
    c: float,
    A: float,
    tol: float = POHOZAEV_TOL,
    residual: Optional[float] = None,
    delta: float = CONVERGED_RESIDUAL,
    face_tol: float = FACE_TOL,
) -> CheckReport:
    """Relative Pohozaev residual; needs a converged, transversally localised field."""
    a_part, b_part = ab_split(psi, c, A)
    poho = pohozaev_residual(psi, c, A)
    scale = abs(a_part) + abs(b_part) + np.finfo(float).eps
    relative = abs(poho) / scale
    if residual is None:
        residual = residual_norm(psi, c, A)
    face = max_boundary_face_deviation(psi)
    d = psi.grid.d
    ic = a_part + b_part
    return _report(
        "pohozaev",
        tol - relative,
        0.0,
        applicable=residual <= delta and face <= face_tol,
        c=c,
        A=A,
        Apoho=a_part,
        Bpoho=b_part,
        pohozaev_residual=poho,
        lagrangian_gap=abs(ic - 2.0 * a_part / (d - 1)) / scale,
        face_deviation=face,
        residual=residual,
    )


# --- dispersion of the constant state ----------------------------------


@dataclass(frozen=True)
class DispersionResult:
    k: np.ndarray
    min_eigenvalue: np.ndarray

    @property
    def definite(self) -> bool:
        return bool(np.all(self.min_eigenvalue > 0.0))


def mode_matrices(
    k_sq: np.ndarray, k_first: np.ndarray, c: float, A: float
) -> np.ndarray:
    """Stacked [[k^2 + 4(1-A), c k], [c k, k^2]] with separate second/first symbols."""
    m = np.empty(k_sq.shape + (2, 2))
    m[..., 0, 0] = k_sq + 4.0 * (1.0 - A)
    m[..., 0, 1] = m[..., 1, 0] = c * k_first
    m[..., 1, 1] = k_sq
    return m


def q1_dispersion(
    c: float, A: float, k_grid: Sequence[float], h: Optional[float] = None
) -> DispersionResult:
    """Smallest eigenvalue of the mode matrix of Q_1 per wavenumber.

    With ``h`` the symbols of the x1 stencils are used: 4 sin^2(kh/2)/h^2
    for the second and sin(kh)/h for the first derivative.
    """
    k = np.asarray(k_grid, dtype=float)
    if np.any(k <= 0.0):
        raise ValueError("k_grid must hold positive wavenumbers")
    if h is None:
        k_sq, k_first = k * k, k
    else:
        k_sq = 4.0 * np.sin(0.5 * k * h) ** 2 / h**2
        k_first = np.sin(k * h) / h
    eig = np.linalg.eigvalsh(mode_matrices(k_sq, k_first, c, A))
    return DispersionResult(k=k, min_eigenvalue=eig[:, 0])


def check_dispersion(
    c: float,
    A: float,
    k_grid: Optional[Sequence[float]] = None,
    expect_definite: Optional[bool] = None,
) -> CheckReport:
    """Definiteness of Q_1 matches the sonic threshold c < 2 sqrt(1 - A)."""
    k = np.geomspace(1e-3, 10.0, 400) if k_grid is None else np.asarray(k_grid)
    vs = sound_speed(A)
    if expect_definite is None:
        expect_definite = c < vs
    result = q1_dispersion(c, A, k)
    scaled = float(np.min(result.min_eigenvalue / k**2))
    margin = scaled if expect_definite else -scaled
    return _report(
        "dispersion",
        margin,
        0.0,
        c=c,
        A=A,
        sound_speed=vs,
        expect_definite=expect_definite,
        definite=result.definite,
    )


def q1_mode_crosscheck(
    c: float,
    A: float,
    m: int = 3,
    a: float = 1.0,
    b: float = 0.5,
    N: float = 8.0,
    n1: int = 64,
    d: int = 2,
) -> tuple[float, float]:
    """second_variation at psi = 1 on a x1-periodic single mode vs the mode-matrix form.

    The mode is a cos(k x1) + i b sin(k x1) with k = pi m / N. Returns
    (second_variation, (V/2) [a b] M [a b]^T) where V is the box volume and M
    uses the discrete stencil symbols.
    """
    if not 0 < 2 * m < n1:
        raise ValueError(f"mode index must satisfy 0 < 2m < n1, got m={m}, n1={n1}")
    grid = make_grid(d=d, N=N, L=4.0, n1=n1, nt=8, periodic_x1=True)
    k = math.pi * m / N
    x1 = grid.mesh()[0]
    phi = np.broadcast_to(a * np.cos(k * x1) + 1j * b * np.sin(k * x1), grid.shape)
    q = second_variation(ComplexField.constant(grid), PerturbationField(grid, phi), c, A)
    h = grid.h1
    k_sq = 4.0 * math.sin(0.5 * k * h) ** 2 / h**2
    k_first = math.sin(k * h) / h
    matrix = mode_matrices(np.array(k_sq), np.array(k_first), c, A)
    vec = np.array([a, b])
    volume = 2.0 * N * grid.transverse_area
    return q, 0.5 * volume * float(vec @ matrix @ vec)


def check_mode_crosscheck(c: float, A: float, tol: float = MODE_TOL) -> CheckReport:
    worst = 0.0
    for m, (a, b) in ((1, (1.0, 0.0)), (3, (1.0, 0.5)), (7, (0.3, -1.0))):
        q, form = q1_mode_crosscheck(c, A, m=m, a=a, b=b)
        worst = max(worst, abs(q - form) / max(1.0, abs(form)))
    return _report("mode_crosscheck", tol - worst, 0.0, c=c, A=A, deviation=worst)


# --- gauge ---------------------------------------------------------------


def gauge_commutation_error(psi: ComplexField, c: float, A: float) -> float:
    """max over interior nodes of |GL residual of w - exp(i c x1/2) R(psi)|, w = exp(i c x1/2) psi."""
    grid = psi.grid
    w = gauge_transform(psi, c).values
    gl = laplacian(grid, w) - nonlinear_coefficient(np.abs(w) ** 2, A) * w
    gl = gl + 0.25 * c * c * w
    r = gauge_transform(ComplexField(grid, el_residual_values(grid, psi.values, c, A)), c)
    sl = grid.interior
    return float(np.abs(gl[sl] - r.values[sl]).max())


def gauge_consistency(
    psi: ComplexField, c: float, A: float, tol: Optional[float] = None
) -> CheckReport:
    """The gauge change maps the profile equation to the Ginzburg-Landau form up to O(h1^2)."""
    h1 = psi.grid.h1
    if tol is None:
        tol = 10.0 * h1 * h1 * (1.0 + c * c) ** 2
    error = gauge_commutation_error(psi, c, A)
    return _report(
        "gauge", tol - error, 0.0, c=c, A=A, h1=h1, error=error, gauge_tol=tol
    )


# --- parameter space -----------------------------------------------------


@dataclass(frozen=True)
class ConstantsScan:
    table: pd.DataFrame
    thresholds: pd.DataFrame


def _ordering_root(A: float) -> float:
    """c*(A) by root-finding r2^2 - r3^2, which is real for every c."""
    r3sq = linf_constants(A, 0.0).r3 ** 2

    def gap(c: float) -> float:
        root = math.sqrt(4.0 * (1.0 - A) ** 2 + 3.0 * c * c)
        return (4.0 + 2.0 * A + root) / 6.0 - r3sq

    upper = 2.0 * ordering_threshold(A) + 10.0
    return float(brentq(gap, 0.0, upper, xtol=1e-14))


def constants_scan(
    A_grid: Sequence[float],
    c_grid: Sequence[float],
    s_max: float = 10.0,
    n_samples: int = 10_000,
) -> ConstantsScan:
    """r1, r2, r3, ordering and keylem margin on the (A, c) grid, plus per-A c*(A)."""
    rows = []
    thresholds = []
    for A in A_grid:
        A = float(A)
        vs = sound_speed(A)
        c_grid_star = math.nan
        for c in c_grid:
            c = float(c)
            consts = linf_constants(A, c)
            ordering = consts.r1 < consts.r2 < consts.r3
            if not ordering and consts.r2 >= consts.r3 and math.isnan(c_grid_star):
                c_grid_star = c
            rows.append(
                {
                    "A": A,
                    "c": c,
                    "subsonic": c < vs,
                    "r1": consts.r1,
                    "r2": consts.r2,
                    "r3": consts.r3,
                    "rbar": consts.rbar,
                    "ordering": ordering,
                    "keylem_margin": keylem_margin(A, c, s_max, n_samples),
                }
            )
        thresholds.append(
            {
                "A": A,
                "sound_speed": vs,
                "c_star_grid": c_grid_star,
                "c_star_closed": ordering_threshold(A),
                "c_star_root": _ordering_root(A),
            }
        )
    return ConstantsScan(table=pd.DataFrame(rows), thresholds=pd.DataFrame(thresholds))


def subsonic_grid(n_A: int, n_c: int) -> tuple[np.ndarray, np.ndarray]:
    """A values in (0, 1) and speeds as fractions of each sound speed."""
    A = np.linspace(0.05, 0.95, n_A)
    fractions = np.linspace(0.05, 0.95, n_c)
    return A, fractions


def check_keylem(
    n_A: int = 20, n_c: int = 20, s_max: float = 10.0, n_samples: int = 10_000
) -> CheckReport:
    """Keylem margin and r1 < r2 < r3 at every node of a subsonic (A, c) grid."""
    A_values, fractions = subsonic_grid(n_A, n_c)
    worst_keylem = math.inf
    worst_ordering = math.inf
    for A in A_values:
        vs = sound_speed(float(A))
        scan = constants_scan([A], fractions * vs, s_max=s_max, n_samples=n_samples)
        t = scan.table
        worst_keylem = min(worst_keylem, float(t["keylem_margin"].min()))
        worst_ordering = min(
            worst_ordering,
            float(np.minimum(t["r2"] - t["r1"], t["r3"] - t["r2"]).min()),
        )
    return _report(
        "keylem",
        min(worst_keylem, worst_ordering),
        0.0,
        keylem_margin=worst_keylem,
        ordering_gap=worst_ordering,
        nodes=n_A * n_c,
    )


def check_identities(
    n_samples: int = 10_000, seed: int = 0, tol: float = IDENTITY_TOL
) -> CheckReport:
    worst = identity_suite(n_samples, seed=seed)
    return _report(
        "identities", tol - worst, 0.0, n_samples=n_samples, seed=seed, deviation=worst
    )


def check_identity_expansions(
    n_samples: int = 10_000, seed: int = 0, tol: float = EXPANSION_TOL
) -> CheckReport:
    """Absolute deviation of the auxiliary expansions, each reported in the context."""
    deviations = {
        name: value
        for name, value in sampled_identity_deviations(n_samples, seed=seed).items()
        if name not in CORE_IDENTITIES
    }
    worst = max(deviations.values())
    return _report(
        "identity_expansions",
        tol - worst,
        0.0,
        n_samples=n_samples,
        seed=seed,
        deviation=worst,
        **deviations,
    )


def run_battery(
    psi: Optional[ComplexField],
    c: float,
    A: float,
    seed: int = 0,
    n_identity_samples: int = 10_000,
    keylem_nodes: int = 20,
    keylem_samples: int = 10_000,
) -> list[CheckReport]:
    """Every check; field checks only when a field is given."""
    reports: list[CheckReport] = []
    if psi is not None:
        residual = residual_norm(psi, c, A)
        reports.append(check_linf(psi, A, c, residual=residual))
        reports.append(check_pohozaev(psi, c, A, residual=residual))
        reports.append(gauge_consistency(psi, c, A))
    vs = sound_speed(A)
    reports.append(check_dispersion(c, A))
    reports.append(check_dispersion(0.9 * vs, A, expect_definite=True))
    reports.append(check_dispersion(1.1 * vs, A, expect_definite=False))
    reports.append(check_mode_crosscheck(c, A))
    reports.append(check_identities(n_identity_samples, seed=seed))
    reports.append(check_identity_expansions(n_identity_samples, seed=seed))
    reports.append(
        check_keylem(keylem_nodes, keylem_nodes, n_samples=keylem_samples)
    )
    failed = [r.name for r in reports if not r.ok]
    if failed:
        logger.warning("verification failed: %s", ", ".join(failed))
    else:
        logger.info("all %d checks passed or not applicable", len(reports))
    return reports
