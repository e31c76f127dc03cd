"""Coefficient validation, parameter reductions and the explicit L-infinity constants.

The raw equation is i dPsi/dt - Laplace Psi = F(|Psi|^2) Psi with
F(s) = -alpha1 + alpha3 s - alpha5 s^2. After the substitution onto the outer
root the nonlinearity becomes (|psi|^2 - 1)(2A + 1 - 3|psi|^2) with a single
parameter A in (0, 1).
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from cqwave.core.errors import (
    AOutOfRange,
    DegenerateRoots,
    DiscriminantNegative,
    InvalidCoefficients,
    NotNormalized,
)

logger = logging.getLogger(__name__)

# Relative size below which the discriminant counts as a double root.
DEGENERACY_TOL = 1e-15
GAUGE_TOL = 1e-12


@dataclass(frozen=True)
class CubicQuinticParams:
    """Raw coefficients of F(s) = -alpha1 + alpha3 s - alpha5 s^2."""

    alpha1: float
    alpha3: float
    alpha5: float

    def __post_init__(self) -> None:
        for attr in ("alpha1", "alpha3", "alpha5"):
            value = getattr(self, attr)
            if not math.isfinite(value) or value <= 0.0:
                raise InvalidCoefficients(f"{attr} must be positive, got {value}")

    @property
    def discriminant(self) -> float:
        return self.alpha3 * self.alpha3 - 4.0 * self.alpha1 * self.alpha5

    def F(self, s: float) -> float:
        return -self.alpha1 + self.alpha3 * s - self.alpha5 * s * s

    def dF(self, s: float) -> float:
        return self.alpha3 - 2.0 * self.alpha5 * s


@dataclass(frozen=True)
class RootPair:
    r0sq: float
    r1sq: float


@dataclass(frozen=True)
class ReducedParams:
    """Normalised parameters: outer root at 1, inner potential root at A."""

    A: float
    gamma: float
    vs: float
    c: float
    r0sq: float = 1.0

    @property
    def subsonic(self) -> bool:
        return 0.0 < self.c < self.vs


@dataclass(frozen=True)
class LinfConstants:
    r1: float  # NaN when r1^2 < 0
    r2: float
    r3: float
    rbar: float
    # Fourth root of the quartic; imaginary for every A in (0, 1).
    r4: complex = 0j

    @property
    def C_A(self) -> float:
        return self.r3


def validate_and_roots(p: CubicQuinticParams) -> RootPair:
    """Both roots of F with r0sq > r1sq > 0.

    Raises:
        DiscriminantNegative: alpha3^2 < 4 alpha1 alpha5
        DegenerateRoots: the two roots coincide
    """
    disc = p.discriminant
    if abs(disc) <= DEGENERACY_TOL * p.alpha3 * p.alpha3:
        raise DegenerateRoots(
            f"alpha3^2 = 4 alpha1 alpha5 (discriminant {disc}): roots coincide"
        )
    if disc < 0.0:
        raise DiscriminantNegative(
            f"alpha3^2 - 4 alpha1 alpha5 = {disc} < 0: F has no real roots"
        )
    r0sq = (p.alpha3 + math.sqrt(disc)) / (2.0 * p.alpha5)
    # Product of the roots avoids cancellation in the smaller one.
    r1sq = p.alpha1 / (p.alpha5 * r0sq)
    return RootPair(r0sq=r0sq, r1sq=r1sq)


def sound_speed(A: float) -> float:
    return 2.0 * math.sqrt(1.0 - A)


def reduce(p: CubicQuinticParams, c: float) -> ReducedParams:
    """Reduce raw coefficients to (A, gamma, vs).

    A is returned relative to r0^2, so the reduced problem always has its
    outer root at 1.

    Raises:
        AOutOfRange: when A/r0^2 falls outside (0, 1), i.e. r1^2/r0^2 <= 1/3
    """
    roots = validate_and_roots(p)
    if c < 0.0:
        raise InvalidCoefficients(f"c must be nonnegative, got {c}")
    x = 4.0 * p.alpha1 * p.alpha5 / (p.alpha3 * p.alpha3)
    # 1 - sqrt(1 - x) rewritten as x / (1 + sqrt(1 - x)).
    A_rel = -2.0 + 3.0 / (1.0 + math.sqrt(1.0 - x))
    if not 0.0 < A_rel < 1.0:
        raise AOutOfRange(
            f"A/r0^2 = {A_rel:.17g} is outside (0, 1); "
            f"requires r1^2/r0^2 > 1/3, got {roots.r1sq / roots.r0sq:.17g}"
        )
    A_abs = A_rel * roots.r0sq
    gamma = math.sqrt(3.0 * p.alpha3 / (2.0 * p.alpha5 * (A_abs + 2.0 * roots.r0sq)))
    logger.debug("reduced %s -> A=%.17g gamma=%.17g", p, A_rel, gamma)
    return ReducedParams(
        A=A_rel, gamma=gamma, vs=sound_speed(A_rel), c=c, r0sq=roots.r0sq
    )


def kopv_normalize(p: CubicQuinticParams) -> CubicQuinticParams:
    """Rescale values and space-time so that r0^2 = 1 and alpha5 = 1."""
    roots = validate_and_roots(p)
    ratio = roots.r1sq / roots.r0sq
    return CubicQuinticParams(alpha1=ratio, alpha3=1.0 + ratio, alpha5=1.0)


def kopv_reduce(p: CubicQuinticParams) -> float:
    """gamma = 1 - r1^2 of the alternative normalisation.

    Raises:
        NotNormalized: unless r0^2 = 1 and alpha5 = 1
    """
    roots = validate_and_roots(p)
    if abs(roots.r0sq - 1.0) > GAUGE_TOL or abs(p.alpha5 - 1.0) > GAUGE_TOL:
        raise NotNormalized(
            f"expected r0^2 = 1 and alpha5 = 1, got r0^2 = {roots.r0sq:.17g}, "
            f"alpha5 = {p.alpha5:.17g}; use kopv_normalize first"
        )
    gamma = 1.0 - roots.r1sq
    if gamma <= 0.0:
        raise DegenerateRoots(f"gamma = 1 - r1^2 must be positive, got {gamma}")
    return gamma


def sound_speed_raw(p: CubicQuinticParams) -> float:
    """Speed of sound r0 sqrt(-2 F'(r0^2)) of the unscaled equation."""
    roots = validate_and_roots(p)
    return math.sqrt(roots.r0sq) * math.sqrt(-2.0 * p.dF(roots.r0sq))


def maris_normalize(p: CubicQuinticParams) -> CubicQuinticParams:
    """Coefficients of F~(s) = -F(r0^2 s) / (r0^2 F'(r0^2)).

    The result has F~(1) = 0 and F~'(1) = -1.
    """
    roots = validate_and_roots(p)
    slope = -p.dF(roots.r0sq)
    return CubicQuinticParams(
        alpha1=p.alpha1 / (roots.r0sq * slope),
        alpha3=p.alpha3 / slope,
        alpha5=p.alpha5 * roots.r0sq / slope,
    )


def linf_constants(A: float, c: float) -> LinfConstants:
    if not 0.0 < A < 1.0:
        raise AOutOfRange(f"A must be in (0, 1), got {A}")
    root = math.sqrt(4.0 * (1.0 - A) ** 2 + 3.0 * c * c)
    # r1 is not real once c^2 > 4 + 8A
    r1sq = (4.0 + 2.0 * A - root) / 6.0
    r1 = math.sqrt(r1sq) if r1sq >= 0.0 else math.nan
    r2 = math.sqrt((4.0 + 2.0 * A + root) / 6.0)
    r3 = math.sqrt(A + 2.0) * math.sqrt(3.0 + 2.0 * math.sqrt(3.0)) / 3.0
    r4 = cmath.sqrt(A + 2.0) * cmath.sqrt(3.0 - 2.0 * math.sqrt(3.0)) / 3.0
    return LinfConstants(
        r1=r1,
        r2=r2,
        r3=r3,
        rbar=max(r for r in (r1, r2, r3) if not math.isnan(r)),
        r4=r4,
    )


def ordering_threshold(A: float) -> float:
    """Speed c*(A) above which r2 exceeds r3."""
    r3sq = (A + 2.0) * (3.0 + 2.0 * math.sqrt(3.0)) / 9.0
    rhs = 6.0 * r3sq - 4.0 - 2.0 * A
    return math.sqrt((rhs * rhs - 4.0 * (1.0 - A) ** 2) / 3.0)


def keylem_function(A: float, c: float, r: float, s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return (s * s - 1.0) * (3.0 * s * s - 2.0 * A - 1.0) - c * c / 4.0 - 3.0 * (
        s - r
    ) ** 4


def keylem_polynomial(A: float, c: float, r: float, s: np.ndarray) -> np.ndarray:
    """Expanded cubic form of keylem_function; the quartic terms cancel."""
    s = np.asarray(s, dtype=float)
    return (
        12.0 * r * s**3
        - s * s * (2.0 * A + 4.0 + 18.0 * r * r)
        + 12.0 * r**3 * s
        + 2.0 * A
        + 1.0
        - c * c / 4.0
        - 3.0 * r**4
    )


def keylem_small_r_limit(A: float, c: float) -> Optional[float]:
    """Largest r for which the inequality holds trivially at s = 0."""
    value = (2.0 * A + 1.0 - c * c / 4.0) / 3.0
    if value < 0.0:
        return None
    return value**0.25


def keylem_margin(A: float, c: float, s_max: float, n: int) -> float:
    """Minimum of the keylem function on n samples of [rbar, s_max]."""
    rbar = linf_constants(A, c).rbar
    if s_max == rbar:
        return float(keylem_function(A, c, rbar, np.array([rbar]))[0])
    if s_max < rbar:
        raise ValueError(f"s_max must be >= rbar = {rbar}, got {s_max}")
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    s = np.linspace(rbar, s_max, n)
    return float(keylem_function(A, c, rbar, s).min())


@dataclass(frozen=True)
class CriticalPoint:
    u: float
    kind: str  # "min" or "max"


@dataclass(frozen=True)
class PotentialProfile:
    u: np.ndarray
    W: np.ndarray
    W_gp: np.ndarray
    critical_points: tuple[CriticalPoint, ...]


def potential(A: float, u: np.ndarray) -> np.ndarray:
    u2 = np.asarray(u, dtype=float) ** 2
    return 0.5 * (u2 - 1.0) ** 2 * (u2 - A)


def gp_potential(u: np.ndarray) -> np.ndarray:
    u2 = np.asarray(u, dtype=float) ** 2
    return 0.25 * (u2 - 1.0) ** 2


def potential_curvature(A: float, u: float) -> float:
    rho = u * u
    return (rho - 1.0) * (3.0 * rho - 2.0 * A - 1.0) + 4.0 * rho * (3.0 * rho - A - 2.0)


def potential_profile(A: float, u_grid: np.ndarray) -> PotentialProfile:
    if not 0.0 < A < 1.0:
        raise AOutOfRange(f"A must be in (0, 1), got {A}")
    u = np.asarray(u_grid, dtype=float)
    inner = math.sqrt((2.0 * A + 1.0) / 3.0)
    points = []
    for u_c in (-1.0, -inner, 0.0, inner, 1.0):
        kind = "min" if potential_curvature(A, u_c) > 0.0 else "max"
        points.append(CriticalPoint(u=u_c, kind=kind))
    return PotentialProfile(
        u=u, W=potential(A, u), W_gp=gp_potential(u), critical_points=tuple(points)
    )
