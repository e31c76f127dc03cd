"""Mountain-pass geometry: a negative endpoint and the maximum along the ray to it."""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize

from cqwave.core.errors import NotFound
from cqwave.core.functionals import energy, lagrangian, momentum
from cqwave.core.grid import ComplexField, Grid, PerturbationField, embed
from cqwave.core.solvers.ansatz import AnsatzSpec, make_ansatz

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 2000


@dataclass(frozen=True)
class EndpointResult:
    psi0: ComplexField
    t_star: float
    lagrangian: float
    momentum: float
    spec: AnsatzSpec
    evaluations: int


def _candidates(family: str, base: Optional[AnsatzSpec]) -> list[AnsatzSpec]:
    base = base or AnsatzSpec(family=family)
    if family == "vortex_pair":
        return [
            replace(base, separation=base.separation * f) for f in (1.0, 1.5, 2.0, 0.5)
        ]
    return [
        replace(base, amplitude=base.amplitude * a, width=base.width * w)
        for w in (1.0, 2.0, 4.0)
        for a in (1.0, 1.5, 2.0)
    ]


def find_negative_endpoint(
    c: float,
    A: float,
    grid: Grid,
    family: str,
    budget: int = DEFAULT_BUDGET,
    spec: Optional[AnsatzSpec] = None,
    t_max: Optional[float] = None,
    n_t: int = 16,
) -> EndpointResult:
    """Scan rays 1 + t phi0 over ansatz variants for a field with I^c < 0.

    ``budget`` bounds the number of functional evaluations. phi0 is conjugated
    when that makes P(1 + phi0) positive, since only P > 0 can lower I^c.

    Raises:
        NotFound: no negative value within the budget; carries the best value seen
    """
    if t_max is None:
        t_max = 1.0 if family == "vortex_pair" else 2.0
    ts = np.linspace(t_max / n_t, t_max, n_t)
    used = 0
    best = np.inf
    for candidate in _candidates(family, spec):
        if used >= budget:
            break
        phi0 = make_ansatz(candidate, grid)
        p0 = momentum(embed(phi0))
        used += 1
        if p0 < 0.0:
            phi0 = PerturbationField(grid, np.conj(phi0.values))
            p0 = -p0
        for t in ts:
            if used >= budget:
                break
            psi = embed(phi0.scaled(t))
            value = energy(psi, A) - c * t * t * p0
            used += 1
            best = min(best, value)
            if value < 0.0:
                logger.info(
                    "negative endpoint: %s t=%.4g I^c=%.6g after %d evaluations",
                    candidate,
                    t,
                    value,
                    used,
                )
                return EndpointResult(
                    psi0=psi,
                    t_star=float(t),
                    lagrangian=float(value),
                    momentum=t * t * p0,
                    spec=candidate,
                    evaluations=used,
                )
    raise NotFound(
        f"no field with I^c < 0 for family {family!r} at c={c}, A={A} "
        f"within {used} evaluations (best {best:.6g})",
        best_lagrangian=float(best),
    )


def path_point(psi0: ComplexField, t: float) -> ComplexField:
    """gamma0(t) = 1 + t (psi0 - 1)."""
    return psi0.with_values(1.0 + t * (psi0.values - 1.0))


def path_values(
    psi0: ComplexField, c: float, A: float, ts: Sequence[float]
) -> np.ndarray:
    """I^c(gamma0(t)) = E(gamma0(t)) - c t^2 P(psi0)."""
    p0 = momentum(psi0)
    return np.array([energy(path_point(psi0, t), A) - c * t * t * p0 for t in ts])


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, c: float, tol: float = 1e-10
) -> tuple[float, float]:
    """Maximise f given a bracket a < b < c with f(b) above both ends."""
    result = optimize.minimize_scalar(
        lambda t: -f(t), bracket=(a, b, c), method="golden", tol=tol
    )
    return float(result.x), float(-result.fun)


def path_max(
    psi0: ComplexField, c: float, A: float, n_t: int = 64, tol: float = 1e-10
) -> tuple[float, float]:
    """(t_peak, chi): maximum of I^c along gamma0 on [0, 1].

    The leftmost sample wins ties; refinement is skipped on plateaus and at
    the interval ends.
    """
    if n_t < 3:
        raise ValueError(f"n_t must be at least 3, got {n_t}")
    ts = np.linspace(0.0, 1.0, n_t)
    values = path_values(psi0, c, A, ts)
    i = int(np.argmax(values))
    t_peak, chi = float(ts[i]), float(values[i])
    if 0 < i < n_t - 1 and values[i] > values[i - 1] and values[i] > values[i + 1]:
        t_peak, chi = golden_section_max(
            lambda t: lagrangian(path_point(psi0, t), c, A),
            ts[i - 1],
            ts[i],
            ts[i + 1],
            tol=tol,
        )
    logger.debug("path maximum chi=%.6g at t=%.6g", chi, t_peak)
    return t_peak, chi
