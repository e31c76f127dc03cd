"""Initial perturbations phi0 for the mountain-pass path psi = 1 + t phi0."""

import math
from dataclasses import dataclass

import numpy as np

from cqwave.core.errors import FamilyDimensionMismatch
from cqwave.core.grid import ComplexField, Grid, PerturbationField

FAMILIES = ("amplitude_dip", "vortex_pair", "bubble")


@dataclass(frozen=True)
class AnsatzSpec:
    family: str = "amplitude_dip"
    amplitude: float = 0.5
    width: float = 2.0
    separation: float = 4.0
    center: float = 0.0
    # Imaginary part of amplitude_dip, odd in x1; carries the momentum.
    slope: float = 1.0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.width <= 0.0:
            raise ValueError(f"width must be positive, got {self.width}")
        if self.separation <= 0.0:
            raise ValueError(f"separation must be positive, got {self.separation}")

    @classmethod
    def bubble(cls, A: float, center: float = 0.0) -> "AnsatzSpec":
        """Dip to the inner root sqrt(A) with the decay rate of the linearisation at 1."""
        return cls(
            family="bubble",
            amplitude=1.0 - math.sqrt(A),
            width=1.0 / math.sqrt(1.0 - A),
            center=center,
        )


def slab_window(grid: Grid) -> np.ndarray:
    """1 - (x1/N)^8: flat in the middle, exactly zero on x1 = +-N."""
    x1 = grid.mesh()[0]
    return 1.0 - (x1 / grid.N) ** 8


def _sech2(x: np.ndarray) -> np.ndarray:
    return 1.0 / np.cosh(x) ** 2


def _amplitude_dip(spec: AnsatzSpec, grid: Grid) -> np.ndarray:
    coords = grid.mesh()
    X = (coords[0] - spec.center) / spec.width
    profile = _sech2(X)
    for xt in coords[1:]:
        profile = profile * _sech2(xt / spec.width)
    return -spec.amplitude * profile * (1.0 + 1j * spec.slope * np.tanh(X))


def _vortex(X: np.ndarray, Y: np.ndarray, core: float) -> np.ndarray:
    """Unit-winding vortex (X + iY)/sqrt(X^2 + Y^2 + core^2)."""
    return (X + 1j * Y) / np.sqrt(X * X + Y * Y + core * core)


def _vortex_pair(spec: AnsatzSpec, grid: Grid) -> np.ndarray:
    if grid.d != 2:
        raise FamilyDimensionMismatch(
            f"vortex_pair is a two-dimensional ansatz, grid has d={grid.d}"
        )
    x1, x2 = grid.mesh()
    X = x1 - spec.center
    half = 0.5 * spec.separation
    pair = _vortex(X, x2 - half, spec.width) * np.conj(_vortex(X, x2 + half, spec.width))
    return spec.amplitude * (pair - 1.0)


def _bubble(spec: AnsatzSpec, grid: Grid) -> np.ndarray:
    x1 = grid.mesh()[0]
    profile = -spec.amplitude * _sech2((x1 - spec.center) / spec.width)
    return np.broadcast_to(profile, grid.shape).astype(np.complex128)


def make_ansatz(spec: AnsatzSpec, grid: Grid) -> PerturbationField:
    """Windowed perturbation with exactly zero Dirichlet rows."""
    builders = {
        "amplitude_dip": _amplitude_dip,
        "vortex_pair": _vortex_pair,
        "bubble": _bubble,
    }
    raw = builders[spec.family](spec, grid)
    return PerturbationField(grid, slab_window(grid) * raw)


def winding_number(psi: ComplexField, center: tuple[float, float], radius: float) -> int:
    """Phase circulation / 2 pi around a square loop in the (x1, x2) plane.

    The loop is traversed counterclockwise and has half-width ``radius``
    rounded to whole grid cells; transverse indices wrap.
    """
    grid = psi.grid
    if grid.d != 2:
        raise FamilyDimensionMismatch("winding_number needs a two-dimensional grid")
    i0 = int(np.argmin(np.abs(grid.x1 - center[0])))
    j0 = int(np.argmin(np.abs(grid.xt - center[1])))
    m = max(1, int(round(radius / min(grid.h1, grid.ht))))
    if i0 - m < 0 or i0 + m >= grid.n1:
        raise ValueError("loop leaves the slab")
    path: list[tuple[int, int]] = []
    path += [(i, j0 - m) for i in range(i0 - m, i0 + m)]
    path += [(i0 + m, j) for j in range(j0 - m, j0 + m)]
    path += [(i, j0 + m) for i in range(i0 + m, i0 - m, -1)]
    path += [(i0 - m, j) for j in range(j0 + m, j0 - m, -1)]
    z = np.array([psi.values[i, j % grid.nt] for i, j in path])
    increments = np.angle(np.roll(z, -1) / z)
    return int(round(float(increments.sum()) / (2.0 * np.pi)))
