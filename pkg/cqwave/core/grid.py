"""Slab discretisation: x1 in [-N, N] with Dirichlet data, periodic transverse box.

Along x1 derivatives are second-order finite differences; transverse
derivatives are discrete Fourier spectral derivatives. Field arrays are indexed
``values[i1, it2(, it3)]`` with x1 the slowest axis.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import fft

from cqwave.core.errors import BadResolution, BoundaryViolation, UnsupportedDimension

MIN_POINTS = 8
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class Grid:
    """Slab grid.

    ``periodic_x1`` turns the slab into a test torus along x1 (endpoint
    excluded, rectangle quadrature). Solvers and snapshots use the Dirichlet slab.
    """

    d: int
    N: float
    L: float
    n1: int
    nt: int
    periodic_x1: bool = False

    def __post_init__(self) -> None:
        if self.d not in (2, 3):
            raise UnsupportedDimension(f"d must be 2 or 3, got {self.d}")
        if self.n1 < MIN_POINTS or self.nt < MIN_POINTS:
            raise BadResolution(
                f"n1 and nt must be at least {MIN_POINTS}, got n1={self.n1}, "
                f"nt={self.nt}"
            )
        if not (self.N > 0.0 and self.L > 0.0):
            raise BadResolution(f"N and L must be positive, got N={self.N}, L={self.L}")

    @property
    def h1(self) -> float:
        if self.periodic_x1:
            return 2.0 * self.N / self.n1
        return 2.0 * self.N / (self.n1 - 1)

    @property
    def ht(self) -> float:
        return self.L / self.nt

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n1,) + (self.nt,) * (self.d - 1)

    @property
    def transverse_axes(self) -> tuple[int, ...]:
        return tuple(range(1, self.d))

    @property
    def cell_volume(self) -> float:
        return self.h1 * self.ht ** (self.d - 1)

    @property
    def transverse_area(self) -> float:
        return self.L ** (self.d - 1)

    @property
    def interior(self) -> slice:
        """Rows of x1 carrying unknowns."""
        if self.periodic_x1:
            return slice(None)
        return slice(1, self.n1 - 1)

    @cached_property
    def x1(self) -> np.ndarray:
        if self.periodic_x1:
            return -self.N + self.h1 * np.arange(self.n1)
        return np.linspace(-self.N, self.N, self.n1)

    @cached_property
    def xt(self) -> np.ndarray:
        return -0.5 * self.L + self.ht * np.arange(self.nt)

    @cached_property
    def kt(self) -> np.ndarray:
        """Transverse wavenumbers with the Nyquist mode zeroed."""
        k = 2.0 * np.pi * fft.fftfreq(self.nt, d=self.ht)
        if self.nt % 2 == 0:
            k[self.nt // 2] = 0.0
        return k

    @cached_property
    def kt_sq(self) -> np.ndarray:
        """Sum of squared transverse wavenumbers, broadcastable against fields."""
        k2 = self.kt**2
        if self.d == 2:
            return k2[np.newaxis, :]
        return (k2[:, np.newaxis] + k2[np.newaxis, :])[np.newaxis, :, :]

    @cached_property
    def weights(self) -> np.ndarray:
        """Quadrature weights: trapezoid along x1, rectangle transversally."""
        w1 = np.full(self.n1, self.h1)
        if not self.periodic_x1:
            w1[0] = w1[-1] = 0.5 * self.h1
        w = w1.reshape((self.n1,) + (1,) * (self.d - 1)) * self.ht ** (self.d - 1)
        return np.broadcast_to(w, self.shape)

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Sparse coordinate arrays (x1, x2[, x3]) broadcastable to ``shape``."""
        return tuple(
            np.meshgrid(self.x1, *([self.xt] * (self.d - 1)), indexing="ij", sparse=True)
        )

    def describe(self) -> str:
        """Domain approximation as recorded in output headers."""
        x1_kind = "periodic" if self.periodic_x1 else "dirichlet"
        return (
            f"d={self.d} slab N={self.N!r} ({x1_kind} x1, n1={self.n1}) "
            f"transverse period L={self.L!r} (nt={self.nt})"
        )


def make_grid(
    d: int, N: float, L: float, n1: int, nt: int, periodic_x1: bool = False
) -> Grid:
    return Grid(d=d, N=float(N), L=float(L), n1=int(n1), nt=int(nt), periodic_x1=periodic_x1)


# --- fields ------------------------------------------------------------


def _as_field_array(grid: Grid, values: np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.shape != grid.shape:
        raise ValueError(f"values shape {arr.shape} does not match grid {grid.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Profile psi on a grid. Treat ``values`` as read-only."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_field_array(self.grid, self.values))

    @classmethod
    def constant(cls, grid: Grid, value: complex = 1.0) -> "ComplexField":
        return cls(grid, np.full(grid.shape, value, dtype=np.complex128))

    def with_values(self, values: np.ndarray) -> "ComplexField":
        return ComplexField(self.grid, values)

    def with_boundary(self) -> "ComplexField":
        """Copy with the Dirichlet rows set exactly to 1."""
        values = self.values.copy()
        if not self.grid.periodic_x1:
            values[0] = 1.0
            values[-1] = 1.0
        return ComplexField(self.grid, values)

    @property
    def sup_modulus(self) -> float:
        return float(np.abs(self.values).max())

    def boundary_deviation(self) -> float:
        if self.grid.periodic_x1:
            return 0.0
        rows = self.values[[0, -1]]
        return float(np.abs(rows - 1.0).max())


@dataclass(frozen=True, eq=False)
class PerturbationField:
    """phi with psi = 1 + phi; boundary rows along x1 are zero."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = _as_field_array(self.grid, self.values)
        if not self.grid.periodic_x1 and (np.any(arr[0]) or np.any(arr[-1])):
            arr = arr.copy()
            arr[0] = 0.0
            arr[-1] = 0.0
        object.__setattr__(self, "values", arr)

    @classmethod
    def zeros(cls, grid: Grid) -> "PerturbationField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    def scaled(self, t: float) -> "PerturbationField":
        return PerturbationField(self.grid, t * self.values)


def embed(phi: PerturbationField) -> ComplexField:
    return ComplexField(phi.grid, 1.0 + phi.values)


def extract(psi: ComplexField, tol: float = BOUNDARY_TOL) -> PerturbationField:
    """phi = psi - 1.

    Raises:
        BoundaryViolation: psi differs from 1 on x1 = +-N by more than ``tol``
    """
    deviation = psi.boundary_deviation()
    if deviation > tol:
        raise BoundaryViolation(
            f"psi deviates from 1 on the slab boundary by {deviation:.3e}"
        )
    return PerturbationField(psi.grid, psi.values - 1.0)


def gauge_transform(psi: ComplexField, c: float) -> ComplexField:
    """w = exp(i c x1 / 2) psi."""
    if c == 0.0:
        return ComplexField(psi.grid, psi.values.copy())
    x1 = psi.grid.mesh()[0]
    return ComplexField(psi.grid, np.exp(0.5j * c * x1) * psi.values)


# --- derivatives -------------------------------------------------------


def d_x1(grid: Grid, f: np.ndarray) -> np.ndarray:
    """Centered first difference; one-sided second order on Dirichlet boundary rows."""
    if grid.periodic_x1:
        return (np.roll(f, -1, axis=0) - np.roll(f, 1, axis=0)) / (2.0 * grid.h1)
    return np.gradient(f, grid.h1, axis=0, edge_order=2)


def d_x1x1(grid: Grid, f: np.ndarray) -> np.ndarray:
    """Three-point second difference along x1."""
    h2 = grid.h1 * grid.h1
    if grid.periodic_x1:
        return (np.roll(f, -1, axis=0) - 2.0 * f + np.roll(f, 1, axis=0)) / h2
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / h2
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2
    out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / h2
    return out


def x1_edge_differences(grid: Grid, f: np.ndarray) -> np.ndarray:
    """(f[i+1] - f[i]) / h1 on every x1 edge (including the wrap edge when periodic)."""
    if grid.periodic_x1:
        return (np.roll(f, -1, axis=0) - f) / grid.h1
    return np.diff(f, axis=0) / grid.h1


def d_transverse(grid: Grid, f: np.ndarray, axis: int) -> np.ndarray:
    """Spectral derivative along transverse ``axis`` (1 or 2)."""
    shape = [1] * grid.d
    shape[axis] = grid.nt
    ik = (1j * grid.kt).reshape(shape)
    return fft.ifft(ik * fft.fft(f, axis=axis), axis=axis)


def transverse_laplacian(grid: Grid, f: np.ndarray) -> np.ndarray:
    axes = grid.transverse_axes
    return fft.ifftn(-grid.kt_sq * fft.fftn(f, axes=axes), axes=axes)


def laplacian(grid: Grid, f: np.ndarray) -> np.ndarray:
    return d_x1x1(grid, f) + transverse_laplacian(grid, f)


@dataclass(frozen=True)
class Derivatives:
    x1: np.ndarray
    transverse: tuple[np.ndarray, ...]
    laplacian: np.ndarray


def differentiate(f: ComplexField) -> Derivatives:
    grid = f.grid
    return Derivatives(
        x1=d_x1(grid, f.values),
        transverse=tuple(d_transverse(grid, f.values, ax) for ax in grid.transverse_axes),
        laplacian=laplacian(grid, f.values),
    )


# --- discrete pairings -------------------------------------------------


def inner(grid: Grid, f: np.ndarray, g: np.ndarray) -> float:
    """Weighted real inner product over interior nodes."""
    sl = grid.interior
    return grid.cell_volume * float(np.sum((np.conj(f[sl]) * g[sl]).real))


def norm(grid: Grid, f: np.ndarray) -> float:
    return float(np.sqrt(inner(grid, f, f)))


def integrate(grid: Grid, density: np.ndarray) -> float:
    return float(np.sum(grid.weights * density))


def random_perturbation(
    grid: Grid, rng: np.random.Generator, amplitude: float = 0.1
) -> PerturbationField:
    """Seeded i.i.d. perturbation, mostly for tests and smoke runs."""
    values = amplitude * (
        rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    )
    return PerturbationField(grid, values)


def max_boundary_face_deviation(psi: ComplexField) -> float:
    """max |psi - 1| on the faces of the transverse box."""
    dev = np.abs(psi.values - 1.0)
    faces = [np.take(dev, 0, axis=ax) for ax in psi.grid.transverse_axes]
    return float(max(face.max() for face in faces))
