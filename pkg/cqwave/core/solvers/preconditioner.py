"""Inverse discrete Helmholtz operator on the interior of a Dirichlet slab.

The Dirichlet three-point second difference along x1 is diagonalised by the
type-I discrete sine transform and the transverse Laplacian by the FFT, so the
inverse is applied exactly in O(n log n).
"""

import numpy as np
from scipy import fft

from cqwave.core.grid import Grid


def dirichlet_eigenvalues(grid: Grid) -> np.ndarray:
    """Eigenvalues of -d_x1x1 on the n1 - 2 interior rows, broadcastable to fields."""
    n = grid.n1 - 2
    j = np.arange(1, n + 1)
    lam = 4.0 / grid.h1**2 * np.sin(0.5 * np.pi * j / (n + 1)) ** 2
    return lam.reshape((n,) + (1,) * (grid.d - 1))


def to_spectral(grid: Grid, f: np.ndarray) -> np.ndarray:
    """Sine transform along x1, Fourier transform transversally (interior rows)."""
    g = fft.dst(f, type=1, axis=0, norm="ortho")
    return fft.fftn(g, axes=grid.transverse_axes)


def from_spectral(grid: Grid, g: np.ndarray) -> np.ndarray:
    f = fft.ifftn(g, axes=grid.transverse_axes)
    return fft.idst(f, type=1, axis=0, norm="ortho")


class HelmholtzPreconditioner:
    """(-Laplace + 4(1-A))^-1 on Re psi and (-Laplace)^-1 on Im psi.

    This is -L_1^-1 at c = 0, the linearisation at psi = 1.
    """

    def __init__(self, grid: Grid, A: float):
        if grid.periodic_x1:
            raise ValueError("preconditioner requires a Dirichlet slab")
        self.grid = grid
        symbol = dirichlet_eigenvalues(grid) + grid.kt_sq
        self._inv_real = 1.0 / (symbol + 4.0 * (1.0 - A))
        self._inv_imag = 1.0 / symbol

    def _solve(self, f: np.ndarray, inverse_symbol: np.ndarray) -> np.ndarray:
        return from_spectral(self.grid, inverse_symbol * to_spectral(self.grid, f)).real

    def apply_interior(self, r: np.ndarray) -> np.ndarray:
        """Apply to an array restricted to the interior rows."""
        return self._solve(r.real, self._inv_real) + 1j * self._solve(
            r.imag, self._inv_imag
        )

    def apply(self, r: np.ndarray) -> np.ndarray:
        """Apply to a full field array; boundary rows of the result are zero."""
        out = np.zeros_like(r, dtype=np.complex128)
        out[1:-1] = self.apply_interior(r[1:-1])
        return out
