from pathlib import Path

import numpy as np
import pytest

from cqwave.core.grid import ComplexField, Grid, PerturbationField, embed, make_grid
from cqwave.core.solvers.ansatz import slab_window


def small_grid(d: int = 2, n1: int = 33, nt: int = 16, N: float = 8.0, L: float = 8.0) -> Grid:
    return make_grid(d=d, N=N, L=L, n1=n1, nt=nt)


def smooth_bump(grid: Grid, amplitude: float = 0.2, width: float = 1.5) -> PerturbationField:
    """Windowed Gaussian with an odd imaginary part, so P != 0."""
    coords = grid.mesh()
    r2 = sum(x * x for x in coords)
    x1 = coords[0]
    values = amplitude * np.exp(-r2 / (width * width)) * (1.0 + 0.5j * x1 / width)
    return PerturbationField(grid, slab_window(grid) * values)


def smooth_field(grid: Grid, amplitude: float = 0.2, width: float = 1.5) -> ComplexField:
    return embed(smooth_bump(grid, amplitude, width))


def x1_profile(grid: Grid, amplitude: float = 0.3) -> ComplexField:
    """Transversally uniform field 1 + a(x1) + i b(x1) with Gaussian a and b."""
    x1 = grid.mesh()[0]
    g = np.exp(-0.5 * x1 * x1)
    values = 1.0 + amplitude * g * (1.0 + 0.5j * x1)
    return ComplexField(grid, np.broadcast_to(values, grid.shape)).with_boundary()


GOLDEN_DIR = Path(__file__).parent / "golden"


def assert_matches_golden(
    path: Path, golden: str, atol: float = 1e-12, rtol: float = 1e-12
) -> None:
    """Compare a written table with ``tests/golden/<golden>``.

    The comment and header lines must match exactly. Numeric cells are compared
    with the given tolerances, other cells as text; a ``*`` cell is not checked.
    """
    expected = (GOLDEN_DIR / golden).read_text().splitlines()
    actual = path.read_text().splitlines()
    assert actual[:2] == expected[:2]
    assert len(actual) == len(expected)
    for got_line, want_line in zip(actual[2:], expected[2:]):
        for got, want in zip(got_line.split(","), want_line.split(","), strict=True):
            if want == "*":
                continue
            try:
                want_value = float(want)
            except ValueError:
                assert got == want
            else:
                assert float(got) == pytest.approx(want_value, abs=atol, rel=rtol)
