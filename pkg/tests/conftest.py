"""Shared test fixtures and utilities."""

import numpy as np
import pytest

from cqwave.core.grid import ComplexField, make_grid

from .helpers import small_grid, smooth_field


@pytest.fixture
def grid():
    """Small 2D slab, cheap enough for solvers and time stepping."""
    return small_grid()


@pytest.fixture
def unit_field(grid):
    """The constant state psi = 1."""
    return ComplexField.constant(grid)


@pytest.fixture
def bump_field(grid):
    return smooth_field(grid)


@pytest.fixture
def fd_grid():
    """2D 101 x 64 grid for the variational consistency checks."""
    return make_grid(d=2, N=10.0, L=12.8, n1=101, nt=64)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
