"""Shared fixtures: small grids and smooth data on them."""

from __future__ import annotations

import numpy as np
import pytest

from fracwave.core import ScalarField, SpacetimeGrid, gaussian_bump, null_bump


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def grid() -> SpacetimeGrid:
    """64 x 64 samples of [0, 32) x [-16, 16)."""
    return SpacetimeGrid(nt=64, nx=(64,), dt=0.5, dx=(0.5,))


@pytest.fixture
def small_grid() -> SpacetimeGrid:
    return SpacetimeGrid(nt=16, nx=(8,), dt=0.25, dx=(0.5,), t0=-1.0)


@pytest.fixture
def bump(grid: SpacetimeGrid) -> ScalarField:
    """Second-order null bump centred at (12, 0)."""
    return null_bump(grid, center=(12.0, 0.0), width=1.5, order=2)


@pytest.fixture
def gaussian(grid: SpacetimeGrid) -> ScalarField:
    return gaussian_bump(grid, center=(12.0, 0.0), width=1.5)
