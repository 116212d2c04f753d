"""Tests for the time-domain extension solver and the boundary fit."""

# pyright: reportPrivateUsage=warning

from __future__ import annotations

import numpy as np
import pytest

from fracwave.core import FractionalOrder, ScalarField, SpacetimeGrid
from fracwave.errors import OrderError, ParameterError, StabilityError
from fracwave.extension import (
    SolverGrid,
    boundary_fit_extract,
    dtn_time_domain,
    free_evolution,
    solve_time_domain,
)
from fracwave.extension.solver import support_diameter
from fracwave.symbol import apply_box_alpha_spectral


@pytest.fixture
def strip() -> SpacetimeGrid:
    return SpacetimeGrid(nt=8, nx=(32,), dt=0.5, dx=(0.5,))


class TestSolverGrid:
    """Discretization of the half-space."""

    def test_auto_substeps_are_stable(self, grid: SpacetimeGrid) -> None:
        sgrid = SolverGrid.build(grid, 0.4)

        assert sgrid.dt <= sgrid.stability_limit
        assert sgrid.substeps > 1
        assert sgrid.y_max == grid.window
        assert sgrid.ny == 640

    def test_explicit_substeps_checked(self, grid: SpacetimeGrid) -> None:
        with pytest.raises(StabilityError) as exc_info:
            SolverGrid.build(grid, 0.4, substeps=1)
        assert exc_info.value.dt == 0.5

    def test_order_outside_unit_interval(self, grid: SpacetimeGrid) -> None:
        with pytest.raises(OrderError, match="time-domain"):
            SolverGrid.build(grid, 1.3)

    def test_parameter_validation(self, grid: SpacetimeGrid) -> None:
        with pytest.raises(ParameterError):
            SolverGrid.build(grid, 0.4, dy=0.0)
        with pytest.raises(ParameterError, match="four cells"):
            SolverGrid.build(grid, 0.4, dy=0.5, y_max=1.0)

    @pytest.mark.parametrize("alpha", [0.25, 0.4, 0.8])
    def test_masses_telescope(self, strip: SpacetimeGrid, alpha: float) -> None:
        sgrid = SolverGrid.build(strip, alpha, dy=0.1, y_max=3.2)
        expected = 3.2 ** (2.0 - 2.0 * alpha) / (2.0 - 2.0 * alpha)

        assert float(np.sum(sgrid.masses)) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.25, 0.4, 0.8])
    def test_flux_is_exact_for_steady_profile(self, strip: SpacetimeGrid, alpha: float) -> None:
        sgrid = SolverGrid.build(strip, alpha, dy=0.1, y_max=3.2)

        flux = sgrid.couplings * np.diff(sgrid.y ** (2.0 * alpha))
        np.testing.assert_allclose(flux, 2.0 * alpha, rtol=1e-12)

    def test_sponge_covers_top_of_range(self, strip: SpacetimeGrid) -> None:
        sgrid = SolverGrid.build(strip, 0.4, dy=0.1, y_max=3.2)

        damping = sgrid.damping()
        assert np.all(damping[sgrid.y < 0.8 * 3.2] == 0.0)
        assert damping[-1] > 0.0
        off = SolverGrid.build(strip, 0.4, dy=0.1, y_max=3.2, sponge=False)
        assert not np.any(off.damping())


class TestEvolution:
    """Leapfrog marching."""

    def test_energy_is_conserved_without_sponge(self, strip: SpacetimeGrid) -> None:
        sgrid = SolverGrid.build(strip, 0.4, dy=0.1, y_max=3.2, sponge=False)
        x = strip.space_axis(0)[:, None]
        initial = np.exp(-(x**2)) * np.exp(-((sgrid.y[None, :] - 1.5) ** 2) / 0.1)

        evolution = free_evolution(sgrid, initial, 100)
        assert evolution.energies.shape == (100,)
        assert evolution.drift <= 1e-6

    def test_free_evolution_checks_shape(self, strip: SpacetimeGrid) -> None:
        sgrid = SolverGrid.build(strip, 0.4, dy=0.1, y_max=3.2)

        with pytest.raises(ParameterError, match="expected shape"):
            free_evolution(sgrid, np.zeros((32, 5)), 3)

    def test_zero_datum(self, grid: SpacetimeGrid) -> None:
        f = ScalarField(grid, np.zeros(grid.shape))

        solution = solve_time_domain(f, 0.4, keep=4)
        assert solution.values.shape == (64, 64, 4)
        assert not np.any(solution.values)
        assert not np.any(solution.trace().values)

    def test_rejects_foreign_solver_grid(self, grid: SpacetimeGrid, bump: ScalarField) -> None:
        sgrid = SolverGrid.build(grid, 0.3)

        with pytest.raises(ParameterError, match="alpha"):
            solve_time_domain(bump, 0.4, sgrid)

    def test_support_diameter(self, bump: ScalarField) -> None:
        diameter = support_diameter(bump)

        assert 5.0 < diameter < 25.0
        assert support_diameter(bump.scaled(0.0)) == 0.0


class TestBoundaryFit:
    """Reading the Neumann data off the expansion near y = 0."""

    def test_recovers_synthetic_expansion(self) -> None:
        order = FractionalOrder(0.4)
        y = 0.05 * (np.arange(8) + 0.5)
        b0 = np.array([1.0, -0.3, 2.5])
        values = (
            np.array([0.7, 1.1, -2.0])[:, None]
            + np.array([0.2, -1.0, 0.5])[:, None] * y**2
            + b0[:, None] * y**0.8
            + np.array([-0.4, 0.9, 0.1])[:, None] * y**2.8
        )

        fit = boundary_fit_extract(values, y, order)
        np.testing.assert_allclose(fit.fractional[0], b0, rtol=1e-6)
        np.testing.assert_allclose(fit.value, order.c_alpha * 0.8 * b0, rtol=1e-6)
        assert np.all(fit.residual < 1e-8)
        assert not np.any(fit.ill_conditioned)

    def test_too_few_cells(self) -> None:
        y = 0.05 * (np.arange(8) + 0.5)

        with pytest.raises(ParameterError, match="cells"):
            boundary_fit_extract(np.zeros((2, 8)), y, 0.4, cells=3)

    def test_not_enough_heights(self) -> None:
        y = 0.05 * (np.arange(4) + 0.5)

        with pytest.raises(ParameterError, match="heights"):
            boundary_fit_extract(np.zeros((2, 4)), y, 0.4, cells=8)

    def test_flags_ill_conditioning(self, caplog: pytest.LogCaptureFixture) -> None:
        y = 0.05 * (np.arange(8) + 0.5)

        fit = boundary_fit_extract(np.ones((2, 8)), y, 0.4, condition_max=1.0)
        assert np.all(fit.ill_conditioned)
        assert "condition" in caplog.text


@pytest.mark.slow
class TestTimeDomainAcceptance:
    """Time-domain DtN against the spectral route."""

    def test_matches_spectral_route(self, bump: ScalarField) -> None:
        expected = apply_box_alpha_spectral(bump, 0.4).values

        result = dtn_time_domain(bump, 0.4)
        error = np.linalg.norm(result.values - expected) / np.linalg.norm(expected)
        assert error < 5e-2

    def test_error_decreases_under_refinement(self, grid: SpacetimeGrid, bump: ScalarField) -> None:
        expected = apply_box_alpha_spectral(bump, 0.4).values
        norm = np.linalg.norm(expected)

        errors = [
            np.linalg.norm(dtn_time_domain(bump, 0.4, SolverGrid.build(grid, 0.4, dy=dy)).values - expected)
            / norm
            for dy in (0.1, 0.05)
        ]
        assert errors[1] < errors[0]
        assert errors[1] < 5e-2
