"""Tests for grids, fields, transforms, sampling and extrapolation."""

# pyright: reportPrivateUsage=warning

from __future__ import annotations

import math

import numpy as np
import pytest

from fracwave.core import (
    FieldSampler,
    FractionalOrder,
    ScalarField,
    SpacetimeGrid,
    SpectralField,
    as_order,
    check_padding,
    dft_forward,
    dft_inverse,
    gaussian_bump,
    laplace_forward,
    null_bump,
    sample_mode,
    support_extent,
    wave_apply,
)
from fracwave.core.extrapolate import merged_exponents, richardson
from fracwave.core.transforms import check_eps, grid_frequency, hermitian_part, hermitian_residual
from fracwave.errors import GridError, HermitianError, OrderError, ParameterError


class TestSpacetimeGrid:
    """Tests for SpacetimeGrid."""

    def test_shape_and_dimension(self) -> None:
        grid = SpacetimeGrid(nt=32, nx=(16, 8), dt=0.5, dx=(0.25, 1.0))

        assert grid.n == 3
        assert grid.shape == (32, 16, 8)
        assert grid.window == 16.0
        assert grid.cell_volume == pytest.approx(0.125)

    def test_centred_space_axis(self, small_grid: SpacetimeGrid) -> None:
        x = small_grid.space_axis(0)

        assert x[0] == -2.0
        assert x[small_grid.nx[0] // 2] == 0.0
        assert small_grid.times()[0] == -1.0

    def test_to_index(self, small_grid: SpacetimeGrid) -> None:
        assert small_grid.to_index((-1.0, 0.0)) == (0.0, 4.0)
        assert small_grid.to_index((0.0, 1.0)) == (4.0, 6.0)

    def test_rejects_small_axis(self) -> None:
        with pytest.raises(GridError, match="below minimum"):
            SpacetimeGrid(nt=2, nx=(16,), dt=0.5, dx=(0.5,))

    def test_rejects_three_spatial_axes(self) -> None:
        with pytest.raises(GridError):
            SpacetimeGrid(nt=8, nx=(8, 8, 8), dt=0.5, dx=(0.5, 0.5, 0.5))

    def test_rejects_mismatched_steps(self) -> None:
        with pytest.raises(GridError):
            SpacetimeGrid(nt=8, nx=(8, 8), dt=0.5, dx=(0.5,))

    def test_rejects_non_positive_step(self) -> None:
        with pytest.raises(GridError):
            SpacetimeGrid(nt=8, nx=(8,), dt=0.0, dx=(0.5,))

    def test_to_index_checks_dimension(self, small_grid: SpacetimeGrid) -> None:
        with pytest.raises(GridError):
            small_grid.to_index((0.0, 0.0, 0.0))


class TestScalarField:
    """Tests for ScalarField."""

    def test_values_are_read_only(self, small_grid: SpacetimeGrid) -> None:
        f = ScalarField(small_grid, np.zeros(small_grid.shape))

        with pytest.raises(ValueError):
            f.values[0, 0] = 1.0

    def test_rejects_wrong_size(self, small_grid: SpacetimeGrid) -> None:
        with pytest.raises(GridError):
            ScalarField(small_grid, np.zeros(10))

    def test_rejects_non_finite(self, small_grid: SpacetimeGrid) -> None:
        values = np.zeros(small_grid.shape)
        values[1, 1] = np.nan
        with pytest.raises(GridError, match="non-finite"):
            ScalarField(small_grid, values)

    def test_norm_and_arithmetic(self, small_grid: SpacetimeGrid) -> None:
        ones = ScalarField(small_grid, np.ones(small_grid.shape))

        total = ones + ones.scaled(2.0)
        assert np.all(total.values == 3.0)
        expected = math.sqrt(np.prod(small_grid.shape) * small_grid.cell_volume)
        assert ones.norm() == pytest.approx(expected)

    def test_add_rejects_other_grid(self, small_grid: SpacetimeGrid, grid: SpacetimeGrid) -> None:
        a = ScalarField(small_grid, np.zeros(small_grid.shape))
        b = ScalarField(grid, np.zeros(grid.shape))
        with pytest.raises(GridError):
            _ = a + b


class TestFractionalOrder:
    """Tests for FractionalOrder."""

    def test_integer_and_fractional_parts(self) -> None:
        order = FractionalOrder(2.4)

        assert order.m == 2
        assert order.alpha0 == pytest.approx(0.4)
        assert not order.is_integer
        assert FractionalOrder(3.0).is_integer

    def test_half_integer(self) -> None:
        assert FractionalOrder(1.5).is_half_integer
        assert FractionalOrder(1.0).is_half_integer
        assert not FractionalOrder(0.4).is_half_integer

    def test_c_alpha_sign_alternates(self) -> None:
        assert FractionalOrder(0.4).c_alpha < 0
        assert FractionalOrder(1.3).c_alpha > 0
        assert FractionalOrder(2.4).c_alpha < 0

    def test_c_alpha_value(self) -> None:
        a = 0.4
        expected = -(2.0 ** (2 * a - 1)) * math.gamma(a) / math.gamma(1 - a)
        assert FractionalOrder(a).c_alpha == pytest.approx(expected, rel=1e-14)

    def test_mu(self) -> None:
        assert FractionalOrder(0.5, n=3).mu == pytest.approx(0.25 - 2.25)

    def test_rejects_non_positive(self) -> None:
        with pytest.raises(OrderError):
            FractionalOrder(0.0)
        with pytest.raises(OrderError):
            FractionalOrder(float("nan"))

    def test_as_order_rebinds_dimension(self) -> None:
        order = as_order(FractionalOrder(0.4, n=2), 3)

        assert order.n == 3
        assert order.alpha == 0.4
        assert as_order(0.7, 2) == FractionalOrder(0.7, 2)

    def test_require_below(self) -> None:
        with pytest.raises(OrderError, match="kernel2"):
            FractionalOrder(1.2).require_below(1.0, "kernel2", "1")


class TestTransforms:
    """Tests for the discrete Fourier and Laplace services."""

    def test_round_trip(self, small_grid: SpacetimeGrid, rng: np.random.Generator) -> None:
        f = ScalarField(small_grid, rng.normal(size=small_grid.shape))

        back = dft_inverse(dft_forward(f))
        np.testing.assert_allclose(back.values, f.values, atol=1e-12)

    def test_parseval(self, small_grid: SpacetimeGrid, rng: np.random.Generator) -> None:
        f = ScalarField(small_grid, rng.normal(size=small_grid.shape))
        spec = dft_forward(f)
        dv = small_grid.cell_volume
        cells = int(np.prod(small_grid.shape))

        lhs = float(np.sum(f.values**2)) * dv
        rhs = float(np.sum(np.abs(spec.coeffs) ** 2)) / (cells * dv)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_hermitian_symmetry_of_real_data(
        self, small_grid: SpacetimeGrid, rng: np.random.Generator
    ) -> None:
        f = ScalarField(small_grid, rng.normal(size=small_grid.shape))

        assert hermitian_residual(dft_forward(f).coeffs) < 1e-14

    def test_single_cosine_gives_conjugate_pair(self, small_grid: SpacetimeGrid) -> None:
        tau = grid_frequency(small_grid, (3, 0))[0]
        t = small_grid.times()[:, None]
        f = ScalarField(small_grid, np.cos(tau * t) * np.ones(small_grid.shape))

        coeffs = dft_forward(f).coeffs
        peak = float(np.max(np.abs(coeffs)))
        mask = np.ones(small_grid.shape, dtype=bool)
        mask[3, 0] = mask[small_grid.nt - 3, 0] = False
        assert np.max(np.abs(coeffs[mask])) < 1e-12 * peak
        assert coeffs[3, 0] == pytest.approx(np.conj(coeffs[small_grid.nt - 3, 0]), abs=1e-12 * peak)

    def test_inverse_rejects_non_hermitian(
        self, small_grid: SpacetimeGrid, rng: np.random.Generator
    ) -> None:
        coeffs = rng.normal(size=small_grid.shape) + 1j * rng.normal(size=small_grid.shape)

        with pytest.raises(HermitianError):
            dft_inverse(SpectralField(small_grid, coeffs))

    def test_hermitian_part_is_hermitian(
        self, small_grid: SpacetimeGrid, rng: np.random.Generator
    ) -> None:
        m = rng.normal(size=small_grid.shape) + 1j * rng.normal(size=small_grid.shape)

        assert hermitian_residual(hermitian_part(m)) < 1e-15

    def test_wave_apply_matches_closed_form(self, grid: SpacetimeGrid, gaussian: ScalarField) -> None:
        expected = null_bump(grid, center=(12.0, 0.0), width=1.5, order=1)

        result = wave_apply(gaussian)
        scale = float(np.max(np.abs(expected.values)))
        assert np.max(np.abs(result.values - expected.values)) < 1e-9 * scale

    def test_laplace_forward_damps(self, grid: SpacetimeGrid, gaussian: ScalarField) -> None:
        eps = 0.05
        damped = ScalarField(grid, gaussian.values * np.exp(-eps * grid.times())[:, None])

        spec = laplace_forward(gaussian, eps)
        np.testing.assert_allclose(spec.coeffs, dft_forward(damped).coeffs, atol=1e-14)

    def test_eps_guard(self) -> None:
        check_eps(0.5, 40.0)
        with pytest.raises(ParameterError, match="exceeds"):
            check_eps(1.0, 32.0)
        with pytest.raises(ParameterError):
            check_eps(0.0, 32.0)

    def test_laplace_forward_rejects_large_eps(self, gaussian: ScalarField) -> None:
        with pytest.raises(ParameterError):
            laplace_forward(gaussian, 1.0)

    def test_sample_mode_checks_components(self, small_grid: SpacetimeGrid) -> None:
        with pytest.raises(ParameterError):
            sample_mode(small_grid, 1.0, (1.0, 2.0))


class TestSamples:
    """Tests for test data and off-grid sampling."""

    def test_null_bump_order_zero_is_gaussian(self, grid: SpacetimeGrid, gaussian: ScalarField) -> None:
        same = null_bump(grid, center=(12.0, 0.0), width=1.5, order=0)

        np.testing.assert_array_equal(same.values, gaussian.values)

    def test_gaussian_peak(self, grid: SpacetimeGrid) -> None:
        g = gaussian_bump(grid, center=(12.0, 0.0), width=1.5)

        assert g.values[24, 32] == pytest.approx(1.0)

    def test_bump_parameter_errors(self, grid: SpacetimeGrid) -> None:
        with pytest.raises(ParameterError):
            null_bump(grid, center=(12.0,), width=1.5)
        with pytest.raises(ParameterError):
            null_bump(grid, center=(12.0, 0.0), width=-1.0)
        with pytest.raises(ParameterError):
            null_bump(grid, center=(12.0, 0.0), width=1.0, order=-1)

    def test_linear_sampler_exact_at_nodes(
        self, small_grid: SpacetimeGrid, rng: np.random.Generator
    ) -> None:
        f = ScalarField(small_grid, rng.normal(size=small_grid.shape))
        t, x = small_grid.axes()
        points = np.array([[t[3], t[7]], [x[2], x[5]]])

        values = FieldSampler(f, order=1)(points)
        np.testing.assert_allclose(values, [f.values[3, 2], f.values[7, 5]], atol=1e-14)

    def test_linear_sampler_midpoint(self, small_grid: SpacetimeGrid, rng: np.random.Generator) -> None:
        f = ScalarField(small_grid, rng.normal(size=small_grid.shape))
        t, x = small_grid.axes()
        point = np.array([[0.5 * (t[3] + t[4])], [x[2]]])

        value = FieldSampler(f, order=1)(point)
        assert value[0] == pytest.approx(0.5 * (f.values[3, 2] + f.values[4, 2]), abs=1e-14)

    def test_quintic_sampler_interpolates(self, grid: SpacetimeGrid, rng: np.random.Generator) -> None:
        f = ScalarField(grid, rng.normal(size=grid.shape))
        t, x = grid.axes()
        points = np.array([[t[32], t[30]], [x[32], x[34]]])

        values = FieldSampler(f)(points)
        np.testing.assert_allclose(values, [f.values[32, 32], f.values[30, 34]], atol=1e-8)

    def test_sampler_is_zero_outside(self, small_grid: SpacetimeGrid) -> None:
        f = ScalarField(small_grid, np.ones(small_grid.shape))

        value = FieldSampler(f, order=1)(np.array([[-50.0], [0.0]]))
        assert value[0] == 0.0

    def test_sampler_checks_order_and_points(self, small_grid: SpacetimeGrid) -> None:
        f = ScalarField(small_grid, np.zeros(small_grid.shape))
        with pytest.raises(ParameterError):
            FieldSampler(f, order=0)
        with pytest.raises(GridError):
            FieldSampler(f)(np.zeros((3, 2)))

    def test_support_extent(self, grid: SpacetimeGrid) -> None:
        values = np.zeros(grid.shape)
        values[10:20, 5:9] = 1.0
        values[12, 6] = -4.0

        assert support_extent(ScalarField(grid, values)) == (5.0, 2.0)
        assert support_extent(ScalarField(grid, np.zeros(grid.shape))) == (0.0, 0.0)

    def test_padding(self, grid: SpacetimeGrid, bump: ScalarField) -> None:
        check_padding(bump)
        values = np.zeros(grid.shape)
        values[0:41, 30:34] = 1.0
        long = ScalarField(grid, values)

        with pytest.raises(GridError, match="along t"):
            check_padding(long)
        check_padding(long, axes=(1,))


class TestRichardson:
    """Tests for generalized Richardson extrapolation."""

    def test_exact_for_polynomial_error(self) -> None:
        samples = [1.0 + h + h * h for h in (1.0, 0.5, 0.25)]

        result = richardson(samples, [1.0, 2.0])
        assert abs(result.value - 1.0) < 1e-14
        assert len(result.table) == 3

    def test_fractional_exponents(self) -> None:
        samples = [2.0 - 3.0 * h**0.8 + h**2 for h in (0.4, 0.2, 0.1)]

        result = richardson(samples, [0.8, 2.0])
        assert abs(result.value - 2.0) < 1e-13

    def test_single_sample_has_infinite_indicator(self) -> None:
        result = richardson([3.0], [])

        assert result.value == 3.0
        assert math.isinf(result.indicator)

    def test_needs_enough_exponents(self) -> None:
        with pytest.raises(ParameterError):
            richardson([1.0, 2.0, 3.0], [1.0])

    def test_merged_exponents(self) -> None:
        assert merged_exponents([1.2, 2.0], [2.0, 4.0]) == [1.2, 2.0, 4.0]
        assert merged_exponents([3.0, 1.0], limit=1) == [1.0]
