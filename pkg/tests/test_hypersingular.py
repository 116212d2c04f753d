"""Tests for the hypersingular-integral route and Riesz potentials."""

# pyright: reportPrivateUsage=warning

from __future__ import annotations

import numpy as np
import pytest

from fracwave.core import (
    FractionalOrder,
    ScalarField,
    SpacetimeGrid,
    gaussian_bump,
    null_bump,
    wave_apply,
)
from fracwave.errors import ConvergenceError, GridError, OrderError, ParameterError
from fracwave.hypersingular import (
    QScheme,
    QuadratureSpec,
    box_alpha_integral,
    box_alpha_kernel2,
    difference_operator,
    riesz_constant,
    riesz_potential_at,
)
from fracwave.symbol import apply_box_alpha_spectral

COARSE = QuadratureSpec(tol=1e-4, h_u=0.5, h_v=0.5)

#: Five by five sample points around the centre of the test bumps.
GRID_POINTS = [(t, x) for t in (10.0, 11.0, 12.0, 13.0, 14.0) for x in (-2.0, -1.0, 0.0, 1.0, 2.0)]


@pytest.fixture
def fine_grid() -> SpacetimeGrid:
    return SpacetimeGrid(nt=128, nx=(128,), dt=0.25, dx=(0.25,))


def spectral_at(f: ScalarField, alpha: float, points: list[tuple[float, float]]) -> np.ndarray:
    values = apply_box_alpha_spectral(f, alpha).values
    out = []
    for p in points:
        it, ix = f.grid.to_index(p)
        out.append(values[round(it), round(ix)])
    return np.array(out)


class TestDifferenceOperator:
    """The double q-difference at a single (s, y)."""

    @pytest.mark.parametrize("axis", [0, 1])
    def test_annihilates_linear_data(self, grid: SpacetimeGrid, axis: int) -> None:
        coord = grid.mesh()[axis]
        f = ScalarField(grid, np.broadcast_to(coord, grid.shape))
        order = FractionalOrder(0.4, 2)
        scheme = QScheme.build(order)

        value = difference_operator(f, order, scheme, (12.0, 0.0), 0.3, (0.2,), interp_order=1)
        assert abs(value) <= 1e-9

    def test_nonzero_on_curved_data(self, gaussian: ScalarField) -> None:
        scheme = QScheme.build(FractionalOrder(0.4, 2))

        value = difference_operator(gaussian, 0.4, scheme, (12.0, 0.0), 0.3, (0.5,))
        assert abs(value) > 1e-3

    def test_decays_like_order_of_difference(self, gaussian: ScalarField) -> None:
        scheme = QScheme.build(FractionalOrder(0.4, 2))
        radii = np.geomspace(1e-4, 1e-2, 9)

        values = [
            abs(difference_operator(gaussian, 0.4, scheme, (12.0, 0.0), 0.3, (r,))) for r in radii
        ]
        slope = np.polyfit(np.log(radii), np.log(values), 1)[0]
        assert scheme.l == 2
        assert abs(slope - scheme.l) < 0.05

    def test_rejects_wrong_y(self, bump: ScalarField) -> None:
        scheme = QScheme.build(FractionalOrder(0.4, 2))

        with pytest.raises(GridError):
            difference_operator(bump, 0.4, scheme, (12.0, 0.0), 0.3, (0.2, 0.1))
        with pytest.raises(ParameterError):
            difference_operator(bump, 0.4, scheme, (12.0, 0.0), 0.3, (0.0,))
        with pytest.raises(ParameterError):
            difference_operator(bump, 0.4, scheme, (12.0, 0.0), -1.0, (0.2,))

    def test_rejects_foreign_scheme(self, bump: ScalarField) -> None:
        scheme = QScheme.build(FractionalOrder(0.3, 2))

        with pytest.raises(ParameterError, match="built for"):
            difference_operator(bump, 0.4, scheme, (12.0, 0.0), 0.3, (0.2,))


class TestBoxAlphaIntegral:
    """The q-difference integral at probe points."""

    def test_zero_datum(self, grid: SpacetimeGrid) -> None:
        f = ScalarField(grid, np.zeros(grid.shape))

        result = box_alpha_integral(f, 0.4, quad=COARSE, points=[(12.0, 0.0)])
        assert result.values.tolist() == [0.0]
        assert result.converged

    def test_linearity(self, bump: ScalarField) -> None:
        points = [(12.0, 0.0), (14.0, 1.0)]

        once = box_alpha_integral(bump, 0.4, quad=COARSE, points=points).values
        twice = box_alpha_integral(bump.scaled(2.0), 0.4, quad=COARSE, points=points).values
        np.testing.assert_allclose(twice, 2.0 * once, rtol=1e-12, atol=1e-14)

    def test_strict_raises_on_indicator(self, bump: ScalarField) -> None:
        quad = QuadratureSpec(tol=1e-4, h_u=0.5, h_v=0.5, indicator_tol=1e-30)

        with pytest.raises(ConvergenceError) as exc_info:
            box_alpha_integral(bump, 0.4, quad=quad, points=[(12.0, 0.0)], strict=True)
        assert exc_info.value.tolerance == 1e-30

    def test_non_strict_warns(self, bump: ScalarField, caplog: pytest.LogCaptureFixture) -> None:
        quad = QuadratureSpec(tol=1e-4, h_u=0.5, h_v=0.5, indicator_tol=1e-30)

        result = box_alpha_integral(bump, 0.4, quad=quad, points=[(12.0, 0.0)])
        assert not result.converged
        assert "above tolerance" in caplog.text

    def test_half_integer_order(self, bump: ScalarField) -> None:
        with pytest.raises(OrderError):
            box_alpha_integral(bump, 0.5, quad=COARSE, points=[(12.0, 0.0)])

    def test_bad_probe(self, bump: ScalarField) -> None:
        with pytest.raises(GridError, match="probe point"):
            box_alpha_integral(bump, 0.4, quad=COARSE, points=[(12.0,)])

    def test_scheme_mismatch(self, bump: ScalarField) -> None:
        scheme = QScheme.build(FractionalOrder(0.3, 2))

        with pytest.raises(ParameterError):
            box_alpha_integral(bump, 0.4, scheme, COARSE, [(12.0, 0.0)])

    @pytest.mark.slow
    @pytest.mark.parametrize("alpha", [0.3, 0.4, 0.7])
    def test_matches_spectral_route(self, fine_grid: SpacetimeGrid, alpha: float) -> None:
        f = null_bump(fine_grid, (12.0, 0.0), 1.5, order=2)
        expected = spectral_at(f, alpha, GRID_POINTS)

        result = box_alpha_integral(f, alpha, points=GRID_POINTS)
        err = np.max(np.abs(result.values - expected)) / np.max(np.abs(expected))
        assert err <= 1e-3

    @pytest.mark.slow
    def test_independent_of_q(self, fine_grid: SpacetimeGrid) -> None:
        f = null_bump(fine_grid, (12.0, 0.0), 1.5, order=2)
        order = FractionalOrder(0.4, 2)
        points = GRID_POINTS[::6]

        base = box_alpha_integral(f, order, QScheme.build(order), points=points).values
        other = box_alpha_integral(f, order, QScheme.build(order, 3.0), points=points).values
        assert np.max(np.abs(other - base)) <= 1e-4 * np.max(np.abs(base))


class TestQuadratureSpec:
    """Validation of quadrature parameters."""

    def test_rejects_bad_values(self) -> None:
        with pytest.raises(ParameterError):
            QuadratureSpec(tol=0.0)
        with pytest.raises(ParameterError):
            QuadratureSpec(h_u=-0.1)
        with pytest.raises(ParameterError):
            QuadratureSpec(gj_nodes=8)
        with pytest.raises(ParameterError):
            QuadratureSpec(u_bounds=(1.0, -1.0))

    def test_coarsened_halves_density(self) -> None:
        quad = QuadratureSpec(n_theta=64, gj_nodes=20)

        coarse = quad.coarsened()
        assert coarse.h_u == 2 * quad.h_u
        assert coarse.h_v == 2 * quad.h_v
        assert coarse.n_theta == 32
        assert coarse.gj_nodes == 16


class TestKernel2:
    """The light-cone second-difference kernel."""

    def test_rejects_high_order(self, bump: ScalarField) -> None:
        with pytest.raises(OrderError, match="kernel2"):
            box_alpha_kernel2(bump, 1.2, points=[(12.0, 0.0)])

    def test_rejects_three_dimensions(self) -> None:
        grid = SpacetimeGrid(nt=16, nx=(8, 8), dt=0.5, dx=(0.5, 0.5))
        f = ScalarField(grid, np.zeros(grid.shape))

        with pytest.raises(OrderError, match="n = 2"):
            box_alpha_kernel2(f, 0.4, points=[(4.0, 0.0, 0.0)])

    def test_zero_datum(self, grid: SpacetimeGrid) -> None:
        f = ScalarField(grid, np.zeros(grid.shape))

        assert box_alpha_kernel2(f, 0.4, points=[(12.0, 0.0)]).values.tolist() == [0.0]

    @pytest.mark.slow
    def test_matches_spectral_route(self, bump: ScalarField) -> None:
        points = [(12.0, 0.0), (14.0, 1.0), (16.0, -2.0)]
        expected = spectral_at(bump, 0.4, points)

        result = box_alpha_kernel2(bump, 0.4, points=points)
        err = np.max(np.abs(result.values - expected)) / np.max(np.abs(expected))
        assert err < 1e-2


    @pytest.mark.slow
    def test_tends_to_wave_operator(self, grid: SpacetimeGrid) -> None:
        f = null_bump(grid, (12.0, 0.0), 1.5, order=1)
        expected = float(wave_apply(f).values[24, 32])

        errors = [
            abs(float(box_alpha_kernel2(f, alpha, points=[(12.0, 0.0)]).values[0]) - expected)
            for alpha in (0.9, 0.99, 0.999)
        ]
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] < 2e-2 * abs(expected)


class TestRiesz:
    """Hyperbolic Riesz potentials."""

    def test_constant(self) -> None:
        assert riesz_constant(2, 1.0) == pytest.approx(0.5)
        assert riesz_constant(3, 1.0) == pytest.approx(1.0 / (2.0 * np.pi))
        assert riesz_constant(2, -1.0) == 0.0

    def test_order_one_inverts_wave_operator(self, fine_grid: SpacetimeGrid) -> None:
        center = (12.0, 0.0)
        g = gaussian_bump(fine_grid, center, 1.5)
        box_g = null_bump(fine_grid, center, 1.5, order=1)
        points = [(12.0, 0.0), (14.0, 0.0), (16.0, 0.0)]

        result = riesz_potential_at(box_g, 1.0, points)
        expected = np.array([g.values[round(p[0] / 0.25), 64] for p in points])
        assert np.max(np.abs(result.values - expected)) < 1e-3 * float(np.max(g.values))

    def test_rejects_low_order(self, bump: ScalarField) -> None:
        with pytest.raises(OrderError, match="riesz"):
            riesz_potential_at(bump, 0.0, [(12.0, 0.0)])

    def test_rejects_low_order_in_three_dimensions(self) -> None:
        grid = SpacetimeGrid(nt=16, nx=(8, 8), dt=0.5, dx=(0.5, 0.5))
        f = ScalarField(grid, np.zeros(grid.shape))

        with pytest.raises(OrderError):
            riesz_potential_at(f, 0.5, [(4.0, 0.0, 0.0)])

    @pytest.mark.slow
    def test_index_shift(self, fine_grid: SpacetimeGrid) -> None:
        center = (12.0, 0.0)
        g = gaussian_bump(fine_grid, center, 1.5)
        box_g = null_bump(fine_grid, center, 1.5, order=1)
        points = [(12.0, 0.0), (15.0, 1.0)]

        shifted = riesz_potential_at(box_g, 1.6, points).values
        direct = riesz_potential_at(g, 0.6, points).values
        assert np.max(np.abs(shifted - direct)) < 1e-3 * float(np.max(np.abs(direct)))

    @pytest.mark.slow
    def test_order_one_inverts_wave_operator_in_three_dimensions(self) -> None:
        grid = SpacetimeGrid(nt=64, nx=(32, 32), dt=0.5, dx=(0.5, 0.5))
        center = (12.0, 0.0, 0.0)
        g = gaussian_bump(grid, center, 1.5)
        box_g = null_bump(grid, center, 1.5, order=1)
        points = [(12.0, 0.0, 0.0), (14.0, 1.0, 0.0)]

        result = riesz_potential_at(box_g, 1.0, points)
        expected = []
        for p in points:
            it, ix, iy = grid.to_index(p)
            expected.append(g.values[round(it), round(ix), round(iy)])
        assert np.max(np.abs(result.values - np.array(expected))) < 1e-3
