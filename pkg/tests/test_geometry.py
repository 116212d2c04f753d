"""Tests for product-space DtN maps and the global-AdS multiplier."""

# pyright: reportPrivateUsage=warning

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from scipy import integrate, special

from fracwave.core import ScalarField, SpacetimeGrid
from fracwave.errors import DomainError, ParameterError
from fracwave.geometry import (
    EigenBasis,
    GlobalAdsMode,
    asymptotic_ratio,
    connection_coefficients,
    global_ads_multiplier,
    neumann_limit_ladder,
    principal_symbol_ratio,
    principal_symbol_ratio_lambda,
    product_dtn_apply,
    product_dtn_coeffs,
    radial_ode_residual,
    radial_profile,
    radial_profile_derivative,
)
from fracwave.symbol import apply_box_alpha_spectral


class TestEigenBasis:
    """Eigenvalue ladders of the compact factor."""

    def test_circle(self) -> None:
        basis = EigenBasis.circle(2)

        assert basis.modes == (0, 1, -1, 2, -2)
        assert basis.eigenvalues == pytest.approx((0.0, 1.0, 1.0, 4.0, 4.0))
        assert len(basis) == 5

    def test_circle_length(self) -> None:
        basis = EigenBasis.circle(1, length=math.pi)

        assert basis.lambdas.tolist() == pytest.approx([0.0, 2.0, 2.0])

    def test_sphere(self) -> None:
        assert EigenBasis.sphere(3, 3).eigenvalues == (0.0, 1.0, 4.0, 9.0)
        assert EigenBasis.sphere(4, 2).eigenvalues == (0.0, 2.0, 6.0)

    def test_rejects_bad_parameters(self) -> None:
        with pytest.raises(ParameterError):
            EigenBasis.circle(-1)
        with pytest.raises(ParameterError):
            EigenBasis.circle(2, length=0.0)
        with pytest.raises(ParameterError):
            EigenBasis.sphere(1, 2)


class TestProductDtn:
    """Per-mode symbol application on R x M."""

    def test_circle_matches_spectral_route(self, bump: ScalarField) -> None:
        expected = apply_box_alpha_spectral(bump, 0.4).values

        result = product_dtn_apply(bump, 0.4).values
        assert np.max(np.abs(result - expected)) < 1e-12 * np.max(np.abs(expected))

    def test_circle_needs_one_axis(self) -> None:
        grid = SpacetimeGrid(nt=8, nx=(8, 8), dt=0.5, dx=(0.5, 0.5))

        with pytest.raises(ParameterError, match="one spatial axis"):
            product_dtn_apply(ScalarField(grid, np.zeros(grid.shape)), 0.4)

    def test_zero_mode_cosine(self) -> None:
        nt, dt, alpha = 64, 0.25, 0.4
        tau = 2.0 * math.pi * 3 / (nt * dt)
        t = dt * np.arange(nt)

        out = product_dtn_coeffs(np.cos(tau * t)[:, None], [0.0], alpha, dt)
        expected = tau ** (2 * alpha) * np.cos(tau * t + math.pi * alpha)
        np.testing.assert_allclose(out[:, 0], expected, atol=1e-12)

    def test_static_datum(self) -> None:
        eigenvalues = [1.0, 4.0, 9.0]

        out = product_dtn_coeffs(np.ones((16, 3)), eigenvalues, 0.3, 0.5)
        np.testing.assert_allclose(out, np.broadcast_to(np.array(eigenvalues) ** 0.3, (16, 3)), rtol=1e-12)

    def test_regularized_static_datum(self) -> None:
        out = product_dtn_coeffs(np.ones((16, 1)), [4.0], 0.5, 0.5, eps=0.1)

        assert np.all(np.isfinite(out))
        assert out.dtype == np.float64

    def test_shape_mismatch(self) -> None:
        with pytest.raises(ParameterError, match="expected"):
            product_dtn_coeffs(np.ones((8, 3)), [1.0, 2.0], 0.4, 0.5)

    def test_rejects_large_eps(self) -> None:
        with pytest.raises(ParameterError):
            product_dtn_coeffs(np.ones((32, 1)), [1.0], 0.4, 0.5, eps=10.0)


class TestGlobalAdsMode:
    """Mode parameters and the radial solution."""

    @pytest.mark.parametrize("n,lam,beta", [(2, 0.0, 0.0), (3, 0.0, 0.0), (2, 3.0, 3.0), (4, 0.0, 0.0)])
    def test_beta(self, n: int, lam: float, beta: float) -> None:
        assert GlobalAdsMode(n, 0.4, lam).beta == pytest.approx(beta)

    def test_beta_three_dimensions(self) -> None:
        assert GlobalAdsMode(3, 0.4, 1.0).beta == pytest.approx(0.5 * (math.sqrt(5.0) - 1.0))

    def test_rejects_bad_parameters(self) -> None:
        with pytest.raises(ParameterError):
            GlobalAdsMode(1, 0.4, 1.0)
        with pytest.raises(ParameterError):
            GlobalAdsMode(3, -0.4, 1.0)
        with pytest.raises(ParameterError):
            GlobalAdsMode(3, 0.4, -1.0)

    @pytest.mark.parametrize("lam", [1.0, 2.0])
    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 5.0])
    def test_profile_solves_radial_equation(self, lam: float, r: float) -> None:
        residual, phi = radial_ode_residual(GlobalAdsMode(3, 0.4, lam), 0.1 + 2.0j, r)

        assert abs(residual) <= 1e-7 * abs(phi)

    def test_profile_matches_ode_integration(self) -> None:
        mode = GlobalAdsMode(3, 0.4, 1.0)
        s = 0.1 + 2.0j
        n = mode.n

        def rhs(r: float, state: np.ndarray) -> np.ndarray:
            phi, dphi = state
            potential = s * s / (1.0 + r * r) + mode.lam**2 / (r * r) + mode.alpha**2 - n * n / 4.0
            return np.array([dphi, (potential * phi - ((n - 1) / r + (n + 1) * r) * dphi) / (1.0 + r * r)])

        start = np.array([radial_profile(mode, s, 0.5), radial_profile_derivative(mode, s, 0.5)])
        solution = integrate.solve_ivp(rhs, (0.5, 3.0), start, method="DOP853", rtol=1e-11, atol=1e-13)
        expected = radial_profile(mode, s, 3.0)
        assert abs(solution.y[0, -1] - expected) < 1e-7 * abs(expected)

    def test_profile_is_regular_at_origin(self) -> None:
        mode = GlobalAdsMode(3, 0.4, 2.0)
        r = 1e-4

        assert abs(radial_profile(mode, 0.3 + 1j, r) / r**mode.beta - 1.0) < 1e-6

    def test_profile_needs_positive_radius(self) -> None:
        with pytest.raises(ParameterError):
            radial_profile(GlobalAdsMode(3, 0.4, 1.0), 1j, 0.0)


class TestGlobalAdsMultiplier:
    """The scattering multiplier of one mode."""

    def test_matches_log_gamma_reference(self) -> None:
        mode = GlobalAdsMode(3, 0.4, 0.0)
        s = 0.1 + 2.0j
        a, b, c = mode.parameters(s)
        logs = (
            special.loggamma(complex(-0.4))
            + special.loggamma(b)
            + special.loggamma(c - a)
            - special.loggamma(complex(0.4))
            - special.loggamma(a)
            - special.loggamma(c - b)
        )

        expected = -0.8 * cmath.exp(logs)
        assert abs(global_ads_multiplier(mode, s) - expected) < 1e-10 * abs(expected)

    @pytest.mark.parametrize("s", [0.3 + 2.0j, 0.05 - 7.0j, 1.2 + 0.4j])
    def test_conjugate_symmetry(self, s: complex) -> None:
        mode = GlobalAdsMode(3, 0.4, 1.0)
        value = global_ads_multiplier(mode, s)

        assert abs(global_ads_multiplier(mode, s.conjugate()) - value.conjugate()) < 1e-11 * abs(value)

    @pytest.mark.parametrize("s", [0.3 + 2.0j, 1.2 + 0.4j])
    def test_even_in_s(self, s: complex) -> None:
        mode = GlobalAdsMode(3, 0.4, 1.0)
        value = global_ads_multiplier(mode, s)

        assert abs(global_ads_multiplier(mode, -s) - value) < 1e-11 * abs(value)

    def test_printed_normalization(self) -> None:
        mode = GlobalAdsMode(3, 0.4, 1.0)
        s = 0.3 + 2.0j

        ratio = global_ads_multiplier(mode, s, "printed") / global_ads_multiplier(mode, s)
        expected = (mode.beta - 1j * s + 1.5 - 0.4) / (-0.8)
        assert abs(ratio - expected) < 1e-12 * abs(expected)

    def test_unknown_normalization(self) -> None:
        with pytest.raises(ParameterError, match="normalization"):
            global_ads_multiplier(GlobalAdsMode(3, 0.4, 1.0), 1j, "other")  # type: ignore[arg-type]

    def test_pole_is_rejected(self) -> None:
        with pytest.raises(DomainError, match="pole"):
            global_ads_multiplier(GlobalAdsMode(3, 0.4, 0.0), -1.9j)

    def test_connection_coefficients_reject_integer_order(self) -> None:
        with pytest.raises(DomainError, match="logarithms"):
            connection_coefficients(GlobalAdsMode(3, 1.0, 1.0), 1j)

    def test_multiplier_from_connection_coefficients(self) -> None:
        mode = GlobalAdsMode(3, 0.4, 1.0)
        s = 0.5 + 1.0j
        big_a, big_b = connection_coefficients(mode, s)

        value = global_ads_multiplier(mode, s)
        assert abs(value - (-0.8) * big_b / big_a) < 1e-11 * abs(value)

    def test_ladder_recovers_multiplier(self) -> None:
        mode = GlobalAdsMode(3, 0.4, 1.0)
        s = 0.5 + 1.0j

        limit = neumann_limit_ladder(mode, s)
        analytic = global_ads_multiplier(mode, s)
        assert abs(limit.multiplier - analytic) < 1e-4 * abs(analytic)

    def test_ladder_must_double(self) -> None:
        with pytest.raises(ParameterError, match="double"):
            neumann_limit_ladder(GlobalAdsMode(3, 0.4, 1.0), 0.5 + 1j, [10.0, 30.0])


class TestPrincipalSymbol:
    """The multiplier against the flat symbol at high frequency."""

    def test_ratio_flattens(self) -> None:
        series = principal_symbol_ratio(GlobalAdsMode(3, 0.4, 1.0), [8.0 * 2.0**k for k in range(5)])

        assert series.flatness <= 5e-2
        changes = series.changes()
        assert changes[-1] < changes[0]

    def test_lambda_ladder(self) -> None:
        series = principal_symbol_ratio_lambda(3, 0.4, 2.0, [4.0, 8.0, 16.0, 32.0])

        assert len(series.ratio) == 4
        assert all(cmath.isfinite(z) for z in series.ratio)

    def test_asymptotic_constant(self) -> None:
        expected = 2.0 ** 0.2 * math.gamma(0.6) / math.gamma(0.4)

        assert asymptotic_ratio(0.4) == pytest.approx(expected)
