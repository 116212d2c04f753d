"""Tests for the weighted energy identity."""

# pyright: reportPrivateUsage=warning

from __future__ import annotations

import cmath
import math
from collections.abc import Callable

import numpy as np
import pytest
from scipy import integrate

from fracwave.core import FractionalOrder, ScalarField, SpacetimeGrid, null_bump
from fracwave.errors import OrderError, ParameterError
from fracwave.extension import (
    energy,
    energy_check,
    energy_constant,
    mode_energy,
    profile_derivative,
    profile_eval,
)


class TestEnergyConstant:
    """The per-mode constant of the profile energy."""

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
    def test_closed_form(self, alpha: float) -> None:
        expected = 2.0 ** (1.0 - 2.0 * alpha) * math.gamma(1.0 - alpha) / math.gamma(alpha)

        assert energy_constant(alpha) == pytest.approx(expected, rel=1e-8)

    def test_is_minus_inverse_of_normalization(self) -> None:
        order = FractionalOrder(0.4)

        assert energy_constant(order) == pytest.approx(-1.0 / order.c_alpha, rel=1e-8)

    @pytest.mark.parametrize("alpha", [1.3, 1.0])
    def test_rejects_order_outside_unit_interval(self, alpha: float) -> None:
        with pytest.raises(OrderError, match="energy"):
            energy_constant(alpha)


class TestModeEnergy:
    """Energy of a single Laplace-Fourier mode along its ray."""

    @pytest.mark.parametrize("s,xi", [(0.3 + 2.0j, 1.5), (0.01 - 4.0j, 3.9), (1.0, 0.0)])
    def test_scales_with_symbol(self, s: complex, xi: float) -> None:
        alpha = 0.4
        expected = energy_constant(alpha) * cmath.exp(alpha * cmath.log(xi * xi + s * s))

        assert abs(mode_energy(alpha, s, xi) - expected) < 1e-8 * abs(expected)

    def test_matches_real_axis_integral(self) -> None:
        alpha, s, xi = 0.4, 2.0 + 0.5j, 1.0
        w2 = xi * xi + s * s

        def integrand(y: float) -> complex:
            du = y * profile_derivative(alpha, s, xi, 1.0, y)
            u = profile_eval(alpha, s, xi, 1.0, y)
            return y ** (1.0 - 2.0 * alpha) * (du * du + w2 * u * u)

        parts: list[float] = []
        for part in (lambda y: integrand(y).real, lambda y: integrand(y).imag):
            head, _ = integrate.quad(part, 0.0, 1.0, limit=200, epsabs=0.0, epsrel=1e-11)
            tail, _ = integrate.quad(part, 1.0, 20.0, limit=200, epsabs=0.0, epsrel=1e-11)
            parts.append(head + tail)
        expected = complex(parts[0], parts[1])

        assert abs(mode_energy(alpha, s, xi) - expected) < 1e-6 * abs(expected)

    def test_requires_right_half_plane(self) -> None:
        with pytest.raises(ParameterError, match="Re s"):
            mode_energy(0.4, -0.1 + 1j, 1.0)


class TestEnergyCheck:
    """Extension energy against the symbol pairing."""

    def test_ratio_matches_constant(self, bump: ScalarField) -> None:
        report = energy_check(bump, 0.4)

        assert report.rhs > 0.0
        assert report.rhs_imag <= 1e-10
        assert report.ratio == pytest.approx(report.constant, rel=1e-3)
        assert [e for e, _ in report.lhs_by_eps] == [0.01, 0.005, 0.0025]

    def test_quadratic_in_datum(self, bump: ScalarField) -> None:
        once = energy_check(bump, 0.4)
        twice = energy_check(bump.scaled(2.0), 0.4)

        assert twice.lhs == pytest.approx(4.0 * once.lhs, rel=1e-12)
        assert twice.rhs == pytest.approx(4.0 * once.rhs, rel=1e-12)

    def test_ratio_independent_of_datum(self, grid: SpacetimeGrid, bump: ScalarField) -> None:
        other = null_bump(grid, center=(14.0, 2.0), width=1.8, order=2)

        first = energy_check(bump, 0.4)
        second = energy_check(other, 0.4)
        assert first.ratio == pytest.approx(second.ratio, rel=1e-3)

    def test_follows_the_profile(self, bump: ScalarField, monkeypatch: pytest.MonkeyPatch) -> None:
        plain = energy_check(bump, 0.4)

        def doubled(fn: Callable[..., complex]) -> Callable[..., complex]:
            return lambda *args: 2.0 * fn(*args)

        monkeypatch.setattr(energy, "profile_eval", doubled(profile_eval))
        monkeypatch.setattr(energy, "profile_derivative", doubled(profile_derivative))
        scaled = energy_check(bump, 0.4)
        assert scaled.ratio == pytest.approx(4.0 * plain.ratio, rel=1e-12)
        assert scaled.rhs == plain.rhs

    def test_ratio_holds_for_rough_data(self, grid: SpacetimeGrid, rng: np.random.Generator) -> None:
        noise = ScalarField(grid, rng.normal(size=grid.shape))

        report = energy_check(noise, 0.4)
        assert report.ratio == pytest.approx(report.constant, rel=1e-2)

    def test_report_dict(self, bump: ScalarField) -> None:
        report = energy_check(bump, 0.4, [0.01, 0.005])

        assert set(report.to_dict()) == {"lhs", "rhs", "rhs_imag", "ratio", "constant"}

    def test_rejects_bad_order(self, bump: ScalarField) -> None:
        with pytest.raises(OrderError):
            energy_check(bump, 1.0)

    def test_rejects_bad_sequence(self, bump: ScalarField) -> None:
        with pytest.raises(ParameterError):
            energy_check(bump, 0.4, [])
        with pytest.raises(ParameterError, match="halve"):
            energy_check(bump, 0.4, [0.01, 0.003])
