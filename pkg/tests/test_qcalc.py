"""Tests for q-calculus coefficients and QScheme."""

# pyright: reportPrivateUsage=warning

from __future__ import annotations

import pytest

from fracwave.core import FractionalOrder
from fracwave.errors import OrderError, ParameterError
from fracwave.hypersingular.qcalc import (
    QScheme,
    a_coefficient,
    a_coefficient_product,
    c_coefficient,
    q_binomial,
    q_factorial,
    q_integer,
)


class TestQNumbers:
    """q-integers, q-factorials and Gaussian binomials."""

    def test_q_integer(self) -> None:
        assert q_integer(3, 2.0) == 7.0
        assert q_integer(2, 0.5) == 1.5

    def test_q_factorial(self) -> None:
        assert q_factorial(4, 2.0) == 315.0
        assert q_factorial(0, 2.0) == 1.0

    def test_gaussian_binomial(self) -> None:
        assert q_binomial(4, 2, 2.0) == 35.0
        assert q_binomial(2, 1, 3.0) == 4.0
        assert q_binomial(5, 0, 2.0) == 1.0

    def test_rejects_q_equal_one(self) -> None:
        with pytest.raises(ParameterError):
            q_binomial(3, 1, 1.0)
        with pytest.raises(ParameterError):
            q_integer(3, -2.0)

    def test_rejects_k_out_of_range(self) -> None:
        with pytest.raises(ParameterError, match="must lie in"):
            q_binomial(3, 4, 2.0)

    def test_c_coefficient_endpoints(self) -> None:
        assert c_coefficient(3, 0, 2.0) == 1.0
        assert c_coefficient(3, 3, 2.0) == pytest.approx(1.0)


class TestACoefficient:
    """The alternating sums ``A^l_mu``."""

    @pytest.mark.parametrize("l", [1, 2, 3, 5])
    def test_vanishes_below_l(self, l: int) -> None:  # noqa: E741
        for m in range(l):
            assert a_coefficient_product(l, float(m), 2.0) == 0.0
            assert abs(a_coefficient(l, float(m), 2.0)) < 1e-9

    @pytest.mark.parametrize("l,mu,q", [(2, 0.8, 2.0), (3, 1.9, 2.0), (4, 2.6, 1.5), (2, 0.4, 0.5)])
    def test_sum_equals_product(self, l: int, mu: float, q: float) -> None:  # noqa: E741
        assert a_coefficient(l, mu, q) == pytest.approx(a_coefficient_product(l, mu, q), rel=1e-10)

    def test_non_integer_mu_is_nonzero(self) -> None:
        assert abs(a_coefficient_product(2, 0.8, 2.0)) > 0.1


class TestQScheme:
    """Coefficient tables for one order and dimension."""

    def test_default_orders_in_two_dimensions(self) -> None:
        scheme = QScheme.build(FractionalOrder(0.4, 2))

        assert scheme.l == 2
        assert scheme.l_star == 1
        assert len(scheme.c_l) == 3
        assert len(scheme.c_l_star) == 2

    def test_default_orders_in_three_dimensions(self) -> None:
        scheme = QScheme.build(FractionalOrder(0.4, 3))

        assert scheme.l == 2
        assert scheme.l_star == 2

    def test_higher_order(self) -> None:
        scheme = QScheme.build(FractionalOrder(1.3, 2))

        assert scheme.l == 4
        assert scheme.l_star == 2

    def test_normalization(self) -> None:
        order = FractionalOrder(0.4, 2)
        scheme = QScheme.build(order, q=2.0, l=3)

        expected = 1.0 / (a_coefficient(2, 0.4, 2.0) * a_coefficient(3, 0.8, 2.0))
        assert scheme.normalization == pytest.approx(expected, rel=1e-14)

    def test_signed_weights(self) -> None:
        scheme = QScheme.build(FractionalOrder(0.4, 2))

        weights = scheme.signed_weights()
        assert weights.shape == (2, 3)
        assert weights[0, 0] == 1.0
        assert weights[1, 0] == pytest.approx(-scheme.c_l_star[1])
        assert weights[1, 1] == pytest.approx(scheme.c_l_star[1] * scheme.c_l[1])

    def test_rejects_half_integer_order(self) -> None:
        with pytest.raises(OrderError) as exc_info:
            QScheme.build(FractionalOrder(0.5, 2))
        assert exc_info.value.route == "integral"

    def test_rejects_order_too_high_for_l(self) -> None:
        with pytest.raises(OrderError, match="l/2"):
            QScheme.build(FractionalOrder(0.7, 2), l=1)

    def test_rejects_bad_q(self) -> None:
        with pytest.raises(ParameterError):
            QScheme.build(FractionalOrder(0.4, 2), q=1.0)
