"""q-calculus coefficients for the regularized difference operator.

``[k]_q = (1 - q^k)/(1 - q)``, ``[k]_q! = [1]_q ... [k]_q`` and the Gaussian
binomial ``binom(l, k)_q = [l]_q! / ([k]_q! [l-k]_q!)``. From these,

- ``C_k^l = q^{k((k+1)/2 - l)} binom(l, k)_q``;
- ``A^l_mu = sum_k (-1)^k q^{k mu} C_k^l = prod_{k<l} (1 - q^{mu+1-l+k})``.

``A^l_m`` vanishes for integers ``0 <= m <= l-1``, which is what makes the
q-differences annihilate low-degree Taylor terms.

Example::

    >>> from fracwave.hypersingular.qcalc import q_binomial, a_coefficient
    >>> q_binomial(2, 1, 3.0)
    4.0
    >>> abs(a_coefficient(4, 2.0, 2.0)) < 1e-12
    True
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..core import FractionalOrder
from ..errors import OrderError, ParameterError


def _check_q(q: float) -> None:
    if not (math.isfinite(q) and q > 0 and q != 1.0):
        raise ParameterError("q", q, "must be positive and different from 1")


def q_integer(k: int, q: float) -> float:
    _check_q(q)
    return (1.0 - q**k) / (1.0 - q)


def q_factorial(k: int, q: float) -> float:
    return math.prod(q_integer(i, q) for i in range(1, k + 1))


def q_binomial(l: int, k: int, q: float) -> float:  # noqa: E741
    """Gaussian binomial coefficient ``binom(l, k)_q``.

    Raises:
        ParameterError: If k is outside [0, l] or q is inadmissible.
    """
    _check_q(q)
    if not 0 <= k <= l:
        raise ParameterError("k", k, f"must lie in [0, {l}]")
    return q_factorial(l, q) / (q_factorial(k, q) * q_factorial(l - k, q))


def c_coefficient(l: int, k: int, q: float) -> float:  # noqa: E741
    """``C_k^l = q^{k((k+1)/2 - l)} binom(l, k)_q``."""
    return q ** (k * ((k + 1) / 2.0 - l)) * q_binomial(l, k, q)


def a_coefficient(l: int, mu: float, q: float) -> float:  # noqa: E741
    """``A^l_mu`` by its defining alternating sum."""
    return sum((-1) ** k * q ** (k * mu) * c_coefficient(l, k, q) for k in range(l + 1))


def a_coefficient_product(l: int, mu: float, q: float) -> float:  # noqa: E741
    """``A^l_mu`` by the product form ``prod_{k=0}^{l-1} (1 - q^{mu+1-l+k})``."""
    _check_q(q)
    return math.prod(1.0 - q ** (mu + 1 - l + k) for k in range(l))


@dataclass(frozen=True)
class QScheme:
    """Coefficient tables of the q-difference operator for one (alpha, n).

    Attributes:
        q: Base of the geometric shifts.
        l: Order of the difference in |y|; must exceed 2*alpha.
        l_star: Order of the difference in s, ``floor((n + l - 1) / 2)``.
        alpha: Fractional order the denominators are built for.
        c_l: ``C_k^l`` for k = 0..l.
        c_l_star: ``C_j^{l*}`` for j = 0..l*.
        a_s: ``A^{l*}_{n/2 - 1 + alpha}``.
        a_y: ``A^l_{2 alpha}``.
    """

    q: float
    l: int  # noqa: E741
    l_star: int
    alpha: FractionalOrder
    c_l: tuple[float, ...] = field(repr=False)
    c_l_star: tuple[float, ...] = field(repr=False)
    a_s: float
    a_y: float

    @classmethod
    def build(
        cls, alpha: FractionalOrder, q: float = 2.0, l: int | None = None  # noqa: E741
    ) -> QScheme:
        """Build the tables; ``l`` defaults to ``ceil(2 alpha) + 1``.

        Raises:
            OrderError: If 2*alpha is an integer or alpha >= l/2.
        """
        _check_q(q)
        alpha.require_non_half_integer("integral")
        if l is None:
            l = math.ceil(2.0 * alpha.alpha) + 1  # noqa: E741
        if l < 1:
            raise ParameterError("l", l, "must be a positive integer")
        alpha.require_below(l / 2.0, "integral", "l/2")
        n = alpha.n
        l_star = (n + l - 1) // 2
        a_s = a_coefficient(l_star, n / 2.0 - 1.0 + alpha.alpha, q)
        a_y = a_coefficient(l, 2.0 * alpha.alpha, q)
        if a_s == 0.0 or a_y == 0.0:
            raise OrderError(alpha.alpha, "integral", "vanishing q-denominator")
        return cls(
            q=q,
            l=l,
            l_star=l_star,
            alpha=alpha,
            c_l=tuple(c_coefficient(l, k, q) for k in range(l + 1)),
            c_l_star=tuple(c_coefficient(l_star, j, q) for j in range(l_star + 1)),
            a_s=a_s,
            a_y=a_y,
        )

    @property
    def normalization(self) -> float:
        return 1.0 / (self.a_s * self.a_y)

    def signed_weights(self) -> np.ndarray:
        """``(-1)^{j+k} C_j^{l*} C_k^l`` as an (l*+1, l+1) table."""
        cj = np.array(self.c_l_star) * (-1.0) ** np.arange(self.l_star + 1)
        ck = np.array(self.c_l) * (-1.0) ** np.arange(self.l + 1)
        return np.outer(cj, ck)
