"""Closed-form Dirichlet-to-Neumann route through the Laplace-Fourier profile.

In Laplace variable ``s = eps + i tau`` and Fourier variable ``xi`` the
extension problem with Dirichlet datum ``F`` is solved by the decaying profile::

    U(s, xi, y) = 2^{1-alpha}/Gamma(alpha) * (y w)^alpha K_alpha(y w) * F,
    w = sqrt(|xi|^2 + s^2)   (principal root, Re w > 0 for Re s > 0)

and the weighted Neumann limit ``c_alpha lim y^{2(1-alpha0)} (y^-1 d_y)^{m+1} U``
returns ``w^{2 alpha} F``. The Neumann value is recovered numerically from a
geometric ladder in y by generalized Richardson extrapolation, which gives an
independent check on the multiplier used by :func:`dtn_spacetime`.

Example::

    >>> from fracwave.core import FractionalOrder
    >>> from fracwave.extension import ExtensionProfile, dtn_multiplier, neumann_extract_profile
    >>> order = FractionalOrder(0.4)
    >>> profile = ExtensionProfile.build(order, 0.1 + 2j, 1.0, 1.0)
    >>> value = neumann_extract_profile(profile)
    >>> abs(value - dtn_multiplier(order, 0.1 + 2j, 1.0)) < 1e-6
    True
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ..core import FractionalOrder, ScalarField, SpacetimeGrid, as_order, frequency_mesh
from ..core.extrapolate import merged_exponents, richardson
from ..core.transforms import apply_multiplier, check_eps, laplace_weights
from ..errors import ConvergenceError, ParameterError
from ..specfun import bessel_k
from ..symbol import shifted_power

_logger = logging.getLogger(__name__)

#: |y w| at the top of the default ladder.
LADDER_START = 0.25

#: Default number of ladder levels (halvings) for Neumann extraction.
LADDER_LEVELS = 8

#: Relative Richardson indicator accepted as converged.
NEUMANN_TOL = 1e-7

#: Default Bromwich abscissa as a multiple of 1/window.
EPS_WINDOW_FACTOR = 4.0

NeumannMethod = Literal["weighted", "difference"]


@dataclass(frozen=True)
class LaplaceLine:
    """Bromwich line ``s = eps + i tau`` over the time frequencies of a grid.

    Attributes:
        eps: Abscissa, positive and with ``eps * window <= 20``.
        tau_grid: Angular time frequencies in FFT order.
    """

    eps: float
    tau_grid: np.ndarray = field(repr=False)

    @classmethod
    def for_grid(cls, grid: SpacetimeGrid, eps: float | None = None) -> LaplaceLine:
        """Line for ``grid``; eps defaults to ``4 / window``."""
        eps = default_eps(grid) if eps is None else float(eps)
        check_eps(eps, grid.window)
        tau, _ = frequency_mesh(grid)
        return cls(eps, np.asarray(tau).ravel())

    @property
    def s(self) -> np.ndarray:
        return self.eps + 1j * self.tau_grid


def default_eps(grid: SpacetimeGrid) -> float:
    return EPS_WINDOW_FACTOR / grid.window


def _check_s(s: complex) -> complex:
    s = complex(s)
    if not s.real > 0:
        raise ParameterError("s", s, "Re s must be positive")
    return s


def _root(s: complex, xi_norm: float) -> complex:
    """Principal ``sqrt(|xi|^2 + s^2)``."""
    return cmath.sqrt(xi_norm * xi_norm + s * s)


def dtn_multiplier(alpha: FractionalOrder | float, s: complex, xi_norm: float) -> complex:
    """Laplace-Fourier multiplier ``(|xi|^2 + s^2)^alpha`` of the DtN map.

    Shares its evaluation with :func:`fracwave.symbol.sigma_eps`, so both agree
    bitwise for ``s = eps + i tau``.
    """
    s = _check_s(s)
    return complex(shifted_power(alpha, np.asarray(float(xi_norm) ** 2), np.asarray(s)))


def _normalization(alpha: float) -> float:
    return 2.0 ** (1.0 - alpha) / math.gamma(alpha)


def profile_eval(
    alpha: FractionalOrder | float,
    s: complex,
    xi_norm: float,
    boundary_value: complex,
    y: float,
) -> complex:
    """Extension profile ``U(s, xi, y)`` at one height ``y > 0``.

    Raises:
        ParameterError: If Re s <= 0 or y <= 0.
        DomainError: Propagated from :func:`fracwave.specfun.bessel_k`.
    """
    a = alpha.alpha if isinstance(alpha, FractionalOrder) else float(alpha)
    s = _check_s(s)
    if not y > 0:
        raise ParameterError("y", y, "must be positive")
    z = y * _root(s, xi_norm)
    return _normalization(a) * cmath.exp(a * cmath.log(z)) * bessel_k(a, z) * complex(boundary_value)


def profile_derivative(
    alpha: FractionalOrder | float,
    s: complex,
    xi_norm: float,
    boundary_value: complex,
    y: float,
    k: int = 1,
) -> complex:
    """``(y^-1 d_y)^k U(s, xi, y)`` at one height ``y > 0``.

    Differentiates the Bessel profile term by term with
    ``(z^-1 d_z)^k [z^a K_a(z)] = (-1)^k z^{a-k} K_{a-k}(z)``.

    Raises:
        ParameterError: If Re s <= 0, y <= 0 or k < 0.
    """
    a = alpha.alpha if isinstance(alpha, FractionalOrder) else float(alpha)
    s = _check_s(s)
    if not y > 0:
        raise ParameterError("y", y, "must be positive")
    if k < 0:
        raise ParameterError("k", k, "must be non-negative")
    w = _root(s, xi_norm)
    z = y * w
    nu = a - k
    return (
        _normalization(a)
        * complex(boundary_value)
        * (-w * w) ** k
        * cmath.exp(nu * cmath.log(z))
        * bessel_k(abs(nu), z)
    )


def _weighted_sample(order: FractionalOrder, s: complex, xi_norm: float, f: complex, y: float) -> complex:
    # y^{2(1-alpha0)} (y^-1 d_y)^{m+1} U
    derivative = profile_derivative(order, s, xi_norm, f, y, order.m + 1)
    return y ** (2.0 * (1.0 - order.alpha0)) * derivative


@dataclass(frozen=True)
class ExtensionProfile:
    """Closed-form profile sampled on a geometric ladder ``y_k = y0 2^{-k}``.

    Attributes:
        alpha: Order of the extension.
        s: Laplace variable.
        xi_norm: Spatial frequency magnitude.
        boundary_value: Dirichlet datum ``F(s, xi)``.
        y_samples: ``(y, U(y))`` pairs, coarsest first.
        weighted_samples: ``(y, y^{2(1-alpha0)} (y^-1 d_y)^{m+1} U(y))`` pairs.
    """

    alpha: FractionalOrder
    s: complex
    xi_norm: float
    boundary_value: complex
    y_samples: tuple[tuple[float, complex], ...] = field(repr=False)
    weighted_samples: tuple[tuple[float, complex], ...] = field(repr=False)

    @classmethod
    def build(
        cls,
        alpha: FractionalOrder | float,
        s: complex,
        xi_norm: float,
        boundary_value: complex,
        y0: float | None = None,
        levels: int = LADDER_LEVELS,
    ) -> ExtensionProfile:
        """Sample the profile; ``y0`` defaults to ``0.25 / |w|``."""
        order = alpha if isinstance(alpha, FractionalOrder) else FractionalOrder(float(alpha))
        s = _check_s(s)
        if levels < 2:
            raise ParameterError("levels", levels, "need at least two ladder levels")
        if y0 is None:
            y0 = LADDER_START / abs(_root(s, xi_norm))
        if not y0 > 0:
            raise ParameterError("y0", y0, "must be positive")
        ladder = [y0 * 0.5**k for k in range(levels)]
        f = complex(boundary_value)
        return cls(
            alpha=order,
            s=s,
            xi_norm=float(xi_norm),
            boundary_value=f,
            y_samples=tuple((y, profile_eval(order, s, xi_norm, f, y)) for y in ladder),
            weighted_samples=tuple(
                (y, _weighted_sample(order, s, xi_norm, f, y)) for y in ladder
            ),
        )

    @property
    def ladder(self) -> list[float]:
        return [y for y, _ in self.y_samples]


@dataclass(frozen=True)
class NeumannEstimate:
    """Extrapolated Neumann value with its convergence indicator."""

    value: complex
    indicator: float
    converged: bool


def _check_ratio(ladder: Sequence[float]) -> None:
    for coarse, fine in zip(ladder, ladder[1:]):
        if abs(coarse / fine - 2.0) > 1e-9:
            raise ParameterError("ladder", (coarse, fine), "samples must halve y at every level")


def _descending_product(order: FractionalOrder) -> float:
    """``prod_{k=0}^{m} (2 alpha - 2k)``."""
    return math.prod(2.0 * order.alpha - 2.0 * k for k in range(order.m + 1))


def neumann_extract_detailed(
    profile: ExtensionProfile,
    method: NeumannMethod = "difference",
    tol: float = NEUMANN_TOL,
) -> NeumannEstimate:
    """Weighted Neumann limit of a sampled profile with its Richardson indicator.

    ``difference`` works on the profile samples alone: it extrapolates the
    divided differences ``(U - F) / y^{2 alpha}``, eliminating the even terms
    ``y^{2j - 2 alpha}`` and the corrections ``y^{2j}``, and maps the limit
    through ``c_alpha prod_k (2 alpha - 2k)``. ``weighted`` extrapolates the
    sampled derivatives ``y^{2(1-alpha0)} (y^-1 d_y)^{m+1} U`` instead, whose
    corrections go like ``y^{2 nu + 2j}`` and ``y^{2j}`` with ``nu = 1 - alpha0``.

    Raises:
        OrderError: If 2*alpha is an integer.
        ParameterError: For an unknown method or a ladder that does not halve.
    """
    order = profile.alpha
    order.require_non_half_integer("extension")
    _check_ratio(profile.ladder)
    levels = len(profile.y_samples)
    if method == "weighted":
        nu = 1.0 - order.alpha0
        exponents = merged_exponents(
            [2.0 * nu + 2.0 * j for j in range(levels)],
            [2.0 * j for j in range(1, levels)],
        )
        samples = [order.c_alpha * g for _, g in profile.weighted_samples]
        scale = 1.0
    elif method == "difference":
        a = order.alpha
        exponents = merged_exponents(
            [2.0 * j - 2.0 * a for j in range(1, levels + 1)],
            [2.0 * j for j in range(1, levels)],
        )
        samples = [(u - profile.boundary_value) / y ** (2.0 * a) for y, u in profile.y_samples]
        scale = order.c_alpha * _descending_product(order)
    else:
        raise ParameterError("method", method, "expected 'weighted' or 'difference'")
    result = richardson(samples, exponents)
    value = scale * result.value
    _logger.debug(
        "neumann %s: alpha=%g levels=%d indicator=%.2e", method, order.alpha, levels, result.indicator
    )
    return NeumannEstimate(value, result.indicator, result.indicator <= tol)


def neumann_extract_profile(
    profile: ExtensionProfile,
    method: NeumannMethod = "difference",
    *,
    tol: float = NEUMANN_TOL,
    strict: bool = False,
) -> complex:
    """Extracted ``Lambda_alpha`` value for one (s, xi) mode.

    Raises:
        ConvergenceError: If ``strict`` and the extrapolation did not settle.
    """
    estimate = neumann_extract_detailed(profile, method, tol)
    if not estimate.converged:
        if strict:
            raise ConvergenceError("Neumann extrapolation", estimate.indicator, tol)
        _logger.warning(
            "Neumann extrapolation indicator %.2e above %.1e (alpha=%g, s=%s)",
            estimate.indicator,
            tol,
            profile.alpha.alpha,
            profile.s,
        )
    return estimate.value


def dtn_spacetime(
    f: ScalarField,
    alpha: FractionalOrder | float,
    eps: float | None = None,
    *,
    workers: int | None = None,
) -> ScalarField:
    """Dirichlet-to-Neumann map of a space-time datum through the Laplace-Fourier multiplier.

    The datum is damped by ``exp(-eps (t - t0))``, multiplied by
    ``(|xi|^2 + (eps + i tau)^2)^alpha`` in frequency space and undamped after
    inversion. As eps -> 0 the result tends to the spectral route.

    Raises:
        ParameterError: If eps is not positive or eps * window > 20.
    """
    grid = f.grid
    order = as_order(alpha, grid.n)
    line = LaplaceLine.for_grid(grid, eps)
    tau, xi2 = frequency_mesh(grid)
    multiplier = shifted_power(order, xi2, line.eps + 1j * tau)
    weights = laplace_weights(grid, line.eps)
    _logger.debug("dtn closed form alpha=%g eps=%g on %s", order.alpha, line.eps, grid.shape)
    damped = ScalarField(grid, f.values * weights)
    out = apply_multiplier(damped, np.broadcast_to(multiplier, grid.shape), workers=workers)
    return ScalarField(grid, out.values / weights)


def dtn_spacetime_extrapolated(
    f: ScalarField,
    alpha: FractionalOrder | float,
    eps_seq: Sequence[float],
    *,
    workers: int | None = None,
) -> ScalarField:
    """Richardson extrapolation of :func:`dtn_spacetime` to eps -> 0.

    ``eps_seq`` must halve at every step; the dependence on eps is analytic,
    so the eliminated exponents are 1, 2, 3, ...

    Raises:
        ParameterError: If the sequence is empty or does not halve.
    """
    if not eps_seq:
        raise ParameterError("eps_seq", eps_seq, "must not be empty")
    _check_ratio(list(eps_seq))
    results = [dtn_spacetime(f, alpha, e, workers=workers).values for e in eps_seq]
    table: list[list[np.ndarray]] = []
    for k, values in enumerate(results):
        row = [values]
        for j in range(1, k + 1):
            factor = 2.0**j
            row.append((factor * row[j - 1] - table[k - 1][j - 1]) / (factor - 1.0))
        table.append(row)
    return ScalarField(f.grid, table[-1][-1])
