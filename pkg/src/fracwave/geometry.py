"""Fractional wave operators beyond flat half-space.

Two settings are covered:

- product spaces ``R_t x M`` with M a circle or sphere, where the DtN map acts
  on each eigenmode of M by ``sigma_alpha(tau, lambda_j)``;
- global anti-de Sitter space, where the radial Klein-Gordon profile is a
  hypergeometric function and the scattering multiplier is a Gamma ratio.

For global AdS with boundary mode ``lambda`` and Laplace variable ``s`` the
regular radial solution is::

    Phi(r) = r^beta (1 + r^2)^{-is/2} 2F1(a, b; beta + n/2; -r^2)
    a = (beta - is + n/2 - alpha)/2,   b = (beta - is + n/2 + alpha)/2

and ``r^{n/2 - alpha} Phi -> A + B r^{-2 alpha}`` at infinity. The multiplier
is the normalized Neumann limit ``-2 alpha B / A``.

Example::

    >>> from fracwave.geometry import GlobalAdsMode
    >>> GlobalAdsMode(n=2, alpha=0.4, lam=3.0).beta
    3.0
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.fft

from ._threads import resolve_workers
from .core import FractionalOrder, ScalarField, as_order
from .core.extrapolate import merged_exponents, richardson
from .core.transforms import check_eps, frequency_axes
from .errors import DomainError, ParameterError
from .specfun import gamma_ratio, hyp2f1, hyp2f1_derivative
from .symbol import shifted_power, sigma_array

_logger = logging.getLogger(__name__)

Normalization = Literal["derived", "printed"]

#: Distance to a Gamma pole below which the multiplier is rejected.
POLE_DISTANCE = 1e-8

#: Default radii for the Neumann-limit ladder, ``10 * 2^k``.
R_LADDER = tuple(10.0 * 2.0**k for k in range(8))


@dataclass(frozen=True)
class EigenBasis:
    """Eigenvalue ladder of the Laplacian on the compact factor.

    Attributes:
        manifold: ``"circle"`` or ``"sphere"``.
        modes: Mode labels; signed for the circle (0, 1, -1, 2, -2, ...).
        eigenvalues: ``lambda_j^2`` per mode, nondecreasing.
    """

    manifold: Literal["circle", "sphere"]
    modes: tuple[int, ...]
    eigenvalues: tuple[float, ...] = field(repr=False)

    @classmethod
    def circle(cls, j_max: int, length: float = 2.0 * math.pi) -> EigenBasis:
        """Circle of the given length; ``lambda_j = 2 pi |j| / length``."""
        if j_max < 0:
            raise ParameterError("j_max", j_max, "must be non-negative")
        if not length > 0:
            raise ParameterError("length", length, "must be positive")
        modes = [0]
        for j in range(1, j_max + 1):
            modes += [j, -j]
        return cls("circle", tuple(modes), tuple((2.0 * math.pi * m / length) ** 2 for m in modes))

    @classmethod
    def sphere(cls, n: int, j_max: int) -> EigenBasis:
        """Harmonics on the boundary sphere of n-dimensional global AdS, ``lambda_j^2 = j(j + n - 3)``."""
        if n < 2:
            raise ParameterError("n", n, "must be at least 2")
        if j_max < 0:
            raise ParameterError("j_max", j_max, "must be non-negative")
        modes = tuple(range(j_max + 1))
        return cls("sphere", modes, tuple(float(j * (j + n - 3)) for j in modes))

    @property
    def lambdas(self) -> np.ndarray:
        return np.sqrt(np.asarray(self.eigenvalues))

    def __len__(self) -> int:
        return len(self.modes)


def product_dtn_coeffs(
    series: np.ndarray,
    eigenvalues: Sequence[float] | np.ndarray,
    alpha: FractionalOrder | float,
    dt: float,
    eps: float | None = None,
    *,
    workers: int | None = None,
) -> np.ndarray:
    """Apply ``sigma_alpha(tau, lambda_j)`` to each mode's time series.

    Args:
        series: Mode coefficients with shape ``(nt, J)``, time first.
        eigenvalues: ``lambda_j^2`` for the J columns.
        alpha: Order of the power.
        dt: Time step of the series.
        eps: If given, use the regularized symbol with exponential damping
            ``exp(-eps k dt)`` instead of the eps -> 0 symbol.

    Returns:
        The transformed series, real when the input is real.

    Raises:
        ParameterError: On a shape mismatch or an inadmissible eps.
    """
    series = np.asarray(series)
    lam2 = np.asarray(eigenvalues, dtype=np.float64)
    if series.ndim != 2 or series.shape[1] != lam2.size:
        raise ParameterError("series", series.shape, f"expected (nt, {lam2.size})")
    nt = series.shape[0]
    tau = (2.0 * math.pi * scipy.fft.fftfreq(nt, d=dt))[:, None]
    if eps is None:
        multiplier = sigma_array(alpha, tau, lam2[None, :])
        damping = np.ones((nt, 1))
    else:
        check_eps(eps, nt * dt)
        multiplier = shifted_power(alpha, lam2[None, :], eps + 1j * tau)
        damping = np.exp(-eps * dt * np.arange(nt))[:, None]
    # Hermitian projection along tau only; sigma depends on lambda^2.
    flipped = np.roll(np.flip(multiplier, axis=0), 1, axis=0)
    multiplier = 0.5 * (multiplier + np.conj(flipped))
    w = resolve_workers(workers)
    coeffs = scipy.fft.fft(series * damping, axis=0, workers=w)
    out = scipy.fft.ifft(coeffs * multiplier, axis=0, workers=w) / damping
    if np.isrealobj(series):
        return np.asarray(out.real)
    return np.asarray(out)


def product_dtn_apply(
    f: ScalarField,
    alpha: FractionalOrder | float,
    eps: float | None = None,
    *,
    workers: int | None = None,
) -> ScalarField:
    """DtN map on ``R x S^1`` samples: FFT in x, per-mode symbol, inverse.

    The circle length is the periodic x extent of the grid.

    Raises:
        ParameterError: If the grid has more than one spatial axis.
    """
    grid = f.grid
    if len(grid.nx) != 1:
        raise ParameterError("grid", grid.nx, "the circle route needs one spatial axis")
    order = as_order(alpha, grid.n)
    w = resolve_workers(workers)
    xi = frequency_axes(grid)[1]
    modes = scipy.fft.fft(f.values, axis=1, workers=w)
    _logger.debug("product DtN on circle: %d modes, alpha=%g", xi.size, order.alpha)
    mapped = product_dtn_coeffs(modes, xi**2, order, grid.dt, eps, workers=w)
    out = scipy.fft.ifft(mapped, axis=1, workers=w)
    return ScalarField(grid, out.real)


@dataclass(frozen=True)
class GlobalAdsMode:
    """One boundary harmonic of global AdS.

    Attributes:
        n: Spacetime dimension parameter.
        alpha: Order of the fractional power.
        lam: Boundary eigenvalue ``lambda >= 0``.
    """

    n: int
    alpha: float
    lam: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ParameterError("n", self.n, "must be at least 2")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ParameterError("alpha", self.alpha, "must be positive")
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise ParameterError("lam", self.lam, "must be non-negative")

    @property
    def beta(self) -> float:
        """Regular indicial exponent at r = 0."""
        return 0.5 * (2.0 - self.n + math.sqrt(4.0 * self.lam**2 + (self.n - 2) ** 2))

    def parameters(self, s: complex) -> tuple[complex, complex, float]:
        """``(a, b, c)`` of the radial hypergeometric function."""
        base = self.beta - 1j * complex(s) + self.n / 2.0
        return 0.5 * (base - self.alpha), 0.5 * (base + self.alpha), self.beta + self.n / 2.0


def _pole_distance(z: complex) -> float:
    if z.real > 0.5:
        return math.inf
    return abs(z - round(z.real))


def connection_coefficients(mode: GlobalAdsMode, s: complex) -> tuple[complex, complex]:
    """Large-r coefficients ``(A, B)`` of ``r^{n/2 - alpha} Phi ~ A + B r^{-2 alpha}``.

    Raises:
        DomainError: If alpha is an integer (logarithmic case).
    """
    a, b, c = mode.parameters(s)
    if mode.alpha == math.floor(mode.alpha):
        raise DomainError("connection_coefficients", mode.alpha, "integer alpha gives logarithms")
    big_a = gamma_ratio([c, mode.alpha], [b, c - a])
    big_b = gamma_ratio([c, -mode.alpha], [a, c - b])
    return big_a, big_b


def global_ads_multiplier(
    mode: GlobalAdsMode, s: complex, normalization: Normalization = "derived"
) -> complex:
    """Scattering multiplier of a global-AdS mode with the datum factored out.

    ``Gamma(-alpha) Gamma(b) Gamma(c - a) / (Gamma(alpha) Gamma(a) Gamma(c - b))``
    times ``-2 alpha`` (``derived``) or times ``beta - is + n/2 - alpha``
    (``printed``).

    Raises:
        DomainError: If a numerator Gamma argument lies within 1e-8 of a pole.
        ParameterError: For an unknown normalization.
    """
    a, b, c = mode.parameters(s)
    numerator = [complex(-mode.alpha), b, c - a]
    for z in numerator:
        if _pole_distance(z) < POLE_DISTANCE:
            raise DomainError("global_ads_multiplier", s, f"Gamma argument {z} at a pole")
    ratio = gamma_ratio(numerator, [complex(mode.alpha), a, c - b])
    if normalization == "derived":
        return -2.0 * mode.alpha * ratio
    if normalization == "printed":
        return ratio * (mode.beta - 1j * complex(s) + mode.n / 2.0 - mode.alpha)
    raise ParameterError("normalization", normalization, "expected 'derived' or 'printed'")


def radial_profile(mode: GlobalAdsMode, s: complex, r: float, c: complex = 1.0) -> complex:
    """Regular radial solution ``c r^beta (1 + r^2)^{-is/2} 2F1(a, b; beta + n/2; -r^2)``."""
    if not r > 0:
        raise ParameterError("r", r, "must be positive")
    a, b, cc = mode.parameters(s)
    phase = cmath.exp(-0.5j * complex(s) * math.log1p(r * r))
    return complex(c) * r**mode.beta * phase * hyp2f1(a, b, cc, -r * r)


def radial_profile_derivative(mode: GlobalAdsMode, s: complex, r: float) -> complex:
    """Analytic ``d Phi / dr`` of :func:`radial_profile` with ``c = 1``."""
    a, b, cc = mode.parameters(s)
    s = complex(s)
    phase = cmath.exp(-0.5j * s * math.log1p(r * r))
    value = hyp2f1(a, b, cc, -r * r)
    slope = hyp2f1_derivative(a, b, cc, -r * r)
    log_derivative = mode.beta / r - 1j * s * r / (1.0 + r * r)
    return r**mode.beta * phase * (value * log_derivative - 2.0 * r * slope)


#: Seven-point central stencils (sixth order) for first and second derivatives.
_D1 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
_D2 = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0


def radial_ode_residual(
    mode: GlobalAdsMode, s: complex, r: float, h: float | None = None
) -> tuple[complex, complex]:
    """Residual of the radial equation at r with finite-difference derivatives::

        (1 + r^2) Phi'' + ((n-1)/r + (n+1) r) Phi' - (s^2/(1+r^2) + lambda^2/r^2 + alpha^2 - n^2/4) Phi

    Returns:
        ``(residual, Phi(r))``.
    """
    h = 0.01 * r if h is None else h
    if not 0 < 3 * h < r:
        raise ParameterError("h", h, "stencil must stay inside r > 0")
    s = complex(s)
    samples = np.array([radial_profile(mode, s, r + k * h) for k in range(-3, 4)])
    phi = samples[3]
    d1 = complex(_D1 @ samples) / h
    d2 = complex(_D2 @ samples) / (h * h)
    n = mode.n
    potential = s * s / (1.0 + r * r) + mode.lam**2 / (r * r) + mode.alpha**2 - n * n / 4.0
    residual = (1.0 + r * r) * d2 + ((n - 1) / r + (n + 1) * r) * d1 - potential * phi
    return residual, phi


@dataclass(frozen=True)
class LadderLimit:
    """Numerical large-r limits of the radial profile.

    Attributes:
        dirichlet: Extrapolated ``lim r^{n/2 - alpha} Phi`` (the coefficient A).
        neumann: Extrapolated ``lim r^{1 + 2 alpha} d_r (r^{n/2 - alpha} Phi)``.
        indicator: Largest Richardson indicator of the two limits.
    """

    dirichlet: complex
    neumann: complex
    indicator: float

    @property
    def multiplier(self) -> complex:
        return self.neumann / self.dirichlet


def neumann_limit_ladder(
    mode: GlobalAdsMode, s: complex, r_ladder: Sequence[float] = R_LADDER
) -> LadderLimit:
    """Extrapolate the boundary data of the radial profile along doubling radii.

    The corrections go like ``r^{-2 alpha}, r^{-2}, ...`` for the Dirichlet limit
    and ``r^{2 alpha - 2}, r^{-2}, ...`` for the weighted Neumann limit.

    Raises:
        ParameterError: If the radii do not double.
    """
    ladder = [float(r) for r in r_ladder]
    for small, large in zip(ladder, ladder[1:]):
        if abs(large / small - 2.0) > 1e-9:
            raise ParameterError("r_ladder", (small, large), "radii must double")
    a = mode.alpha
    shift = mode.n / 2.0 - a
    dirichlet = []
    neumann = []
    for r in ladder:
        phi = radial_profile(mode, s, r)
        dphi = radial_profile_derivative(mode, s, r)
        dirichlet.append(r**shift * phi)
        neumann.append(r ** (1.0 + 2.0 * a) * r**shift * (dphi + shift * phi / r))
    levels = len(ladder)
    even = [2.0 * j for j in range(1, levels)]
    d_exp = merged_exponents([2.0 * a + 2.0 * j for j in range(levels)], even)
    n_exp = merged_exponents([2.0 * j - 2.0 * a for j in range(1, levels + 1)], even)
    d_fit = richardson(dirichlet, d_exp)
    n_fit = richardson(neumann, n_exp)
    _logger.debug(
        "radial ladder n=%d lam=%g: indicators %.2e / %.2e",
        mode.n,
        mode.lam,
        d_fit.indicator,
        n_fit.indicator,
    )
    return LadderLimit(d_fit.value, n_fit.value, max(d_fit.indicator, n_fit.indicator))


@dataclass(frozen=True)
class RatioSeries:
    """Ratio of the global-AdS multiplier to the flat symbol along a ladder.

    Attributes:
        x: Ladder values (tau or lambda).
        ratio: Complex ratios.
        flatness: Largest relative deviation from the last ratio over the last decade.
    """

    x: tuple[float, ...]
    ratio: tuple[complex, ...] = field(repr=False)
    flatness: float

    def changes(self) -> list[float]:
        """Relative changes between successive ratios."""
        return [abs(b - a) / abs(b) for a, b in zip(self.ratio, self.ratio[1:])]


def asymptotic_ratio(alpha: float) -> float:
    """Reference constant ``2^{1-2 alpha} Gamma(1 - alpha)/Gamma(alpha)``."""
    return 2.0 ** (1.0 - 2.0 * alpha) * math.gamma(1.0 - alpha) / math.gamma(alpha)


def _series(x: Sequence[float], ratios: list[complex]) -> RatioSeries:
    last = ratios[-1]
    top = x[-1]
    flatness = max(abs(r - last) / abs(last) for xv, r in zip(x, ratios) if xv >= top / 10.0)
    return RatioSeries(tuple(float(v) for v in x), tuple(ratios), float(flatness))


def principal_symbol_ratio(
    mode: GlobalAdsMode, taus: Sequence[float], eps: float = 0.01
) -> RatioSeries:
    """Ratio ``global_ads_multiplier(eps + i tau) / sigma_eps(tau, lambda)`` along a tau ladder."""
    order = FractionalOrder(mode.alpha, mode.n)
    ratios = []
    for tau in taus:
        s = eps + 1j * tau
        flat = complex(shifted_power(order, np.asarray(mode.lam**2), np.asarray(s)))
        ratios.append(global_ads_multiplier(mode, s) / flat)
    return _series(taus, ratios)


def principal_symbol_ratio_lambda(
    n: int, alpha: float, tau: float, lambdas: Sequence[float], eps: float = 0.01
) -> RatioSeries:
    """Same ratio along a spacelike ladder of boundary eigenvalues at fixed tau."""
    order = FractionalOrder(alpha, n)
    s = eps + 1j * tau
    ratios = []
    for lam in lambdas:
        mode = GlobalAdsMode(n, alpha, lam)
        flat = complex(shifted_power(order, np.asarray(lam**2), np.asarray(s)))
        ratios.append(global_ads_multiplier(mode, s) / flat)
    return _series(lambdas, ratios)

