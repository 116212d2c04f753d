"""Hypersingular-integral route for the fractional wave operator.

The operator is written as an absolutely convergent integral over
``s > 0`` and ``y`` in R^{n-1}::

    box^alpha f(t, x) = C_{n,-alpha} int int Delta_{s,y} f(t, x)
                        / (s^{n/2+alpha} |y|^{n+2 alpha-1}) ds dy

where ``Delta`` is a double q-difference (order l* in s, order l in |y|)
whose cancellations make the integrand integrable at both ends. The integral
is evaluated on the exp-mapped variables ``u = log s``, ``v = log |y|`` with
the tensor trapezoidal rule (plus an angular trapezoid when n = 3); the
integrand decays exponentially in u and v at both ends, so truncation bounds
follow from the decay exponents.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .._threads import resolve_workers
from ..core import FieldSampler, FractionalOrder, ScalarField, as_order
from ..errors import ConvergenceError, GridError, ParameterError
from .qcalc import QScheme

_logger = logging.getLogger(__name__)

Point = Sequence[float]

MIN_NODES = 16


def riesz_constant(n: int, alpha: float) -> float:
    """``C_{n,alpha} = 2^{1-2alpha} pi^{1-n/2} / (Gamma(alpha) Gamma(alpha + 1 - n/2))``.

    Poles of the Gamma factors give the value zero.
    """
    inv = 1.0
    for z in (alpha, alpha + 1.0 - n / 2.0):
        if z <= 0 and z == math.floor(z):
            return 0.0
        inv /= math.gamma(z)
    return 2.0 ** (1.0 - 2.0 * alpha) * math.pi ** (1.0 - n / 2.0) * inv


@dataclass(frozen=True)
class QuadratureSpec:
    """Discretization parameters for the integral routes.

    Attributes:
        tol: Truncation level; the exp-mapped integrand is cut where its
            envelope falls below this.
        h_u: Trapezoid step in ``u = log s``.
        h_v: Trapezoid step in ``v = log |y|``.
        n_theta: Angular nodes for the y-direction when n = 3.
        pad: Extra reach added to the support bound of the |y| range.
        interp_order: Spline order of off-grid sampling (1 = multilinear).
        gj_nodes: Gauss-Jacobi nodes per null direction (kernel2, Riesz).
        indicator_tol: Largest acceptable relative half-density indicator.
        u_bounds: Optional explicit ``(u_min, u_max)`` overriding the derived ones.
        v_bounds: Optional explicit ``(v_min, v_max)`` overriding the derived ones.
    """

    tol: float = 1e-10
    h_u: float = 0.08
    h_v: float = 0.04
    n_theta: int = 32
    pad: float = 1.0
    interp_order: int = 5
    gj_nodes: int = 128
    indicator_tol: float = 1e-4
    u_bounds: tuple[float, float] | None = None
    v_bounds: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if not 0 < self.tol < 1:
            raise ParameterError("tol", self.tol, "must lie in (0, 1)")
        for name in ("h_u", "h_v", "pad"):
            if not getattr(self, name) > 0:
                raise ParameterError(name, getattr(self, name), "must be positive")
        if self.n_theta < MIN_NODES or self.gj_nodes < MIN_NODES:
            raise ParameterError("nodes", (self.n_theta, self.gj_nodes), f"need at least {MIN_NODES}")
        for bounds in (self.u_bounds, self.v_bounds):
            if bounds is not None and not (
                math.isfinite(bounds[0]) and math.isfinite(bounds[1]) and bounds[0] < bounds[1]
            ):
                raise ParameterError("bounds", bounds, "must be finite and increasing")

    def coarsened(self) -> QuadratureSpec:
        """Half the node density in every direction."""
        return QuadratureSpec(
            tol=self.tol,
            h_u=2.0 * self.h_u,
            h_v=2.0 * self.h_v,
            n_theta=max(MIN_NODES, self.n_theta // 2),
            pad=self.pad,
            interp_order=self.interp_order,
            gj_nodes=max(MIN_NODES, self.gj_nodes // 2),
            indicator_tol=self.indicator_tol,
            u_bounds=self.u_bounds,
            v_bounds=self.v_bounds,
        )


@dataclass(frozen=True)
class QuadratureResult:
    """Values at probe points with the half-density error indicator.

    Attributes:
        values: Estimates, one per probe point.
        indicator: ``max|I_h - I_2h| / max|I_h|`` over the probe set.
        converged: Whether the indicator is within tolerance.
    """

    values: np.ndarray
    indicator: float
    converged: bool


def _nodes(lo: float, hi: float, h: float) -> tuple[np.ndarray, float]:
    count = max(MIN_NODES, math.ceil((hi - lo) / h) + 1)
    nodes = np.linspace(lo, hi, count)
    return nodes, (hi - lo) / (count - 1)


def integration_bounds(
    scheme: QScheme, quad: QuadratureSpec, reach: float
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Truncated ``(u, v)`` ranges for a probe whose datum lies within ``reach`` in time."""
    alpha = scheme.alpha.alpha
    n = scheme.alpha.n
    log_tol = math.log(quad.tol)
    if quad.u_bounds is not None:
        u_bounds = quad.u_bounds
    else:
        small_s = scheme.l_star + 1.0 - n / 2.0 - alpha
        u_bounds = (log_tol / small_s, -log_tol / (n - 1.0))
    if quad.v_bounds is not None:
        v_bounds = quad.v_bounds
    else:
        small_y = scheme.l - 2.0 * alpha
        v_max = math.log((reach + quad.pad) / min(1.0, scheme.q**scheme.l))
        v_bounds = (log_tol / small_y, v_max)
    return u_bounds, v_bounds


def _directions(n: int, n_theta: int) -> tuple[np.ndarray, float]:
    """Unit directions of y and their angular weight."""
    if n == 2:
        return np.array([[1.0], [-1.0]]), 1.0
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    return np.stack([np.cos(theta), np.sin(theta)], axis=1), 2.0 * math.pi / n_theta


def _delta(
    sampler: FieldSampler,
    scheme: QScheme,
    point: Point,
    s: np.ndarray,
    r: np.ndarray,
    directions: np.ndarray,
) -> np.ndarray:
    """Difference operator on the broadcast product ``s x r x directions``.

    Returns an array of shape ``(len(s), len(r), len(directions))``.
    """
    n = scheme.alpha.n
    alpha = scheme.alpha.alpha
    q = scheme.q
    weights = scheme.signed_weights()
    s3 = s[:, None, None]
    r3 = r[None, :, None]
    total = np.zeros((s.size, r.size, directions.shape[0]))
    for j in range(scheme.l_star + 1):
        shrink = 1.0 + q**j * s3
        radial = shrink ** (2.0 * alpha) / (1.0 + shrink) ** (n / 2.0 + alpha)
        for k in range(scheme.l + 1):
            step = q**k * r3
            coords = [np.broadcast_to(point[0] - step, total.shape)]
            for axis in range(n - 1):
                offset = step * directions[None, None, :, axis] / shrink
                coords.append(np.broadcast_to(point[1 + axis] - offset, total.shape))
            samples = sampler(np.stack(coords))
            total += weights[j, k] * radial * samples
    return total * scheme.normalization


def difference_operator(
    f: ScalarField,
    alpha: FractionalOrder | float,
    scheme: QScheme,
    point: Point,
    s: float,
    y: Sequence[float],
    *,
    interp_order: int = 5,
) -> float:
    """Evaluate ``Delta^{l,alpha}_{s,y} f`` at one point.

    Raises:
        OrderError: If the scheme was built for a different alpha.
    """
    order = as_order(alpha, f.grid.n)
    _check_scheme(order, scheme)
    if len(y) != f.grid.n - 1:
        raise GridError(f"y has {len(y)} components, expected {f.grid.n - 1}")
    r = math.sqrt(sum(c * c for c in y))
    if r == 0.0 or s <= 0:
        raise ParameterError("(s, |y|)", (s, r), "must both be positive")
    direction = np.array([[c / r for c in y]])
    sampler = FieldSampler(f, interp_order)
    value = _delta(sampler, scheme, point, np.array([s]), np.array([r]), direction)
    return float(value[0, 0, 0])


def _check_scheme(order: FractionalOrder, scheme: QScheme) -> None:
    if scheme.alpha != order:
        raise ParameterError(
            "scheme", scheme.alpha, f"built for alpha={scheme.alpha.alpha}, n={scheme.alpha.n}"
        )


def _integral_at(
    sampler: FieldSampler, scheme: QScheme, quad: QuadratureSpec, point: Point, t0: float
) -> float:
    n = scheme.alpha.n
    alpha = scheme.alpha.alpha
    (u_lo, u_hi), (v_lo, v_hi) = integration_bounds(scheme, quad, point[0] - t0)
    u, h_u = _nodes(u_lo, u_hi, quad.h_u)
    v, h_v = _nodes(v_lo, v_hi, quad.h_v)
    directions, angular = _directions(n, quad.n_theta)
    s = np.exp(u)
    r = np.exp(v)
    weight = (s ** (1.0 - n / 2.0 - alpha))[:, None] * (r ** (-2.0 * alpha))[None, :]
    total = 0.0
    # Row blocks keep the sample arrays bounded.
    block = max(1, 200_000 // (v.size * directions.shape[0]))
    for start in range(0, s.size, block):
        rows = slice(start, start + block)
        delta = _delta(sampler, scheme, point, s[rows], r, directions)
        total += float(np.sum(delta.sum(axis=2) * weight[rows]))
    const = riesz_constant(n, -alpha)
    return const * total * h_u * h_v * angular


def _probe_values(
    f: ScalarField,
    scheme: QScheme,
    quad: QuadratureSpec,
    points: Sequence[Point],
    workers: int | None,
) -> np.ndarray:
    sampler = FieldSampler(f, quad.interp_order)
    w = resolve_workers(workers)
    _logger.debug("integral route: %d probes, %d workers, q=%g l=%d", len(points), w, scheme.q, scheme.l)
    with ThreadPoolExecutor(max_workers=w) as pool:
        futures = [pool.submit(_integral_at, sampler, scheme, quad, p, f.grid.t0) for p in points]
        return np.array([fut.result() for fut in futures])


def half_density_indicator(fine: np.ndarray, coarse: np.ndarray) -> float:
    scale = float(np.max(np.abs(fine))) if fine.size else 0.0
    if scale == 0.0:
        return float(np.max(np.abs(fine - coarse))) if fine.size else 0.0
    return float(np.max(np.abs(fine - coarse))) / scale


def finish(
    what: str, fine: np.ndarray, coarse: np.ndarray, quad: QuadratureSpec, strict: bool
) -> QuadratureResult:
    indicator = half_density_indicator(fine, coarse)
    converged = indicator <= quad.indicator_tol
    if not converged:
        if strict:
            raise ConvergenceError(what, indicator, quad.indicator_tol)
        _logger.warning(
            "%s: indicator %.3e above tolerance %.1e", what, indicator, quad.indicator_tol
        )
    return QuadratureResult(fine, indicator, converged)


def check_points(f: ScalarField, points: Sequence[Point]) -> None:
    for p in points:
        if len(p) != f.grid.n:
            raise GridError(f"probe point {tuple(p)} has {len(p)} coordinates, grid has {f.grid.n}")


def box_alpha_integral(
    f: ScalarField,
    alpha: FractionalOrder | float,
    scheme: QScheme | None = None,
    quad: QuadratureSpec | None = None,
    points: Sequence[Point] = (),
    *,
    workers: int | None = None,
    strict: bool = False,
) -> QuadratureResult:
    """Fractional wave operator at probe points through the q-difference integral.

    Args:
        f: Datum, compactly supported inside the window.
        alpha: Order; 2*alpha must not be an integer.
        scheme: q-scheme; defaults to q = 2 and l = ceil(2 alpha) + 1.
        quad: Quadrature parameters.
        points: Probe points ``(t, x1[, x2])``.
        workers: Thread count for the probe loop.
        strict: Raise instead of warning when the indicator exceeds tolerance.

    Raises:
        OrderError: For half-integer alpha or alpha >= l/2.
        ConvergenceError: If ``strict`` and the indicator is above tolerance.
    """
    order = as_order(alpha, f.grid.n)
    order.require_non_half_integer("integral")
    scheme = scheme or QScheme.build(order)
    _check_scheme(order, scheme)
    quad = quad or QuadratureSpec()
    check_points(f, points)
    fine = _probe_values(f, scheme, quad, points, workers)
    coarse = _probe_values(f, scheme, quad.coarsened(), points, workers)
    return finish("q-difference integral", fine, coarse, quad, strict)
