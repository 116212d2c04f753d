"""Light-cone quadratures: the second-difference kernel and the Riesz potential.

Both integrate over the forward cone ``s > |y|`` in null coordinates
``a = (s + y)/2``, ``b = (s - y)/2`` (n = 2), where ``s^2 - y^2 = 4ab`` and
``ds dy = 2 da db``. The algebraic endpoint singularities in a and b are
absorbed into Gauss-Jacobi weights.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .._threads import resolve_workers
from ..core import FieldSampler, FractionalOrder, ScalarField, as_order
from ..errors import OrderError
from .integral import Point, QuadratureResult, QuadratureSpec, check_points, finish, riesz_constant

_logger = logging.getLogger(__name__)


@lru_cache(maxsize=32)
def _jacobi(count: int, at_zero: float, at_end: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1] for the weight ``u^at_zero (1 - u)^at_end``."""
    x, w = roots_jacobi(count, at_end, at_zero)
    scale = 0.5 ** (1.0 + at_zero + at_end)
    return 0.5 * (1.0 + np.asarray(x)), scale * np.asarray(w)


def jacobi_rule(
    count: int, length: float, at_zero: float, at_end: float = 0.0
) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi rule for ``int_0^L u^at_zero (L - u)^at_end h(u) du``."""
    nodes, weights = _jacobi(count, at_zero, at_end)
    return length * nodes, length ** (1.0 + at_zero + at_end) * weights


def _kernel2_at(
    sampler: FieldSampler, alpha: float, quad: QuadratureSpec, point: Point, t0: float
) -> float:
    t, x = point[0], point[1]
    reach = max(t - t0, 0.0) + quad.pad
    a, w = jacobi_rule(quad.gj_nodes, reach, -alpha)

    def g(aa: np.ndarray, bb: np.ndarray) -> np.ndarray:
        return sampler(np.stack([t - aa - bb, x - aa + bb]))

    zero = np.zeros_like(a)
    g00 = float(g(np.zeros(1), np.zeros(1))[0])
    ga0 = g(a, zero)
    g0b = g(zero, a)
    gab = g(a[:, None] + 0.0 * a[None, :], a[None, :] + 0.0 * a[:, None])
    second = (g00 - ga0[:, None] - g0b[None, :] + gab) / np.outer(a, a)
    inner = float(w @ second @ w)
    tail = reach ** (-alpha) / alpha
    edges = tail * float(w @ ((g00 - g0b) / a)) + tail * float(w @ ((g00 - ga0) / a))
    corner = tail * tail * g00
    prefactor = riesz_constant(2, -alpha) * 2.0 ** (-1.0 - 2.0 * alpha)
    return prefactor * (inner + edges + corner)


def box_alpha_kernel2(
    f: ScalarField,
    alpha: FractionalOrder | float,
    quad: QuadratureSpec | None = None,
    points: Sequence[Point] = (),
    *,
    workers: int | None = None,
    strict: bool = False,
) -> QuadratureResult:
    """Fractional wave operator through the second difference
    ``T f = g(0,0) - g(a,0) - g(0,b) + g(a,b)`` with ``g(a,b) = f(t-a-b, x-a+b)``::

        box^alpha f = C_{2,-alpha} 2^{-1-2alpha} int int T f / (ab)^{1+alpha} da db

    Only for n = 2 and 0 < alpha < 1.

    Raises:
        OrderError: For n != 2 or alpha outside (0, 1).
    """
    order = as_order(alpha, f.grid.n)
    if f.grid.n != 2:
        raise OrderError(order.alpha, "kernel2", "requires n = 2")
    order.require_below(1.0, "kernel2", "1")
    quad = quad or QuadratureSpec()
    check_points(f, points)

    def run(spec: QuadratureSpec) -> np.ndarray:
        sampler = FieldSampler(f, spec.interp_order)
        with ThreadPoolExecutor(max_workers=resolve_workers(workers)) as pool:
            futures = [
                pool.submit(_kernel2_at, sampler, order.alpha, spec, p, f.grid.t0) for p in points
            ]
            return np.array([fut.result() for fut in futures])

    _logger.debug("kernel2 route: %d probes, %d nodes", len(points), quad.gj_nodes)
    return finish("second-difference kernel", run(quad), run(quad.coarsened()), quad, strict)


def _riesz2_at(
    sampler: FieldSampler, alpha: float, quad: QuadratureSpec, point: Point, t0: float
) -> float:
    t, x = point[0], point[1]
    reach = max(t - t0, 0.0) + quad.pad
    a, w = jacobi_rule(quad.gj_nodes, reach, alpha - 1.0)
    aa = a[:, None] + 0.0 * a[None, :]
    bb = a[None, :] + 0.0 * a[:, None]
    g = sampler(np.stack([t - aa - bb, x - aa + bb]))
    prefactor = riesz_constant(2, alpha) * 2.0 * 4.0 ** (alpha - 1.0)
    return prefactor * float(w @ g @ w)


def _riesz3_at(
    sampler: FieldSampler, alpha: float, quad: QuadratureSpec, point: Point, t0: float
) -> float:
    t, x1, x2 = point[0], point[1], point[2]
    reach = max(t - t0, 0.0) + quad.pad
    p = alpha - 1.5
    # a in [0, L] with weight a^{2 alpha - 1}; b = a xi, xi in [0, 1] with xi^p (1 - xi).
    a, wa = jacobi_rule(quad.gj_nodes, reach, 2.0 * alpha - 1.0)
    xi, wx = jacobi_rule(quad.gj_nodes, 1.0, p, 1.0)
    theta = 2.0 * math.pi * np.arange(quad.n_theta) / quad.n_theta
    a3 = a[:, None, None]
    xi3 = xi[None, :, None]
    rho = a3 * (1.0 - xi3)
    shape = (a.size, xi.size, theta.size)
    coords = np.stack(
        [
            np.broadcast_to(t - a3 * (1.0 + xi3), shape),
            np.broadcast_to(x1 - rho * np.cos(theta)[None, None, :], shape),
            np.broadcast_to(x2 - rho * np.sin(theta)[None, None, :], shape),
        ]
    )
    g = sampler(coords).mean(axis=2) * 2.0 * math.pi
    prefactor = riesz_constant(3, alpha) * 4.0**p * 2.0
    return prefactor * float(wa @ g @ wx)


def riesz_potential_at(
    f: ScalarField,
    alpha: float,
    points: Sequence[Point],
    quad: QuadratureSpec | None = None,
    *,
    workers: int | None = None,
    strict: bool = False,
) -> QuadratureResult:
    """Hyperbolic Riesz potential at probe points::

        I_alpha f(t, x) = C_{n,alpha} int_{s > |y|} (s^2 - |y|^2)^{alpha - n/2} f(t - s, x - y) ds dy

    The constant ``C_{n,alpha}`` is included so that ``box I_{alpha+1} = I_alpha``.

    Raises:
        OrderError: If alpha <= n/2 - 1.
    """
    n = f.grid.n
    if not alpha > n / 2.0 - 1.0:
        raise OrderError(alpha, "riesz", f"requires alpha > n/2 - 1 = {n / 2.0 - 1.0:g}")
    quad = quad or QuadratureSpec()
    check_points(f, points)
    kernel = _riesz2_at if n == 2 else _riesz3_at

    def run(spec: QuadratureSpec) -> np.ndarray:
        sampler = FieldSampler(f, spec.interp_order)
        with ThreadPoolExecutor(max_workers=resolve_workers(workers)) as pool:
            futures = [pool.submit(kernel, sampler, alpha, spec, p, f.grid.t0) for p in points]
            return np.array([fut.result() for fut in futures])

    _logger.debug("riesz potential alpha=%g: %d probes", alpha, len(points))
    return finish("Riesz potential", run(quad), run(quad.coarsened()), quad, strict)


def riesz_potential(
    f: ScalarField,
    alpha: float,
    quad: QuadratureSpec | None = None,
    *,
    workers: int | None = None,
) -> ScalarField:
    """Riesz potential on every grid point of ``f``."""
    mesh = np.meshgrid(*f.grid.axes(), indexing="ij")
    points = [tuple(float(c) for c in coords) for coords in zip(*(m.ravel() for m in mesh))]
    result = riesz_potential_at(f, alpha, points, quad, workers=workers)
    return ScalarField(f.grid, result.values.reshape(f.grid.shape))
