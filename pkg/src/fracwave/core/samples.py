"""Smooth test data and off-grid evaluation of sampled fields."""

from __future__ import annotations

import math
from collections.abc import Sequence
from itertools import product

import numpy as np
from numpy.polynomial import hermite
from scipy import ndimage

from ..errors import GridError, ParameterError
from .grid import FloatArray, ScalarField, SpacetimeGrid


def _gaussian_derivative(u: np.ndarray, center: float, width: float, order: int) -> np.ndarray:
    """``d^order/du^order exp(-(u - center)**2 / (2 width**2))`` via Hermite polynomials."""
    scale = 1.0 / (width * math.sqrt(2.0))
    xi = (u - center) * scale
    coef = np.zeros(order + 1)
    coef[order] = 1.0
    return (-scale) ** order * hermite.hermval(xi, coef) * np.exp(-(xi**2))


def _check_center(grid: SpacetimeGrid, center: Sequence[float], width: float) -> None:
    if len(center) != grid.n:
        raise ParameterError("center", tuple(center), f"expected {grid.n} coordinates")
    if not width > 0:
        raise ParameterError("width", width, "must be positive")


def gaussian_bump(grid: SpacetimeGrid, center: Sequence[float], width: float) -> ScalarField:
    """Isotropic Gaussian ``exp(-|(t, x) - center|**2 / (2 width**2))``."""
    return null_bump(grid, center, width, order=0)


def null_bump(
    grid: SpacetimeGrid, center: Sequence[float], width: float, order: int = 2
) -> ScalarField:
    """The wave operator applied ``order`` times to :func:`gaussian_bump`, in closed form.

    The Gaussian factorizes over the axes, so the multinomial expansion of
    ``(d_tt - d_11 - d_22)**order`` gives the result as sums of products of
    one-dimensional Hermite functions. For ``order >= 1`` every moment of the
    datum along light-cone directions vanishes, which keeps fractional powers
    of it rapidly decaying inside the periodic window.
    """
    _check_center(grid, center, width)
    if order < 0:
        raise ParameterError("order", order, "must be non-negative")
    mesh = grid.mesh()
    total = np.zeros(grid.shape)
    for split in product(range(order + 1), repeat=grid.n):
        if sum(split) != order:
            continue
        weight = math.factorial(order)
        for k in split:
            weight //= math.factorial(k)
        sign = -1.0 if sum(split[1:]) % 2 else 1.0
        term: np.ndarray = np.ones((1,) * grid.n)
        for coord, c, k in zip(mesh, center, split):
            term = term * _gaussian_derivative(coord, c, width, 2 * k)
        total = total + sign * weight * term
    return ScalarField(grid, total)


#: Level, relative to the peak, above which a sample counts as support.
SUPPORT_LEVEL = 1e-3

#: Smallest period-to-support ratio along each axis.
PADDING_RATIO = 2.0


def support_extent(f: ScalarField, level: float = SUPPORT_LEVEL) -> tuple[float, ...]:
    """Span of the samples above ``level`` times the peak, per axis.

    A zero field has zero extent.
    """
    peak = float(np.max(np.abs(f.values)))
    if peak == 0.0:
        return (0.0,) * f.grid.n
    mask = np.abs(f.values) > level * peak
    spans: list[float] = []
    for axis, step in enumerate(f.grid.steps):
        other = tuple(a for a in range(mask.ndim) if a != axis)
        hits = np.flatnonzero(np.any(mask, axis=other))
        spans.append(float((hits[-1] - hits[0] + 1) * step))
    return tuple(spans)


def check_padding(
    f: ScalarField,
    ratio: float = PADDING_RATIO,
    level: float = SUPPORT_LEVEL,
    axes: Sequence[int] | None = None,
) -> None:
    """Require every period of the grid to be ``ratio`` times the datum support.

    The periodic transforms wrap the response of the datum around the window.

    Raises:
        GridError: If an axis in ``axes`` (all by default) is too short.
    """
    extents = support_extent(f, level)
    names = ("t", *(f"x{k}" for k in range(1, f.grid.n)))
    for axis in range(f.grid.n) if axes is None else axes:
        period = f.grid.shape[axis] * f.grid.steps[axis]
        if ratio * extents[axis] > period:
            raise GridError(
                f"datum support {extents[axis]:g} along {names[axis]} needs a period of at least "
                f"{ratio:g} times it, got {period:g}"
            )


class FieldSampler:
    """Evaluate a sampled field at arbitrary spacetime points.

    Uses spline interpolation from ``scipy.ndimage`` with the field taken as
    zero outside the window. Order 1 is multilinear interpolation; the default
    quintic spline keeps second differences of the interpolant smooth, which
    hypersingular quadratures need.

    Example::

        sampler = FieldSampler(field)
        values = sampler(np.array([[1.0, 2.0], [0.0, 0.5]]))  # two points, rows = axes
    """

    def __init__(self, field: ScalarField, order: int = 5) -> None:
        if not 1 <= order <= 5:
            raise ParameterError("interpolation order", order, "must be between 1 and 5")
        self._grid = field.grid
        self._order = order
        if order > 1:
            self._coeffs = ndimage.spline_filter(
                field.values, order=order, mode="grid-constant"
            )
        else:
            self._coeffs = np.asarray(field.values)
        grid = field.grid
        self._origin = np.array([grid.t0] + [-(c // 2) * h for c, h in zip(grid.nx, grid.dx)])
        self._steps = np.array(grid.steps)

    @property
    def grid(self) -> SpacetimeGrid:
        return self._grid

    def __call__(self, points: np.ndarray) -> FloatArray:
        """Sample at ``points`` of shape ``(n, ...)`` (first axis = coordinate)."""
        pts = np.asarray(points, dtype=np.float64)
        if pts.shape[0] != self._grid.n:
            raise GridError(f"points carry {pts.shape[0]} coordinates, grid has {self._grid.n}")
        flat = pts.reshape(self._grid.n, -1)
        index = (flat - self._origin[:, None]) / self._steps[:, None]
        out = ndimage.map_coordinates(
            self._coeffs,
            index,
            order=self._order,
            mode="grid-constant",
            cval=0.0,
            prefilter=False,
        )
        return np.asarray(out, dtype=np.float64).reshape(pts.shape[1:])
