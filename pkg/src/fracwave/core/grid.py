"""Spacetime grids, sampled fields and the fractional order.

Coordinates follow one convention everywhere:

- times ``t_k = t0 + k*dt`` for ``k = 0..nt-1`` (``t0`` is the first sample,
  data vanish before it);
- spatial nodes are centred, ``x_k = (k - nx//2) * dx``;
- values are stored with shape ``(nt, *nx)`` in row-major order, time first.

Example::

    >>> from fracwave.core.grid import SpacetimeGrid, FractionalOrder
    >>> grid = SpacetimeGrid(nt=64, nx=(64,), dt=0.5, dx=(0.5,))
    >>> grid.n, grid.shape
    (2, (64, 64))
    >>> FractionalOrder(1.3).m
    1
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import NDArray

from ..errors import GridError, OrderError

FloatArray = NDArray[np.float64]
ComplexArray = NDArray[np.complex128]

#: Smallest admissible count per axis.
MIN_COUNT = 4


@dataclass(frozen=True)
class SpacetimeGrid:
    """Uniform periodic grid over a window of (t, x).

    Attributes:
        nt: Number of time samples.
        nx: Sample counts per spatial axis (one or two axes).
        dt: Time step.
        dx: Spatial steps, one per axis.
        t0: First sample time.
    """

    nt: int
    nx: tuple[int, ...]
    dt: float
    dx: tuple[float, ...]
    t0: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "nx", tuple(int(c) for c in self.nx))
        object.__setattr__(self, "dx", tuple(float(h) for h in self.dx))
        if len(self.nx) not in (1, 2):
            raise GridError(f"expected 1 or 2 spatial axes, got {len(self.nx)}")
        if len(self.dx) != len(self.nx):
            raise GridError(f"{len(self.nx)} spatial counts but {len(self.dx)} steps")
        for count in (self.nt, *self.nx):
            if count < MIN_COUNT:
                raise GridError(f"axis count {count} below minimum {MIN_COUNT}")
        for step in (self.dt, *self.dx):
            if not (math.isfinite(step) and step > 0):
                raise GridError(f"steps must be positive and finite, got {step}")
        if not math.isfinite(self.t0):
            raise GridError(f"t0 must be finite, got {self.t0}")

    @property
    def n(self) -> int:
        """Spacetime dimension (time plus spatial axes)."""
        return 1 + len(self.nx)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.nt, *self.nx)

    @property
    def steps(self) -> tuple[float, ...]:
        return (self.dt, *self.dx)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.steps))

    @property
    def window(self) -> float:
        """Length of the time window, ``nt * dt``."""
        return self.nt * self.dt

    @property
    def extents(self) -> tuple[float, ...]:
        return tuple(c * h for c, h in zip(self.shape, self.steps))

    def times(self) -> FloatArray:
        return self.t0 + self.dt * np.arange(self.nt, dtype=np.float64)

    def space_axis(self, axis: int) -> FloatArray:
        count, step = self.nx[axis], self.dx[axis]
        return step * (np.arange(count, dtype=np.float64) - count // 2)

    def axes(self) -> tuple[FloatArray, ...]:
        """Coordinate vectors ``(t, x1[, x2])``."""
        return (self.times(), *(self.space_axis(a) for a in range(len(self.nx))))

    def mesh(self) -> tuple[FloatArray, ...]:
        """Broadcastable coordinate arrays with ``indexing='ij'``."""
        return tuple(np.meshgrid(*self.axes(), indexing="ij", sparse=True))

    def to_index(self, point: tuple[float, ...]) -> tuple[float, ...]:
        """Fractional array index of a physical point."""
        if len(point) != self.n:
            raise GridError(f"point {point} has {len(point)} coordinates, grid has {self.n}")
        index = [(point[0] - self.t0) / self.dt]
        for a, coord in enumerate(point[1:]):
            index.append(coord / self.dx[a] + self.nx[a] // 2)
        return tuple(index)

    def shifted(self, t0: float) -> SpacetimeGrid:
        return SpacetimeGrid(self.nt, self.nx, self.dt, self.dx, t0)

    def to_dict(self) -> dict[str, Any]:
        return {"nt": self.nt, "nx": list(self.nx), "dt": self.dt, "dx": list(self.dx), "t0": self.t0}


def _frozen(values: Any, dtype: type, shape: tuple[int, ...], what: str) -> NDArray[Any]:
    array = np.array(values, dtype=dtype, copy=True)
    if array.size != int(np.prod(shape)):
        raise GridError(f"{what} has {array.size} entries, grid has {int(np.prod(shape))} cells")
    array = array.reshape(shape)
    if not np.all(np.isfinite(array)):
        raise GridError(f"{what} contains non-finite entries")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real samples of a field on a :class:`SpacetimeGrid`.

    The value array is copied on construction and made read-only.
    """

    grid: SpacetimeGrid
    values: FloatArray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", _frozen(self.values, np.float64, self.grid.shape, "field")
        )

    def norm(self) -> float:
        """Discrete L2 norm including the cell volume."""
        return float(np.sqrt(np.sum(self.values**2) * self.grid.cell_volume))

    def __add__(self, other: ScalarField) -> ScalarField:
        if other.grid != self.grid:
            raise GridError("cannot add fields on different grids")
        return ScalarField(self.grid, self.values + other.values)

    def scaled(self, factor: float) -> ScalarField:
        return ScalarField(self.grid, factor * self.values)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients on the dual frequency grid (FFT wrap-around order).

    ``coeffs = fftn(values) * dt * prod(dx)``, so Parseval reads
    ``sum(values**2) * dV == sum(|coeffs|**2) / (nt * prod(nx) * dV)``.
    """

    grid: SpacetimeGrid
    coeffs: ComplexArray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "coeffs", _frozen(self.coeffs, np.complex128, self.grid.shape, "spectrum")
        )


@dataclass(frozen=True)
class FractionalOrder:
    """Order alpha of the fractional power together with its derived constants.

    Attributes:
        alpha: Positive real order.
        n: Spacetime dimension the order is used in.
    """

    alpha: float
    n: int = 2

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise OrderError(self.alpha, "any", "alpha must be positive and finite")
        if self.n < 1:
            raise OrderError(self.alpha, "any", f"dimension n={self.n} must be positive")

    @property
    def m(self) -> int:
        """Integer part of alpha."""
        return math.floor(self.alpha)

    @property
    def alpha0(self) -> float:
        """Fractional part of alpha, zero for integer orders."""
        return self.alpha - self.m

    @property
    def is_integer(self) -> bool:
        return self.alpha0 == 0.0

    @property
    def is_half_integer(self) -> bool:
        """True when 2*alpha is an integer (integers included)."""
        twice = 2.0 * self.alpha
        return abs(twice - round(twice)) < 1e-12

    @property
    def mu(self) -> float:
        """Klein-Gordon mass parameter alpha**2 - n**2/4."""
        return self.alpha**2 - self.n**2 / 4.0

    @property
    def c_alpha(self) -> float:
        """Normalization of the weighted Neumann limit defining the DtN map."""
        sign = -1.0 if self.m % 2 == 0 else 1.0
        return (
            sign
            * 2.0 ** (self.alpha + self.alpha0 - 1.0)
            * math.gamma(self.alpha)
            / math.gamma(1.0 - self.alpha0)
        )

    def require_non_half_integer(self, route: str) -> None:
        if self.is_half_integer:
            raise OrderError(self.alpha, route, "2*alpha must not be an integer")

    def require_below(self, bound: float, route: str, what: str) -> None:
        if not self.alpha < bound:
            raise OrderError(self.alpha, route, f"alpha must be below {what}={bound:g}")


def as_order(alpha: FractionalOrder | float, n: int) -> FractionalOrder:
    """Accept either a bare alpha or a :class:`FractionalOrder` for dimension ``n``."""
    if isinstance(alpha, FractionalOrder):
        if alpha.n != n:
            return FractionalOrder(alpha.alpha, n)
        return alpha
    return FractionalOrder(float(alpha), n)
