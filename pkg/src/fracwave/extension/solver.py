"""Time-domain solver for the degenerate extension problem and boundary-fit extraction.

The extension ``u(t, x, y)`` solves::

    u_tt - Lap_x u - y^{2 alpha - 1} d_y (y^{1 - 2 alpha} d_y u) = 0,   y > 0
    u(t, x, 0) = f(t, x),   u = u_t = 0 at t = t0

for ``0 < alpha < 1``. The y direction is discretized by finite volumes on
cell centres ``y_i = (i + 1/2) dy`` with exact cell masses
``m_i = int y^{1-2 alpha} dy`` and two-point fluxes
``2 alpha (u_{i+1} - u_i) / (y_{i+1}^{2 alpha} - y_i^{2 alpha})``, which are exact
for the steady profiles ``A + B y^{2 alpha}``. The x Laplacian is spectral on
the periodic core grid and time stepping is leapfrog, with an outflow sponge
in the top of the y range.

The Neumann data is read off the solution near ``y = 0`` by fitting the
boundary expansion ``sum a_j y^{2j} + sum b_j y^{2 alpha + 2j}``; the
DtN value is ``c_alpha * b_0 * 2 alpha``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft
import scipy.linalg
from scipy.interpolate import make_interp_spline

from .._threads import resolve_workers
from ..core import FractionalOrder, ScalarField, SpacetimeGrid, as_order
from ..core.grid import FloatArray
from ..core.samples import support_extent
from ..errors import ConvergenceError, OrderError, ParameterError, StabilityError

_logger = logging.getLogger(__name__)

#: Fraction of the stability bound actually used.
CFL_SAFETY = 0.9

#: Upper fraction of (0, y_max] covered by the sponge.
SPONGE_FRACTION = 0.2

#: Peak damping rate of the sponge.
SPONGE_STRENGTH = 3.0

#: Condition number above which a boundary fit is flagged.
FIT_CONDITION_MAX = 1e8

#: Relative datum level used to measure the support diameter.
_SUPPORT_LEVEL = 1e-6


def _require_unit_interval(order: FractionalOrder) -> None:
    if not 0.0 < order.alpha < 1.0:
        raise OrderError(order.alpha, "time-domain", "requires 0 < alpha < 1")


@dataclass(frozen=True)
class SolverGrid:
    """Discretization of the half-space ``(t, x, y)`` above a core grid.

    Attributes:
        alpha: Order of the extension, ``0 < alpha < 1``.
        grid: Boundary grid supplying the x discretization and output times.
        dy: Cell width in y.
        y_max: Top of the y range.
        substeps: Solver steps per core time step.
        sponge: Whether the outflow sponge is active.
    """

    alpha: FractionalOrder
    grid: SpacetimeGrid
    dy: float
    y_max: float
    substeps: int
    sponge: bool = True
    masses: FloatArray = field(init=False, repr=False, compare=False)
    couplings: FloatArray = field(init=False, repr=False, compare=False)
    boundary_coupling: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        _require_unit_interval(self.alpha)
        if not (math.isfinite(self.dy) and self.dy > 0):
            raise ParameterError("dy", self.dy, "must be positive")
        if not self.y_max >= 4 * self.dy:
            raise ParameterError("y_max", self.y_max, f"must span at least four cells of {self.dy}")
        if self.substeps < 1:
            raise ParameterError("substeps", self.substeps, "must be a positive integer")
        a = self.alpha.alpha
        faces = self.dy * np.arange(self.ny + 1, dtype=np.float64)
        masses = np.diff(faces ** (2.0 - 2.0 * a)) / (2.0 - 2.0 * a)
        centres = self.y
        couplings = 2.0 * a / np.diff(centres ** (2.0 * a))
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "boundary_coupling", 2.0 * a / centres[0] ** (2.0 * a))
        limit = self.stability_limit
        if self.dt > limit:
            raise StabilityError(self.dt, limit)

    @classmethod
    def build(
        cls,
        grid: SpacetimeGrid,
        alpha: FractionalOrder | float,
        dy: float = 0.05,
        y_max: float | None = None,
        substeps: int | None = None,
        *,
        sponge: bool = True,
    ) -> SolverGrid:
        """Solver grid with ``y_max`` defaulting to the window length and the
        smallest stable number of substeps.

        Raises:
            StabilityError: If an explicit ``substeps`` violates the CFL bound.
        """
        order = as_order(alpha, grid.n)
        y_max = float(grid.window) if y_max is None else float(y_max)
        if substeps is None:
            probe = cls(order, grid, dy, y_max, 1 << 20, sponge)
            substeps = max(1, math.ceil(grid.dt / probe.stability_limit))
        return cls(order, grid, dy, y_max, substeps, sponge)

    @property
    def ny(self) -> int:
        return max(4, round(self.y_max / self.dy))

    @property
    def y(self) -> FloatArray:
        """Cell centres."""
        return self.dy * (np.arange(self.ny, dtype=np.float64) + 0.5)

    @property
    def dt(self) -> float:
        return self.grid.dt / self.substeps

    @property
    def x_cell(self) -> float:
        return float(np.prod(self.grid.dx))

    @property
    def stability_limit(self) -> float:
        """``0.9 * 2 / sqrt(lambda_x + lambda_y)`` from Gershgorin bounds."""
        lam_x = sum((math.pi / h) ** 2 for h in self.grid.dx)
        left = np.concatenate([[self.boundary_coupling], self.couplings])
        right = np.concatenate([self.couplings, [0.0]])
        lam_y = float(np.max(2.0 * (left + right) / self.masses))
        return CFL_SAFETY * 2.0 / math.sqrt(lam_x + lam_y)

    def damping(self) -> FloatArray:
        """Sponge rate per cell, quadratic ramp over the top 20 %."""
        if not self.sponge:
            return np.zeros(self.ny)
        start = (1.0 - SPONGE_FRACTION) * self.y_max
        ramp = np.clip((self.y - start) / (self.y_max - start), 0.0, None)
        return SPONGE_STRENGTH * ramp**2

    def laplacian_symbol(self) -> FloatArray:
        """``-|xi|^2`` in the rfftn layout over the x axes."""
        nx, dx = self.grid.nx, self.grid.dx
        freqs = [2.0 * math.pi * scipy.fft.fftfreq(c, d=h) for c, h in zip(nx[:-1], dx[:-1])]
        freqs.append(2.0 * math.pi * scipy.fft.rfftfreq(nx[-1], d=dx[-1]))
        mesh = np.meshgrid(*freqs, indexing="ij", sparse=True)
        xi2 = sum((m**2 for m in mesh), start=np.zeros((1,) * len(nx)))
        return -xi2[..., None]


class _Operator:
    """Spatial operator ``A = M^-1 K_y - Lap_x`` of the semi-discrete system."""

    def __init__(self, sgrid: SolverGrid, workers: int | None) -> None:
        self.sgrid = sgrid
        self.workers = resolve_workers(workers)
        self.axes = tuple(range(len(sgrid.grid.nx)))
        self.symbol = sgrid.laplacian_symbol()

    def laplacian(self, u: np.ndarray) -> np.ndarray:
        spec = scipy.fft.rfftn(u, axes=self.axes, workers=self.workers)
        shape = self.sgrid.grid.nx
        return scipy.fft.irfftn(spec * self.symbol, s=shape, axes=self.axes, workers=self.workers)

    def stiffness(self, u: np.ndarray) -> np.ndarray:
        """``K_y u`` with homogeneous boundary data."""
        flux = self.sgrid.couplings * (u[..., 1:] - u[..., :-1])
        out = np.zeros_like(u)
        out[..., :-1] -= flux
        out[..., 1:] += flux
        out[..., 0] += self.sgrid.boundary_coupling * u[..., 0]
        return out

    def acceleration(self, u: np.ndarray, datum: np.ndarray | None) -> np.ndarray:
        force = -self.stiffness(u)
        if datum is not None:
            force[..., 0] += self.sgrid.boundary_coupling * datum
        return force / self.sgrid.masses + self.laplacian(u)

    def energy(self, u_prev: np.ndarray, u_next: np.ndarray) -> float:
        sg = self.sgrid
        velocity = (u_next - u_prev) / sg.dt
        kinetic = float(np.sum(sg.masses * velocity**2))
        potential = float(np.sum(u_next * self.stiffness(u_prev)))
        potential -= float(np.sum(sg.masses * u_next * self.laplacian(u_prev)))
        return 0.5 * sg.x_cell * (kinetic + potential)


def weighted_energy(
    sgrid: SolverGrid, u_prev: np.ndarray, u_next: np.ndarray, *, workers: int | None = None
) -> float:
    """Staggered discrete energy ``E^{n+1/2}`` conserved by the homogeneous leapfrog.

    ``E = 1/2 |v|_M^2 + 1/2 <u^{n+1}, K u^n>`` with ``v = (u^{n+1} - u^n)/dt``,
    the discrete counterpart of ``1/2 int (u_t^2 + |grad_x u|^2 + u_y^2) y^{1-2 alpha}``.
    """
    return _Operator(sgrid, workers).energy(u_prev, u_next)


def _leapfrog(
    op: _Operator, u_prev: np.ndarray, u: np.ndarray, datum: np.ndarray | None
) -> np.ndarray:
    sg = op.sgrid
    half = 0.5 * sg.dt * sg.damping()
    return (2.0 * u - (1.0 - half) * u_prev + sg.dt**2 * op.acceleration(u, datum)) / (1.0 + half)


@dataclass(frozen=True, eq=False)
class TimeDomainSolution:
    """Extension sampled at the core times on the lowest cells.

    Attributes:
        sgrid: Solver grid used.
        y: Heights of the stored cells.
        values: Samples with shape ``(nt, *nx, len(y))``.
    """

    sgrid: SolverGrid
    y: FloatArray = field(repr=False)
    values: FloatArray = field(repr=False)

    def trace(self) -> ScalarField:
        """Values on the lowest cell centre."""
        return ScalarField(self.sgrid.grid, self.values[..., 0])


def support_diameter(f: ScalarField) -> float:
    """Largest extent of the datum above ``1e-6`` of its peak, over t and x."""
    return max(support_extent(f, _SUPPORT_LEVEL))


def solve_time_domain(
    f: ScalarField,
    alpha: FractionalOrder | float,
    sgrid: SolverGrid | None = None,
    *,
    keep: int | None = 16,
    workers: int | None = None,
) -> TimeDomainSolution:
    """March the extension problem with Dirichlet datum ``f`` and zero initial data.

    The datum is interpolated to the solver steps by a cubic spline in time.
    Only the ``keep`` lowest cells are stored (all cells for ``keep=None``).

    Raises:
        OrderError: If alpha is outside (0, 1).
        ParameterError: If ``sgrid`` belongs to another grid or order.
    """
    order = as_order(alpha, f.grid.n)
    _require_unit_interval(order)
    sgrid = sgrid or SolverGrid.build(f.grid, order)
    if sgrid.grid != f.grid:
        raise ParameterError("sgrid", sgrid.grid, "solver grid was built for a different field grid")
    if sgrid.alpha.alpha != order.alpha:
        raise ParameterError("sgrid", sgrid.alpha.alpha, f"solver grid was built for alpha != {order.alpha}")
    diameter = support_diameter(f)
    if sgrid.y_max < 4.0 * diameter:
        _logger.warning("y_max=%g is below four datum diameters (%g)", sgrid.y_max, diameter)

    grid = f.grid
    stored = sgrid.ny if keep is None else min(keep, sgrid.ny)
    out = np.zeros((grid.nt, *grid.nx, stored))
    op = _Operator(sgrid, workers)
    _logger.debug(
        "time-domain solve: %s x %d cells, dt=%.4g (%d substeps)",
        grid.nx,
        sgrid.ny,
        sgrid.dt,
        sgrid.substeps,
    )
    if not np.any(f.values):
        return TimeDomainSolution(sgrid, sgrid.y[:stored], out)

    spline = make_interp_spline(grid.times(), f.values, k=3, axis=0)
    u_prev = np.zeros((*grid.nx, sgrid.ny))
    u = np.zeros_like(u_prev)
    steps = (grid.nt - 1) * sgrid.substeps
    for n in range(steps):
        t = grid.t0 + n * sgrid.dt
        u_prev, u = u, _leapfrog(op, u_prev, u, np.asarray(spline(t)))
        if (n + 1) % sgrid.substeps == 0:
            out[(n + 1) // sgrid.substeps] = u[..., :stored]
    return TimeDomainSolution(sgrid, sgrid.y[:stored], out)


@dataclass(frozen=True, eq=False)
class FreeEvolution:
    """Homogeneous evolution record: final state and the energy after each step."""

    final: FloatArray = field(repr=False)
    energies: FloatArray = field(repr=False)

    @property
    def drift(self) -> float:
        """Largest relative deviation of the energy from its first value."""
        return float(np.max(np.abs(self.energies - self.energies[0])) / abs(self.energies[0]))


def free_evolution(
    sgrid: SolverGrid, initial: np.ndarray, steps: int, *, workers: int | None = None
) -> FreeEvolution:
    """Evolve ``initial`` (zero velocity, zero Dirichlet datum) and record the energy.

    Raises:
        ParameterError: If ``initial`` does not match the solver grid.
    """
    expected = (*sgrid.grid.nx, sgrid.ny)
    initial = np.asarray(initial, dtype=np.float64)
    if initial.shape != expected:
        raise ParameterError("initial", initial.shape, f"expected shape {expected}")
    op = _Operator(sgrid, workers)
    u_prev, u = initial.copy(), initial.copy()
    energies = np.empty(steps)
    for n in range(steps):
        u_prev, u = u, _leapfrog(op, u_prev, u, None)
        energies[n] = op.energy(u_prev, u)
    return FreeEvolution(u, energies)


@dataclass(frozen=True, eq=False)
class BoundaryFit:
    """Least-squares fit of the boundary expansion at every (t, x) point.

    Attributes:
        alpha: Order used for the fractional exponents.
        even: Coefficients of ``y^{2j}``, shape ``(m + 1 + extra, *points)``.
        fractional: Coefficients of ``y^{2 alpha + 2j}``; ``fractional[0]`` is b.
        residual: Relative fit residual per point.
        value: Extracted ``Lambda_alpha f`` per point.
        condition: Condition number of the column-scaled design matrix.
        ill_conditioned: Per-point flag, set where the condition exceeds the threshold.
    """

    alpha: FractionalOrder
    even: FloatArray = field(repr=False)
    fractional: FloatArray = field(repr=False)
    residual: FloatArray = field(repr=False)
    value: FloatArray = field(repr=False)
    condition: float
    ill_conditioned: np.ndarray = field(repr=False)

    def to_field(self, grid: SpacetimeGrid) -> ScalarField:
        return ScalarField(grid, self.value)


def boundary_fit_extract(
    values: np.ndarray,
    y: np.ndarray,
    alpha: FractionalOrder | float,
    *,
    cells: int = 8,
    extra_even: int = 1,
    extra_fractional: int = 1,
    condition_max: float = FIT_CONDITION_MAX,
) -> BoundaryFit:
    """Fit ``u(y) ~ sum_{j<=m+extra} a_j y^{2j} + sum_j b_j y^{2 alpha + 2j}`` on
    the lowest ``cells`` heights and return ``c_alpha * b_0 * prod_k (2 alpha - 2k)``.

    Args:
        values: Samples with the heights on the last axis.
        y: Heights matching the last axis of ``values``.
        alpha: Order of the extension.

    Raises:
        ParameterError: If fewer than ``m + 3`` cells (or fewer cells than
            basis functions) are available.
    """
    order = alpha if isinstance(alpha, FractionalOrder) else FractionalOrder(float(alpha))
    values = np.asarray(values, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n_even = order.m + 1 + extra_even
    n_frac = 1 + extra_fractional
    if cells < order.m + 3 or cells < n_even + n_frac:
        raise ParameterError("cells", cells, f"need at least {max(order.m + 3, n_even + n_frac)}")
    if y.size < cells or values.shape[-1] < cells:
        raise ParameterError("cells", cells, f"only {min(y.size, values.shape[-1])} heights available")
    ys = y[:cells]
    design = np.column_stack(
        [ys ** (2.0 * j) for j in range(n_even)]
        + [ys ** (2.0 * order.alpha + 2.0 * j) for j in range(n_frac)]
    )
    scale = np.max(np.abs(design), axis=0)
    scaled = design / scale
    condition = float(np.linalg.cond(scaled))
    points = values.shape[:-1]
    rhs = values[..., :cells].reshape(-1, cells).T
    coeffs, *_ = scipy.linalg.lstsq(scaled, rhs)
    coeffs = coeffs / scale[:, None]
    misfit = np.linalg.norm(design @ coeffs - rhs, axis=0)
    residual = misfit / np.maximum(np.linalg.norm(rhs, axis=0), np.finfo(np.float64).tiny)
    b = coeffs[n_even]
    factor = order.c_alpha * math.prod(2.0 * order.alpha - 2.0 * k for k in range(order.m + 1))
    flagged = np.full(points, condition > condition_max)
    if condition > condition_max:
        _logger.warning("boundary fit condition %.2e above %.1e", condition, condition_max)
    return BoundaryFit(
        alpha=order,
        even=coeffs[:n_even].reshape((n_even, *points)),
        fractional=coeffs[n_even:].reshape((n_frac, *points)),
        residual=residual.reshape(points),
        value=(factor * b).reshape(points),
        condition=condition,
        ill_conditioned=flagged,
    )


def dtn_time_domain(
    f: ScalarField,
    alpha: FractionalOrder | float,
    sgrid: SolverGrid | None = None,
    *,
    cells: int = 8,
    strict: bool = False,
    workers: int | None = None,
) -> ScalarField:
    """Solve the extension problem and extract the DtN map by boundary fitting.

    Raises:
        ConvergenceError: If ``strict`` and the fit is ill-conditioned.
    """
    solution = solve_time_domain(f, alpha, sgrid, keep=max(cells, 16), workers=workers)
    fit = boundary_fit_extract(solution.values, solution.y, solution.sgrid.alpha, cells=cells)
    if strict and bool(np.any(fit.ill_conditioned)):
        raise ConvergenceError("boundary fit", fit.condition, FIT_CONDITION_MAX)
    return fit.to_field(f.grid)
