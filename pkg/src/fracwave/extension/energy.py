"""Weighted energy of the extension against the symbol pairing of its datum.

For a mode ``(s, xi)`` with Laplace-Fourier datum ``F`` the closed-form
profile ``U(y) = phi(y w) F``, ``w = sqrt(|xi|^2 + s^2)``, carries the bilinear
energy::

    E(s, xi) = int_0^inf y^{1-2 alpha} [(d_y U)^2 + (|xi|^2 + s^2) U^2] dy

The integrand is analytic and decays in the sector between the real axis and
the ray ``y = t / w``, so each mode is integrated along its own ray with the
trapezoid rule in ``log t``, from profile samples and their y-derivatives.
Summing ``E`` against ``|F|^2`` over the modes, for a halving sequence of eps,
and extrapolating eps -> 0 gives the extension energy of the datum. The
symbol pairing ``<sigma f, f>`` should equal it up to the f-independent
factor ``int_0^inf z^{1-2 alpha} (phi'^2 + phi^2) dz = -1/c_alpha``.
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..core import FractionalOrder, ScalarField, as_order, dft_forward, frequency_mesh, laplace_forward
from ..core.extrapolate import richardson
from ..core.transforms import hermitian_part
from ..errors import OrderError, ParameterError
from ..symbol import symbol_grid
from .closed_form import profile_derivative, profile_eval

_logger = logging.getLogger(__name__)

DEFAULT_EPS_SEQUENCE = (0.01, 0.005, 0.0025)

#: Step of the trapezoid rule in log t.
_LOG_STEP = 0.1

#: Integrand level at which the log-t range is truncated.
_TRUNCATION = 1e-16

#: Upper end of the t range; the integrand decays like exp(-2t).
_T_MAX = 40.0

#: Modes per block of the ray quadrature.
_BLOCK = 2048


def _order_value(alpha: FractionalOrder | float) -> float:
    a = alpha.alpha if isinstance(alpha, FractionalOrder) else float(alpha)
    if not 0.0 < a < 1.0:
        raise OrderError(a, "energy", "requires 0 < alpha < 1")
    return a


@dataclass(frozen=True)
class RayProfile:
    """Profile of the unit mode ``w = 1`` on the ray nodes.

    Along the ray ``y = t / w`` of any mode the profile is ``phi(t) F`` and
    its y-derivative is ``w phi'(t) F``, so one set of samples serves all modes.

    Attributes:
        t: Quadrature nodes, geometric in t.
        weights: Trapezoid weights in ``log t`` times the Jacobian ``t``.
        phi: ``phi(t)``.
        dphi: ``phi'(t)``.
    """

    alpha: float
    t: np.ndarray
    weights: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray

    @classmethod
    def sample(cls, alpha: FractionalOrder | float) -> RayProfile:
        a = _order_value(alpha)
        x_min = math.log(_TRUNCATION) / min(2.0 - 2.0 * a, 2.0 * a)
        x_max = math.log(_T_MAX)
        count = math.ceil((x_max - x_min) / _LOG_STEP)
        xs = np.linspace(x_min, x_max, count + 1)
        t = np.exp(xs)
        trapezoid = np.full(count + 1, (x_max - x_min) / count)
        trapezoid[[0, -1]] *= 0.5
        phi = np.array([profile_eval(a, 1.0, 0.0, 1.0, float(v)).real for v in t])
        # (y^-1 d_y) U at the unit mode, times y
        dphi = np.array([v * profile_derivative(a, 1.0, 0.0, 1.0, float(v)).real for v in t])
        _logger.debug("ray profile alpha=%g: %d nodes", a, count + 1)
        return cls(a, t, trapezoid * t, phi, dphi)

    def constant(self) -> float:
        density = self.weights * (self.dphi**2 + self.phi**2)
        return float(np.sum(self.t ** (1.0 - 2.0 * self.alpha) * density))

    def energies(self, w: np.ndarray) -> np.ndarray:
        """``E`` per mode for an array of roots ``w`` with ``Re w > 0``."""
        w = np.asarray(w, dtype=np.complex128)
        flat = w.ravel()
        out = np.empty(flat.shape, dtype=np.complex128)
        density = self.weights * (self.dphi**2 + self.phi**2)
        log_t = np.log(self.t)
        for start in range(0, flat.size, _BLOCK):
            block = flat[start : start + _BLOCK, None]
            # y^{1-2 alpha} dy with y = t / w, times w^2 from both terms
            measure = np.exp((1.0 - 2.0 * self.alpha) * (log_t[None, :] - np.log(block))) * block
            out[start : start + _BLOCK] = measure @ density
        return out.reshape(w.shape)


def mode_energy(alpha: FractionalOrder | float, s: complex, xi_norm: float) -> complex:
    """Extension energy ``E(s, xi)`` of one mode with unit datum.

    Raises:
        OrderError: If alpha is outside (0, 1).
        ParameterError: If Re s <= 0.
    """
    s = complex(s)
    if not s.real > 0:
        raise ParameterError("s", s, "Re s must be positive")
    w = cmath.sqrt(xi_norm * xi_norm + s * s)
    return complex(RayProfile.sample(alpha).energies(np.array([w]))[0])


def energy_constant(alpha: FractionalOrder | float) -> float:
    """``int_0^inf z^{1-2 alpha} (phi'^2 + phi^2) dz`` for ``0 < alpha < 1``.

    Raises:
        OrderError: If alpha is outside (0, 1).
    """
    return RayProfile.sample(alpha).constant()


@dataclass(frozen=True)
class EnergyReport:
    """Both sides of the energy identity.

    Attributes:
        lhs: Extension energy, extrapolated to eps -> 0.
        rhs: Real part of the symbol pairing ``(2 pi)^-n sum sigma |f^|^2 d omega``.
        rhs_imag: Imaginary part of the pairing relative to its real part.
        ratio: ``lhs / rhs``.
        constant: The per-mode constant ``I_alpha``.
        lhs_by_eps: ``(eps, lhs(eps))`` before extrapolation.
    """

    lhs: float
    rhs: float
    rhs_imag: float
    ratio: float
    constant: float
    lhs_by_eps: tuple[tuple[float, float], ...]

    def to_dict(self) -> dict[str, object]:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "rhs_imag": self.rhs_imag,
            "ratio": self.ratio,
            "constant": self.constant,
        }


def _pairing(multiplier: np.ndarray, coeffs: np.ndarray, cells: int, volume: float) -> complex:
    return complex(np.sum(hermitian_part(multiplier) * np.abs(coeffs) ** 2)) / (cells * volume)


def energy_check(
    f: ScalarField,
    alpha: FractionalOrder | float,
    eps_seq: Sequence[float] = DEFAULT_EPS_SEQUENCE,
    *,
    workers: int | None = None,
) -> EnergyReport:
    """Evaluate the extension energy of ``f`` and the symbol pairing it should equal.

    The energy at each eps integrates the closed-form profile of every
    Laplace-Fourier mode along its ray and weights it by ``|F|^2``; the limit
    eps -> 0 is taken by Richardson extrapolation with exponents 1, 2, ...

    Raises:
        OrderError: If alpha is outside (0, 1).
        ParameterError: If ``eps_seq`` is empty or does not halve.
    """
    grid = f.grid
    order = as_order(alpha, grid.n)
    if not 0.0 < order.alpha < 1.0:
        raise OrderError(order.alpha, "energy", "requires 0 < alpha < 1")
    if not eps_seq:
        raise ParameterError("eps_seq", eps_seq, "must not be empty")
    for coarse, fine in zip(eps_seq, eps_seq[1:]):
        if abs(coarse / fine - 2.0) > 1e-9:
            raise ParameterError("eps_seq", tuple(eps_seq), "must halve at every step")
    cells = int(np.prod(grid.shape))
    volume = grid.cell_volume
    ray = RayProfile.sample(order)
    constant = ray.constant()
    tau, xi2 = frequency_mesh(grid)
    lhs_values: list[float] = []
    for eps in eps_seq:
        spec = laplace_forward(f, eps, workers=workers)
        w = np.broadcast_to(np.sqrt(xi2 + (eps + 1j * tau) ** 2), grid.shape)
        lhs_values.append(_pairing(ray.energies(w), spec.coeffs, cells, volume).real)
    lhs = richardson(lhs_values, [float(j) for j in range(1, len(lhs_values))]).value.real
    pairing = _pairing(
        symbol_grid(grid, order).values, dft_forward(f, workers=workers).coeffs, cells, volume
    )
    rhs = pairing.real
    rhs_imag = abs(pairing.imag) / max(abs(rhs), np.finfo(np.float64).tiny)
    ratio = lhs / rhs if rhs != 0.0 else math.nan
    _logger.debug("energy alpha=%g: lhs=%.6e rhs=%.6e ratio=%.6f", order.alpha, lhs, rhs, ratio)
    return EnergyReport(
        lhs=lhs,
        rhs=rhs,
        rhs_imag=rhs_imag,
        ratio=ratio,
        constant=constant,
        lhs_by_eps=tuple(zip((float(e) for e in eps_seq), lhs_values)),
    )
