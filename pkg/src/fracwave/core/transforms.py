"""Discrete Fourier and Laplace transform services.

All spectral work in the package goes through this module. Frequencies are
angular, ``2*pi*fftfreq(N, step)``, in FFT wrap-around order, and the forward
transform carries the cell volume so coefficients approximate the continuous
transform ``f^(tau, xi) = int f(t, x) exp(-i(tau t + xi.x)) dt dx`` (up to the
phase of the grid origin).

Example::

    >>> import numpy as np
    >>> from fracwave.core import SpacetimeGrid, ScalarField, dft_forward, dft_inverse
    >>> grid = SpacetimeGrid(nt=16, nx=(16,), dt=0.5, dx=(0.5,))
    >>> f = ScalarField(grid, np.ones(grid.shape))
    >>> spec = dft_forward(f)
    >>> bool(np.allclose(dft_inverse(spec).values, 1.0))
    True
"""

from __future__ import annotations

import logging
import math

import numpy as np
import scipy.fft

from .._threads import resolve_workers
from ..errors import HermitianError, ParameterError
from .grid import ComplexArray, FloatArray, ScalarField, SpacetimeGrid, SpectralField

_logger = logging.getLogger(__name__)

#: Relative tolerance for Hermitian symmetry and imaginary residues.
HERMITIAN_TOL = 1e-10

#: Largest admissible eps * window before exp(-eps t) underflows the payload.
MAX_EPS_WINDOW = 20.0


def frequency_axes(grid: SpacetimeGrid) -> tuple[FloatArray, ...]:
    """Angular frequency vectors ``(tau, xi1[, xi2])`` in wrap-around order."""
    return tuple(
        2.0 * math.pi * scipy.fft.fftfreq(count, d=step)
        for count, step in zip(grid.shape, grid.steps)
    )


def frequency_mesh(grid: SpacetimeGrid) -> tuple[FloatArray, FloatArray]:
    """Broadcastable ``(tau, |xi|**2)`` arrays over the frequency grid."""
    axes = frequency_axes(grid)
    mesh = np.meshgrid(*axes, indexing="ij", sparse=True)
    tau = mesh[0]
    xi2 = sum((m**2 for m in mesh[1:]), start=np.zeros((1,) * grid.n))
    return tau, xi2


def wave_multiplier(grid: SpacetimeGrid) -> FloatArray:
    """Symbol ``|xi|**2 - tau**2`` of the wave operator on the full grid."""
    tau, xi2 = frequency_mesh(grid)
    return np.broadcast_to(xi2 - tau**2, grid.shape).copy()


def reflect(array: np.ndarray) -> np.ndarray:
    """Index map k -> -k (mod N) on every axis."""
    return np.roll(np.flip(array), 1, axis=tuple(range(array.ndim)))


def hermitian_part(multiplier: np.ndarray) -> ComplexArray:
    """Project a multiplier onto ``m(-k) = conj(m(k))``."""
    m = np.asarray(multiplier, dtype=np.complex128)
    return 0.5 * (m + np.conj(reflect(m)))


def hermitian_residual(coeffs: np.ndarray) -> float:
    """Relative distance of an array from Hermitian symmetry."""
    scale = float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(coeffs - np.conj(reflect(coeffs))))) / scale


def dft_forward(field: ScalarField, *, workers: int | None = None) -> SpectralField:
    """Forward transform, ``coeffs = fftn(values) * dV``."""
    grid = field.grid
    coeffs = scipy.fft.fftn(field.values, workers=resolve_workers(workers))
    return SpectralField(grid, coeffs * grid.cell_volume)


def dft_inverse_complex(spec: SpectralField, *, workers: int | None = None) -> ComplexArray:
    """Complex-valued inverse of :func:`dft_forward`."""
    grid = spec.grid
    out = scipy.fft.ifftn(spec.coeffs, workers=resolve_workers(workers))
    return np.asarray(out / grid.cell_volume, dtype=np.complex128)


def dft_inverse(
    spec: SpectralField, *, workers: int | None = None, tol: float = HERMITIAN_TOL
) -> ScalarField:
    """Real inverse of :func:`dft_forward`.

    Raises:
        HermitianError: If the spectrum does not represent a real field.
    """
    residual = hermitian_residual(spec.coeffs)
    if residual > tol:
        raise HermitianError(residual, tol)
    return ScalarField(spec.grid, dft_inverse_complex(spec, workers=workers).real)


def apply_multiplier(
    field: ScalarField,
    multiplier: np.ndarray,
    *,
    workers: int | None = None,
    tol: float = HERMITIAN_TOL,
) -> ScalarField:
    """Apply a Fourier multiplier to a real field and return the real result.

    The multiplier is Hermitian-projected first, then the imaginary residue of
    the inverse transform is checked against ``tol`` times the output norm.

    Raises:
        HermitianError: If the residue is too large.
    """
    out, residue = apply_multiplier_with_residue(field, multiplier, workers=workers)
    if residue > tol:
        raise HermitianError(residue, tol)
    return out


def apply_multiplier_with_residue(
    field: ScalarField, multiplier: np.ndarray, *, workers: int | None = None
) -> tuple[ScalarField, float]:
    """Like :func:`apply_multiplier` but return the relative imaginary residue instead of checking it."""
    grid = field.grid
    w = resolve_workers(workers)
    _logger.debug("multiplier on grid %s with %d workers", grid.shape, w)
    projected = hermitian_part(np.broadcast_to(multiplier, grid.shape))
    out = scipy.fft.ifftn(scipy.fft.fftn(field.values, workers=w) * projected, workers=w)
    real_norm = float(np.linalg.norm(out.real))
    imag_norm = float(np.linalg.norm(out.imag))
    return ScalarField(grid, out.real), imag_norm / max(real_norm, np.finfo(np.float64).tiny)


def apply_multiplier_complex(
    values: np.ndarray,
    grid: SpacetimeGrid,
    multiplier: np.ndarray,
    *,
    workers: int | None = None,
) -> ComplexArray:
    """Apply a multiplier to complex samples without any projection."""
    w = resolve_workers(workers)
    coeffs = scipy.fft.fftn(np.asarray(values, dtype=np.complex128), workers=w)
    out = scipy.fft.ifftn(coeffs * np.broadcast_to(multiplier, grid.shape), workers=w)
    return np.asarray(out, dtype=np.complex128)


def wave_apply(field: ScalarField, *, workers: int | None = None) -> ScalarField:
    """Integer-order wave operator ``d_tt - Laplacian`` applied spectrally."""
    return apply_multiplier(field, wave_multiplier(field.grid), workers=workers)


def check_eps(eps: float, window: float) -> None:
    """Validate a Bromwich abscissa against the window length.

    Raises:
        ParameterError: If eps is not positive or eps * window exceeds the
            underflow guard.
    """
    if not (math.isfinite(eps) and eps > 0):
        raise ParameterError("eps", eps, "must be positive")
    if eps * window > MAX_EPS_WINDOW:
        raise ParameterError(
            "eps", eps, f"eps * window = {eps * window:.3g} exceeds {MAX_EPS_WINDOW:g}"
        )


def laplace_weights(grid: SpacetimeGrid, eps: float) -> FloatArray:
    """Damping factors ``exp(-eps (t - t0))`` shaped to broadcast over a field."""
    weights = np.exp(-eps * (grid.times() - grid.t0))
    return weights.reshape((grid.nt,) + (1,) * len(grid.nx))


def laplace_forward(
    field: ScalarField, eps: float, *, workers: int | None = None
) -> SpectralField:
    """Laplace transform in t along ``s = eps + i tau`` and Fourier transform in x.

    Realized as the discrete Fourier transform of ``exp(-eps (t - t0)) f``.
    """
    grid = field.grid
    check_eps(eps, grid.window)
    damped = ScalarField(grid, field.values * laplace_weights(grid, eps))
    return dft_forward(damped, workers=workers)


def sample_mode(grid: SpacetimeGrid, tau: float, xi: tuple[float, ...]) -> ComplexArray:
    """Sampled complex exponential ``exp(i (tau t + xi.x))``."""
    if len(xi) != len(grid.nx):
        raise ParameterError("xi", xi, f"expected {len(grid.nx)} components")
    mesh = grid.mesh()
    phase = tau * mesh[0]
    for k, coord in zip(xi, mesh[1:]):
        phase = phase + k * coord
    return np.asarray(np.exp(1j * phase), dtype=np.complex128)


def grid_frequency(grid: SpacetimeGrid, index: tuple[int, ...]) -> tuple[float, ...]:
    """Angular frequency of a discrete mode given by its integer indices."""
    return tuple(
        2.0 * math.pi * k / (count * step)
        for k, count, step in zip(index, grid.shape, grid.steps)
    )
