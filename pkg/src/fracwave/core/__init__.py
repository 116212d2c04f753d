"""Grids, fields and transform services shared by every route."""

from .grid import FractionalOrder, ScalarField, SpacetimeGrid, SpectralField, as_order
from .io import read_field, write_field
from .samples import FieldSampler, check_padding, gaussian_bump, null_bump, support_extent
from .transforms import (
    apply_multiplier,
    dft_forward,
    dft_inverse,
    dft_inverse_complex,
    frequency_axes,
    frequency_mesh,
    laplace_forward,
    sample_mode,
    wave_apply,
    wave_multiplier,
)

__all__ = [
    "FieldSampler",
    "FractionalOrder",
    "ScalarField",
    "SpacetimeGrid",
    "SpectralField",
    "apply_multiplier",
    "as_order",
    "check_padding",
    "dft_forward",
    "dft_inverse",
    "dft_inverse_complex",
    "frequency_axes",
    "frequency_mesh",
    "gaussian_bump",
    "laplace_forward",
    "null_bump",
    "read_field",
    "sample_mode",
    "support_extent",
    "wave_apply",
    "wave_multiplier",
    "write_field",
]
