"""Hypersingular-integral route: q-differences, light-cone kernels, Riesz potentials."""

from .integral import (
    QuadratureResult,
    QuadratureSpec,
    box_alpha_integral,
    difference_operator,
    riesz_constant,
)
from .lightcone import box_alpha_kernel2, riesz_potential, riesz_potential_at
from .qcalc import QScheme, a_coefficient, a_coefficient_product, q_binomial

__all__ = [
    "QScheme",
    "QuadratureResult",
    "QuadratureSpec",
    "a_coefficient",
    "a_coefficient_product",
    "box_alpha_integral",
    "box_alpha_kernel2",
    "difference_operator",
    "q_binomial",
    "riesz_constant",
    "riesz_potential",
    "riesz_potential_at",
]
