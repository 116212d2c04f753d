"""fracwave - fractional powers of the wave operator on gridded spacetime data.

Quick start::

    from fracwave import SpacetimeGrid, null_bump, apply_box_alpha_spectral, dtn_spacetime

    grid = SpacetimeGrid(nt=128, nx=(128,), dt=0.25, dx=(0.25,))
    f = null_bump(grid, center=(12.0, 0.0), width=1.0)
    g = apply_box_alpha_spectral(f, 0.4)       # Fourier multiplier
    h = dtn_spacetime(f, 0.4, eps=0.05)         # AdS extension, closed form

Three independent routes:
- Fourier multiplier: the principal-branch symbol (|xi|^2 - tau^2)^alpha
- Hypersingular integrals: q-difference quadrature, light-cone kernel, Riesz potentials
- Extension: Dirichlet-to-Neumann map of the degenerate extension problem,
  in closed form and through a time-domain solver

The ``fracwave`` command runs each route on field files and drives the
cross-route validation suite.
"""

# Grids, fields, transforms
from .core import (
    FieldSampler,
    FractionalOrder,
    ScalarField,
    SpacetimeGrid,
    SpectralField,
    dft_forward,
    dft_inverse,
    gaussian_bump,
    laplace_forward,
    null_bump,
    read_field,
    wave_apply,
    write_field,
)

# Errors
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    FieldFormatError,
    FracwaveError,
    GridError,
    HermitianError,
    OrderError,
    ParameterError,
    ReportError,
    StabilityError,
)

# Extension route
from .extension import (
    ExtensionProfile,
    SolverGrid,
    dtn_multiplier,
    dtn_spacetime,
    dtn_spacetime_extrapolated,
    dtn_time_domain,
    energy_check,
    neumann_extract_profile,
    profile_eval,
    solve_time_domain,
)

# Geometry
from .geometry import EigenBasis, GlobalAdsMode, global_ads_multiplier, product_dtn_apply

# Hypersingular route
from .hypersingular import (
    QScheme,
    QuadratureSpec,
    box_alpha_integral,
    box_alpha_kernel2,
    riesz_potential,
)

# Spectral route
from .symbol import SymbolGrid, apply_box_alpha_spectral, sigma, symbol_grid

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "EigenBasis",
    "ExtensionProfile",
    "FieldFormatError",
    "FieldSampler",
    "FracwaveError",
    "FractionalOrder",
    "GlobalAdsMode",
    "GridError",
    "HermitianError",
    "OrderError",
    "ParameterError",
    "QScheme",
    "QuadratureSpec",
    "ReportError",
    "ScalarField",
    "SolverGrid",
    "SpacetimeGrid",
    "SpectralField",
    "StabilityError",
    "SymbolGrid",
    "apply_box_alpha_spectral",
    "box_alpha_integral",
    "box_alpha_kernel2",
    "dft_forward",
    "dft_inverse",
    "dtn_multiplier",
    "dtn_spacetime",
    "dtn_spacetime_extrapolated",
    "dtn_time_domain",
    "energy_check",
    "gaussian_bump",
    "global_ads_multiplier",
    "laplace_forward",
    "neumann_extract_profile",
    "null_bump",
    "product_dtn_apply",
    "profile_eval",
    "read_field",
    "riesz_potential",
    "sigma",
    "solve_time_domain",
    "symbol_grid",
    "wave_apply",
    "write_field",
]
