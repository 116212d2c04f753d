"""Cross-route validation suite.

Each check compares two independent computations of the same quantity and
returns :class:`~fracwave.report.CheckRecord` entries:

- ``specfun``: special-function identities;
- ``symbol``: exact integer order, semigroup law and diagonal action;
- ``integral`` / ``kernel2``: hypersingular quadratures against the spectral route;
- ``riesz``: ``I_{alpha+1}(box f) = I_alpha f``;
- ``dtn``: closed-form DtN map converging to the spectral route as eps -> 0;
- ``neumann``: Neumann extraction from the closed-form profile;
- ``time-domain``: solver plus boundary fit against the spectral route;
- ``energy``: extension energy against the symbol pairing;
- ``geometry``: circle modes, radial equation and global-AdS multiplier;
- ``golden``: checksum of the spectral output against a blessed file.

Example::

    cfg = RunConfig.from_json_file(Path("run.json"))
    report = run_validation(cfg)
    if not report.ok:
        ...
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path

import numpy as np

from .config import RunConfig
from .core import (
    FieldSampler,
    FractionalOrder,
    ScalarField,
    SpacetimeGrid,
    as_order,
    frequency_mesh,
    sample_mode,
    wave_apply,
    wave_multiplier,
)
from .core.transforms import grid_frequency
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    HermitianError,
    StabilityError,
)
from .extension import (
    ExtensionProfile,
    SolverGrid,
    dtn_multiplier,
    dtn_spacetime,
    dtn_time_domain,
    energy_check,
    free_evolution,
    neumann_extract_detailed,
)
from .geometry import (
    GlobalAdsMode,
    global_ads_multiplier,
    neumann_limit_ladder,
    principal_symbol_ratio,
    product_dtn_apply,
    radial_ode_residual,
)
from .hypersingular import QScheme, box_alpha_integral, box_alpha_kernel2, riesz_potential_at
from .report import CheckRecord, GoldenStore, ValidationReport
from .specfun import selftest
from .symbol import apply_box_alpha_spectral, apply_box_alpha_spectral_complex, sigma, sigma_array, symbol_grid

_logger = logging.getLogger(__name__)

#: Dimension parameter of the global-AdS checks.
ADS_DIMENSION = 3

#: Offsets of the default probe points from the datum centre, in datum widths.
PROBE_OFFSETS = ((0.0, 0.0), (0.5, 0.5), (-0.5, 0.25), (1.0, -0.5), (0.25, -1.0))

#: Second order used by the semigroup check.
SEMIGROUP_STEP = 0.25

#: Random (s, xi) modes drawn by the Neumann check.
NEUMANN_MODES = 20

#: Steps of the homogeneous energy-drift run.
DRIFT_STEPS = 200

# Errors that turn a check into a failed record instead of aborting the run.
_SOFT_ERRORS = (ConvergenceError, DomainError, HermitianError, StabilityError)


def relative_error(value: np.ndarray, reference: np.ndarray) -> float:
    """``||value - reference|| / ||reference||`` (absolute when the reference vanishes)."""
    value = np.asarray(value)
    reference = np.asarray(reference)
    scale = float(np.linalg.norm(reference))
    diff = float(np.linalg.norm(value - reference))
    return diff / scale if scale > 0 else diff


def default_probes(grid: SpacetimeGrid, center: Sequence[float], width: float) -> list[tuple[float, ...]]:
    """Probe points around the datum centre."""
    points: list[tuple[float, ...]] = []
    for dt_off, dx_off in PROBE_OFFSETS:
        point = [center[0] + dt_off * width, center[1] + dx_off * width]
        point += [float(c) for c in center[2:]]
        points.append(tuple(point))
    return points


@dataclass
class ValidationContext:
    """Shared inputs of one validation run.

    The spectral reference is computed once and reused by every check.
    """

    config: RunConfig
    grid: SpacetimeGrid
    datum: ScalarField
    bless: bool = False

    @classmethod
    def from_config(cls, config: RunConfig, bless: bool = False) -> ValidationContext:
        grid = config.grid.build()
        return cls(config, grid, config.datum.build(grid), bless)

    @property
    def order(self) -> FractionalOrder:
        return as_order(self.config.alpha, self.grid.n)

    @property
    def workers(self) -> int | None:
        return self.config.workers

    @cached_property
    def reference(self) -> ScalarField:
        return apply_box_alpha_spectral(self.datum, self.order, workers=self.workers)

    @cached_property
    def probes(self) -> list[tuple[float, ...]]:
        if self.config.probes:
            return [tuple(p) for p in self.config.probes]
        center = self.config.datum.resolved_center(self.grid)
        return default_probes(self.grid, center, self.config.datum.width)

    def reference_at_probes(self) -> np.ndarray:
        points = np.array(self.probes, dtype=np.float64).T
        return FieldSampler(self.reference)(points)


CheckFn = Callable[[ValidationContext], list[CheckRecord]]


def check_specfun(ctx: ValidationContext) -> list[CheckRecord]:
    return [
        CheckRecord("specfun", "specfun", c.name, c.error, c.tolerance, c.passed)
        for c in selftest()
    ]


def check_symbol(ctx: ValidationContext) -> list[CheckRecord]:
    grid = ctx.grid
    tol = ctx.config.tolerances.semigroup
    records: list[CheckRecord] = []

    exact = float(np.max(np.abs(symbol_grid(grid, 1.0).values - wave_multiplier(grid))))
    applied = float(
        np.max(np.abs(apply_box_alpha_spectral(ctx.datum, 1.0).values - wave_apply(ctx.datum).values))
    )
    records.append(CheckRecord("symbol", "spectral", "integer_order_max_abs", max(exact, applied), 0.0))

    a = ctx.order.alpha
    tau, xi2 = frequency_mesh(grid)
    d = np.broadcast_to(xi2 - tau**2, grid.shape)
    off_cone = np.abs(d) > 1e-9 * float(np.max(np.abs(d)))
    product = sigma_array(a, tau, xi2) * sigma_array(SEMIGROUP_STEP, tau, xi2)
    combined = np.broadcast_to(sigma_array(a + SEMIGROUP_STEP, tau, xi2), grid.shape)
    product = np.broadcast_to(product, grid.shape)
    semigroup = float(np.max(np.abs(product - combined)[off_cone] / np.abs(combined)[off_cone]))
    records.append(CheckRecord("symbol", "spectral", "semigroup_rel", semigroup, tol))

    xi2_pos = np.asarray(xi2).ravel()
    xi2_pos = xi2_pos[xi2_pos > 0]
    rest = float(np.max(np.abs(sigma_array(a, np.zeros_like(xi2_pos), xi2_pos) - xi2_pos**a) / xi2_pos**a))
    records.append(CheckRecord("symbol", "spectral", "zero_tau_rel", rest, tol))

    index = tuple(min(k, count // 2 - 1) for k, count in zip((3, 5, 6), grid.shape))
    freq = grid_frequency(grid, index)
    mode = sample_mode(grid, freq[0], freq[1:])
    out = apply_box_alpha_spectral_complex(mode, grid, ctx.order, workers=ctx.workers)
    expected = sigma(ctx.order, freq[0], math.hypot(*freq[1:])) * mode
    records.append(
        CheckRecord("symbol", "spectral", "diagonal_action_rel", relative_error(out, expected), tol)
    )
    return records


def check_integral(ctx: ValidationContext) -> list[CheckRecord]:
    cfg = ctx.config
    scheme = QScheme.build(ctx.order, cfg.scheme.q, cfg.scheme.l)
    result = box_alpha_integral(
        ctx.datum, ctx.order, scheme, cfg.quadrature, ctx.probes, workers=ctx.workers
    )
    error = relative_error(result.values, ctx.reference_at_probes())
    detail = {"q": scheme.q, "l": scheme.l, "indicator": result.indicator, "probes": len(ctx.probes)}
    other = QScheme.build(ctx.order, 2.0 if scheme.q == 3.0 else 3.0, cfg.scheme.l)
    second = box_alpha_integral(
        ctx.datum, ctx.order, other, cfg.quadrature, ctx.probes, workers=ctx.workers
    )
    spread = relative_error(second.values, result.values)
    return [
        CheckRecord("integral", "integral-vs-spectral", "rel_l2", error, cfg.tolerances.integral, detail=detail),
        CheckRecord(
            "integral",
            "q-independence",
            "rel_l2",
            spread,
            cfg.tolerances.q_independence,
            detail={"q": [scheme.q, other.q], "l": [scheme.l, other.l]},
        ),
    ]


def check_kernel2(ctx: ValidationContext) -> list[CheckRecord]:
    if ctx.grid.n != 2 or not ctx.order.alpha < 1.0:
        _logger.warning("kernel2 check skipped: needs n = 2 and alpha < 1")
        return []
    cfg = ctx.config
    result = box_alpha_kernel2(ctx.datum, ctx.order, cfg.quadrature, ctx.probes, workers=ctx.workers)
    error = relative_error(result.values, ctx.reference_at_probes())
    detail = {"indicator": result.indicator, "probes": len(ctx.probes)}
    return [CheckRecord("kernel2", "kernel2-vs-spectral", "rel_l2", error, cfg.tolerances.kernel2, detail=detail)]


def check_riesz(ctx: ValidationContext) -> list[CheckRecord]:
    cfg = ctx.config
    alpha = ctx.grid.n / 2.0 - 0.4
    boxed = wave_apply(ctx.datum, workers=ctx.workers)
    lifted = riesz_potential_at(boxed, alpha + 1.0, ctx.probes, cfg.quadrature, workers=ctx.workers)
    direct = riesz_potential_at(ctx.datum, alpha, ctx.probes, cfg.quadrature, workers=ctx.workers)
    error = relative_error(lifted.values, direct.values)
    detail = {"alpha": alpha, "indicator": max(lifted.indicator, direct.indicator)}
    return [CheckRecord("riesz", "riesz", "rel_l2", error, cfg.tolerances.riesz, detail=detail)]


def check_dtn(ctx: ValidationContext) -> list[CheckRecord]:
    cfg = ctx.config
    errors = [
        relative_error(
            dtn_spacetime(ctx.datum, ctx.order, eps, workers=ctx.workers).values, ctx.reference.values
        )
        for eps in cfg.eps.sequence
    ]
    detail = {"eps": list(cfg.eps.sequence), "errors": errors}
    ratios = [fine / coarse for coarse, fine in zip(errors, errors[1:]) if coarse > 0]
    worst = max(ratios, default=0.0)
    monotone = all(fine < coarse for coarse, fine in zip(errors, errors[1:]))
    return [
        CheckRecord("dtn", "closed-form-vs-spectral", "rel_l2", errors[-1], cfg.tolerances.dtn, detail=detail),
        CheckRecord("dtn", "closed-form-vs-spectral", "monotone_ratio", worst, 1.0, monotone, detail=detail),
    ]


def check_neumann(ctx: ValidationContext) -> list[CheckRecord]:
    order = FractionalOrder(ctx.order.alpha)
    rng = np.random.default_rng(ctx.config.seed)
    worst = 0.0
    indicator = 0.0
    for _ in range(NEUMANN_MODES):
        s = complex(rng.uniform(0.05, 1.0), rng.uniform(-5.0, 5.0))
        xi = float(rng.uniform(0.0, 5.0))
        datum = complex(rng.normal(), rng.normal())
        estimate = neumann_extract_detailed(ExtensionProfile.build(order, s, xi, datum))
        expected = dtn_multiplier(order, s, xi) * datum
        worst = max(worst, abs(estimate.value - expected) / abs(expected))
        indicator = max(indicator, estimate.indicator)
    detail = {"modes": NEUMANN_MODES, "seed": ctx.config.seed, "indicator": indicator}
    return [CheckRecord("neumann", "extension", "max_rel", worst, ctx.config.tolerances.neumann, detail=detail)]


def check_time_domain(ctx: ValidationContext) -> list[CheckRecord]:
    if not 0.0 < ctx.order.alpha < 1.0:
        _logger.warning("time-domain check skipped: needs 0 < alpha < 1")
        return []
    cfg = ctx.config
    solver = cfg.solver
    sgrid = SolverGrid.build(ctx.grid, ctx.order, solver.dy, solver.y_max)
    value = dtn_time_domain(ctx.datum, ctx.order, sgrid, cells=solver.cells, workers=ctx.workers)
    error = relative_error(value.values, ctx.reference.values)
    detail = {"dy": solver.dy, "y_max": sgrid.y_max, "substeps": sgrid.substeps}

    closed = SolverGrid.build(ctx.grid, ctx.order, solver.dy, solver.y_max, sponge=False)
    x = np.meshgrid(*(ctx.grid.space_axis(a) for a in range(len(ctx.grid.nx))), indexing="ij")
    r2 = sum((c[..., None] ** 2 for c in x), start=np.zeros((1,) * (len(x) + 1)))
    y = closed.y - 0.5 * closed.y_max
    initial = np.exp(-0.5 * (r2 + y**2))
    drift = free_evolution(closed, initial, DRIFT_STEPS, workers=ctx.workers).drift
    tol = cfg.tolerances
    return [
        CheckRecord("time-domain", "time-domain-vs-spectral", "rel_l2", error, tol.time_domain, detail=detail),
        CheckRecord(
            "time-domain", "time-domain", "energy_drift", drift, tol.drift, detail={"steps": DRIFT_STEPS}
        ),
    ]


def check_energy(ctx: ValidationContext) -> list[CheckRecord]:
    if not 0.0 < ctx.order.alpha < 1.0:
        _logger.warning("energy check skipped: needs 0 < alpha < 1")
        return []
    cfg = ctx.config
    tol = cfg.tolerances
    first = energy_check(ctx.datum, ctx.order, cfg.eps.energy_sequence, workers=ctx.workers)
    center = cfg.datum.resolved_center(ctx.grid)
    moved = (center[0] + 0.05 * ctx.grid.window, *center[1:])
    other_datum = replace(cfg.datum, center=moved, width=1.25 * cfg.datum.width).build(ctx.grid)
    second = energy_check(other_datum, ctx.order, cfg.eps.energy_sequence, workers=ctx.workers)
    predicted = -1.0 / ctx.order.c_alpha
    return [
        CheckRecord(
            "energy", "extension-vs-symbol", "ratio_vs_constant",
            abs(first.ratio - predicted) / abs(predicted), tol.energy, detail=first.to_dict(),
        ),
        CheckRecord(
            "energy", "extension-vs-symbol", "ratio_spread",
            abs(first.ratio - second.ratio) / abs(first.ratio), tol.energy,
            detail={"first": first.ratio, "second": second.ratio},
        ),
        CheckRecord("energy", "symbol", "rhs_imag", max(first.rhs_imag, second.rhs_imag), tol.hermitian),
    ]


def check_geometry(ctx: ValidationContext) -> list[CheckRecord]:
    tol = ctx.config.tolerances
    alpha = ctx.order.alpha
    records: list[CheckRecord] = []
    if len(ctx.grid.nx) == 1:
        circle = product_dtn_apply(ctx.datum, ctx.order, workers=ctx.workers)
        records.append(
            CheckRecord(
                "geometry", "circle-vs-spectral", "rel_l2",
                relative_error(circle.values, ctx.reference.values), tol.geometry,
            )
        )
    if alpha == math.floor(alpha):
        _logger.warning("global-AdS checks skipped for integer alpha")
        return records

    s = 0.1 + 2.0j
    worst = 0.0
    for lam in (1.0, 2.0):
        mode = GlobalAdsMode(ADS_DIMENSION, alpha, lam)
        for r in (0.5, 1.0, 2.0, 5.0):
            residual, phi = radial_ode_residual(mode, s, r)
            worst = max(worst, abs(residual) / abs(phi))
    records.append(CheckRecord("geometry", "global-ads", "ode_residual_rel", worst, tol.ode))

    mode = GlobalAdsMode(ADS_DIMENSION, alpha, 1.0)
    s = 0.5 + 1.0j
    limit = neumann_limit_ladder(mode, s)
    analytic = global_ads_multiplier(mode, s)
    records.append(
        CheckRecord(
            "geometry", "global-ads", "ladder_rel",
            abs(limit.multiplier - analytic) / abs(analytic), tol.ladder,
            detail={"indicator": limit.indicator},
        )
    )

    series = principal_symbol_ratio(mode, [8.0 * 2.0**k for k in range(5)])
    records.append(
        CheckRecord(
            "geometry", "global-ads-vs-flat", "ratio_flatness", series.flatness, tol.flatness,
            detail={"ratio": [[z.real, z.imag] for z in series.ratio]},
        )
    )
    return records


def check_golden(ctx: ValidationContext) -> list[CheckRecord]:
    if ctx.config.golden is None:
        raise ConfigError("golden", "the golden check needs a checksum file path")
    store = GoldenStore.load(Path(ctx.config.golden))
    key = f"spectral-alpha-{ctx.order.alpha:g}"
    if ctx.bless:
        checksum = store.bless(key, ctx.reference.values)
        store.save()
        _logger.info("blessed %s in %s", key, store.path)
        blessed = {"sha256": checksum, "blessed": True}
        return [CheckRecord("golden", "spectral", "checksum_mismatch", 0.0, 0.0, detail=blessed)]
    current, stored = store.compare(key, ctx.reference.values)
    detail = {"sha256": current, "stored": stored}
    if stored is None:
        detail["hint"] = "no stored checksum; rerun with --bless"
    mismatch = 0.0 if current == stored else 1.0
    return [CheckRecord("golden", "spectral", "checksum_mismatch", mismatch, 0.0, detail=detail)]


#: Check name -> (routes it exercises, implementation).
CHECKS: dict[str, tuple[frozenset[str], CheckFn]] = {
    "specfun": (frozenset(), check_specfun),
    "symbol": (frozenset({"spectral"}), check_symbol),
    "integral": (frozenset({"spectral", "integral"}), check_integral),
    "kernel2": (frozenset({"spectral", "integral"}), check_kernel2),
    "riesz": (frozenset({"integral"}), check_riesz),
    "dtn": (frozenset({"spectral", "extension"}), check_dtn),
    "neumann": (frozenset({"extension"}), check_neumann),
    "time-domain": (frozenset({"spectral", "extension"}), check_time_domain),
    "energy": (frozenset({"spectral", "extension"}), check_energy),
    "geometry": (frozenset({"spectral", "extension"}), check_geometry),
    "golden": (frozenset({"spectral"}), check_golden),
}


def routes_covered(checks: Sequence[str]) -> set[str]:
    covered: set[str] = set()
    for name in checks:
        covered |= CHECKS[name][0]
    return covered


def run_validation(config: RunConfig, *, bless: bool = False) -> ValidationReport:
    """Run the configured checks and collect their records.

    Raises:
        ConfigError: If the checks exercise fewer than two routes, or a check
            needs configuration that is missing.
    """
    covered = routes_covered(config.checks)
    if len(covered) < 2:
        raise ConfigError("checks", f"validation needs at least two routes, got {sorted(covered)}")
    ctx = ValidationContext.from_config(config, bless)
    report = ValidationReport(config=config.to_dict())
    for name in config.checks:
        _logger.info("running check %s (alpha=%g)", name, config.alpha)
        start = time.perf_counter()
        try:
            records = CHECKS[name][1](ctx)
        except _SOFT_ERRORS as e:
            records = [CheckRecord(name, "error", type(e).__name__, math.inf, 0.0, False, detail={"error": str(e)})]
        elapsed = time.perf_counter() - start
        for record in records:
            record.wall_time = elapsed
        report.add_records(records)
    return report
