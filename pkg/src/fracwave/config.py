"""Run configuration for validation runs and the command line.

A run is described by a JSON object whose sections map onto small frozen
dataclasses. Every section rejects unknown keys, so a typo never silently
falls back to a default.

Example::

    >>> from fracwave.config import RunConfig
    >>> cfg = RunConfig.from_dict({"alpha": 0.3, "grid": {"nt": 32, "nx": [32]}})
    >>> cfg.grid.nt, cfg.alpha
    (32, 0.3)
    >>> RunConfig.from_dict({"alpah": 0.3})
    Traceback (most recent call last):
    ...
    fracwave.errors.ConfigError: Config error at 'alpah': unknown key
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Literal

from .core import ScalarField, SpacetimeGrid, check_padding, gaussian_bump, null_bump
from .errors import ConfigError, FracwaveError, GridError
from .hypersingular import QuadratureSpec

#: Checks run by ``fracwave validate`` when the config does not list any.
DEFAULT_CHECKS = ("specfun", "symbol", "integral", "kernel2", "dtn", "neumann", "energy", "geometry")

#: Every check name the validation suite knows.
KNOWN_CHECKS = (*DEFAULT_CHECKS, "riesz", "time-domain", "golden")


def _section(data: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(data, Mapping):
        raise ConfigError(path or "<root>", f"expected an object, got {type(data).__name__}")
    return data  # pyright: ignore[reportUnknownVariableType]


def _reject_unknown(data: Mapping[str, Any], cls: type, path: str) -> None:
    allowed = {f.name for f in fields(cls)}
    for key in data:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}" if path else key, "unknown key")


def _float(value: Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    if not math.isfinite(float(value)):
        raise ConfigError(key, f"must be finite, got {value!r}")
    return float(value)


def _int(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(key, f"expected an integer, got {value!r}")
    return value


def _floats(value: Any, key: str) -> tuple[float, ...]:
    if not isinstance(value, list):
        raise ConfigError(key, f"expected a list of numbers, got {value!r}")
    return tuple(_float(v, f"{key}[{i}]") for i, v in enumerate(value))  # pyright: ignore[reportUnknownArgumentType, reportUnknownVariableType]


def _ints(value: Any, key: str) -> tuple[int, ...]:
    if not isinstance(value, list):
        raise ConfigError(key, f"expected a list of integers, got {value!r}")
    return tuple(_int(v, f"{key}[{i}]") for i, v in enumerate(value))  # pyright: ignore[reportUnknownArgumentType, reportUnknownVariableType]


@dataclass(frozen=True)
class GridSpec:
    """Spacetime grid of the run."""

    nt: int = 64
    """Time samples."""

    nx: tuple[int, ...] = (64,)
    """Samples per spatial axis (one or two axes)."""

    dt: float = 0.5
    """Time step."""

    dx: tuple[float, ...] = (0.5,)
    """Spatial steps, one per axis."""

    t0: float = 0.0
    """First sample time."""

    @classmethod
    def from_dict(cls, data: Any, path: str = "grid") -> GridSpec:
        section = _section(data, path)
        _reject_unknown(section, cls, path)
        spec = cls()
        updates: dict[str, Any] = {}
        if "nt" in section:
            updates["nt"] = _int(section["nt"], f"{path}.nt")
        if "nx" in section:
            updates["nx"] = _ints(section["nx"], f"{path}.nx")
        if "dt" in section:
            updates["dt"] = _float(section["dt"], f"{path}.dt")
        if "dx" in section:
            updates["dx"] = _floats(section["dx"], f"{path}.dx")
        elif "nx" in section:
            updates["dx"] = spec.dx * len(updates["nx"]) if len(spec.dx) == 1 else spec.dx
        if "t0" in section:
            updates["t0"] = _float(section["t0"], f"{path}.t0")
        return replace(spec, **updates)

    def build(self) -> SpacetimeGrid:
        """Construct the grid, reporting grid errors as config errors."""
        try:
            return SpacetimeGrid(self.nt, self.nx, self.dt, self.dx, self.t0)
        except FracwaveError as e:
            raise ConfigError("grid", str(e)) from e

    def to_dict(self) -> dict[str, Any]:
        return {"nt": self.nt, "nx": list(self.nx), "dt": self.dt, "dx": list(self.dx), "t0": self.t0}


@dataclass(frozen=True)
class DatumSpec:
    """Test datum placed on the grid."""

    kind: Literal["null", "gaussian"] = "null"
    """``null`` applies the wave operator ``order`` times to a Gaussian."""

    center: tuple[float, ...] | None = None
    """Bump centre ``(t, x1[, x2])``; defaults to 3/8 of the window at x = 0."""

    width: float = 1.5
    """Gaussian width."""

    order: int = 2
    """Number of wave-operator applications for ``null`` data."""

    @classmethod
    def from_dict(cls, data: Any, path: str = "datum") -> DatumSpec:
        section = _section(data, path)
        _reject_unknown(section, cls, path)
        updates: dict[str, Any] = {}
        if "kind" in section:
            if section["kind"] not in ("null", "gaussian"):
                raise ConfigError(f"{path}.kind", f"expected 'null' or 'gaussian', got {section['kind']!r}")
            updates["kind"] = section["kind"]
        if "center" in section:
            updates["center"] = None if section["center"] is None else _floats(section["center"], f"{path}.center")
        if "width" in section:
            updates["width"] = _float(section["width"], f"{path}.width")
            if updates["width"] <= 0:
                raise ConfigError(f"{path}.width", "must be positive")
        if "order" in section:
            updates["order"] = _int(section["order"], f"{path}.order")
            if updates["order"] < 0:
                raise ConfigError(f"{path}.order", "must be non-negative")
        return replace(cls(), **updates)

    def resolved_center(self, grid: SpacetimeGrid) -> tuple[float, ...]:
        if self.center is not None:
            return self.center
        return (grid.t0 + 0.375 * grid.window, *([0.0] * len(grid.nx)))

    def build(self, grid: SpacetimeGrid) -> ScalarField:
        """Sample the datum on ``grid``.

        Raises:
            ConfigError: If the centre has the wrong dimension or the grid
                periods are shorter than twice the datum support.
        """
        center = self.resolved_center(grid)
        if len(center) != grid.n:
            raise ConfigError("datum.center", f"needs {grid.n} coordinates, got {len(center)}")
        if self.kind == "gaussian":
            datum = gaussian_bump(grid, center, self.width)
        else:
            datum = null_bump(grid, center, self.width, self.order)
        try:
            check_padding(datum)
        except GridError as e:
            raise ConfigError("datum.width", e.reason) from e
        return datum

    def to_dict(self, grid: SpacetimeGrid | None = None) -> dict[str, Any]:
        center = self.center if grid is None else self.resolved_center(grid)
        return {
            "kind": self.kind,
            "center": None if center is None else list(center),
            "width": self.width,
            "order": self.order,
        }


@dataclass(frozen=True)
class SchemeSpec:
    """q-difference scheme of the integral route."""

    q: float = 2.0
    """Base of the geometric shifts."""

    l: int | None = None  # noqa: E741
    """Order in |y|; None picks ``ceil(2 alpha) + 1``."""

    @classmethod
    def from_dict(cls, data: Any, path: str = "scheme") -> SchemeSpec:
        section = _section(data, path)
        _reject_unknown(section, cls, path)
        updates: dict[str, Any] = {}
        if "q" in section:
            updates["q"] = _float(section["q"], f"{path}.q")
        if "l" in section:
            updates["l"] = None if section["l"] is None else _int(section["l"], f"{path}.l")
        return replace(cls(), **updates)

    def to_dict(self) -> dict[str, Any]:
        return {"q": self.q, "l": self.l}


def quadrature_from_dict(data: Any, path: str = "quadrature") -> QuadratureSpec:
    section = _section(data, path)
    _reject_unknown(section, QuadratureSpec, path)
    updates: dict[str, Any] = {}
    for key in ("tol", "h_u", "h_v", "pad", "indicator_tol"):
        if key in section:
            updates[key] = _float(section[key], f"{path}.{key}")
    for key in ("n_theta", "interp_order", "gj_nodes"):
        if key in section:
            updates[key] = _int(section[key], f"{path}.{key}")
    for key in ("u_bounds", "v_bounds"):
        if key in section and section[key] is not None:
            bounds = _floats(section[key], f"{path}.{key}")
            if len(bounds) != 2:
                raise ConfigError(f"{path}.{key}", "expected two numbers")
            updates[key] = bounds
    try:
        return replace(QuadratureSpec(), **updates)
    except FracwaveError as e:
        raise ConfigError(path, str(e)) from e


def quadrature_to_dict(quad: QuadratureSpec) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for f in fields(quad):
        value = getattr(quad, f.name)
        out[f.name] = list(value) if isinstance(value, tuple) else value
    return out


@dataclass(frozen=True)
class EpsPolicy:
    """Bromwich abscissa policy of the extension route."""

    eps: float | None = None
    """Fixed abscissa; None uses ``4 / window``."""

    sequence: tuple[float, ...] = (0.2, 0.1, 0.05)
    """Halving sequence for convergence studies and extrapolation."""

    energy_sequence: tuple[float, ...] = (0.01, 0.005, 0.0025)
    """Halving sequence for the energy identity."""

    @classmethod
    def from_dict(cls, data: Any, path: str = "eps") -> EpsPolicy:
        section = _section(data, path)
        _reject_unknown(section, cls, path)
        updates: dict[str, Any] = {}
        if "eps" in section:
            updates["eps"] = None if section["eps"] is None else _float(section["eps"], f"{path}.eps")
        for key in ("sequence", "energy_sequence"):
            if key in section:
                values = _floats(section[key], f"{path}.{key}")
                if not values or any(v <= 0 for v in values):
                    raise ConfigError(f"{path}.{key}", "must be a non-empty list of positive numbers")
                updates[key] = values
        return replace(cls(), **updates)

    def to_dict(self) -> dict[str, Any]:
        return {"eps": self.eps, "sequence": list(self.sequence), "energy_sequence": list(self.energy_sequence)}


@dataclass(frozen=True)
class Tolerances:
    """Pass thresholds of the validation checks (relative errors)."""

    integral: float = 1e-3
    """Integral route against the spectral route."""

    q_independence: float = 1e-4
    """Integral route with q = 3 against q = 2."""

    kernel2: float = 1e-3
    """Second-difference kernel against the spectral route."""

    riesz: float = 1e-3
    """Riesz reduction ``I_{alpha+1}(box f) = I_alpha f``."""

    dtn: float = 1e-3
    """Closed-form DtN at the smallest eps against the spectral route."""

    neumann: float = 1e-6
    """Neumann extraction against the multiplier."""

    time_domain: float = 5e-2
    """Time-domain pipeline against the spectral route."""

    energy: float = 1e-2
    """Energy ratio against its predicted constant."""

    geometry: float = 1e-6
    """Circle-mode DtN against the spectral route."""

    ladder: float = 1e-4
    """Numerical radial Neumann limit against the global-AdS multiplier."""

    ode: float = 1e-7
    """Relative residual of the radial equation."""

    flatness: float = 5e-2
    """Drift of the principal-symbol ratio over the last decade."""

    semigroup: float = 1e-12
    """Symbol identities off the light cone."""

    drift: float = 1e-6
    """Homogeneous energy drift of the time-domain solver."""

    hermitian: float = 1e-10
    """Imaginary residues that must vanish."""

    @classmethod
    def from_dict(cls, data: Any, path: str = "tolerances") -> Tolerances:
        section = _section(data, path)
        _reject_unknown(section, cls, path)
        updates = {key: _float(value, f"{path}.{key}") for key, value in section.items()}
        for key, value in updates.items():
            if value <= 0:
                raise ConfigError(f"{path}.{key}", "must be positive")
        return replace(cls(), **updates)

    def to_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class SolverSpec:
    """Time-domain solver settings."""

    dy: float = 0.05
    """Cell width in y."""

    y_max: float | None = None
    """Top of the y range; None uses the window length."""

    cells: int = 8
    """Cells used by the boundary fit."""

    @classmethod
    def from_dict(cls, data: Any, path: str = "solver") -> SolverSpec:
        section = _section(data, path)
        _reject_unknown(section, cls, path)
        updates: dict[str, Any] = {}
        if "dy" in section:
            updates["dy"] = _float(section["dy"], f"{path}.dy")
        if "y_max" in section:
            updates["y_max"] = None if section["y_max"] is None else _float(section["y_max"], f"{path}.y_max")
        if "cells" in section:
            updates["cells"] = _int(section["cells"], f"{path}.cells")
        return replace(cls(), **updates)

    def to_dict(self) -> dict[str, Any]:
        return {"dy": self.dy, "y_max": self.y_max, "cells": self.cells}


@dataclass(frozen=True)
class RunConfig:
    """Complete description of a validation run."""

    alpha: float = 0.4
    """Fractional order."""

    grid: GridSpec = field(default_factory=GridSpec)
    datum: DatumSpec = field(default_factory=DatumSpec)
    scheme: SchemeSpec = field(default_factory=SchemeSpec)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    eps: EpsPolicy = field(default_factory=EpsPolicy)
    tolerances: Tolerances = field(default_factory=Tolerances)
    solver: SolverSpec = field(default_factory=SolverSpec)

    checks: tuple[str, ...] = DEFAULT_CHECKS
    """Checks to run, in order."""

    probes: tuple[tuple[float, ...], ...] = ()
    """Probe points for the integral routes; empty picks points near the datum."""

    workers: int | None = None
    """Worker cap; None defers to FRACWAVE_THREADS or the CPU count."""

    golden: str | None = None
    """Path of the golden checksum file for the ``golden`` check."""

    seed: int = 7
    """Seed of the random modes drawn by the ``neumann`` check."""

    @classmethod
    def from_dict(cls, data: Any) -> RunConfig:
        """Parse a configuration object.

        Raises:
            ConfigError: For unknown keys, wrong types or invalid values.
        """
        section = _section(data, "")
        _reject_unknown(section, cls, "")
        updates: dict[str, Any] = {}
        if "alpha" in section:
            alpha = _float(section["alpha"], "alpha")
            if alpha <= 0:
                raise ConfigError("alpha", "must be positive")
            updates["alpha"] = alpha
        parsers = {
            "grid": GridSpec.from_dict,
            "datum": DatumSpec.from_dict,
            "scheme": SchemeSpec.from_dict,
            "quadrature": quadrature_from_dict,
            "eps": EpsPolicy.from_dict,
            "tolerances": Tolerances.from_dict,
            "solver": SolverSpec.from_dict,
        }
        for key, parse in parsers.items():
            if key in section:
                updates[key] = parse(section[key])
        if "checks" in section:
            checks = section["checks"]
            if not isinstance(checks, list) or not checks:
                raise ConfigError("checks", "expected a non-empty list of check names")
            for name in checks:  # pyright: ignore[reportUnknownVariableType]
                if name not in KNOWN_CHECKS:
                    raise ConfigError("checks", f"unknown check {name!r}")
            updates["checks"] = tuple(checks)  # pyright: ignore[reportUnknownArgumentType]
        if "probes" in section:
            probes = section["probes"]
            if not isinstance(probes, list):
                raise ConfigError("probes", "expected a list of points")
            updates["probes"] = tuple(
                _floats(p, f"probes[{i}]") for i, p in enumerate(probes)  # pyright: ignore[reportUnknownArgumentType, reportUnknownVariableType]
            )
        if "workers" in section and section["workers"] is not None:
            workers = _int(section["workers"], "workers")
            if workers < 1:
                raise ConfigError("workers", "must be a positive integer")
            updates["workers"] = workers
        if "seed" in section:
            updates["seed"] = _int(section["seed"], "seed")
        if "golden" in section:
            golden = section["golden"]
            if golden is not None and not isinstance(golden, str):
                raise ConfigError("golden", "expected a path string")
            updates["golden"] = golden
        return replace(cls(), **updates)

    @classmethod
    def from_json_file(cls, path: Path) -> RunConfig:
        """Load a configuration file.

        Raises:
            ConfigError: If the file is missing, not JSON, or invalid.
        """
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(str(path), f"cannot read: {e.strerror or e}") from e
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(str(path), f"invalid JSON at line {e.lineno}: {e.msg}") from e
        return cls.from_dict(data)

    def to_dict(self) -> dict[str, Any]:
        """Fully resolved configuration (defaults included)."""
        grid = self.grid.build()
        return {
            "alpha": self.alpha,
            "grid": self.grid.to_dict(),
            "datum": self.datum.to_dict(grid),
            "scheme": self.scheme.to_dict(),
            "quadrature": quadrature_to_dict(self.quadrature),
            "eps": self.eps.to_dict(),
            "tolerances": self.tolerances.to_dict(),
            "solver": self.solver.to_dict(),
            "checks": list(self.checks),
            "probes": [list(p) for p in self.probes],
            "workers": self.workers,
            "golden": self.golden,
            "seed": self.seed,
        }
