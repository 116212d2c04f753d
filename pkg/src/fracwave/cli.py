"""Command-line interface for fracwave.

Subcommands:
    apply             Apply the fractional wave operator through one route
    dtn               Dirichlet-to-Neumann map (closed form or time domain)
    extend            Closed-form extension profile and Neumann value of one mode
    energy            Extension energy against the symbol pairing
    geometry          Product-space and global-AdS multipliers
    validate          Run the cross-route validation suite
    report            Merge validation reports
    specfun-selftest  Special-function identity checks

Exit codes: 0 on success, 1 on usage or input errors, 2 when a validation
check fails.

Example::

    fracwave apply --route spectral --alpha 0.4 --in bump.fwf --out out.fwf
    fracwave validate --config run.json --report reports/run.json
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn, TextIO

import numpy as np

from .config import RunConfig, quadrature_from_dict, quadrature_to_dict
from .core import FieldSampler, FractionalOrder, ScalarField, as_order, check_padding, read_field, write_field
from .core.transforms import HERMITIAN_TOL
from .errors import ConfigError, FieldFormatError, FracwaveError
from .extension import (
    ExtensionProfile,
    SolverGrid,
    dtn_multiplier,
    dtn_spacetime,
    dtn_spacetime_extrapolated,
    dtn_time_domain,
    energy_check,
    neumann_extract_detailed,
)
from .geometry import EigenBasis, GlobalAdsMode, global_ads_multiplier, product_dtn_apply, product_dtn_coeffs
from .hypersingular import (
    QScheme,
    QuadratureResult,
    QuadratureSpec,
    box_alpha_integral,
    box_alpha_kernel2,
    riesz_potential,
    riesz_potential_at,
)
from .report import CheckRecord, ValidationReport, merge_reports, payload_checksum, rollup
from .specfun import selftest
from .symbol import apply_box_alpha_spectral_detailed, sigma_eps
from .validate import run_validation

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2

DEFAULT_TAU_LADDER = (8.0, 16.0, 32.0, 64.0, 128.0)


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage errors with exit code 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write_rows(header: Sequence[str], rows: Sequence[Sequence[Any]], out: Path | None) -> None:
    def emit(fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])

    if out is None:
        emit(sys.stdout)
    else:
        with open(out, "w", newline="") as fh:
            emit(fh)


def _read_table(path: Path) -> tuple[list[str], np.ndarray]:
    """Numeric CSV with a header row."""
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise FieldFormatError(str(path), "file not found") from None
    rows = [row for row in csv.reader(text.splitlines()) if row]
    if len(rows) < 2:
        raise FieldFormatError(str(path), "expected a header and at least one row")
    header = [h.strip() for h in rows[0]]
    try:
        values = np.array([[float(v) for v in row] for row in rows[1:]], dtype=np.float64)
    except ValueError as e:
        raise FieldFormatError(str(path), str(e)) from None
    if values.ndim != 2 or values.shape[1] != len(header):
        raise FieldFormatError(str(path), "ragged rows")
    return header, values


def _read_datum(path: Path, axes: tuple[int, ...] | None = None) -> ScalarField:
    """Field file whose grid periods are at least twice its support."""
    f = read_field(path)
    check_padding(f, axes=axes)
    return f


def _quadrature(args: argparse.Namespace) -> QuadratureSpec:
    if args.config is None:
        return QuadratureSpec()
    try:
        data = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(str(args.config), f"cannot load: {e}") from e
    return quadrature_from_dict(data.get("quadrature", {}) if isinstance(data, dict) else data)  # pyright: ignore[reportUnknownMemberType, reportUnknownArgumentType]


def _probe_report(
    route: str, result: QuadratureResult, points: np.ndarray, quad: QuadratureSpec, report: Path | None
) -> int:
    records = [
        CheckRecord(
            "apply",
            route,
            "indicator",
            result.indicator,
            quad.indicator_tol,
            result.converged,
            detail={"point": [float(c) for c in p], "value": float(v)},
        )
        for p, v in zip(points, result.values)
    ]
    if report is not None:
        collected = ValidationReport(config={"route": route, "quadrature": quadrature_to_dict(quad)})
        collected.add_records(records)
        collected.write(report)
    return EXIT_OK if result.converged else EXIT_FAILED


def _spectral_report(
    out: ScalarField, residue: float, checksum: str, points_path: Path | None, report: Path | None
) -> int:
    passed = residue <= HERMITIAN_TOL
    if points_path is None:
        detail: dict[str, Any] = {"sha256": checksum}
        records = [CheckRecord("apply", "spectral", "hermitian_residue", residue, HERMITIAN_TOL, passed, detail=detail)]
    else:
        header, points = _read_table(points_path)
        if len(header) != out.grid.n:
            raise FieldFormatError(str(points_path), f"expected {out.grid.n} coordinate columns")
        values = FieldSampler(out)(points.T)
        records = [
            CheckRecord(
                "apply",
                "spectral",
                "hermitian_residue",
                residue,
                HERMITIAN_TOL,
                passed,
                detail={"point": [float(c) for c in p], "value": float(v)},
            )
            for p, v in zip(points, values)
        ]
    if report is not None:
        collected = ValidationReport(config={"route": "spectral", "sha256": checksum})
        collected.add_records(records)
        collected.write(report)
    return EXIT_OK if passed else EXIT_FAILED


def cmd_apply(args: argparse.Namespace) -> int:
    f = _read_datum(args.input)
    order = as_order(args.alpha, f.grid.n)
    _logger.info("apply: route=%s alpha=%g on %s", args.route, order.alpha, f.grid.shape)
    if args.route == "spectral":
        if args.out is None:
            raise ConfigError("--out", "the spectral route writes a field file")
        out, residue = apply_box_alpha_spectral_detailed(f, order)
        write_field(out, args.out)
        checksum = payload_checksum(out.values)
        print(f"sha256 {checksum}")
        return _spectral_report(out, residue, checksum, args.points, args.report)

    quad = _quadrature(args)
    if args.route == "riesz" and args.points is None:
        if args.out is None:
            raise ConfigError("--out", "a full Riesz potential needs --out")
        write_field(riesz_potential(f, order.alpha, quad), args.out)
        return EXIT_OK
    if args.points is None:
        raise ConfigError("--points", f"the {args.route} route evaluates at probe points")
    header, points = _read_table(args.points)
    if len(header) != f.grid.n:
        raise FieldFormatError(str(args.points), f"expected {f.grid.n} coordinate columns")
    probes = [tuple(float(c) for c in p) for p in points]
    if args.route == "integral":
        scheme = QScheme.build(order, args.q, args.l)
        result = box_alpha_integral(f, order, scheme, quad, probes)
    elif args.route == "kernel2":
        result = box_alpha_kernel2(f, order, quad, probes)
    else:
        result = riesz_potential_at(f, order.alpha, probes, quad)
    _write_rows([*header, "value"], [[*p, v] for p, v in zip(probes, result.values)], args.out)
    return _probe_report(args.route, result, points, quad, args.report)


def cmd_dtn(args: argparse.Namespace) -> int:
    f = _read_datum(args.input)
    _logger.info("dtn: method=%s alpha=%g eps=%s", args.method, args.alpha, args.eps)
    if args.method == "closed-form":
        if args.eps_sequence:
            out = dtn_spacetime_extrapolated(f, args.alpha, args.eps_sequence)
        else:
            out = dtn_spacetime(f, args.alpha, args.eps)
    else:
        sgrid = SolverGrid.build(f.grid, args.alpha, args.dy, args.y_max)
        out = dtn_time_domain(f, args.alpha, sgrid, cells=args.cells, strict=args.strict)
    write_field(out, args.out)
    return EXIT_OK


def cmd_extend(args: argparse.Namespace) -> int:
    order = FractionalOrder(args.alpha)
    s = complex(args.eps, args.tau)
    value = complex(args.value)
    profile = ExtensionProfile.build(order, s, args.xi, value, levels=args.levels)
    estimate = neumann_extract_detailed(profile, args.method)
    expected = dtn_multiplier(order, s, args.xi) * value
    rows: list[list[Any]] = []
    for (y, u), (_, g) in zip(profile.y_samples, profile.weighted_samples):
        rows.append(["profile", y, u.real, u.imag])
        rows.append(["weighted", y, g.real, g.imag])
    rows.append(["neumann", "", estimate.value.real, estimate.value.imag])
    rows.append(["multiplier", "", expected.real, expected.imag])
    rows.append(["indicator", "", estimate.indicator, 0.0])
    _write_rows(["quantity", "y", "re", "im"], rows, args.out)
    return EXIT_OK if estimate.converged else EXIT_FAILED


def cmd_energy(args: argparse.Namespace) -> int:
    f = _read_datum(args.input)
    result = energy_check(f, args.alpha, args.eps_sequence)
    _write_rows(
        ["lhs", "rhs", "ratio", "constant"],
        [[result.lhs, result.rhs, result.ratio, result.constant]],
        args.out,
    )
    return EXIT_OK


def cmd_geometry_product(args: argparse.Namespace) -> int:
    if (args.input is None) == (args.modes is None):
        raise ConfigError("--in/--modes", "give exactly one of a field file or a modes table")
    if args.input is not None:
        if args.manifold != "circle":
            raise ConfigError("--manifold", "field input is only supported on the circle")
        if args.out is None:
            raise ConfigError("--out", "field input writes a field file")
        write_field(product_dtn_apply(_read_datum(args.input, axes=(0,)), args.alpha, args.eps), args.out)
        return EXIT_OK
    header, table = _read_table(args.modes)
    if header[0] != "t" or table.shape[0] < 2:
        raise FieldFormatError(str(args.modes), "first column must be t with at least two rows")
    count = table.shape[1] - 1
    if args.manifold == "circle":
        if count % 2 != 1:
            raise FieldFormatError(str(args.modes), "circle modes come as 0, 1, -1, ... (odd count)")
        basis = EigenBasis.circle(count // 2)
    else:
        basis = EigenBasis.sphere(args.n, count - 1)
    dt = float(table[1, 0] - table[0, 0])
    mapped = product_dtn_coeffs(table[:, 1:], basis.eigenvalues, args.alpha, dt, args.eps)
    _write_rows(header, np.column_stack([table[:, 0], mapped]).tolist(), args.out)
    return EXIT_OK


def cmd_geometry_global_ads(args: argparse.Namespace) -> int:
    mode = GlobalAdsMode(args.n, args.alpha, args.lam)
    rows: list[list[Any]] = []
    for tau in args.tau_ladder:
        s = complex(args.eps, tau)
        multiplier = global_ads_multiplier(mode, s, args.normalization)
        flat = sigma_eps(FractionalOrder(args.alpha, args.n), tau, args.lam, args.eps)
        ratio = multiplier / flat
        rows.append([s.real, s.imag, multiplier.real, multiplier.imag, flat.real, flat.imag, ratio.real, ratio.imag])
    header = ["s_re", "s_im", "multiplier_re", "multiplier_im", "sigma_re", "sigma_im", "ratio_re", "ratio_im"]
    _write_rows(header, rows, args.out)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    config = RunConfig.from_json_file(args.config)
    report = run_validation(config, bless=args.bless)
    report_path: Path = args.report
    report_path.parent.mkdir(parents=True, exist_ok=True)
    json_path, csv_path = report.write(report_path)
    config_path = report_path.with_suffix(".config.json")
    config_path.write_text(json.dumps(config.to_dict(), indent=2) + "\n")
    summary = report.summary()
    print(f"{summary['passed']}/{summary['total']} checks passed")
    print(f"Report: {json_path} ({csv_path.name}); config: {config_path.name}")
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_report(args: argparse.Namespace) -> int:
    merged = merge_reports(args.reports)
    rows = [[r["name"], r["total"], r["passed"], r["worst_ratio"]] for r in rollup(merged)]
    _write_rows(["name", "total", "passed", "worst_ratio"], rows, None)
    if args.out is not None:
        merged.write(args.out)
    return EXIT_OK if merged.ok else EXIT_FAILED


def cmd_specfun_selftest(args: argparse.Namespace) -> int:
    checks = selftest()
    _write_rows(
        ["identity", "error", "tolerance", "passed"],
        [[c.name, c.error, c.tolerance, "true" if c.passed else "false"] for c in checks],
        None,
    )
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracwave", description="Fractional powers of the wave operator")
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    apply = commands.add_parser("apply", help="Apply box^alpha through one route")
    apply.add_argument("--route", choices=["spectral", "integral", "kernel2", "riesz"], default="spectral")
    apply.add_argument("--alpha", type=float, required=True)
    apply.add_argument("--in", dest="input", type=Path, required=True, help="Field file (.fwf or .csv)")
    apply.add_argument("--out", type=Path, default=None, help="Output file (default: stdout for probe tables)")
    apply.add_argument("--points", type=Path, default=None, help="Probe points CSV (t,x1[,x2])")
    apply.add_argument("--q", type=float, default=2.0, help="Base of the q-scheme")
    apply.add_argument("--l", type=int, default=None, help="Order of the q-difference in |y|")
    apply.add_argument("--config", type=Path, default=None, help="JSON file with a quadrature section")
    apply.add_argument("--report", type=Path, default=None, help="Write a per-probe report")
    apply.set_defaults(handler=cmd_apply)

    dtn = commands.add_parser("dtn", help="Dirichlet-to-Neumann map of a boundary datum")
    dtn.add_argument("--method", choices=["closed-form", "time-domain"], default="closed-form")
    dtn.add_argument("--alpha", type=float, required=True)
    dtn.add_argument("--eps", type=float, default=None, help="Bromwich abscissa (default 4/window)")
    dtn.add_argument("--eps-sequence", type=float, nargs="+", default=None, help="Halving eps sequence to extrapolate")
    dtn.add_argument("--dy", type=float, default=0.05)
    dtn.add_argument("--y-max", type=float, default=None)
    dtn.add_argument("--cells", type=int, default=8)
    dtn.add_argument("--strict", action="store_true", help="Fail on ill-conditioned boundary fits")
    dtn.add_argument("--in", dest="input", type=Path, required=True)
    dtn.add_argument("--out", type=Path, required=True)
    dtn.set_defaults(handler=cmd_dtn)

    extend = commands.add_parser("extend", help="Extension profile of one Laplace-Fourier mode")
    extend.add_argument("--alpha", type=float, required=True)
    extend.add_argument("--eps", type=float, default=0.1)
    extend.add_argument("--tau", type=float, default=1.0)
    extend.add_argument("--xi", type=float, default=0.5)
    extend.add_argument("--value", type=complex, default=1.0 + 0j, help="Boundary value F")
    extend.add_argument("--levels", type=int, default=8)
    extend.add_argument("--method", choices=["difference", "weighted"], default="difference")
    extend.add_argument("--out", type=Path, default=None)
    extend.set_defaults(handler=cmd_extend)

    energy = commands.add_parser("energy", help="Energy identity for a datum")
    energy.add_argument("--alpha", type=float, required=True)
    energy.add_argument("--in", dest="input", type=Path, required=True)
    energy.add_argument("--eps-sequence", type=float, nargs="+", default=[0.01, 0.005, 0.0025])
    energy.add_argument("--out", type=Path, default=None)
    energy.set_defaults(handler=cmd_energy)

    geometry = commands.add_parser("geometry", help="Product-space and global-AdS multipliers")
    settings = geometry.add_subparsers(dest="setting", required=True)
    product = settings.add_parser("product", help="DtN map on R x M mode by mode")
    product.add_argument("--manifold", choices=["circle", "sphere"], default="circle")
    product.add_argument("--alpha", type=float, required=True)
    product.add_argument("--n", type=int, default=3, help="Dimension parameter of the sphere ladder")
    product.add_argument("--eps", type=float, default=None)
    product.add_argument("--in", dest="input", type=Path, default=None, help="Field file on R x S^1")
    product.add_argument("--modes", type=Path, default=None, help="Mode table CSV (t, m0, m1, ...)")
    product.add_argument("--out", type=Path, default=None)
    product.set_defaults(handler=cmd_geometry_product)
    ads = settings.add_parser("global-ads", help="Global-AdS multiplier along a tau ladder")
    ads.add_argument("--n", type=int, default=3)
    ads.add_argument("--alpha", type=float, required=True)
    ads.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ads.add_argument("--eps", type=float, default=0.01)
    ads.add_argument("--tau-ladder", type=float, nargs="+", default=list(DEFAULT_TAU_LADDER))
    ads.add_argument("--normalization", choices=["derived", "printed"], default="derived")
    ads.add_argument("--out", type=Path, default=None)
    ads.set_defaults(handler=cmd_geometry_global_ads)

    validate = commands.add_parser("validate", help="Run the validation suite")
    validate.add_argument("--config", type=Path, required=True)
    validate.add_argument("--report", type=Path, default=Path("report.json"))
    validate.add_argument("--bless", action="store_true", help="Rewrite golden checksums")
    validate.set_defaults(handler=cmd_validate)

    report = commands.add_parser("report", help="Merge validation reports")
    report.add_argument("reports", type=Path, nargs="*")
    report.add_argument("--out", type=Path, default=None, help="Write the merged JSON and CSV")
    report.set_defaults(handler=cmd_report)

    selftest_cmd = commands.add_parser("specfun-selftest", help="Special-function identity checks")
    selftest_cmd.set_defaults(handler=cmd_specfun_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point for the CLI.

    Returns:
        Exit code (0 success, 1 usage or input error, 2 failed checks).
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return int(args.handler(args))
    except (FracwaveError, ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
