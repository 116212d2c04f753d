"""Validation report collection, serialization and merging.

A report is a list of check records together with the resolved run
configuration. Reports are written as JSON (schema version 1) and as a CSV
table with one row per check.

Example usage::

    from fracwave.report import CheckRecord, ValidationReport

    with ValidationReport(config=cfg.to_dict()) as report:
        report.add(CheckRecord("integral", "route-b", "rel_l2", 4.1e-4, 1e-3))
        report.write(Path("run.json"))

    for record in report.get_records(passed=False):
        print(record.name)
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ReportError

_logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

CSV_COLUMNS = ("name", "route", "metric", "value", "tolerance", "passed", "wall_time", "detail")

#: Significant digits kept before hashing a payload.
CHECKSUM_DIGITS = 9


@dataclass
class CheckRecord:
    """Outcome of one validation check.

    Attributes:
        name: Check name (e.g. "integral", "dtn").
        route: Route or component exercised.
        metric: What ``value`` measures (e.g. "rel_l2").
        value: Measured value.
        tolerance: Largest passing value.
        passed: Whether ``value <= tolerance``; computed when omitted.
        wall_time: Seconds spent on the check.
        detail: Free-form context (parameters, indicators, error messages).
    """

    name: str
    route: str
    metric: str
    value: float
    tolerance: float
    passed: bool | None = None
    wall_time: float = 0.0
    detail: dict[str, Any] = field(default_factory=lambda: {})

    def __post_init__(self) -> None:
        if self.passed is None:
            self.passed = bool(math.isfinite(self.value) and self.value <= self.tolerance)

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-compatible dictionary."""
        return {
            "name": self.name,
            "route": self.route,
            "metric": self.metric,
            "value": self.value if math.isfinite(self.value) else str(self.value),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "wall_time": self.wall_time,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any], source: str = "<dict>") -> CheckRecord:
        """Create from a dictionary.

        Raises:
            ReportError: If required keys are missing or mistyped.
        """
        try:
            return cls(
                name=str(data["name"]),
                route=str(data["route"]),
                metric=str(data["metric"]),
                value=float(data["value"]),
                tolerance=float(data["tolerance"]),
                passed=bool(data["passed"]),
                wall_time=float(data.get("wall_time", 0.0)),
                detail=dict(data.get("detail", {})),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ReportError(source, f"malformed check record: {e}") from e

    def to_row(self) -> list[str]:
        return [
            self.name,
            self.route,
            self.metric,
            repr(self.value),
            repr(self.tolerance),
            "true" if self.passed else "false",
            f"{self.wall_time:.3f}",
            json.dumps(self.detail, sort_keys=True),
        ]


class ValidationReport:
    """Collects check records for one run.

    Usage::

        report = ValidationReport(config=cfg.to_dict())
        report.add(record)
        report.write(Path("out.json"))      # also writes out.csv
        failed = list(report.get_records(passed=False))
    """

    def __init__(self, config: dict[str, Any] | None = None) -> None:
        self._config = config or {}
        self._records: list[CheckRecord] = []

    def add(self, record: CheckRecord) -> None:
        """Add a record, logging failures at WARNING."""
        self._records.append(record)
        if not record.passed:
            _logger.warning(
                "check %s (%s) failed: %s=%.3e > %.1e",
                record.name,
                record.route,
                record.metric,
                record.value,
                record.tolerance,
            )

    def add_records(self, records: Iterable[CheckRecord]) -> None:
        for record in records:
            self.add(record)

    def get_records(
        self, name: str | None = None, passed: bool | None = None
    ) -> Iterator[CheckRecord]:
        """Records filtered by check name and/or outcome."""
        for record in self._records:
            if name and record.name != name:
                continue
            if passed is not None and record.passed != passed:
                continue
            yield record

    @property
    def records(self) -> list[CheckRecord]:
        return self._records

    @property
    def config(self) -> dict[str, Any]:
        return self._config

    @property
    def ok(self) -> bool:
        """True when every record passed."""
        return all(r.passed for r in self._records)

    def summary(self) -> dict[str, int]:
        passed = sum(1 for r in self._records if r.passed)
        return {"total": len(self._records), "passed": passed, "failed": len(self._records) - passed}

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "config": self._config,
            "checks": [r.to_dict() for r in self._records],
            "summary": self.summary(),
        }

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in self._records:
            writer.writerow(record.to_row())
        return buffer.getvalue()

    def write(self, path: Path) -> tuple[Path, Path]:
        """Write ``path`` (JSON) and the CSV table next to it.

        Returns:
            The JSON and CSV paths.
        """
        path = Path(path)
        path.write_text(json.dumps(self.to_dict(), indent=2) + "\n")
        csv_path = path.with_suffix(".csv")
        csv_path.write_text(self.to_csv())
        return path, csv_path

    @classmethod
    def from_dict(cls, data: Any, source: str = "<dict>") -> ValidationReport:
        """Rebuild a report from its JSON form.

        Raises:
            ReportError: On a schema mismatch or malformed records.
        """
        if not isinstance(data, dict):
            raise ReportError(source, "expected a JSON object")
        schema = data.get("schema")  # pyright: ignore[reportUnknownMemberType, reportUnknownVariableType]
        if schema != SCHEMA_VERSION:
            raise ReportError(source, f"schema {schema!r} is not supported (expected {SCHEMA_VERSION})")
        checks = data.get("checks")  # pyright: ignore[reportUnknownMemberType, reportUnknownVariableType]
        if not isinstance(checks, list):
            raise ReportError(source, "missing 'checks' list")
        report = cls(config=dict(data.get("config") or {}))  # pyright: ignore[reportUnknownArgumentType, reportUnknownMemberType]
        for entry in checks:  # pyright: ignore[reportUnknownVariableType]
            if not isinstance(entry, dict):
                raise ReportError(source, "check entries must be objects")
            report._records.append(CheckRecord.from_dict(entry, source))  # pyright: ignore[reportUnknownArgumentType]
        return report

    @classmethod
    def load(cls, path: Path) -> ValidationReport:
        """Read a JSON report.

        Raises:
            ReportError: If the file is missing, not JSON, or malformed.
        """
        try:
            data = json.loads(Path(path).read_text())
        except OSError as e:
            raise ReportError(str(path), f"cannot read: {e.strerror or e}") from e
        except json.JSONDecodeError as e:
            raise ReportError(str(path), f"invalid JSON: {e.msg}") from e
        return cls.from_dict(data, str(path))

    def __enter__(self) -> ValidationReport:
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        pass

    def __len__(self) -> int:
        return len(self._records)


def merge_reports(paths: Sequence[Path]) -> ValidationReport:
    """Concatenate the records of several reports.

    The merged configuration maps each source path to its configuration.

    Raises:
        ReportError: If no paths are given or any report is invalid.
    """
    if not paths:
        raise ReportError("<none>", "no reports to merge")
    merged = ValidationReport(config={})
    for path in paths:
        report = ValidationReport.load(path)
        merged.config[str(path)] = report.config
        merged.records.extend(report.records)
    return merged


def _tolerance_ratio(record: CheckRecord) -> float:
    if record.tolerance > 0:
        return record.value / record.tolerance
    # Exact checks: zero passes, anything else is unbounded.
    return 0.0 if record.value == 0.0 else math.inf


def rollup(report: ValidationReport) -> list[dict[str, Any]]:
    """Per-check-name totals and worst value relative to tolerance."""
    groups: dict[str, list[CheckRecord]] = {}
    for record in report.records:
        groups.setdefault(record.name, []).append(record)
    rows: list[dict[str, Any]] = []
    for name, records in groups.items():
        worst = max((_tolerance_ratio(r) for r in records), default=0.0)
        rows.append(
            {
                "name": name,
                "total": len(records),
                "passed": sum(1 for r in records if r.passed),
                "worst_ratio": worst,
            }
        )
    return rows


def payload_checksum(values: np.ndarray) -> str:
    """SHA-256 of an array rounded to ``CHECKSUM_DIGITS`` significant digits."""
    array = np.asarray(values, dtype=np.float64)
    scale = float(np.max(np.abs(array))) if array.size else 0.0
    normalized = array / scale if scale > 0 else array
    rounded = np.round(normalized, CHECKSUM_DIGITS) + 0.0
    digest = hashlib.sha256()
    digest.update(repr(array.shape).encode())
    digest.update(np.ascontiguousarray(rounded).tobytes())
    return digest.hexdigest()


@dataclass
class GoldenStore:
    """Golden checksums keyed by payload name, stored as a JSON object."""

    path: Path
    checksums: dict[str, str] = field(default_factory=lambda: {})

    @classmethod
    def load(cls, path: Path) -> GoldenStore:
        """Read the store; a missing file gives an empty store.

        Raises:
            ReportError: If the file is not a JSON object of strings.
        """
        path = Path(path)
        if not path.exists():
            return cls(path)
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise ReportError(str(path), f"invalid golden file: {e.msg}") from e
        if not isinstance(data, dict) or not all(
            isinstance(v, str) for v in data.values()  # pyright: ignore[reportUnknownVariableType, reportUnknownMemberType]
        ):
            raise ReportError(str(path), "golden file must map names to checksum strings")
        return cls(path, {str(k): str(v) for k, v in data.items()})  # pyright: ignore[reportUnknownVariableType, reportUnknownArgumentType, reportUnknownMemberType]

    def compare(self, name: str, values: np.ndarray) -> tuple[str, str | None]:
        """Current and stored checksum for ``name``."""
        return payload_checksum(values), self.checksums.get(name)

    def bless(self, name: str, values: np.ndarray) -> str:
        checksum = payload_checksum(values)
        self.checksums[name] = checksum
        return checksum

    def save(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(self.checksums, indent=2, sort_keys=True) + "\n")
