"""Field file formats.

Two formats are supported, chosen by suffix:

``.csv``
    Header ``t,x1[,x2],value`` followed by one row per grid point in row-major
    order (time slowest). The grid is recovered from the distinct coordinates.

``.fwf`` (FWF1)
    Little-endian binary: magic ``b"FWF1"``, ``u32`` rank, ``u32`` dims[rank],
    ``f64`` steps[rank], ``f64`` t0, then the ``f64`` payload in row-major
    order. Axis 0 is time. There is no spatial origin in the header: every
    spatial axis is centred, ``x_k = dx_k (i - nx_k // 2)``, so ``x = 0`` sits
    at index ``nx // 2``. CSV files must use the same centring.

Example::

    from fracwave.core.io import read_field, write_field

    write_field(field, Path("bump.fwf"))
    same = read_field(Path("bump.fwf"))
"""

from __future__ import annotations

import csv
import io
import logging
import struct
from pathlib import Path

import numpy as np

from ..errors import FieldFormatError, GridError
from .grid import ScalarField, SpacetimeGrid

_logger = logging.getLogger(__name__)

FWF_MAGIC = b"FWF1"

#: Relative tolerance when recovering uniform steps from CSV coordinates.
_STEP_RTOL = 1e-9


def write_fwf(field: ScalarField, path: Path) -> None:
    """Write an FWF1 file.

    Only ``t0`` is stored as an origin. Spatial coordinates are implied by the
    centred convention of :meth:`SpacetimeGrid.space_axis`, so a field sampled
    on an uncentred spatial window has to be shifted before it is written.
    """
    grid = field.grid
    rank = grid.n
    header = FWF_MAGIC
    header += struct.pack(f"<I{rank}I", rank, *grid.shape)
    header += struct.pack(f"<{rank}dd", *grid.steps, grid.t0)
    payload = np.ascontiguousarray(field.values, dtype="<f8").tobytes()
    path.write_bytes(header + payload)


def read_fwf(path: Path) -> ScalarField:
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise FieldFormatError(str(path), "file not found") from None
    if data[:4] != FWF_MAGIC:
        raise FieldFormatError(str(path), f"bad magic {data[:4]!r}")
    offset = 4
    try:
        (rank,) = struct.unpack_from("<I", data, offset)
        offset += 4
        if rank not in (2, 3):
            raise FieldFormatError(str(path), f"unsupported rank {rank}")
        dims = struct.unpack_from(f"<{rank}I", data, offset)
        offset += 4 * rank
        *steps, t0 = struct.unpack_from(f"<{rank}dd", data, offset)
        offset += 8 * (rank + 1)
    except struct.error as e:
        raise FieldFormatError(str(path), f"truncated header ({e})") from None
    expected = int(np.prod(dims)) * 8
    if len(data) - offset != expected:
        raise FieldFormatError(
            str(path), f"payload has {len(data) - offset} bytes, expected {expected}"
        )
    values = np.frombuffer(data, dtype="<f8", offset=offset).reshape(dims)
    try:
        grid = SpacetimeGrid(dims[0], tuple(dims[1:]), steps[0], tuple(steps[1:]), t0)
        return ScalarField(grid, values)
    except GridError as e:
        raise FieldFormatError(str(path), e.reason) from None


def _header(rank: int) -> list[str]:
    return ["t", *(f"x{k}" for k in range(1, rank)), "value"]


def write_csv(field: ScalarField, path: Path) -> None:
    grid = field.grid
    coords = np.meshgrid(*grid.axes(), indexing="ij")
    columns = [c.ravel() for c in coords] + [field.values.ravel()]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_header(grid.n))
        for row in zip(*columns):
            writer.writerow([repr(float(v)) for v in row])


def _recover_axis(path: Path, coords: np.ndarray, name: str) -> tuple[int, float, float]:
    """Count, step and first value of a uniform coordinate axis."""
    unique = np.unique(coords)
    if unique.size < 2:
        raise FieldFormatError(str(path), f"axis {name} has fewer than two distinct values")
    diffs = np.diff(unique)
    step = float(np.mean(diffs))
    if np.max(np.abs(diffs - step)) > _STEP_RTOL * max(abs(step), 1.0) * unique.size:
        raise FieldFormatError(str(path), f"axis {name} is not uniformly spaced")
    return int(unique.size), step, float(unique[0])


def read_csv(path: Path) -> ScalarField:
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise FieldFormatError(str(path), "file not found") from None
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise FieldFormatError(str(path), "empty file") from None
    if header not in (_header(2), _header(3)):
        raise FieldFormatError(str(path), f"unexpected header {','.join(header)}")
    rank = len(header) - 1
    try:
        rows = np.array([[float(v) for v in row] for row in reader if row], dtype=np.float64)
    except ValueError as e:
        raise FieldFormatError(str(path), str(e)) from None
    if rows.ndim != 2 or rows.shape[1] != rank + 1:
        raise FieldFormatError(str(path), "ragged rows")

    counts: list[int] = []
    steps: list[float] = []
    firsts: list[float] = []
    for axis, name in enumerate(header[:-1]):
        count, step, first = _recover_axis(path, rows[:, axis], name)
        counts.append(count)
        steps.append(step)
        firsts.append(first)
    if rows.shape[0] != int(np.prod(counts)):
        raise FieldFormatError(
            str(path), f"{rows.shape[0]} rows do not fill a {'x'.join(map(str, counts))} grid"
        )
    for axis in range(1, rank):
        expected = -(counts[axis] // 2) * steps[axis]
        if abs(firsts[axis] - expected) > 1e-6 * steps[axis]:
            raise FieldFormatError(
                str(path), f"axis {header[axis]} is not centred (starts at {firsts[axis]})"
            )
    order = np.lexsort(tuple(rows[:, axis] for axis in reversed(range(rank))))
    values = rows[order, -1].reshape(counts)
    try:
        grid = SpacetimeGrid(counts[0], tuple(counts[1:]), steps[0], tuple(steps[1:]), firsts[0])
        return ScalarField(grid, values)
    except GridError as e:
        raise FieldFormatError(str(path), e.reason) from None


def read_field(path: Path) -> ScalarField:
    """Read a field, dispatching on the file suffix."""
    suffix = path.suffix.lower()
    _logger.debug("reading field %s", path)
    if suffix == ".csv":
        return read_csv(path)
    if suffix == ".fwf":
        return read_fwf(path)
    raise FieldFormatError(str(path), f"unknown suffix {suffix!r} (expected .csv or .fwf)")


def write_field(field: ScalarField, path: Path) -> None:
    """Write a field, dispatching on the file suffix."""
    suffix = path.suffix.lower()
    _logger.debug("writing field %s on grid %s", path, field.grid.shape)
    if suffix == ".csv":
        write_csv(field, path)
    elif suffix == ".fwf":
        write_fwf(field, path)
    else:
        raise FieldFormatError(str(path), f"unknown suffix {suffix!r} (expected .csv or .fwf)")
