"""Matrix and diagnostics file I/O.

Two matrix formats:

* headerless CSV of decimal reals, one row per sequence position,
  written with 17 significant digits so values round-trip bitwise;
* "OTMX" binary: 4 magic bytes, two uint32 little-endian counts
  (rows, cols), then row-major float64 little-endian values.

The reader sniffs the magic bytes, so either format can be passed
anywhere a matrix is expected.  Diagnostics documents are plain
key/value text with two-space-indented "- " items for lists, written
with deterministic ordering and float formatting so identical runs
produce identical bytes.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .core import InputFormatError

__all__ = [
    "format_float",
    "read_matrix",
    "write_matrix",
    "write_document",
]

MAGIC = b"OTMX"
FORMATS = ("csv", "otmx")


def format_float(value: float) -> str:
    """Shortest-ish decimal form that round-trips a float64 exactly."""
    return format(float(value), ".17g")


def write_matrix(path, values: np.ndarray, fmt: str = "csv") -> None:
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise InputFormatError(f"write_matrix: expected a matrix, got {values.ndim}-D")
    path = Path(path)
    if fmt == "csv":
        lines = [",".join(format_float(v) for v in row) for row in values]
        path.write_text("\n".join(lines) + "\n", encoding="ascii")
    elif fmt == "otmx":
        header = MAGIC + struct.pack("<II", values.shape[0], values.shape[1])
        path.write_bytes(header + np.ascontiguousarray(values, dtype="<f8").tobytes())
    else:
        raise InputFormatError(f"write_matrix: unknown format {fmt!r}")


def _read_otmx(path: Path, raw: bytes) -> np.ndarray:
    if len(raw) < 12:
        raise InputFormatError(f"{path}: truncated OTMX header")
    rows, cols = struct.unpack("<II", raw[4:12])
    expected = 12 + rows * cols * 8
    if len(raw) != expected:
        raise InputFormatError(
            f"{path}: OTMX payload is {len(raw)} bytes, expected {expected} "
            f"for {rows}x{cols}"
        )
    if rows == 0 or cols == 0:
        raise InputFormatError(f"{path}: empty matrix ({rows}x{cols})")
    return np.frombuffer(raw[12:], dtype="<f8").reshape(rows, cols).astype(np.float64)


def _read_csv(path: Path, raw: bytes) -> np.ndarray:
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as exc:
        raise InputFormatError(f"{path}: not a text matrix ({exc})")
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = [float(cell) for cell in line.split(",")]
        except ValueError as exc:
            raise InputFormatError(f"{path}:{lineno}: {exc}")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InputFormatError(
                f"{path}:{lineno}: row has {len(row)} cells, expected {width}"
            )
        rows.append(row)
    if not rows:
        raise InputFormatError(f"{path}: no data rows")
    return np.array(rows, dtype=np.float64)


def read_matrix(path) -> np.ndarray:
    """Read a matrix in either supported format (sniffed by magic)."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc.strerror or exc}")
    values = _read_otmx(path, raw) if raw[:4] == MAGIC else _read_csv(path, raw)
    if not np.all(np.isfinite(values)):
        raise InputFormatError(f"{path}: matrix contains NaN or Inf")
    return values


def _render(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def write_document(path, entries: list[tuple[str, object]]) -> None:
    """Write an ordered key/value document; tuple/list values become
    nested "- " items, one per line."""
    lines = []
    for key, value in entries:
        if isinstance(value, (list, tuple)):
            lines.append(f"{key}:")
            lines.extend(f"  - {_render(item)}" for item in value)
        else:
            lines.append(f"{key}: {_render(value)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
