"""Strict readers for the two supported table formats.

CSV: comma separator, LF or CRLF line endings, an optional single header
row, and plain decimal numbers in every cell.  A row is a header exactly
when at least one of its cells does not parse as a decimal number.  Cells
spelling nan or inf are rejected by name, as are ragged rows and empty
cells; error messages carry 1-based row and column positions.

NPY: version 1.0 only, C-order, 2-D, little-endian 8-byte float or 8-byte
signed integer.  The header is parsed by hand against those constraints
rather than delegated, so an unsupported file fails with a message instead
of silently widening the accepted surface.
"""

from __future__ import annotations

import ast
import csv
import re
from dataclasses import dataclass

import numpy as np

__all__ = ["TableFormatError", "TableFile", "load_table"]

# plain decimal numbers only: float() also accepts nan/inf/underscores
_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")

_MAGIC = b"\x93NUMPY"
_SUPPORTED_DESCR = ("<f8", "<i8")


class TableFormatError(ValueError):
    """A table file exists but its contents violate the format contract."""


@dataclass(frozen=True)
class TableFile:
    """One parsed table: N x C float64 values plus optional CSV header names."""

    path: str
    format: str
    values: np.ndarray
    header: tuple[str, ...] | None = None

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]


def _parse_cell(cell: str, row: int, col: int, path: str) -> float:
    text = cell.strip()
    if not _NUMBER.match(text):
        raise TableFormatError(
            f"{path}: cell at row {row}, column {col} is not a finite decimal "
            f"number: {cell!r}"
        )
    value = float(text)
    if not np.isfinite(value):
        raise TableFormatError(
            f"{path}: cell at row {row}, column {col} overflows a double: {cell!r}"
        )
    return value


def _read_csv(path: str) -> TableFile:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        rows = [row for row in csv.reader(handle)]
    rows = [row for row in rows if row != []]
    if not rows:
        raise TableFormatError(f"{path}: empty csv file")
    header: tuple[str, ...] | None = None
    start = 0
    if any(not _NUMBER.match(cell.strip()) for cell in rows[0]):
        header = tuple(cell.strip() for cell in rows[0])
        start = 1
    data_rows = rows[start:]
    if not data_rows:
        raise TableFormatError(f"{path}: csv file has a header but no data rows")
    width = len(data_rows[0])
    if header is not None and len(header) != width:
        raise TableFormatError(
            f"{path}: header has {len(header)} names but row 1 has {width} cells"
        )
    values = np.empty((len(data_rows), width))
    for r, row in enumerate(data_rows):
        if len(row) != width:
            raise TableFormatError(
                f"{path}: ragged row {r + 1 + start}: expected {width} cells, "
                f"got {len(row)}"
            )
        for c, cell in enumerate(row):
            values[r, c] = _parse_cell(cell, r + 1 + start, c + 1, path)
    return TableFile(path, "csv", values, header)


def _read_npy_header(blob: bytes, path: str) -> tuple[dict, int]:
    if len(blob) < 10 or blob[:6] != _MAGIC:
        raise TableFormatError(f"{path}: not an npy file (bad magic)")
    major, minor = blob[6], blob[7]
    if (major, minor) != (1, 0):
        raise TableFormatError(
            f"{path}: unsupported npy version {major}.{minor}; only 1.0 is supported"
        )
    header_len = int.from_bytes(blob[8:10], "little")
    header_end = 10 + header_len
    if len(blob) < header_end:
        raise TableFormatError(f"{path}: truncated npy header")
    try:
        header = ast.literal_eval(blob[10:header_end].decode("latin1").strip())
    except (ValueError, SyntaxError):
        raise TableFormatError(f"{path}: malformed npy header dict") from None
    if not isinstance(header, dict) or set(header) != {"descr", "fortran_order", "shape"}:
        raise TableFormatError(f"{path}: malformed npy header dict")
    return header, header_end


def _read_npy(path: str) -> TableFile:
    with open(path, "rb") as handle:
        blob = handle.read()
    header, offset = _read_npy_header(blob, path)
    descr = header["descr"]
    if descr not in _SUPPORTED_DESCR:
        raise TableFormatError(
            f"{path}: unsupported dtype {descr!r}; expected one of {_SUPPORTED_DESCR}"
        )
    if header["fortran_order"] is not False:
        raise TableFormatError(f"{path}: Fortran-order arrays are not supported")
    shape = header["shape"]
    if (
        not isinstance(shape, tuple) or len(shape) != 2
        or not all(isinstance(s, int) and s >= 0 for s in shape)
    ):
        raise TableFormatError(f"{path}: expected a 2-D shape, got {shape!r}")
    expected = shape[0] * shape[1] * 8
    payload = blob[offset:]
    if len(payload) != expected:
        raise TableFormatError(
            f"{path}: payload is {len(payload)} bytes, shape {shape} needs {expected}"
        )
    raw = np.frombuffer(payload, dtype=np.dtype(descr)).reshape(shape)
    values = raw.astype(np.float64)
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise TableFormatError(
            f"{path}: non-finite value at row {bad[0] + 1}, column {bad[1] + 1}"
        )
    return TableFile(path, "npy", values)


def load_table(path: str, format: str | None = None) -> TableFile:
    """Read a table, inferring csv/npy from the extension when not given."""
    if format is None:
        lowered = str(path).lower()
        if lowered.endswith(".csv"):
            format = "csv"
        elif lowered.endswith(".npy"):
            format = "npy"
        else:
            raise TableFormatError(
                f"{path}: cannot infer format from extension; pass csv or npy"
            )
    if format == "csv":
        return _read_csv(str(path))
    if format == "npy":
        return _read_npy(str(path))
    raise TableFormatError(f"unsupported table format {format!r}; expected csv or npy")
