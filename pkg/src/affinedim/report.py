"""Serialization helpers: deterministic JSON, delimited matrices, CSV input.

JSON floats are written with 17 significant digits so every double round-trips
exactly; reading a report and re-serializing it reproduces the bytes.  Input
CSVs need a header row; the label column may be named explicitly, otherwise
the first column whose values do not all parse as numbers is used.
"""

from __future__ import annotations

import csv
import math
import os

import numpy as np

from .errors import InputError
from .geometry import Configuration


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise InputError(f"cannot serialize non-finite number {x!r} to JSON")
    return format(x, ".17g")


def dumps_json(obj, indent: int = 2) -> str:
    """Serialize dicts/lists/scalars with fixed float formatting."""
    out: list[str] = []
    _write_json(obj, out, indent, 0)
    out.append("\n")
    return "".join(out)


def _write_json(obj, out: list[str], indent: int, level: int) -> None:
    pad = " " * (indent * (level + 1))
    closing_pad = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise InputError(f"JSON object keys must be strings, got {key!r}")
            out.append(f'{pad}"{_escape(key)}": ')
            _write_json(value, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(closing_pad + "}")
    elif isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(pad)
            _write_json(value, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(closing_pad + "]")
    elif isinstance(obj, np.ndarray):
        _write_json(obj.tolist(), out, indent, level)
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(f'"{_escape(obj)}"')
    else:
        raise InputError(f"cannot serialize object of type {type(obj).__name__} to JSON")


def _escape(s: str) -> str:
    out = []
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_json(obj))


def write_matrix_csv(path, matrix, columns: list[str], labels: list[str] | None = None,
                     label_header: str = "LABEL") -> None:
    """Delimited matrix with a header row and optional leading label column."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.shape[1] != len(columns):
        raise InputError(f"{len(columns)} column names for a matrix with {matrix.shape[1]} columns")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = ([label_header] if labels is not None else []) + list(columns)
        writer.writerow(header)
        for i, row in enumerate(matrix):
            cells = [format_float(float(v)) for v in row]
            if labels is not None:
                cells = [labels[i]] + cells
            writer.writerow(cells)


def _parses_as_float(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_configuration_csv(path, label_column: str | None = None,
                           weights_column: str | None = None) -> Configuration:
    """Load a labeled scatter from a header-row CSV.

    All columns other than the label and weights columns must parse as
    decimal-point numbers.  Without an explicit label column, the first
    column with any non-numeric value becomes the labels.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read input file {path}: {exc}")
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if len(rows) < 2:
        raise InputError(f"input file {path} needs a header row and at least one data row")
    header = [h.strip() for h in rows[0]]
    data = [[cell.strip() for cell in r] for r in rows[1:]]
    if any(len(r) != len(header) for r in data):
        raise InputError(f"ragged rows in {path}: every row must match the header width")

    columns = {name: [r[j] for r in data] for j, name in enumerate(header)}
    if label_column is None:
        for name in header:
            if not all(_parses_as_float(v) for v in columns[name]):
                label_column = name
                break
    elif label_column not in columns:
        raise InputError(f"label column {label_column!r} not found in {path}")
    if weights_column is not None and weights_column not in columns:
        raise InputError(f"weights column {weights_column!r} not found in {path}")

    numeric_names = [n for n in header if n != label_column and n != weights_column]
    if not numeric_names:
        raise InputError(f"no numeric coordinate columns left in {path}")
    coord_rows = []
    for i, row in enumerate(data):
        values = []
        for name in numeric_names:
            cell = columns[name][i]
            if not _parses_as_float(cell):
                raise InputError(f"non-numeric value {cell!r} in column {name!r}, row {i + 2}")
            values.append(float(cell))
        coord_rows.append(values)
    labels = columns[label_column] if label_column is not None else None
    weights = None
    if weights_column is not None:
        try:
            weights = np.array([float(v) for v in columns[weights_column]])
        except ValueError:
            raise InputError(f"weights column {weights_column!r} has non-numeric values")
    return Configuration(np.array(coord_rows), labels=labels, weights=weights)


def read_gamma_file(path, n: int) -> np.ndarray:
    """Read a centering vector: one value per line, or a one-column CSV."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise InputError(f"cannot read gamma file {path}: {exc}")
    if lines and not _parses_as_float(lines[0].split(",")[0]):
        lines = lines[1:]  # tolerate a header line
    values = []
    for ln in lines:
        cell = ln.split(",")[0].strip()
        if not _parses_as_float(cell):
            raise InputError(f"non-numeric gamma entry {cell!r} in {path}")
        values.append(float(cell))
    if len(values) != n:
        raise InputError(f"gamma file {path} has {len(values)} entries for N={n} points")
    return np.array(values)


def ensure_out_dir(path) -> str:
    os.makedirs(path, exist_ok=True)
    return str(path)
