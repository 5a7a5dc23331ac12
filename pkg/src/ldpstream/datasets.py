"""Stream sources: CSV loading and synthetic generators.

All streams are float arrays in [0, 1]. CSV columns are min-max scaled
into that range on load; synthetic generators produce values already
inside it.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def normalize_unit(values) -> np.ndarray:
    """Min-max scale into [0, 1]; a constant column maps to all 0.5."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot normalize an empty stream")
    lo, hi = float(arr.min()), float(arr.max())
    if hi == lo:
        return np.full_like(arr, 0.5)
    return (arr - lo) / (hi - lo)


def load_stream_csv(path, column=None, normalize: bool = True) -> np.ndarray:
    """Read one numeric column of a CSV file as a stream.

    Parameters
    ----------
    path : str or Path
        File to read. A header row is detected by trying to parse its
        fields as numbers.
    column : str, int or None
        Column name (requires a header), positional index, or None for
        the first column.
    normalize : bool
        Min-max scale the result into [0, 1] (default). Disable only for
        data already known to be in range.

    Raises
    ------
    ValueError
        On unparseable cells, naming the 1-based row.
    """
    path = Path(path)
    with path.open(newline="") as handle:
        rows = [row for row in csv.reader(handle) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ValueError(f"{path}: no data rows")

    def parseable(cell: str) -> bool:
        try:
            float(cell)
            return True
        except ValueError:
            return False

    header = None
    if not all(parseable(cell) for cell in rows[0] if cell.strip()):
        header = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
        if not rows:
            raise ValueError(f"{path}: header but no data rows")
    if isinstance(column, str):
        if header is None:
            raise ValueError(f"{path}: column {column!r} requested but file has no header")
        try:
            index = header.index(column)
        except ValueError:
            raise ValueError(f"{path}: no column named {column!r}; have {header}") from None
    else:
        index = int(column) if column is not None else 0

    values = np.empty(len(rows))
    offset = 2 if header is not None else 1
    for i, row in enumerate(rows):
        if index >= len(row):
            raise ValueError(f"{path}: row {i + offset} has no column {index}")
        cell = row[index].strip()
        try:
            value = float(cell)
        except ValueError:
            raise ValueError(
                f"{path}: row {i + offset}: cannot parse {cell!r} as a number") from None
        if np.isnan(value):
            raise ValueError(f"{path}: row {i + offset}: NaN value")
        values[i] = value
    return normalize_unit(values) if normalize else values


def constant_stream(length: int, value: float = 0.1) -> np.ndarray:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"value must lie in [0, 1], got {value}")
    return np.full(int(length), float(value))


def pulse_stream(length: int, period: int = 5, low: float = 0.0,
                 high: float = 1.0) -> np.ndarray:
    """Spike train: ``high`` every ``period`` slots, ``low`` in between."""
    if period < 1:
        raise ValueError(f"period must be at least 1, got {period}")
    t = np.arange(int(length))
    return np.where(t % period == 0, float(high), float(low))


def sinusoidal_stream(length: int, cycles: float = 1.0,
                      phase: float = 0.0) -> np.ndarray:
    t = np.arange(int(length))
    return 0.5 + 0.5 * np.sin(2.0 * np.pi * cycles * t / int(length) + phase)


def multi_sinusoidal_stream(length: int, n_dims: int,
                            cycles: float = 1.0) -> np.ndarray:
    """Phase-shifted sinusoids, one row per dimension, shape (n_dims, length)."""
    if n_dims < 1:
        raise ValueError(f"n_dims must be at least 1, got {n_dims}")
    phases = 2.0 * np.pi * np.arange(n_dims) / n_dims
    return np.stack([sinusoidal_stream(length, cycles, phase) for phase in phases])


def sample_subsequence_starts(stream_length: int, subsequence_length: int,
                              count: int, rng: np.random.Generator) -> np.ndarray:
    """Random subsequence start slots, drawn with replacement."""
    if subsequence_length > stream_length:
        raise ValueError(
            f"subsequence length {subsequence_length} exceeds stream "
            f"length {stream_length}")
    return rng.integers(0, stream_length - subsequence_length + 1, int(count))
