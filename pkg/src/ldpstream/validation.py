"""Input checks shared across the package."""

from __future__ import annotations

import numbers

import numpy as np


def check_budget(epsilon, name: str = "epsilon") -> float:
    """Validate a privacy budget and return it as a float.

    Budgets must be finite, strictly positive real numbers. Values above
    500 are rejected because exp(epsilon) overflows double precision long
    before that point becomes meaningful for privacy.
    """
    if not isinstance(epsilon, numbers.Real) or isinstance(epsilon, bool):
        raise TypeError(f"{name} must be a real number, got {type(epsilon).__name__}")
    eps = float(epsilon)
    if not np.isfinite(eps) or eps <= 0.0:
        raise ValueError(f"{name} must be finite and positive, got {eps!r}")
    if eps > 500.0:
        raise ValueError(f"{name}={eps} is too large; exp({name}) overflows")
    return eps


def check_window(window_size, name: str = "window_size") -> int:
    if not isinstance(window_size, numbers.Integral) or isinstance(window_size, bool):
        raise TypeError(f"{name} must be an integer, got {type(window_size).__name__}")
    w = int(window_size)
    if w < 1:
        raise ValueError(f"{name} must be at least 1, got {w}")
    return w


def check_unit_interval(values, name: str = "values") -> np.ndarray:
    """Coerce to a float array and require every entry to lie in [0, 1]."""
    arr = np.asarray(values, dtype=float)
    if arr.size and (np.isnan(arr).any() or arr.min() < 0.0 or arr.max() > 1.0):
        raise ValueError(f"{name} must lie in [0, 1] and contain no NaN")
    return arr


def check_stream_matrix(X) -> np.ndarray:
    """Validate a batch of streams as a 2d array of shape (n_streams, n_slots)."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2:
        raise ValueError(f"expected 1d or 2d stream data, got shape {arr.shape}")
    if arr.shape[1] == 0:
        raise ValueError("streams must contain at least one slot")
    return check_unit_interval(arr, name="stream values")
