"""Collector side moving average smoothing."""

from __future__ import annotations

import numpy as np


def moving_average(values, half_width: int = 1) -> np.ndarray:
    """Simple moving average over a (2 * half_width + 1)-slot window.

    Near the stream boundaries the window shrinks to the available slots,
    so the first and last outputs average fewer values instead of padding.
    Works on the last axis, so a batch of streams smooths in one call.
    """
    if half_width < 0:
        raise ValueError(f"half_width must be non-negative, got {half_width}")
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        raise ValueError("expected at least one dimension of slots")
    if half_width == 0:
        return arr.copy()
    n = arr.shape[-1]
    cumulative = np.zeros(arr.shape[:-1] + (n + 1,), dtype=float)
    np.cumsum(arr, axis=-1, out=cumulative[..., 1:])
    idx = np.arange(n)
    lo = np.maximum(idx - half_width, 0)
    hi = np.minimum(idx + half_width + 1, n)
    return (cumulative[..., hi] - cumulative[..., lo]) / (hi - lo)
