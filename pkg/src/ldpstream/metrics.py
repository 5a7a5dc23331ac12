"""Accuracy metrics for published streams."""

from __future__ import annotations

import math

import numpy as np


def mean_squared_error(estimate, truth) -> float:
    a = np.asarray(estimate, dtype=float)
    b = np.asarray(truth, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def cosine_distance(estimate, truth) -> np.ndarray | float:
    """1 - cosine similarity along the last axis.

    Raises on zero-norm inputs rather than guessing a convention; a
    published stream with zero norm means something upstream went wrong.
    """
    a = np.asarray(estimate, dtype=float)
    b = np.asarray(truth, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a, axis=-1)
    nb = np.linalg.norm(b, axis=-1)
    if np.any(na == 0.0) or np.any(nb == 0.0):
        raise ValueError("cosine distance undefined for zero-norm vectors")
    result = 1.0 - np.sum(a * b, axis=-1) / (na * nb)
    return float(result) if result.ndim == 0 else result


def wasserstein_distance(sample_a, sample_b) -> float:
    """1-d earth mover distance between two empirical distributions.

    Equal-size samples reduce to the mean absolute difference of the
    sorted values; otherwise the distance is the integral of the absolute
    difference between the two empirical CDFs.
    """
    a = np.sort(np.asarray(sample_a, dtype=float).ravel())
    b = np.sort(np.asarray(sample_b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        raise ValueError("samples must be non-empty")
    if a.size == b.size:
        return float(np.mean(np.abs(a - b)))
    pooled = np.concatenate([a, b])
    pooled.sort(kind="mergesort")
    deltas = np.diff(pooled)
    cdf_a = np.searchsorted(a, pooled[:-1], side="right") / a.size
    cdf_b = np.searchsorted(b, pooled[:-1], side="right") / b.size
    return float(np.sum(np.abs(cdf_a - cdf_b) * deltas))


def dkw_sample_size(alpha, accuracy) -> int:
    """Samples needed so the empirical CDF is within ``accuracy`` of the
    truth everywhere with probability at least 1 - alpha, by the
    Dvoretzky-Kiefer-Wolfowitz bound."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha!r}")
    if accuracy <= 0.0:
        raise ValueError(f"accuracy must be positive, got {accuracy!r}")
    return math.ceil(math.log(2.0 / alpha) / (2.0 * accuracy * accuracy))
