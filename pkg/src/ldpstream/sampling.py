"""Sampling plan for query intervals: perturb a few segment means instead
of every slot.

An interval of given length splits into n_samples equal segments (the
remainder goes to the last segment). One report per segment carries the
segment mean, and the per-report budget grows because a window of w slots
only ever contains samples_per_window = ceil(w / segment_length) reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mechanisms import sw_moments
from .validation import check_budget, check_window


def variance_of_sample_variance(n_samples: int, epsilon) -> float:
    """Variance of the unbiased sample variance of n_samples reports.

    Uses the standard finite-sample formula driven by the report
    distribution's variance and fourth central moment. Two samples are the
    smallest meaningful count.
    """
    if n_samples < 2:
        raise ValueError(f"n_samples must be at least 2, got {n_samples}")
    moments = sw_moments(check_budget(epsilon))
    sigma2 = moments.variance
    mu4 = moments.fourth_central
    if n_samples == 2:
        return (mu4 + sigma2 * sigma2) / 2.0
    return (mu4 - sigma2 * sigma2 * (n_samples - 3) / (n_samples - 1)) / n_samples


@dataclass(frozen=True)
class SamplingPlan:
    interval_length: int
    n_samples: int
    segment_length: int
    samples_per_window: int
    budget_per_sample: float

    @property
    def segment_bounds(self) -> list[tuple[int, int]]:
        """Half-open slot ranges of each segment; the last one absorbs the
        remainder when the interval does not divide evenly."""
        edges = [i * self.segment_length for i in range(self.n_samples)]
        edges.append(self.interval_length)
        return list(zip(edges[:-1], edges[1:]))


def build_plan(interval_length, n_samples, window_size, total_budget) -> SamplingPlan:
    length = check_window(interval_length, name="interval_length")
    w = check_window(window_size)
    budget = check_budget(total_budget, name="total_budget")
    if not 2 <= n_samples <= length:
        raise ValueError(
            f"n_samples must lie in [2, {length}], got {n_samples}")
    segment_length = length // n_samples
    samples_per_window = max(1, math.ceil(w / segment_length))
    return SamplingPlan(
        interval_length=length,
        n_samples=int(n_samples),
        segment_length=segment_length,
        samples_per_window=samples_per_window,
        budget_per_sample=budget / samples_per_window,
    )


def select_sample_count(interval_length, window_size, total_budget,
                        fixed_budget=None) -> int:
    """Sample count minimizing n * Var(sample variance at the plan budget).

    By default each candidate is scored at its own per-sample budget from
    ``build_plan``; passing ``fixed_budget`` scores every candidate at that
    single budget instead. Ties resolve to the smaller count.
    """
    length = check_window(interval_length, name="interval_length")
    if length < 2:
        raise ValueError("interval_length must be at least 2 to sample")
    best_count, best_score = None, math.inf
    for n_samples in range(2, length + 1):
        plan = build_plan(length, n_samples, window_size, total_budget)
        budget = plan.budget_per_sample if fixed_budget is None else fixed_budget
        score = n_samples * variance_of_sample_variance(n_samples, budget)
        if score < best_score - 1e-15:
            best_count, best_score = n_samples, score
    return best_count


def segment_means(values, plan: SamplingPlan) -> np.ndarray:
    """Per-segment means along the last axis, shape (..., n_samples)."""
    arr = np.asarray(values, dtype=float)
    if arr.shape[-1] != plan.interval_length:
        raise ValueError(
            f"expected {plan.interval_length} slots, got {arr.shape[-1]}")
    return np.stack([arr[..., lo:hi].mean(axis=-1)
                     for lo, hi in plan.segment_bounds], axis=-1)


def replicate_segments(sample_values, plan: SamplingPlan) -> np.ndarray:
    """Spread per-segment reports back across their slots."""
    arr = np.asarray(sample_values, dtype=float)
    if arr.shape[-1] != plan.n_samples:
        raise ValueError(
            f"expected {plan.n_samples} segment values, got {arr.shape[-1]}")
    out = np.empty(arr.shape[:-1] + (plan.interval_length,), dtype=float)
    for index, (lo, hi) in enumerate(plan.segment_bounds):
        out[..., lo:hi] = arr[..., index:index + 1]
    return out
