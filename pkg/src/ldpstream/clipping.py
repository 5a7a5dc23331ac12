"""Clip interval sizing for the clipped accumulation perturber.

Widening or narrowing the working interval trades two error sources against
each other: the sensitivity error (reports get coarser as the interval
grows) and the discarding error (values outside the interval are lost).
The interval [-T, 1 + T] balances the two, with T the difference between
the sensitivity error and the discarding error at the given budget.
"""

from __future__ import annotations

import math

from .mechanisms import deviation_variance, sw_moments
from .validation import check_budget

# T is kept inside this band so the working interval never collapses below
# half the unit interval nor grows beyond half again its size.
CLIP_BAND = 0.25


def sensitivity_error(epsilon) -> float:
    """Error attributed to report coarseness at the interval boundary."""
    eps = check_budget(epsilon)
    return math.exp(1.0 - sw_moments(eps).mean) - 1.0


def discarding_error(epsilon) -> float:
    """Standard deviation of the report deviation at the interval boundary."""
    eps = check_budget(epsilon)
    return math.sqrt(deviation_variance(eps, 1.0))


def clip_threshold(epsilon) -> float:
    """Interval adjustment T, clamped to [-CLIP_BAND, CLIP_BAND]."""
    raw = sensitivity_error(epsilon) - discarding_error(epsilon)
    return min(max(raw, -CLIP_BAND), CLIP_BAND)


def clip_bounds(epsilon) -> tuple[float, float]:
    """Working interval (lower, upper) = (-T, 1 + T) for a budget.

    The stream perturber passes the budget of the whole window here, not
    the per-slot share; see the module notes in ``steppers``.
    """
    t = clip_threshold(epsilon)
    return (-t, 1.0 + t)


def bounds_from_delta(delta) -> tuple[float, float]:
    """Explicit interval (-delta, 1 + delta) for sweeping the adjustment.

    delta may be negative to narrow the interval, but not -0.5 or below,
    which would leave no interval at all.
    """
    d = float(delta)
    if not math.isfinite(d) or d <= -0.5:
        raise ValueError(f"delta must be a finite value above -0.5, got {delta!r}")
    return (-d, 1.0 + d)
