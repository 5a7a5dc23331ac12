"""Scikit-learn style wrappers around the slot steppers.

Estimators treat X as a batch of streams, one row per stream, one column
per time slot. ``transform`` publishes every stream under the configured
budget and window; the per-slot budget spends of the last call are kept on
``last_spend_matrix_`` for auditing with ``ledger.assert_w_event``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .clipping import bounds_from_delta, clip_bounds
from .sampling import build_plan, replicate_segments, segment_means, select_sample_count
from .smoothing import moving_average
from .steppers import (AbsorptionStepper, AppStepper, CappStepper, IppStepper,
                       SwDirectStepper)
from .validation import check_budget, check_stream_matrix, check_window


class BaseStreamPerturber(BaseEstimator, TransformerMixin):
    """Common fit/transform plumbing for the stream perturbers."""

    def __init__(self, epsilon=1.0, window_size=10, random_state=None):
        self.epsilon = epsilon
        self.window_size = window_size
        self.random_state = random_state

    def fit(self, X, y=None):
        check_budget(self.epsilon)
        check_window(self.window_size)
        X = check_stream_matrix(X)
        self.n_slots_ = X.shape[1]
        return self

    def _make_stepper(self, rng):
        raise NotImplementedError

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "n_slots_")
        X = check_stream_matrix(X)
        rng = np.random.default_rng(self.random_state)
        stepper = self._make_stepper(rng)
        published = np.empty_like(X)
        for t in range(X.shape[1]):
            published[:, t] = stepper.step(X[:, t]).published
        self.last_spend_matrix_ = stepper.spend_history().T
        if hasattr(stepper, "accumulated_deviation"):
            self.last_accumulated_deviation_ = np.asarray(
                stepper.accumulated_deviation, dtype=float)
        return published


class SwDirectPerturber(BaseStreamPerturber):
    """Memoryless square wave publication of each slot."""

    def _make_stepper(self, rng):
        return SwDirectStepper(self.epsilon, self.window_size, random_state=rng)


class IppPerturber(BaseStreamPerturber):
    """Publication with the previous slot's deviation fed forward."""

    def _make_stepper(self, rng):
        return IppStepper(self.epsilon, self.window_size, random_state=rng)


class AppPerturber(BaseStreamPerturber):
    """Publication with all past deviations accumulated into the input."""

    def _make_stepper(self, rng):
        return AppStepper(self.epsilon, self.window_size, random_state=rng)


class CappPerturber(BaseStreamPerturber):
    """Accumulated deviation publication on a resized working interval.

    Parameters
    ----------
    delta : float or None
        Explicit interval adjustment; the interval becomes
        (-delta, 1 + delta). None derives the adjustment from the budget.
    clip_scope : {"window", "slot"}
        Which budget sizes the derived interval: the whole window budget
        (default) or the per-slot share. Only consulted when delta is None.
    """

    def __init__(self, epsilon=1.0, window_size=10, delta=None,
                 clip_scope="window", random_state=None):
        super().__init__(epsilon=epsilon, window_size=window_size,
                         random_state=random_state)
        self.delta = delta
        self.clip_scope = clip_scope

    def _bounds(self):
        if self.delta is not None:
            return bounds_from_delta(self.delta)
        if self.clip_scope == "window":
            return clip_bounds(self.epsilon)
        if self.clip_scope == "slot":
            return clip_bounds(self.epsilon / self.window_size)
        raise ValueError(f"unknown clip_scope {self.clip_scope!r}")

    def fit(self, X, y=None):
        super().fit(X, y)
        self._bounds()
        return self

    def _make_stepper(self, rng):
        return CappStepper(self.epsilon, self.window_size, bounds=self._bounds(),
                           random_state=rng)


class BaSwPerturber(BaseStreamPerturber):
    """Direct publication with budget absorption for quiet stretches."""

    def __init__(self, epsilon=1.0, window_size=10, threshold=None,
                 random_state=None):
        super().__init__(epsilon=epsilon, window_size=window_size,
                         random_state=random_state)
        self.threshold = threshold

    def _make_stepper(self, rng):
        return AbsorptionStepper(self.epsilon, self.window_size,
                                 threshold=self.threshold, random_state=rng)


_SAMPLED_INNER = {
    "sw": SwDirectStepper,
    "ipp": IppStepper,
    "app": AppStepper,
    "capp": CappStepper,
}


class SampledPerturber(BaseStreamPerturber):
    """Segment sampling wrapper: perturb a few segment means and replicate.

    Each row of X is treated as one query interval. The interval splits
    into segments, the mean of each segment is perturbed by the inner
    perturber at the enlarged per-sample budget, and the report is
    replicated across the segment's slots. The per-sample spend lands on
    the segment's last slot, where the mean becomes available.

    Parameters
    ----------
    inner : {"app", "capp", "ipp", "sw"}
        Perturber applied to the sequence of segment means.
    n_samples : int or None
        Samples per interval; None lets ``select_sample_count`` decide.
    """

    def __init__(self, epsilon=1.0, window_size=10, inner="app",
                 n_samples=None, random_state=None):
        super().__init__(epsilon=epsilon, window_size=window_size,
                         random_state=random_state)
        self.inner = inner
        self.n_samples = n_samples

    def fit(self, X, y=None):
        super().fit(X, y)
        if self.inner not in _SAMPLED_INNER:
            raise ValueError(f"unknown inner perturber {self.inner!r}")
        count = self.n_samples
        if count is None:
            count = select_sample_count(self.n_slots_, self.window_size,
                                        self.epsilon)
        self.plan_ = build_plan(self.n_slots_, count, self.window_size,
                                self.epsilon)
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "plan_")
        X = check_stream_matrix(X)
        plan = self.plan_
        if X.shape[1] != plan.interval_length:
            raise ValueError(
                f"fitted for intervals of {plan.interval_length} slots, "
                f"got {X.shape[1]}")
        rng = np.random.default_rng(self.random_state)
        stepper_cls = _SAMPLED_INNER[self.inner]
        # Inner budget accounting: a window holds at most samples_per_window
        # reports, so splitting the total budget over that count gives each
        # report plan.budget_per_sample.
        if self.inner == "capp":
            stepper = stepper_cls(self.epsilon, plan.samples_per_window,
                                  bounds=clip_bounds(self.epsilon),
                                  random_state=rng)
        else:
            stepper = stepper_cls(self.epsilon, plan.samples_per_window,
                                  random_state=rng)
        means = segment_means(X, plan)
        reported = np.empty_like(means)
        for index in range(plan.n_samples):
            reported[:, index] = stepper.step(means[:, index]).published
        published = replicate_segments(reported, plan)
        spends = np.zeros_like(X)
        last_slots = [hi - 1 for _, hi in plan.segment_bounds]
        spends[:, last_slots] = stepper.spend_history().T
        self.last_spend_matrix_ = spends
        return published


class MovingAverageSmoother(BaseEstimator, TransformerMixin):
    """Collector-side smoothing; no privacy cost, purely post-processing."""

    def __init__(self, half_width=1):
        self.half_width = half_width

    def fit(self, X, y=None):
        if int(self.half_width) < 0:
            raise ValueError("half_width must be non-negative")
        self.fitted_ = True
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "fitted_")
        return moving_average(np.asarray(X, dtype=float), self.half_width)
