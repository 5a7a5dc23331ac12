"""Online slot-by-slot perturbers.

Each stepper consumes one stream value per call and returns what was
published along with the budget spent. Values may be scalars or vectors;
a vector runs one independent stream per element against a shared random
tape, which is how the batch estimators get their speed.

All steppers divide the total window budget evenly over the window, so a
window of w slots spends at most the total budget; the absorption variant
reallocates unspent shares within that same cap.

On the clipped accumulation perturber: the working interval from
``clipping.clip_bounds`` is sized with the budget of the whole window, not
the per-slot share. The interval is a property of the stream release as a
whole, and sizing it at the per-slot share would widen the interval
exactly when the budget is most scarce, which is backwards (and measurably
worse; see the ordering experiment).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .clipping import clip_bounds
from .mechanisms import SquareWaveMechanism, sw_parameters
from .validation import check_budget, check_window


@dataclass(frozen=True)
class SlotReport:
    """What one slot published.

    Fields hold scalars for scalar input and per-stream arrays for vector
    input. ``budget_spent`` is the privacy cost charged to this slot.
    """

    slot: int
    raw_value: Any
    mechanism_input: Any
    published: Any
    budget_spent: Any


def _default_factory(epsilon, rng) -> SquareWaveMechanism:
    return SquareWaveMechanism(epsilon, random_state=rng)


class _StepperBase:
    """Shared budget split and bookkeeping."""

    def __init__(self, epsilon, window_size, random_state=None,
                 mechanism_factory: Callable = _default_factory):
        self.epsilon = check_budget(epsilon)
        self.window_size = check_window(window_size)
        self.budget_per_slot = self.epsilon / self.window_size
        if isinstance(random_state, np.random.Generator):
            self._rng = random_state
        else:
            self._rng = np.random.default_rng(random_state)
        self._factory = mechanism_factory
        self._slot = 0
        self._spends: list[Any] = []

    def _spend(self, amount) -> None:
        self._spends.append(amount)

    def spend_history(self) -> np.ndarray:
        """Per-slot spends, shape (n_slots,) or (n_slots, n_streams)."""
        return np.asarray(self._spends, dtype=float)

    def _finish(self, raw, mech_input, published, spent) -> SlotReport:
        report = SlotReport(slot=self._slot, raw_value=raw,
                           mechanism_input=mech_input, published=published,
                           budget_spent=spent)
        self._slot += 1
        self._spend(spent)
        return report


class SwDirectStepper(_StepperBase):
    """Memoryless baseline: each slot reports through the mechanism as-is."""

    def __init__(self, epsilon, window_size, random_state=None,
                 mechanism_factory: Callable = _default_factory):
        super().__init__(epsilon, window_size, random_state, mechanism_factory)
        self._mechanism = self._factory(self.budget_per_slot, self._rng)

    def step(self, value) -> SlotReport:
        x = np.asarray(value, dtype=float)
        published = self._mechanism.perturb(x)
        spent = np.broadcast_to(self.budget_per_slot, x.shape).copy() \
            if x.ndim else self.budget_per_slot
        return self._finish(x, x, published, spent)


class IppStepper(_StepperBase):
    """Feeds the previous slot's deviation into the next input.

    The deviation (true minus published) of slot t shifts the input of
    slot t + 1, clipped back into the unit interval. Only the most recent
    deviation is carried.
    """

    def __init__(self, epsilon, window_size, random_state=None,
                 mechanism_factory: Callable = _default_factory):
        super().__init__(epsilon, window_size, random_state, mechanism_factory)
        self._mechanism = self._factory(self.budget_per_slot, self._rng)
        self.last_deviation = 0.0

    def step(self, value) -> SlotReport:
        x = np.asarray(value, dtype=float)
        shifted = np.clip(x + self.last_deviation, 0.0, 1.0)
        published = self._mechanism.perturb(shifted)
        self.last_deviation = x - published
        spent = np.broadcast_to(self.budget_per_slot, x.shape).copy() \
            if x.ndim else self.budget_per_slot
        return self._finish(x, shifted, published, spent)


class AppStepper(_StepperBase):
    """Accumulates every past deviation into the next input.

    The running total D of (true - published) makes published sums
    telescope: after any number of slots, published total + D equals the
    true total exactly.
    """

    def __init__(self, epsilon, window_size, random_state=None,
                 mechanism_factory: Callable = _default_factory):
        super().__init__(epsilon, window_size, random_state, mechanism_factory)
        self._mechanism = self._factory(self.budget_per_slot, self._rng)
        self.accumulated_deviation = 0.0

    def step(self, value) -> SlotReport:
        x = np.asarray(value, dtype=float)
        shifted = np.clip(x + self.accumulated_deviation, 0.0, 1.0)
        published = self._mechanism.perturb(shifted)
        self.accumulated_deviation = self.accumulated_deviation + (x - published)
        spent = np.broadcast_to(self.budget_per_slot, x.shape).copy() \
            if x.ndim else self.budget_per_slot
        return self._finish(x, shifted, published, spent)


class CappStepper(_StepperBase):
    """Accumulation with a resized working interval.

    The deviation-shifted value is clipped to [lower, upper], normalized
    to [0, 1] for the mechanism, and the report is mapped back. The
    deviation total is kept in original units so the telescoping property
    carries over unchanged.
    """

    def __init__(self, epsilon, window_size, bounds=None, random_state=None,
                 mechanism_factory: Callable = _default_factory):
        super().__init__(epsilon, window_size, random_state, mechanism_factory)
        if bounds is None:
            bounds = clip_bounds(self.epsilon)
        lower, upper = float(bounds[0]), float(bounds[1])
        if not upper > lower:
            raise ValueError(f"empty clip interval ({lower}, {upper})")
        self.lower, self.upper = lower, upper
        self._mechanism = self._factory(self.budget_per_slot, self._rng)
        self.accumulated_deviation = 0.0

    def step(self, value) -> SlotReport:
        x = np.asarray(value, dtype=float)
        span = self.upper - self.lower
        clipped = np.clip(x + self.accumulated_deviation, self.lower, self.upper)
        normalized = (clipped - self.lower) / span
        published = self._mechanism.perturb(normalized) * span + self.lower
        self.accumulated_deviation = self.accumulated_deviation + (x - published)
        spent = np.broadcast_to(self.budget_per_slot, x.shape).copy() \
            if x.ndim else self.budget_per_slot
        return self._finish(x, normalized, published, spent)


class AbsorptionStepper(_StepperBase):
    """Budget absorption on top of the direct mechanism.

    When a value sits within ``threshold`` of the last published value the
    slot republishes it for free and banks the slot's budget share; the
    next genuine report spends its share plus the bank, capped by what the
    current window still allows. The first slot always reports.

    The default threshold is the mechanism's band radius at the per-slot
    share: deviations inside the band are indistinguishable from noise, so
    republishing loses nothing.
    """

    def __init__(self, epsilon, window_size, threshold=None, random_state=None,
                 mechanism_factory: Callable = _default_factory):
        super().__init__(epsilon, window_size, random_state, mechanism_factory)
        if threshold is None:
            threshold = sw_parameters(self.budget_per_slot).half_width
        self.threshold = float(threshold)
        if self.threshold < 0.0:
            raise ValueError(f"threshold must be non-negative, got {threshold}")
        self._pool = 0.0
        self._last_published = None

    def _window_headroom(self):
        """Budget still spendable this slot under the window constraint."""
        recent = self._spends[-(self.window_size - 1):] if self.window_size > 1 else []
        if not recent:
            return self.epsilon
        return self.epsilon - np.sum(np.asarray(recent, dtype=float), axis=0)

    def step(self, value) -> SlotReport:
        x = np.asarray(value, dtype=float)
        share = self.budget_per_slot
        if self._last_published is None:
            republish = np.zeros(x.shape, dtype=bool)
        else:
            republish = np.abs(x - self._last_published) <= self.threshold
        boosted = np.minimum(share + self._pool, self._window_headroom())
        boosted = np.maximum(boosted, 0.0)
        boosted = np.broadcast_to(np.asarray(boosted, dtype=float), x.shape)
        # Republishing streams get a placeholder budget; their draws are
        # consumed to keep tapes aligned and then discarded.
        draw_budget = np.where(republish, share, np.maximum(boosted, share * 1e-9))
        if x.ndim == 0:
            draw_budget = float(draw_budget)
        mechanism = self._factory(draw_budget, self._rng)
        fresh = mechanism.perturb(x)
        if self._last_published is None:
            published = fresh
        else:
            published = np.where(republish, self._last_published, fresh)
        spent = np.where(republish, 0.0, boosted)
        self._pool = np.where(republish, self._pool + share, 0.0)
        if x.ndim == 0:
            published = float(published)
            spent = float(spent)
            self._pool = float(self._pool)
        self._last_published = published
        return self._finish(x, x, published, spent)


def run_stream(stepper, values) -> tuple[np.ndarray, list[SlotReport]]:
    """Feed a 1d stream through a stepper, collecting published values."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1d stream, got shape {arr.shape}")
    reports = [stepper.step(v) for v in arr]
    return np.asarray([r.published for r in reports], dtype=float), reports
