"""Sliding window accounting for per-slot privacy spends.

The guarantee being enforced: within every window of w consecutive slots,
the spends of a single stream must sum to at most the total budget. The
ledger tracks the running window sum in O(1) per slot so perturbers can
consult it before spending.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .validation import check_budget, check_window

# Spends are sums of floating point shares like epsilon / w, so window
# totals can exceed the budget by accumulated rounding alone.
SPEND_TOLERANCE = 1e-9


class BudgetViolationError(RuntimeError):
    """A window of slots spent more than the total budget."""


class BudgetLedger:
    """Per-stream spend recorder with an O(1) sliding window sum."""

    def __init__(self, window_size, total_budget):
        self.window_size = check_window(window_size)
        self.total_budget = check_budget(total_budget, name="total_budget")
        self._window = deque()
        self._window_sum = 0.0
        self._history = []

    def window_spend(self) -> float:
        """Total spent in the most recent window_size slots."""
        return self._window_sum

    def remaining(self) -> float:
        """Budget spendable on the next slot without breaking the guarantee.

        The window that ends at the next slot shares only window_size - 1
        slots with the current one, so a full window's oldest spend does
        not count against the next record.
        """
        return max(self.total_budget - self._carryover(), 0.0)

    def _carryover(self) -> float:
        if len(self._window) >= self.window_size:
            return self._window_sum - self._window[0]
        return self._window_sum

    def record(self, spend: float) -> None:
        spend = float(spend)
        if spend < 0.0:
            raise ValueError(f"spend must be non-negative, got {spend}")
        projected = self._carryover() + spend
        if projected > self.total_budget + SPEND_TOLERANCE:
            raise BudgetViolationError(
                f"spending {spend:.6g} would put the last {self.window_size} "
                f"slots at {projected:.6g} > budget "
                f"{self.total_budget:.6g}")
        self._window.append(spend)
        if len(self._window) > self.window_size:
            self._window.popleft()
        self._window_sum = projected
        self._history.append(spend)

    @property
    def history(self) -> list[float]:
        return list(self._history)


def assert_w_event(spends, window_size, total_budget,
                   tolerance: float = SPEND_TOLERANCE) -> None:
    """Check that every w-window of spends stays within the budget.

    Parameters
    ----------
    spends : array-like
        Per-slot spends, shape (n_slots,) or (n_streams, n_slots); each
        stream is checked independently.
    window_size : int
        Length w of the sliding window.
    total_budget : float
        Budget that each window must not exceed.

    Raises
    ------
    BudgetViolationError
        Reporting the stream, the first offending window and its total.
    """
    w = check_window(window_size)
    budget = check_budget(total_budget, name="total_budget")
    arr = np.atleast_2d(np.asarray(spends, dtype=float))
    if np.any(arr < 0.0):
        raise ValueError("spends must be non-negative")
    n_slots = arr.shape[1]
    cumulative = np.zeros((arr.shape[0], n_slots + 1))
    np.cumsum(arr, axis=1, out=cumulative[:, 1:])
    width = min(w, n_slots)
    window_totals = cumulative[:, width:] - cumulative[:, :-width]
    over = window_totals > budget + tolerance
    if over.any():
        stream, start = np.argwhere(over)[0]
        raise BudgetViolationError(
            f"stream {stream}: slots [{start}, {start + width}) spend "
            f"{window_totals[stream, start]:.6g} > budget {budget:.6g}")
