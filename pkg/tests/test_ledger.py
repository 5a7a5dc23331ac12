import numpy as np
import pytest

from ldpstream.ledger import (
    SPEND_TOLERANCE,
    BudgetLedger,
    BudgetViolationError,
    assert_w_event,
)


def test_window_sum_matches_recompute():
    rng = np.random.default_rng(1)
    ledger = BudgetLedger(window_size=5, total_budget=1.0)
    spends = rng.uniform(0.0, 0.2, 200)
    for i, s in enumerate(spends):
        ledger.record(s)
        want = spends[max(0, i - 4):i + 1].sum()
        assert ledger.window_spend() == pytest.approx(want, abs=1e-12)
        # The next slot's window drops the oldest of the current five.
        carry = spends[max(0, i - 3):i + 1].sum()
        assert ledger.remaining() == pytest.approx(
            max(1.0 - carry, 0.0), abs=1e-12)
    assert ledger.history == pytest.approx(spends.tolist())


def test_eviction_frees_budget():
    ledger = BudgetLedger(window_size=3, total_budget=1.0)
    for s in (0.5, 0.4, 0.1):
        ledger.record(s)
    # The 0.5 slot leaves the window, so another 0.5 fits.
    ledger.record(0.5)
    assert ledger.window_spend() == pytest.approx(1.0)
    with pytest.raises(BudgetViolationError):
        ledger.record(0.6)


def test_zero_spends_are_free():
    ledger = BudgetLedger(window_size=2, total_budget=0.1)
    ledger.record(0.1)
    ledger.record(0.0)
    ledger.record(0.1)
    assert ledger.window_spend() == pytest.approx(0.1)


def test_overspend_raises_and_leaves_state():
    ledger = BudgetLedger(window_size=4, total_budget=1.0)
    ledger.record(0.9)
    with pytest.raises(BudgetViolationError):
        ledger.record(0.2)
    # The rejected spend must not have been recorded.
    assert ledger.history == [0.9]
    ledger.record(0.1)


def test_negative_spend_rejected():
    ledger = BudgetLedger(window_size=2, total_budget=1.0)
    with pytest.raises(ValueError):
        ledger.record(-0.1)


def test_history_is_a_copy():
    ledger = BudgetLedger(window_size=2, total_budget=1.0)
    ledger.record(0.3)
    ledger.history.append(99.0)
    assert ledger.history == [0.3]


def test_assert_w_event_accepts_share_schedule():
    w, eps = 7, 2.0
    spends = np.full(100, eps / w)
    assert_w_event(spends, w, eps)


def test_assert_w_event_tolerance_edge():
    spends = np.array([0.5, 0.5 + 0.5 * SPEND_TOLERANCE])
    assert_w_event(spends, 2, 1.0)
    with pytest.raises(BudgetViolationError):
        assert_w_event(np.array([0.5, 0.5 + 1e-6]), 2, 1.0)


def test_assert_w_event_overspending_mutant():
    w, eps = 5, 1.0
    spends = np.full(50, eps / w)
    spends[20] = 2.0 * eps / w
    with pytest.raises(BudgetViolationError):
        assert_w_event(spends, w, eps)


def test_assert_w_event_names_stream_and_window():
    spends = np.full((3, 30), 0.1)
    spends[2, 13] = 0.9
    with pytest.raises(BudgetViolationError, match=r"stream 2.*\[9, 14\)"):
        assert_w_event(spends, 5, 1.0)


def test_assert_w_event_short_stream():
    # Fewer slots than the window: the single partial window must fit.
    assert_w_event(np.array([0.3, 0.3, 0.3]), 10, 1.0)
    with pytest.raises(BudgetViolationError):
        assert_w_event(np.array([0.5, 0.5, 0.5]), 10, 1.0)


def test_assert_w_event_rejects_negative():
    with pytest.raises(ValueError):
        assert_w_event(np.array([0.1, -0.1]), 2, 1.0)
