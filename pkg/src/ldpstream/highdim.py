"""Multi-dimensional stream strategies.

With d dimensions per slot the per-slot budget share must stretch further.
Budget split divides it across all dimensions every slot; sample split
reports a single dimension per slot at the full share, round-robin, and
the collector carries the last report of each dimension forward.
"""

from __future__ import annotations

import numpy as np

from .steppers import AppStepper
from .validation import check_budget, check_stream_matrix, check_window


def budget_split_publish(X, epsilon, window_size, random_state=None,
                         stepper_cls=AppStepper):
    """Publish every dimension every slot at budget epsilon / (w * d).

    Parameters
    ----------
    X : array-like, shape (n_dims, n_slots)
        One multi-dimensional stream.

    Returns
    -------
    published : ndarray, shape (n_dims, n_slots)
    spends : ndarray, shape (n_dims, n_slots)
        Per-dimension spends; the w-event guarantee holds for the summed
        spend of each slot's column.
    """
    X = check_stream_matrix(X)
    eps = check_budget(epsilon)
    w = check_window(window_size)
    n_dims = X.shape[0]
    # Dimension rows run as a batch; budget per dimension-slot is
    # eps / (w * d), expressed through the stepper's own split.
    stepper = stepper_cls(eps / n_dims, w,
                          random_state=np.random.default_rng(random_state))
    published = np.empty_like(X)
    for t in range(X.shape[1]):
        published[:, t] = stepper.step(X[:, t]).published
    return published, stepper.spend_history().T


def sample_split_publish(X, epsilon, window_size, random_state=None,
                         stepper_cls=AppStepper):
    """Publish one dimension per slot, round-robin, at budget epsilon / w.

    Slots where a dimension is not scheduled repeat its most recent
    report; slots before its first report backfill from that first report
    once it arrives.
    """
    X = check_stream_matrix(X)
    eps = check_budget(epsilon)
    w = check_window(window_size)
    n_dims, n_slots = X.shape
    rng = np.random.default_rng(random_state)
    steppers = [stepper_cls(eps, w, random_state=rng) for _ in range(n_dims)]
    published = np.full_like(X, np.nan)
    spends = np.zeros_like(X)
    for t in range(n_slots):
        dim = t % n_dims
        report = steppers[dim].step(float(X[dim, t]))
        published[dim, t] = report.published
        spends[dim, t] = report.budget_spent
    # Carry forward, then backfill the leading gap of each dimension.
    for dim in range(n_dims):
        row = published[dim]
        seen = np.isfinite(row)
        first = int(np.argmax(seen))
        row[:first] = row[first]
        for t in range(first + 1, n_slots):
            if not seen[t]:
                row[t] = row[t - 1]
    return published, spends
