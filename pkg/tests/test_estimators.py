import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from ldpstream.clipping import bounds_from_delta, clip_bounds
from ldpstream.estimators import (
    AppPerturber,
    BaSwPerturber,
    CappPerturber,
    IppPerturber,
    MovingAverageSmoother,
    SampledPerturber,
    SwDirectPerturber,
)
from ldpstream.ledger import assert_w_event
from ldpstream.sampling import select_sample_count
from ldpstream.smoothing import moving_average

ALL_PERTURBERS = [SwDirectPerturber, IppPerturber, AppPerturber,
                  CappPerturber, BaSwPerturber, SampledPerturber]


def stream_batch(rows=3, slots=40, seed=1):
    return np.random.default_rng(seed).random((rows, slots))


@pytest.mark.parametrize("cls", ALL_PERTURBERS)
def test_clone_and_params_roundtrip(cls):
    est = cls(epsilon=0.7, window_size=6, random_state=11)
    params = est.get_params()
    assert params["epsilon"] == 0.7
    assert params["window_size"] == 6
    cloned = clone(est)
    assert cloned.get_params() == params
    est.set_params(epsilon=1.3)
    assert est.epsilon == 1.3


@pytest.mark.parametrize("cls", ALL_PERTURBERS)
def test_same_seed_same_output(cls):
    X = stream_batch()
    a = cls(epsilon=1.0, window_size=5, random_state=42).fit(X).transform(X)
    b = cls(epsilon=1.0, window_size=5, random_state=42).fit(X).transform(X)
    assert np.array_equal(a, b)
    c = cls(epsilon=1.0, window_size=5, random_state=43).fit(X).transform(X)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize("cls", ALL_PERTURBERS)
def test_shapes_and_budget_audit(cls):
    X = stream_batch(rows=4, slots=35, seed=2)
    est = cls(epsilon=0.8, window_size=7, random_state=3).fit(X)
    out = est.transform(X)
    assert out.shape == X.shape
    assert est.last_spend_matrix_.shape == X.shape
    assert_w_event(est.last_spend_matrix_, 7, 0.8)


def test_one_dimensional_input_becomes_one_stream():
    x = np.random.default_rng(4).random(25)
    est = AppPerturber(epsilon=1.0, window_size=5, random_state=0).fit(x)
    out = est.transform(x)
    assert out.shape == (1, 25)


def test_transform_requires_fit():
    with pytest.raises(NotFittedError):
        AppPerturber().transform(stream_batch())


@pytest.mark.parametrize("cls", ALL_PERTURBERS)
def test_fit_validates_budget(cls):
    with pytest.raises(ValueError):
        cls(epsilon=-1.0).fit(stream_batch())


def test_fit_rejects_values_outside_unit_interval():
    with pytest.raises(ValueError):
        AppPerturber().fit(np.array([[0.2, 1.4]]))


def test_accumulated_deviation_is_stashed():
    X = stream_batch(rows=2, slots=30, seed=6)
    est = AppPerturber(epsilon=1.0, window_size=5, random_state=1).fit(X)
    published = est.transform(X)
    assert est.last_accumulated_deviation_.shape == (2,)
    # Telescoping, through the estimator API.
    gap = X.sum(axis=1) - (published.sum(axis=1) + est.last_accumulated_deviation_)
    assert np.max(np.abs(gap)) < 1e-9
    sw = SwDirectPerturber(epsilon=1.0, window_size=5, random_state=1).fit(X)
    sw.transform(X)
    assert not hasattr(sw, "last_accumulated_deviation_")


def test_clip_scope_changes_interval_direction():
    X = stream_batch()
    window = CappPerturber(epsilon=1.0, window_size=10, clip_scope="window")
    slot = CappPerturber(epsilon=1.0, window_size=10, clip_scope="slot")
    window.fit(X)
    slot.fit(X)
    # Whole-window sizing narrows the interval at this budget; per-slot
    # sizing would widen it instead.
    assert window._bounds() == clip_bounds(1.0)
    assert window._bounds()[0] > 0.0
    assert slot._bounds() == clip_bounds(0.1)
    assert slot._bounds()[0] < 0.0


def test_delta_overrides_derived_interval():
    est = CappPerturber(epsilon=1.0, window_size=10, delta=0.2)
    est.fit(stream_batch())
    assert est._bounds() == bounds_from_delta(0.2)


def test_unknown_clip_scope_fails_at_fit():
    with pytest.raises(ValueError):
        CappPerturber(clip_scope="stream").fit(stream_batch())


def test_absorption_spends_are_zero_or_boosted():
    rng = np.random.default_rng(9)
    X = np.clip(np.cumsum(rng.uniform(-0.1, 0.1, (2, 120)), axis=1) + 0.5,
                0.0, 1.0)
    est = BaSwPerturber(epsilon=1.0, window_size=10, random_state=2).fit(X)
    est.transform(X)
    spends = est.last_spend_matrix_
    share = 0.1
    positive = spends[spends > 0.0]
    assert positive.min() >= share - 1e-12
    assert spends.max() <= 1.0 + 1e-9
    assert (spends == 0.0).any()


def test_sampled_selects_count_when_unset():
    X = stream_batch(rows=2, slots=60, seed=12)
    est = SampledPerturber(epsilon=1.0, window_size=7, random_state=0).fit(X)
    assert est.plan_.n_samples == select_sample_count(60, 7, 1.0)
    est2 = SampledPerturber(epsilon=1.0, window_size=7, n_samples=5,
                            random_state=0).fit(X)
    assert est2.plan_.n_samples == 5


def test_sampled_reports_are_segmentwise_constant():
    X = stream_batch(rows=3, slots=41, seed=13)
    est = SampledPerturber(epsilon=1.0, window_size=10, n_samples=4,
                           random_state=7).fit(X)
    out = est.transform(X)
    for lo, hi in est.plan_.segment_bounds:
        segment = out[:, lo:hi]
        assert np.all(segment == segment[:, :1])


def test_sampled_spends_sit_on_segment_ends():
    X = stream_batch(rows=2, slots=40, seed=14)
    est = SampledPerturber(epsilon=1.0, window_size=10, n_samples=4,
                           random_state=7).fit(X)
    est.transform(X)
    spends = est.last_spend_matrix_
    last_slots = {hi - 1 for _, hi in est.plan_.segment_bounds}
    for t in range(40):
        if t in last_slots:
            assert np.all(spends[:, t] == pytest.approx(
                est.plan_.budget_per_sample))
        else:
            assert np.all(spends[:, t] == 0.0)
    assert_w_event(spends, 10, 1.0)


def test_sampled_interval_length_is_fixed_at_fit():
    X = stream_batch(rows=2, slots=40, seed=15)
    est = SampledPerturber(epsilon=1.0, window_size=10, n_samples=4,
                           random_state=7).fit(X)
    with pytest.raises(ValueError):
        est.transform(stream_batch(rows=2, slots=39, seed=15))


def test_sampled_rejects_unknown_inner():
    with pytest.raises(ValueError):
        SampledPerturber(inner="laplace").fit(stream_batch())


@pytest.mark.parametrize("inner", ["sw", "ipp", "app", "capp"])
def test_sampled_inner_variants_run(inner):
    X = stream_batch(rows=2, slots=30, seed=16)
    est = SampledPerturber(epsilon=1.0, window_size=6, inner=inner,
                           n_samples=5, random_state=1).fit(X)
    out = est.transform(X)
    assert out.shape == X.shape
    assert_w_event(est.last_spend_matrix_, 6, 1.0)


def test_smoother_matches_function():
    X = stream_batch(rows=2, slots=30, seed=17)
    est = MovingAverageSmoother(half_width=2).fit(X)
    assert np.array_equal(est.transform(X), moving_average(X, 2))


def test_smoother_validates_half_width():
    with pytest.raises(ValueError):
        MovingAverageSmoother(half_width=-2).fit(stream_batch())


def test_deviation_feedback_reduces_long_run_bias():
    """Paired trials show the deviation-corrected inputs beat direct SW.

    The feedback only helps once the per-slot noise is small enough that the
    correction signal survives input clipping, so the comparison runs at a
    per-slot budget of 2. Common random numbers pair each trial.
    """
    from ldpstream.harness import derive_seed, one_sided_sign_test

    stream = np.random.default_rng(20260821).random(200)
    diffs = []
    for trial in range(300):
        seed = derive_seed(20260821, trial)
        bias = {}
        for cls in (IppPerturber, SwDirectPerturber):
            est = cls(epsilon=2.0, window_size=1, random_state=seed)
            published = est.fit_transform(stream[None, :])[0]
            bias[cls] = abs(np.mean(stream - published))
        diffs.append(bias[SwDirectPerturber] - bias[IppPerturber])
    result = one_sided_sign_test(diffs)
    assert result.n_positive == 185
    assert result.p_value < 0.05
