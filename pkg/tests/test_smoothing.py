import numpy as np
import pytest

from ldpstream.smoothing import moving_average


def test_three_slot_window():
    out = moving_average([1.0, 2.0, 3.0], half_width=1)
    assert out.tolist() == [1.5, 2.0, 2.5]


def test_boundary_windows_shrink():
    out = moving_average(np.arange(7.0), half_width=2)
    # First output averages slots 0..2, the interior gets all five.
    assert out[0] == pytest.approx(1.0)
    assert out[1] == pytest.approx(1.5)
    assert out[3] == pytest.approx(3.0)
    assert out[-1] == pytest.approx(5.0)


def test_zero_half_width_copies():
    x = np.array([0.3, 0.7])
    out = moving_average(x, half_width=0)
    assert out is not x
    assert np.array_equal(out, x)


def test_constant_stream_unchanged():
    out = moving_average(np.full(20, 0.4), half_width=3)
    assert np.allclose(out, 0.4, atol=1e-15)


def test_window_wider_than_stream():
    out = moving_average([1.0, 2.0, 4.0], half_width=10)
    assert np.allclose(out, 7.0 / 3.0)


def test_batch_matches_rowwise():
    rng = np.random.default_rng(5)
    x = rng.random((4, 30))
    out = moving_average(x, half_width=2)
    for i in range(4):
        assert np.allclose(out[i], moving_average(x[i], half_width=2), atol=1e-12)


def test_matches_naive_mean():
    rng = np.random.default_rng(8)
    x = rng.random(50)
    out = moving_average(x, half_width=4)
    for t in range(50):
        lo, hi = max(t - 4, 0), min(t + 5, 50)
        assert out[t] == pytest.approx(np.mean(x[lo:hi]), abs=1e-12)


def test_interior_variance_drops_by_window_size():
    rng = np.random.default_rng(13)
    noise = rng.standard_normal((4000, 101))
    smoothed = moving_average(noise, half_width=1)
    ratio = np.var(smoothed[:, 50]) / np.var(noise[:, 50])
    assert ratio == pytest.approx(1.0 / 3.0, rel=0.1)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        moving_average([1.0, 2.0], half_width=-1)
    with pytest.raises(ValueError):
        moving_average(np.float64(1.0), half_width=1)
