"""Square wave randomizer for numerical values on the unit interval.

A value x in [0, 1] is reported as a draw from a piecewise uniform density
on [-half_width, 1 + half_width]: density ``near`` on the band of radius
``half_width`` around x and density ``far`` everywhere else. The densities
satisfy near/far = exp(epsilon), which gives local differential privacy,
and the band radius is chosen to maximize the mutual information between
input and report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .validation import check_budget

# Below this budget the closed form for the band radius subtracts nearly
# equal quantities; a short power series keeps full precision.
_SERIES_CUTOFF = 1e-4

# Above this budget the unscaled denominator 2 e^eps (e^eps - eps - 1)
# overflows a double, so the formula is rescaled by e^-eps.
_RESCALE_CUTOFF = 300.0


def _radius_direct(eps):
    num = eps * np.exp(eps) - np.expm1(eps)
    den = 2.0 * np.exp(eps) * (np.expm1(eps) - eps)
    return num / den


def _radius_rescaled(eps):
    return (eps - 1.0 + np.exp(-eps)) / (2.0 * (np.expm1(eps) - eps))


def _radius_series(eps):
    # num = sum_{k>=2} (k-1) eps^(k-2) / k!,  den = 2 e^eps sum_{k>=2} eps^(k-2) / k!
    num = 1.0 / 2 + eps * (1.0 / 3 + eps * (1.0 / 8 + eps * (1.0 / 30 + eps / 144.0)))
    den = 1.0 / 2 + eps * (1.0 / 6 + eps * (1.0 / 24 + eps * (1.0 / 120 + eps / 720.0)))
    return num / (2.0 * np.exp(eps) * den)


def _parameter_arrays(eps):
    """Vectorized (half_width, near, far) for an array of budgets."""
    eps = np.asarray(eps, dtype=float)
    small = eps < _SERIES_CUTOFF
    large = eps > _RESCALE_CUTOFF
    mid = np.where(small | large, 1.0, eps)
    b = np.where(small, _radius_series(np.where(small, eps, 1.0)),
                 _radius_direct(mid))
    b = np.where(large, _radius_rescaled(np.where(large, eps, 1.0)), b)
    far = 1.0 / (2.0 * b * np.exp(eps) + 1.0)
    near = np.exp(eps) * far
    return b, near, far


@dataclass(frozen=True)
class SwParameters:
    """Resolved square wave parameters for one budget.

    Attributes
    ----------
    epsilon : float
        Privacy budget of a single report.
    half_width : float
        Radius of the high density band around the true value.
    near : float
        Density inside the band.
    far : float
        Density outside the band; near/far = exp(epsilon).
    """

    epsilon: float
    half_width: float
    near: float
    far: float

    @property
    def support(self) -> tuple[float, float]:
        return (-self.half_width, 1.0 + self.half_width)


def sw_parameters(epsilon) -> SwParameters:
    """Compute the square wave parameters for a privacy budget."""
    eps = check_budget(epsilon)
    b, near, far = _parameter_arrays(eps)
    return SwParameters(epsilon=eps, half_width=float(b), near=float(near),
                        far=float(far))


def _power_gap(n: int, x, b):
    """(x + b)**n - (x - b)**n via the odd binomial terms.

    The direct difference loses every significant digit once b falls below
    x * 2**-52, which happens for budgets beyond roughly 40, and the band
    density multiplying it is exp(epsilon) sized, so the loss is fatal.
    """
    total = 0.0
    for j in range(1, n + 1, 2):
        total = total + math.comb(n, j) * x ** (n - j) * b ** j
    return 2.0 * total


def _raw_moment(k: int, x, b, near, far):
    """k-th raw moment of the report distribution for true value x.

    The band [x - b, x + b] carries density ``near``; the rest of the
    support splits into [-b, x - b] and [x + b, 1 + b], both at ``far``.
    """
    n = k + 1
    band = near * _power_gap(n, x, b) / n
    left = (x - b) ** n - (-b) ** n
    right = (1.0 + b) ** n - (x + b) ** n
    return band + far * (left + right) / n


@dataclass(frozen=True)
class SwMoments:
    mean: float
    variance: float
    fourth_central: float


def sw_moments(epsilon, location=1.0) -> SwMoments:
    """Mean, variance and fourth central moment of a single report.

    Parameters
    ----------
    epsilon : float
        Privacy budget of the report.
    location : float, default 1.0
        True value being reported. The default matches the convention used
        by the sampling planner, which works with the report distribution
        at the top of the unit interval.
    """
    eps = check_budget(epsilon)
    x = float(location)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"location must lie in [0, 1], got {x}")
    b, near, far = _parameter_arrays(eps)
    m1 = _raw_moment(1, x, b, near, far)
    m2 = _raw_moment(2, x, b, near, far)
    m3 = _raw_moment(3, x, b, near, far)
    m4 = _raw_moment(4, x, b, near, far)
    var = m2 - m1 * m1
    mu4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 ** 4
    return SwMoments(mean=float(m1), variance=float(var), fourth_central=float(mu4))


def deviation_mean(epsilon, location) -> float:
    """Expected deviation (true value minus report) for a given true value."""
    eps = check_budget(epsilon)
    x = float(location)
    b, near, far = _parameter_arrays(eps)
    return float(far * (2.0 * x - 1.0) * (1.0 + 2.0 * b) / 2.0)


def deviation_second_moment(epsilon, location) -> float:
    """Second raw moment of the deviation, by direct integration."""
    eps = check_budget(epsilon)
    x = float(location)
    b, near, far = _parameter_arrays(eps)
    poly = 3.0 * x * x - 3.0 * x + 1.0 + 6.0 * b * x * x - 6.0 * b * x + 3.0 * b + 3.0 * b * b
    return float(far * poly / 3.0 + 2.0 * near * b ** 3 / 3.0)


def deviation_variance(epsilon, location=1.0) -> float:
    m = deviation_mean(epsilon, location)
    return deviation_second_moment(epsilon, location) - m * m


def _as_generator(random_state) -> np.random.Generator:
    if isinstance(random_state, np.random.Generator):
        return random_state
    return np.random.default_rng(random_state)


class SquareWaveMechanism:
    """Vectorized square wave randomizer.

    Parameters
    ----------
    epsilon : float or array-like
        Privacy budget per report. An array assigns one budget per stream
        in a batch, which the absorption perturber uses for boosted slots.
    random_state : int, Generator or None
        Source of randomness. A Generator is used as-is so that several
        components can share one tape.
    """

    def __init__(self, epsilon, random_state=None):
        eps = np.asarray(epsilon, dtype=float)
        if eps.ndim == 0:
            check_budget(float(eps) if isinstance(epsilon, np.ndarray) else epsilon)
        elif eps.size and (not np.isfinite(eps).all() or eps.min() <= 0.0
                           or eps.max() > 500.0):
            raise ValueError("all budgets must be finite, positive and at most 500")
        self.epsilon = eps if eps.ndim else float(eps)
        self.half_width, self.near, self.far = _parameter_arrays(eps)
        self._rng = _as_generator(random_state)

    def support(self):
        return (-self.half_width, 1.0 + self.half_width)

    def perturb(self, values):
        """Randomize values in [0, 1].

        Always consumes exactly three uniform draws per element, so two
        mechanisms seeded identically stay aligned draw-for-draw even when
        their inputs differ.
        """
        x = np.asarray(values, dtype=float)
        if x.size and (np.isnan(x).any() or x.min() < -1e-12 or x.max() > 1.0 + 1e-12):
            raise ValueError("mechanism input must lie in [0, 1]")
        x = np.clip(x, 0.0, 1.0)
        b = self.half_width
        band_mass = 2.0 * b * self.near
        rng = self._rng
        in_band = rng.random(x.shape) < band_mass
        offset = rng.uniform(-b, b, x.shape)
        split = rng.random(x.shape)
        # Outside the band the support has total length exactly 1: a stretch
        # of length x left of the band and 1 - x right of it.
        outside = np.where(split < x, -b + split, b + split)
        return np.where(in_band, x + offset, outside)
