"""Locally differentially private stream publication.

Square wave reports with deviation feedback, window budget accounting,
query-interval sampling, and a reproducible evaluation harness.
"""

from .clipping import (bounds_from_delta, clip_bounds, clip_threshold,
                       discarding_error, sensitivity_error)
from .estimators import (AppPerturber, BaSwPerturber, CappPerturber,
                         IppPerturber, MovingAverageSmoother, SampledPerturber,
                         SwDirectPerturber)
from .ledger import BudgetLedger, BudgetViolationError, assert_w_event
from .mechanisms import (SquareWaveMechanism, SwMoments, SwParameters,
                         deviation_mean, deviation_second_moment,
                         deviation_variance, sw_moments, sw_parameters)
from .metrics import (cosine_distance, dkw_sample_size, mean_squared_error,
                      wasserstein_distance)
from .sampling import (SamplingPlan, build_plan, select_sample_count,
                       variance_of_sample_variance)
from .smoothing import moving_average

__version__ = "0.1.0"

__all__ = [
    "AppPerturber", "BaSwPerturber", "BudgetLedger", "BudgetViolationError",
    "CappPerturber", "IppPerturber", "MovingAverageSmoother", "SampledPerturber",
    "SamplingPlan", "SquareWaveMechanism", "SwDirectPerturber", "SwMoments",
    "SwParameters", "assert_w_event", "bounds_from_delta", "build_plan",
    "clip_bounds", "clip_threshold", "cosine_distance", "deviation_mean",
    "deviation_second_moment", "deviation_variance", "discarding_error",
    "dkw_sample_size", "mean_squared_error", "moving_average",
    "select_sample_count", "sensitivity_error", "sw_moments", "sw_parameters",
    "variance_of_sample_variance", "wasserstein_distance",
]
