"""Reproducible experiment harness.

Protocol, matching the evaluation the library is judged against: per
trial, draw a set of query subsequences from the stream, perturb each
subsequence end to end with every algorithm under test, smooth, and score
mean estimation error and cosine distance per subsequence. Algorithms
within a trial share one random tape (common random numbers), so paired
per-trial comparisons reflect structure instead of draw luck; the tape
never depends on the algorithm, which keeps every marginal distribution
exactly what it would be in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .clipping import clip_threshold
from .datasets import (constant_stream, load_stream_csv, pulse_stream,
                       sample_subsequence_starts, sinusoidal_stream)
from .estimators import (AppPerturber, BaSwPerturber, CappPerturber,
                         IppPerturber, SampledPerturber, SwDirectPerturber)
from .metrics import cosine_distance
from .smoothing import moving_average
from .validation import check_budget, check_window

MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> int:
    """One step of the splitmix64 sequence; used to derive independent seeds."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed: int, *parts: int) -> int:
    """Mix a master seed with integer tags into one 64-bit seed."""
    state = splitmix64(master_seed & MASK64)
    for part in parts:
        state = splitmix64(state ^ (part & MASK64))
    return state


# Tags keep seed streams for different purposes disjoint.
_TAG_SUBSEQUENCES = 0x51
_TAG_TAPE = 0x7A

ALGORITHMS = ("sw", "ipp", "app", "capp", "ba_sw", "app_s", "capp_s")


def make_perturber(name: str, epsilon: float, window_size: int, seed: int):
    """Instantiate a perturber by its short name."""
    if name == "sw":
        return SwDirectPerturber(epsilon, window_size, random_state=seed)
    if name == "ipp":
        return IppPerturber(epsilon, window_size, random_state=seed)
    if name == "app":
        return AppPerturber(epsilon, window_size, random_state=seed)
    if name == "capp":
        return CappPerturber(epsilon, window_size, random_state=seed)
    if name == "ba_sw":
        return BaSwPerturber(epsilon, window_size, random_state=seed)
    if name == "app_s":
        return SampledPerturber(epsilon, window_size, inner="app",
                                random_state=seed)
    if name == "capp_s":
        return SampledPerturber(epsilon, window_size, inner="capp",
                                random_state=seed)
    raise ValueError(f"unknown algorithm {name!r}; choose from {ALGORITHMS}")


def resolve_stream(dataset: str, length: int, cycles: float = 4.0,
                   column=None) -> np.ndarray:
    """Turn a dataset name or CSV path into a stream array."""
    if dataset == "constant":
        return constant_stream(length)
    if dataset == "pulse":
        return pulse_stream(length)
    if dataset == "sinusoidal":
        return sinusoidal_stream(length, cycles=cycles)
    path = Path(dataset)
    if path.suffix.lower() == ".csv" or path.exists():
        return load_stream_csv(path, column=column)
    raise ValueError(
        f"unknown dataset {dataset!r}: expected constant, pulse, sinusoidal "
        f"or a CSV path")


@dataclass
class ExperimentConfig:
    """Flat description of one experiment run."""

    dataset: str = "sinusoidal"
    length: int = 300
    cycles: float = 4.0
    algorithms: tuple = ("sw", "ipp", "app", "capp")
    epsilons: tuple = (0.1, 0.5, 1.0, 2.0, 4.0)
    window_size: int = 10
    query_length: int = 30
    n_subsequences: int = 50
    n_trials: int = 100
    smoothing_half_width: int = 1
    master_seed: int = 0
    column: str | None = None
    output: str | None = None
    extras: dict = field(default_factory=dict)


def parse_config(text: str) -> ExperimentConfig:
    """Parse a flat key=value config; '#' starts a comment."""
    config = ExperimentConfig()
    casts = {
        "dataset": str, "length": int, "cycles": float,
        "window_size": int, "query_length": int, "n_subsequences": int,
        "n_trials": int, "smoothing_half_width": int, "master_seed": int,
        "column": str, "output": str,
    }
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "algorithms":
            config.algorithms = tuple(v.strip() for v in value.split(",") if v.strip())
        elif key == "epsilons":
            config.epsilons = tuple(float(v) for v in value.split(",") if v.strip())
        elif key in casts:
            setattr(config, key, casts[key](value))
        else:
            config.extras[key] = value
    return config


def evaluate_algorithms(stream, algorithms, epsilon, window_size, query_length,
                        n_subsequences, n_trials, smoothing_half_width,
                        master_seed):
    """Run the subsequence protocol and return per-trial metric arrays.

    Returns
    -------
    dict mapping algorithm name to {"mse": ndarray, "cosine": ndarray},
    each of length n_trials. "mse" is the squared error of the window mean
    estimate; "cosine" the cosine distance of the smoothed window.
    """
    stream = np.asarray(stream, dtype=float)
    eps = check_budget(epsilon)
    w = check_window(window_size)
    q = check_window(query_length, name="query_length")
    results = {name: {"mse": np.empty(n_trials), "cosine": np.empty(n_trials)}
               for name in algorithms}
    offsets = np.arange(q)
    for trial in range(n_trials):
        sub_rng = np.random.default_rng(
            derive_seed(master_seed, _TAG_SUBSEQUENCES, trial))
        starts = sample_subsequence_starts(stream.size, q, n_subsequences, sub_rng)
        windows = stream[starts[:, np.newaxis] + offsets]
        true_means = windows.mean(axis=1)
        tape_seed = derive_seed(master_seed, _TAG_TAPE, trial)
        for name in algorithms:
            perturber = make_perturber(name, eps, w, tape_seed)
            published = perturber.fit(windows).transform(windows)
            smoothed = moving_average(published, smoothing_half_width)
            errors = smoothed.mean(axis=1) - true_means
            results[name]["mse"][trial] = float(np.mean(errors ** 2))
            results[name]["cosine"][trial] = float(
                np.mean(cosine_distance(smoothed, windows)))
    return results


@dataclass(frozen=True)
class SignTestResult:
    n_positive: int
    n_nonzero: int
    p_value: float


def one_sided_sign_test(differences) -> SignTestResult:
    """Exact one-sided sign test for paired differences favoring > 0.

    Ties drop out, as usual for the sign test. The p-value is the binomial
    tail P[X >= n_positive] for X ~ Binomial(n_nonzero, 1/2); with no
    informative pairs at all the test is vacuous and the p-value is 1.
    """
    diffs = np.asarray(differences, dtype=float)
    n_positive = int(np.sum(diffs > 0.0))
    n_nonzero = int(np.sum(diffs != 0.0))
    if n_nonzero == 0:
        return SignTestResult(0, 0, 1.0)
    tail = sum(math.comb(n_nonzero, k) for k in range(n_positive, n_nonzero + 1))
    return SignTestResult(n_positive, n_nonzero, tail / 2.0 ** n_nonzero)


def run_experiment(config: ExperimentConfig) -> list[dict]:
    """Run the configured grid and return flat result rows."""
    stream = resolve_stream(config.dataset, config.length, config.cycles,
                            config.column)
    rows = []
    for eps in config.epsilons:
        per_algo = evaluate_algorithms(
            stream, config.algorithms, eps, config.window_size,
            config.query_length, config.n_subsequences, config.n_trials,
            config.smoothing_half_width, config.master_seed)
        for name in config.algorithms:
            for metric in ("mse", "cosine"):
                values = per_algo[name][metric]
                rows.append({
                    "dataset": config.dataset,
                    "algo": name,
                    "eps": eps,
                    "w": config.window_size,
                    "q": config.query_length,
                    "trial_count": config.n_trials,
                    "metric": metric,
                    "mean": float(values.mean()),
                    "stderr": float(values.std(ddof=1) / math.sqrt(len(values)))
                    if len(values) > 1 else 0.0,
                })
    return rows


CSV_HEADER = "dataset,algo,eps,w,q,trial_count,metric,mean,stderr"


def format_csv(rows) -> str:
    """Deterministic CSV rendering of result rows."""
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join([
            str(row["dataset"]), str(row["algo"]), f"{row['eps']:.12g}",
            str(row["w"]), str(row["q"]), str(row["trial_count"]),
            str(row["metric"]), f"{row['mean']:.12g}", f"{row['stderr']:.12g}",
        ]))
    return "\n".join(lines) + "\n"


def write_csv(rows, path) -> None:
    Path(path).write_text(format_csv(rows))


def delta_sweep(stream, epsilon, window_size, deltas, query_length,
                n_subsequences, n_trials, smoothing_half_width,
                master_seed) -> list[tuple[float, float]]:
    """Mean estimation MSE of the clipped perturber across explicit deltas.

    Every delta sees the same trials and tapes, so the curve shape is not
    an artifact of draw luck. Returns (delta, mean_mse) pairs in input
    order.
    """
    stream = np.asarray(stream, dtype=float)
    eps = check_budget(epsilon)
    w = check_window(window_size)
    q = check_window(query_length, name="query_length")
    offsets = np.arange(q)
    totals = {float(d): 0.0 for d in deltas}
    for trial in range(n_trials):
        sub_rng = np.random.default_rng(
            derive_seed(master_seed, _TAG_SUBSEQUENCES, trial))
        starts = sample_subsequence_starts(stream.size, q, n_subsequences, sub_rng)
        windows = stream[starts[:, np.newaxis] + offsets]
        true_means = windows.mean(axis=1)
        tape_seed = derive_seed(master_seed, _TAG_TAPE, trial)
        for delta in totals:
            perturber = CappPerturber(eps, w, delta=delta, random_state=tape_seed)
            published = perturber.fit(windows).transform(windows)
            smoothed = moving_average(published, smoothing_half_width)
            errors = smoothed.mean(axis=1) - true_means
            totals[delta] += float(np.mean(errors ** 2))
    return [(delta, total / n_trials) for delta, total in totals.items()]


def recommended_delta(epsilon) -> float:
    """Interval adjustment the clipped perturber uses when none is given."""
    return clip_threshold(epsilon)
