"""Command line interface.

Subcommands: params, perturb, analyze, select-ns, sweep-delta, run.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .clipping import clip_bounds, clip_threshold
from .datasets import load_stream_csv
from .harness import (ExperimentConfig, delta_sweep, format_csv,
                      make_perturber, parse_config, recommended_delta,
                      resolve_stream, run_experiment, ALGORITHMS)
from .ledger import assert_w_event
from .mechanisms import sw_moments, sw_parameters
from .metrics import cosine_distance, mean_squared_error, wasserstein_distance
from .sampling import build_plan, select_sample_count


def _epsilon_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _column(value):
    """CSV column argument: a positional index or a header name."""
    if value is None:
        return None
    return int(value) if value.lstrip("-").isdigit() else value


def cmd_params(args) -> int:
    print("epsilon,half_width,near,far,mean,variance,fourth_central,"
          "clip_threshold,clip_lower,clip_upper")
    for eps in args.epsilon:
        params = sw_parameters(eps)
        moments = sw_moments(eps)
        t = clip_threshold(eps)
        lower, upper = clip_bounds(eps)
        print(f"{eps:.12g},{params.half_width:.12g},{params.near:.12g},"
              f"{params.far:.12g},{moments.mean:.12g},{moments.variance:.12g},"
              f"{moments.fourth_central:.12g},{t:.12g},{lower:.12g},{upper:.12g}")
    return 0


def cmd_perturb(args) -> int:
    stream = load_stream_csv(args.input, column=_column(args.column),
                             normalize=not args.no_normalize)
    perturber = make_perturber(args.algo, args.epsilon, args.window, args.seed)
    published = perturber.fit(stream[np.newaxis, :]).transform(stream[np.newaxis, :])
    spends = perturber.last_spend_matrix_
    assert_w_event(spends, args.window, args.epsilon)
    lines = ["slot,raw,published,budget_spent"]
    for t in range(stream.size):
        lines.append(f"{t},{stream[t]:.12g},{published[0, t]:.12g},"
                     f"{spends[0, t]:.12g}")
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote {stream.size} slots to {args.output}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_analyze(args) -> int:
    truth = load_stream_csv(args.true, column=_column(args.true_column),
                            normalize=not args.no_normalize_true)
    published = load_stream_csv(args.published, column=_column(args.published_column),
                                normalize=False)
    if truth.size != published.size:
        raise SystemExit(f"length mismatch: true has {truth.size} slots, "
                         f"published has {published.size}")
    for metric in args.metrics.split(","):
        metric = metric.strip()
        if metric == "mse":
            value = mean_squared_error(published, truth)
        elif metric == "cosine":
            value = cosine_distance(published, truth)
        elif metric == "wasserstein":
            value = wasserstein_distance(published, truth)
        else:
            raise SystemExit(f"unknown metric {metric!r}")
        print(f"{metric}={value:.12g}")
    return 0


def cmd_select_ns(args) -> int:
    count = select_sample_count(args.length, args.window, args.epsilon,
                                fixed_budget=args.fixed_budget)
    plan = build_plan(args.length, count, args.window, args.epsilon)
    print(f"n_samples={plan.n_samples}")
    print(f"segment_length={plan.segment_length}")
    print(f"samples_per_window={plan.samples_per_window}")
    print(f"budget_per_sample={plan.budget_per_sample:.12g}")
    return 0


def cmd_sweep_delta(args) -> int:
    stream = resolve_stream(args.dataset, args.length, args.cycles, _column(args.column))
    deltas = [float(part) for part in args.deltas.split(",") if part.strip()]
    curve = delta_sweep(stream, args.epsilon, args.window, deltas,
                        args.query, args.subsequences, args.trials,
                        args.smoothing, args.seed)
    print("delta,mean_mse")
    for delta, mse in curve:
        print(f"{delta:.12g},{mse:.12g}")
    print(f"# recommended_delta={recommended_delta(args.epsilon):.12g}")
    return 0


def cmd_run(args) -> int:
    config = parse_config(Path(args.config).read_text())
    if args.output:
        config.output = args.output
    rows = run_experiment(config)
    text = format_csv(rows)
    if config.output:
        Path(config.output).write_text(text)
        print(f"wrote {len(rows)} rows to {config.output}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldpstream",
        description="Locally differentially private stream publication")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="print mechanism parameters and moments")
    p.add_argument("--epsilon", type=_epsilon_list, required=True,
                   help="comma separated privacy budgets")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("perturb", help="publish one CSV stream")
    p.add_argument("--input", required=True)
    p.add_argument("--column", default=None)
    p.add_argument("--algo", choices=ALGORITHMS, default="app")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.add_argument("--no-normalize", action="store_true",
                   help="input is already in [0, 1]")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("analyze", help="score a published stream against truth")
    p.add_argument("--true", required=True)
    p.add_argument("--published", required=True)
    p.add_argument("--true-column", default=None)
    p.add_argument("--published-column", default="published")
    p.add_argument("--metrics", default="mse,cosine")
    p.add_argument("--no-normalize-true", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("select-ns", help="choose a sampling plan")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--fixed-budget", type=float, default=None,
                   help="score every candidate at this budget instead of "
                        "each plan's own")
    p.set_defaults(func=cmd_select_ns)

    p = sub.add_parser("sweep-delta", help="sweep the clip interval adjustment")
    p.add_argument("--dataset", default="constant")
    p.add_argument("--length", type=int, default=200)
    p.add_argument("--cycles", type=float, default=4.0)
    p.add_argument("--column", default=None)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--deltas", default="-0.4,-0.3,-0.2,-0.1,0,0.1,0.2,0.3,0.4,0.5")
    p.add_argument("--query", type=int, default=20)
    p.add_argument("--subsequences", type=int, default=50)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--smoothing", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sweep_delta)

    p = sub.add_parser("run", help="run an experiment config to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_run)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
