"""Command-line interface.

Subcommands: simulate, fit, score, select-k, experiment, summarize.
Datasets are directories (see dataio); results and summaries are CSV.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import dataio
from .estimators import METHODS, fit
from .harness import (
    ExperimentConfig,
    experiment_preset,
    read_results,
    run_experiment,
    summarize,
    write_results,
    write_summary,
)
from .kmeans import KMeansConfig
from .metrics import MetricReport, score
from .model import population_response, sample_item_params, sample_partition, sample_responses
from .modularity import select_k
from .seeding import stream
from .aggregate import build_aggregates

SCORE_COLUMNS = ("clustering_error", "hamming_error", "nmi", "ari", "rel_l2_error")


def _cmd_simulate(args) -> int:
    j = args.j
    if j is None:
        if args.n % 5 != 0:
            raise ValueError(f"N={args.n} is not divisible by 5; pass --j explicitly")
        j = args.n // 5
    truth = sample_partition(args.n, args.k, stream(args.seed, "partition"))
    thetas = sample_item_params(j, args.k, args.l, args.rho, args.m, stream(args.seed, "items"))
    pop = population_response(truth, thetas)
    tensor = sample_responses(pop, args.m, stream(args.seed, "responses"))
    dataio.save_dataset(
        args.out, tensor, seed=args.seed, k=args.k, labels=truth, thetas=thetas
    )
    return 0


def _cmd_fit(args) -> int:
    tensor, meta = dataio.load_dataset(args.input)
    result = fit(tensor, args.k, args.method, KMeansConfig(), stream(args.seed, "kmeans"))
    from pathlib import Path

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dataio.save_labels(out / "labels.csv", result.z_hat)
    dataio.save_theta_dir(out, result.theta_hats)
    if args.dump_aggregates:
        agg = build_aggregates(tensor)
        dataio.save_matrix(out / "r_sum.csv", agg.r_sum)
        dataio.save_matrix(out / "s_sum.csv", agg.s_sum)
        dataio.save_matrix(out / "s_sum_debiased.csv", agg.s_sum_debiased)
    return 0


def _format_metric(value) -> str:
    return "" if value is None else repr(float(value))


def _cmd_score(args) -> int:
    truth = dataio.load_labels(args.truth)
    est = dataio.load_labels(args.est, n_classes=truth.n_classes)
    theta_true = theta_hat = None
    if args.theta_true and args.theta_est:
        theta_true = dataio.load_theta_dir(args.theta_true)
        theta_hat = dataio.load_theta_dir(args.theta_est)
    report: MetricReport = score(truth, est, theta_true, theta_hat)
    if args.header:
        print(",".join(SCORE_COLUMNS))
    print(
        ",".join(
            _format_metric(getattr(report, col if col != "rel_l2_error" else "relative_l2_error"))
            for col in SCORE_COLUMNS
        )
    )
    return 0


def _cmd_select_k(args) -> int:
    tensor, _ = dataio.load_dataset(args.input)
    curve = select_k(
        tensor, args.method, args.k_min, args.k_max,
        KMeansConfig(), stream(args.seed, "select-k"),
    )
    lines = ["k,Q,selected"]
    for k, q in zip(curve.k_values, curve.q_values):
        q_text = "" if np.isnan(q) else repr(float(q))
        lines.append(f"{int(k)},{q_text},{int(k == curve.k_star)}")
    from pathlib import Path

    Path(args.out).write_text("\n".join(lines) + "\n")
    return 0


def _cmd_experiment(args) -> int:
    if bool(args.config) == bool(args.preset):
        raise ValueError("pass exactly one of --config or --preset")
    if args.config:
        cfg = ExperimentConfig.from_json(args.config)
    else:
        cfg = experiment_preset(args.preset)
    result = run_experiment(cfg, workers=args.workers)
    write_results(result.records, args.out)
    return 0


def _cmd_summarize(args) -> int:
    records = read_results(args.input)
    write_summary(summarize(records), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multilca",
        description="Spectral latent class analysis for multi-layer categorical data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample a synthetic dataset directory")
    p.add_argument("--n", type=int, required=True, help="number of subjects")
    p.add_argument("--j", type=int, default=None, help="number of items (default N/5)")
    p.add_argument("--k", type=int, required=True, help="number of latent classes")
    p.add_argument("--l", type=int, required=True, help="number of layers")
    p.add_argument("--m", type=int, default=5, help="maximum response level")
    p.add_argument("--rho", type=float, required=True, help="sparsity parameter")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output dataset directory")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("fit", help="estimate classes and item parameters")
    p.add_argument("--input", required=True, help="dataset directory")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument(
        "--dump-aggregates",
        action="store_true",
        help="also write r_sum / s_sum / s_sum_debiased CSVs for debugging",
    )
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("score", help="compare two label files, print a metrics CSV row")
    p.add_argument("--truth", required=True, help="true labels.csv (1-based)")
    p.add_argument("--est", required=True, help="estimated labels.csv (1-based)")
    p.add_argument("--theta-true", default=None, help="directory of true theta_*.csv")
    p.add_argument("--theta-est", default=None, help="directory of estimated theta_*.csv")
    p.add_argument("--header", action="store_true", help="print the column names first")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("select-k", help="modularity curve over a range of class counts")
    p.add_argument("--input", required=True, help="dataset directory")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="curve CSV path")
    p.set_defaults(func=_cmd_select_k)

    p = sub.add_parser("experiment", help="run a replication sweep to a results CSV")
    p.add_argument("--config", default=None, help="experiment config JSON")
    p.add_argument(
        "--preset",
        default=None,
        help="named preset (exp1-desk, exp2-desk, exp3-desk, exp*-paper, kselect-desk)",
    )
    p.add_argument("--out", required=True, help="results CSV path")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("summarize", help="aggregate a results CSV into per-point means")
    p.add_argument("--in", dest="input", required=True, help="results CSV")
    p.add_argument("--out", required=True, help="summary CSV path")
    p.set_defaults(func=_cmd_summarize)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
