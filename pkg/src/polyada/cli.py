"""Command-line front end.

Subcommands:

* sweep      run seeded trials over the configured k grid; writes
             results.csv, summary.csv, and summary figures.
* curves     render per-mode density curves for a few budgets; writes one
             CSV and one figure per k.
* aggregate  recompute summary statistics from an existing results.csv.

Settings come from defaults, then an optional `key = value` config file
(--config), then CLI flags, later layers winning.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import harness, plots

CURVES_DEFAULT_KS = (25, 80, 1000)
CURVES_DEFAULT_GRID = 2001

_FLAG_HELP = {
    "n": "dataset size per trial",
    "k": "comma-separated query budgets, e.g. 1,5,25",
    "trials": "trials per k value",
    "modes": "comma-separated subset of nada,flat,mid,junc",
    "seed": "master seed for the trial seed derivation",
    "estimator": "'mean' (deterministic) or 'sample:N' (average of N sampled mass trees)",
    "grid": "number of uniform grid points",
    "out": "output directory",
}


def _add_config_flags(parser: argparse.ArgumentParser, keys) -> None:
    parser.add_argument("--config", metavar="FILE", help="path to a 'key = value' config file")
    for key in keys:
        parser.add_argument(f"--{key}", help=_FLAG_HELP[key])


def _overrides(args: argparse.Namespace, keys) -> dict[str, str]:
    return {key: getattr(args, key) for key in keys if getattr(args, key, None) is not None}


def _out_dir(config_out: str) -> Path:
    out = Path(config_out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _report_failures(results) -> int:
    failures = [r for r in results if r.error is not None]
    for r in failures:
        print(f"error: k={r.k} mode={r.mode} trial={r.trial}: {r.error}", file=sys.stderr)
    if failures:
        print(f"{len(failures)} trial row(s) failed", file=sys.stderr)
        return 1
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    keys = ("n", "k", "trials", "modes", "seed", "estimator", "grid", "out")
    config = harness.load_config(args.config, _overrides(args, keys))
    results = harness.run_sweep(config)
    out = _out_dir(config.out)

    harness.emit_results(results, out / "results.csv")
    print(f"wrote {out / 'results.csv'} ({len(results)} rows)")
    table = harness.aggregate(results)
    harness.emit_summary(table, out / "summary.csv")
    print(f"wrote {out / 'summary.csv'}")
    if table:
        for metric in ("mse", "tv"):
            fig_path = out / f"{metric}_vs_k.png"
            plots.plot_metric_vs_k(table, metric, fig_path)
            print(f"wrote {fig_path}")
    return _report_failures(results)


def cmd_curves(args: argparse.Namespace) -> int:
    keys = ("n", "k", "modes", "seed", "estimator", "out")
    config = harness.load_config(args.config, _overrides(args, keys))
    file_entries = harness.parse_config_file(args.config) if args.config else {}
    if args.k is None and "k" not in file_entries:
        config = replace(config, ks=CURVES_DEFAULT_KS)
    export_points = int(args.grid) if args.grid is not None else CURVES_DEFAULT_GRID
    out = _out_dir(config.out)

    grid = np.linspace(config.domain.lo, config.domain.hi, export_points)
    for k in sorted(set(config.ks)):
        mixture, _, estimates = harness.build_estimates(config, k, trial=0)
        csv_path = out / f"curves_k{k}.csv"
        harness.emit_curves(estimates, mixture.pdf, grid, csv_path)
        xs, truth, values = plots.curve_arrays(estimates, mixture.pdf, grid)
        fig_path = out / f"curves_k{k}.png"
        plots.plot_curves(xs, truth, values, fig_path, title=f"n={config.n}, k={k}")
        print(f"wrote {csv_path} and {fig_path}")
    return 0


def cmd_aggregate(args: argparse.Namespace) -> int:
    results = harness.read_results(args.results)
    table = harness.aggregate(results)
    out = _out_dir(args.out)
    harness.emit_summary(table, out / "summary.csv")
    print(f"wrote {out / 'summary.csv'}")
    if table:
        for metric in ("mse", "tv"):
            fig_path = out / f"{metric}_vs_k.png"
            plots.plot_metric_vs_k(table, metric, fig_path)
            print(f"wrote {fig_path}")
    return _report_failures(results)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyada",
        description="Adaptive counting-query density estimation experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run seeded trials over a k grid and summarize")
    _add_config_flags(sweep, ("n", "k", "trials", "modes", "seed", "estimator", "grid", "out"))
    sweep.set_defaults(func=cmd_sweep)

    curves = sub.add_parser("curves", help="export per-mode density curves for a few budgets")
    _add_config_flags(curves, ("n", "k", "modes", "seed", "estimator", "grid", "out"))
    curves.set_defaults(func=cmd_curves)

    aggregate = sub.add_parser("aggregate", help="summarize an existing results.csv")
    aggregate.add_argument("results", help="path to a results.csv from a sweep")
    aggregate.add_argument("--out", default="results", help=_FLAG_HELP["out"])
    aggregate.set_defaults(func=cmd_aggregate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
