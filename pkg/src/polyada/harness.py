"""Seeded experiment runner comparing adaptive and fixed-bin estimates.

A sweep runs `trials` independent scenarios per query budget k.  Each
scenario draws a fresh random mixture and dataset from a seed derived as
SeedSequence([master_seed, k, trial]), then every requested mode is scored
against the same dataset, so per-trial comparisons between modes are
paired.  Output rows are canonically ordered and floats are written with 9
significant digits, which makes rerun outputs byte-identical in the
deterministic (posterior-mean) estimator mode.
"""
from __future__ import annotations

import csv
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .analyst import DEFAULT_ETA_GROWTH, DEFAULT_ETA_SCALE, default_prior_spec, run_ada
from .baseline import histogram_estimate
from .datagen import DEFAULT_X_LIM, random_mixture, sample_in_domain
from .estimate import DensityEstimate, flat_estimate, interpolated_estimate
from .metrics import DEFAULT_GRID_POINTS, mse, tv
from .partition import Interval
from .polya import averaged_sample_mass_tree, leaf_cells, mean_mass_tree
from .responder import Dataset

ALL_MODES = ("nada", "flat", "mid", "junc")
DEFAULT_K_GRID = (1, 5, 10, 25, 50, 80, 150, 300, 500, 1000)
SUMMARY_STATS = ("mean", "std", "median", "p5", "p25", "p75", "p95")

RESULT_FIELDS = ("k", "mode", "trial", "seed", "mse", "tv", "error")
SUMMARY_FIELDS = ("k", "mode", "stat", "value")


def parse_estimator(spec: str) -> int | None:
    """Return None for the posterior-mean estimator, or the draw count for
    the node-wise average of sampled mass trees ("sample:N")."""
    if spec == "mean":
        return None
    if spec.startswith("sample:"):
        try:
            draws = int(spec.split(":", 1)[1])
        except ValueError:
            draws = 0
        if draws >= 1:
            return draws
    raise ValueError(f"estimator must be 'mean' or 'sample:N' with N >= 1, got {spec!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 10_000
    ks: tuple[int, ...] = DEFAULT_K_GRID
    trials: int = 50
    modes: tuple[str, ...] = ALL_MODES
    master_seed: int = 0
    estimator: str = "mean"
    grid_points: int = DEFAULT_GRID_POINTS
    eta_scale: float = DEFAULT_ETA_SCALE
    eta_growth: float = DEFAULT_ETA_GROWTH
    l_max: int | None = None
    workers: int = 1
    out: str = "results"

    def __post_init__(self):
        object.__setattr__(self, "ks", tuple(int(k) for k in self.ks))
        object.__setattr__(self, "modes", tuple(dict.fromkeys(self.modes)))
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.ks or any(k < 1 for k in self.ks):
            raise ValueError(f"k values must be a nonempty list of positive integers, got {self.ks}")
        if not self.modes:
            raise ValueError("modes must be nonempty")
        unknown = [m for m in self.modes if m not in ALL_MODES]
        if unknown:
            raise ValueError(f"unknown modes {unknown}, valid modes are {ALL_MODES}")
        if self.grid_points < 2:
            raise ValueError(f"grid_points must be >= 2, got {self.grid_points}")
        if not self.eta_scale > 0 or not self.eta_growth > 0:
            raise ValueError("eta_scale and eta_growth must be positive")
        if self.l_max is not None and self.l_max < 1:
            raise ValueError(f"l_max must be >= 1, got {self.l_max}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        parse_estimator(self.estimator)

    @property
    def domain(self) -> Interval:
        return Interval(-DEFAULT_X_LIM, DEFAULT_X_LIM)


_CONFIG_KEYS = (
    "n", "k", "trials", "modes", "seed", "estimator", "grid",
    "eta_scale", "eta_growth", "l_max", "workers", "out",
)


def apply_entries(config: ExperimentConfig, entries: Mapping[str, str]) -> ExperimentConfig:
    """Overlay string-valued settings (from a config file or CLI flags)."""
    fields = {}
    for key, value in entries.items():
        if key == "n":
            fields["n"] = int(value)
        elif key == "k":
            fields["ks"] = tuple(int(part) for part in value.split(",") if part.strip())
        elif key == "trials":
            fields["trials"] = int(value)
        elif key == "modes":
            fields["modes"] = tuple(part.strip() for part in value.split(",") if part.strip())
        elif key == "seed":
            fields["master_seed"] = int(value)
        elif key == "estimator":
            fields["estimator"] = value
        elif key == "grid":
            fields["grid_points"] = int(value)
        elif key == "eta_scale":
            fields["eta_scale"] = float(value)
        elif key == "eta_growth":
            fields["eta_growth"] = float(value)
        elif key == "l_max":
            fields["l_max"] = None if value.lower() in ("none", "") else int(value)
        elif key == "workers":
            fields["workers"] = int(value)
        elif key == "out":
            fields["out"] = value
        else:
            raise ValueError(f"unknown config key {key!r}, valid keys: {', '.join(_CONFIG_KEYS)}")
    return replace(config, **fields)


def parse_config_file(path) -> dict[str, str]:
    """Read `key = value` lines; blank lines and # comments are ignored."""
    entries: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            entries[key.strip()] = value.strip()
    return entries


def load_config(path=None, overrides: Mapping[str, str] | None = None) -> ExperimentConfig:
    config = ExperimentConfig()
    if path is not None:
        config = apply_entries(config, parse_config_file(path))
    if overrides:
        config = apply_entries(config, overrides)
    return config


@dataclass(frozen=True)
class TrialResult:
    k: int
    mode: str
    trial: int
    seed: int
    mse: float
    tv: float
    wall_time: float = 0.0
    error: str | None = None


def result_order(result: TrialResult):
    return (result.k, result.mode, result.trial)


def derive_streams(master_seed: int, k: int, trial: int):
    """Stable per-scenario seeding: a fingerprint of the stream plus
    independent child seeds for the mixture, the dataset, and any estimator
    sampling."""
    root = np.random.SeedSequence([master_seed, k, trial])
    fingerprint = int(root.generate_state(1)[0])
    mixture_seq, data_seq, estimator_seq = root.spawn(3)
    return fingerprint, mixture_seq, data_seq, estimator_seq


def make_scenario(config: ExperimentConfig, k: int, trial: int):
    """Draw the trial's mixture and dataset; all modes share these."""
    fingerprint, mixture_seq, data_seq, estimator_seq = derive_streams(config.master_seed, k, trial)
    mixture = random_mixture(mixture_seq)
    dataset = sample_in_domain(mixture, config.n, config.domain, data_seq)
    return fingerprint, mixture, dataset, estimator_seq


def adaptive_leaf_cells(config: ExperimentConfig, k: int, dataset: Dataset, estimator_seq):
    """Run the adaptive loop once and convert the posterior to leaf masses."""
    prior = default_prior_spec(
        dataset.n, l_max=config.l_max, scale=config.eta_scale, growth=config.eta_growth,
        half_width=config.domain.length / 2.0,
    )
    tree, _ = run_ada(dataset, prior, budget=k)
    draws = parse_estimator(config.estimator)
    if draws is None:
        masses = mean_mass_tree(tree)
    else:
        masses = averaged_sample_mass_tree(tree, draws, estimator_seq)
    return leaf_cells(tree, masses)


def mode_estimate(mode: str, k: int, dataset: Dataset, leaves) -> DensityEstimate:
    if mode == "nada":
        return histogram_estimate(dataset, k)
    if mode == "flat":
        return flat_estimate(leaves)
    if mode in ("mid", "junc"):
        return interpolated_estimate(leaves, mode)
    raise ValueError(f"unknown mode {mode!r}")


def build_estimates(config: ExperimentConfig, k: int, trial: int = 0):
    """All requested estimates for one scenario; raises on any failure."""
    _, mixture, dataset, estimator_seq = make_scenario(config, k, trial)
    leaves = None
    if any(mode != "nada" for mode in config.modes):
        leaves = adaptive_leaf_cells(config, k, dataset, estimator_seq)
    estimates = {mode: mode_estimate(mode, k, dataset, leaves) for mode in config.modes}
    return mixture, dataset, estimates


def run_trial(config: ExperimentConfig, k: int, trial: int) -> list[TrialResult]:
    """Score every mode on the trial's shared dataset.

    Failures become rows with NaN metrics and an error message rather than
    exceptions, so one bad trial cannot take down a sweep.
    """
    start = time.perf_counter()
    rows: list[TrialResult] = []

    def row(mode, mse_value, tv_value, fingerprint, error=None):
        return TrialResult(k, mode, trial, fingerprint, mse_value, tv_value,
                           time.perf_counter() - start, error)

    try:
        fingerprint, mixture, dataset, estimator_seq = make_scenario(config, k, trial)
    except Exception as exc:
        fingerprint = derive_streams(config.master_seed, k, trial)[0]
        message = f"data generation failed: {exc}"
        return [row(mode, math.nan, math.nan, fingerprint, message) for mode in config.modes]

    leaves = None
    adaptive_error: str | None = None
    if any(mode != "nada" for mode in config.modes):
        try:
            leaves = adaptive_leaf_cells(config, k, dataset, estimator_seq)
        except Exception as exc:
            adaptive_error = f"adaptive run failed: {exc}"

    for mode in config.modes:
        try:
            if mode != "nada" and adaptive_error is not None:
                raise RuntimeError(adaptive_error)
            est = mode_estimate(mode, k, dataset, leaves)
            mse_value = mse(mixture.pdf, est, config.domain, config.grid_points)
            tv_value = tv(mixture.pdf, est, config.domain, config.grid_points)
            rows.append(row(mode, mse_value, tv_value, fingerprint))
        except Exception as exc:
            rows.append(row(mode, math.nan, math.nan, fingerprint, f"{mode} failed: {exc}"))
    return rows


def _run_trial_job(args):
    config, k, trial = args
    return run_trial(config, k, trial)


def run_sweep(config: ExperimentConfig) -> list[TrialResult]:
    """All (k, trial, mode) results in canonical (k, mode, trial) order.

    With workers > 1 trials run in separate processes; the canonical sort
    makes the output independent of scheduling.
    """
    jobs = [(config, k, trial) for k in sorted(set(config.ks)) for trial in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(_run_trial_job, jobs, chunksize=4))
    else:
        chunks = [_run_trial_job(job) for job in jobs]
    return sorted((row for chunk in chunks for row in chunk), key=result_order)


def aggregate(results) -> list[tuple[int, str, str, float]]:
    """Per-(k, mode) summary statistics as (k, mode, stat, value) rows.

    Failed trials are dropped with a warning; a group with no usable trials
    is omitted entirely.
    """
    groups: dict[tuple[int, str], list[TrialResult]] = {}
    for result in sorted(results, key=result_order):
        groups.setdefault((result.k, result.mode), []).append(result)

    rows: list[tuple[int, str, str, float]] = []
    for (k, mode), group in groups.items():
        usable = [r for r in group if r.error is None]
        dropped = len(group) - len(usable)
        if dropped:
            warnings.warn(f"k={k} mode={mode}: dropped {dropped} failed trial(s)", stacklevel=2)
        if not usable:
            warnings.warn(f"k={k} mode={mode}: no usable trials, group omitted", stacklevel=2)
            continue
        for metric in ("mse", "tv"):
            values = np.array([getattr(r, metric) for r in usable])
            stats = {
                "mean": values.mean(),
                "std": values.std(),
                "median": np.median(values),
                "p5": np.percentile(values, 5),
                "p25": np.percentile(values, 25),
                "p75": np.percentile(values, 75),
                "p95": np.percentile(values, 95),
            }
            rows.extend((k, mode, f"{metric}_{name}", float(stats[name])) for name in SUMMARY_STATS)
    return rows


def format_float(value: float) -> str:
    return "%.9g" % value


def _open_writer(path):
    return open(path, "w", encoding="utf-8", newline="")


def emit_results(results, path) -> None:
    """Trial rows as CSV in canonical order, floats at 9 significant digits."""
    with _open_writer(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_FIELDS)
        for r in sorted(results, key=result_order):
            writer.writerow([r.k, r.mode, r.trial, r.seed,
                             format_float(r.mse), format_float(r.tv), r.error or ""])


def read_results(path) -> list[TrialResult]:
    results = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(RESULT_FIELDS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        for record in reader:
            results.append(TrialResult(
                k=int(record["k"]), mode=record["mode"], trial=int(record["trial"]),
                seed=int(record["seed"]), mse=float(record["mse"]), tv=float(record["tv"]),
                error=record["error"] or None,
            ))
    return results


def emit_summary(table, path) -> None:
    """Aggregate rows as (k, mode, stat, value) CSV."""
    with _open_writer(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_FIELDS)
        for k, mode, stat, value in table:
            writer.writerow([k, mode, stat, format_float(value)])


def emit_curves(estimates: Mapping[str, DensityEstimate], true_density, grid, path) -> None:
    """Sampled curves as CSV: one x column, the true density, one column per mode."""
    grid = np.asarray(grid, dtype=float)
    modes = list(estimates)
    with _open_writer(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "true", *modes])
        if grid.size == 0:
            return
        truth = np.asarray(true_density(grid), dtype=float)
        columns = [estimates[mode](grid) for mode in modes]
        for i in range(grid.size):
            writer.writerow([format_float(grid[i]), format_float(truth[i]),
                             *(format_float(col[i]) for col in columns)])
