"""Figure rendering for curve exports and sweep summaries.

Figures are written straight to files (headless backend); the CSVs remain
the primary output and carry the same data.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

MODE_STYLE = {
    "nada": dict(color="tab:gray", linestyle="--"),
    "flat": dict(color="tab:blue", linestyle="-"),
    "mid": dict(color="tab:green", linestyle="-"),
    "junc": dict(color="tab:red", linestyle="-"),
}


def plot_curves(grid, truth, estimates_by_mode, path, title=None) -> None:
    """True density plus one estimated curve per mode."""
    fig, ax = plt.subplots(figsize=(9.0, 4.5))
    ax.plot(grid, truth, color="black", linewidth=1.6, label="true")
    for mode, values in estimates_by_mode.items():
        style = MODE_STYLE.get(mode, {})
        ax.plot(grid, values, linewidth=1.0, alpha=0.9, label=mode, **style)
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_metric_vs_k(summary_rows, metric, path, stat="mean", title=None) -> None:
    """One line per mode of a summary statistic against the query budget k.

    `summary_rows` are (k, mode, stat, value) tuples as produced by the
    sweep aggregation.
    """
    wanted = f"{metric}_{stat}"
    series: dict[str, list[tuple[int, float]]] = {}
    for k, mode, stat_name, value in summary_rows:
        if stat_name == wanted:
            series.setdefault(mode, []).append((k, value))
    if not series:
        raise ValueError(f"no rows with stat {wanted!r}")

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for mode, points in series.items():
        points.sort()
        ks = [p[0] for p in points]
        values = [p[1] for p in points]
        style = MODE_STYLE.get(mode, {})
        ax.plot(ks, values, marker="o", markersize=3.5, linewidth=1.2, label=mode, **style)
    ax.set_xscale("log")
    if all(v > 0 for points in series.values() for _, v in points):
        ax.set_yscale("log")
    ax.set_xlabel("queries k")
    ax.set_ylabel(f"{metric} ({stat})")
    ax.grid(True, which="both", alpha=0.25)
    if title:
        ax.set_title(title)
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def curve_arrays(estimates_by_mode, true_density, grid):
    """Evaluate truth and every mode on the grid, ready for plotting or CSV."""
    grid = np.asarray(grid, dtype=float)
    truth = np.asarray(true_density(grid), dtype=float)
    values = {mode: est(grid) for mode, est in estimates_by_mode.items()}
    return grid, truth, values
