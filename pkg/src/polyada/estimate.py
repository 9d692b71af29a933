"""Density estimates rendered from leaf-cell masses.

Three renderings of the same (cell, mass) list:

* flat: the classic piecewise-constant histogram, mass / length per cell.
* mid:  each cell's height anchored at its midpoint, linear between
        adjacent anchors, flat from the outermost anchors to the edges.
* junc: like mid, but anchors at unequal-length junctions shift toward the
        boundary, weighted by cell length relative to the longest cell.

With equal-length cells the junction anchors reduce to midpoints, so mid
and junc coincide there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .partition import Interval

_MASS_TOL = 1e-9

MODES = ("flat", "mid", "junc")


@dataclass(frozen=True)
class DensityEstimate:
    """Evaluable piecewise density on a bounded domain; zero outside it.

    For flat mode `xs` holds the n+1 cell edges and `ys` the n cell heights;
    for mid/junc it is a polyline with strictly increasing `xs`.
    """

    mode: str
    domain: Interval
    xs: np.ndarray
    ys: np.ndarray

    def evaluate(self, x):
        scalar = np.ndim(x) == 0
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        if self.mode == "flat":
            idx = np.clip(np.searchsorted(self.xs, x_arr, side="right") - 1, 0, self.ys.size - 1)
            values = self.ys[idx]
        else:
            values = np.interp(x_arr, self.xs, self.ys)
        values = np.where((x_arr < self.domain.lo) | (x_arr > self.domain.hi), 0.0, values)
        return float(values[0]) if scalar else values

    __call__ = evaluate

    def integral(self) -> float:
        """Analytic integral over the domain (no quadrature grid involved)."""
        if self.mode == "flat":
            return float(np.sum(self.ys * np.diff(self.xs)))
        return float(np.trapezoid(self.ys, self.xs))


def _checked_cells(leaves) -> list[tuple[Interval, float]]:
    if not leaves:
        raise ValueError("no leaf cells given")
    cells = sorted(((Interval(*cell), float(mass)) for cell, mass in leaves), key=lambda c: c[0].lo)
    for (prev, _), (cur, _) in zip(cells, cells[1:]):
        if prev.hi != cur.lo:
            raise ValueError(f"leaf cells do not tile: gap between {prev} and {cur}")
    for cell, mass in cells:
        if not cell.length > 0:
            raise ValueError(f"degenerate leaf cell {cell}")
        if mass < 0:
            raise ValueError(f"negative mass {mass} on {cell}")
    total = math.fsum(mass for _, mass in cells)
    if abs(total - 1.0) > _MASS_TOL:
        raise ValueError(f"leaf masses sum to {total}, expected 1 within {_MASS_TOL}")
    return cells


def flat_estimate(leaves) -> DensityEstimate:
    """Piecewise-constant density mass / length on each leaf cell."""
    cells = _checked_cells(leaves)
    edges = np.array([cells[0][0].lo] + [cell.hi for cell, _ in cells])
    heights = np.array([mass / cell.length for cell, mass in cells])
    return DensityEstimate("flat", Interval(edges[0], edges[-1]), edges, heights)


def junction_points(left: Interval, right: Interval, max_length: float) -> tuple[float, float]:
    """Anchor abscissas on either side of the boundary between two adjacent cells.

    Each cell's anchor starts at its midpoint and shifts toward the shared
    boundary by an amount weighted by the cell's length relative to the
    longest cell; equal-length cells keep their midpoints.
    """
    left, right = Interval(*left).validate(), Interval(*right).validate()
    if left.hi != right.lo:
        raise ValueError(f"cells {left} and {right} are not adjacent")
    if left.length > max_length or right.length > max_length:
        raise ValueError("cell longer than the stated maximum length")
    overlap = min(left.length, right.length)
    w_left = left.length / max_length
    w_right = right.length / max_length
    anchor_left = left.hi - w_left * overlap / 2.0 - (1.0 - w_left) * (left.length / 2.0)
    anchor_right = right.lo + w_right * overlap / 2.0 + (1.0 - w_right) * (right.length / 2.0)
    return anchor_left, anchor_right


def interpolated_estimate(leaves, mode: str, renormalize: bool = False) -> DensityEstimate:
    """Polyline density through per-cell anchors at height mass / length.

    mid mode anchors every cell once, at its midpoint.  junc mode gives each
    cell two anchors placed by `junction_points` against its neighbors, with
    the outermost cells falling back to midpoints on their outer side.  The
    curve is flat between a cell's own anchors and linear between the facing
    anchors of adjacent cells; it extends flat to the domain edges.

    The interpolation perturbs the integral slightly; by default the curve
    is left exactly as constructed, `renormalize` rescales it to integrate
    to 1.
    """
    if mode not in ("mid", "junc"):
        raise ValueError(f"mode must be 'mid' or 'junc', got {mode!r}")
    cells = _checked_cells(leaves)
    domain = Interval(cells[0][0].lo, cells[-1][0].hi)
    heights = [mass / cell.length for cell, mass in cells]
    max_length = max(cell.length for cell, _ in cells)

    anchors: list[tuple[float, float]] = []
    for i, (cell, _) in enumerate(cells):
        if mode == "mid":
            lo_anchor = hi_anchor = cell.midpoint
        else:
            lo_anchor = cell.midpoint if i == 0 else junction_points(cells[i - 1][0], cell, max_length)[1]
            hi_anchor = cell.midpoint if i == len(cells) - 1 else junction_points(cell, cells[i + 1][0], max_length)[0]
            # A cell shorter than both neighbors has its anchors meet in the
            # middle; rounding may swap them by one ulp, so restore order.
            hi_anchor = max(lo_anchor, hi_anchor)
        anchors.append((lo_anchor, hi_anchor))

    points: list[tuple[float, float]] = [(domain.lo, heights[0])]
    for (lo_anchor, hi_anchor), height in zip(anchors, heights):
        for x in (lo_anchor, hi_anchor):
            if (x, height) != points[-1]:
                points.append((x, height))
    if (domain.hi, heights[-1]) != points[-1]:
        points.append((domain.hi, heights[-1]))

    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    if renormalize:
        ys = ys / np.trapezoid(ys, xs)
    return DensityEstimate(mode, domain, xs, ys)
