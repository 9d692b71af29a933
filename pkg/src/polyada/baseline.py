"""Non-adaptive equal-width histogram baseline.

Uses the same per-bin budget as the adaptive run (one count per bin, k bins
for k queries) so the two spend identical query budgets, but the bin layout
is fixed up front instead of chosen from the data.
"""
from __future__ import annotations

import numpy as np

from .estimate import DensityEstimate
from .partition import Interval
from .responder import Dataset, count_in


def histogram_estimate(dataset: Dataset, bins: int) -> DensityEstimate:
    """Equal-width histogram density over the dataset's domain.

    Bin heights are count / (n * width).  The rightmost bin includes the
    domain's upper endpoint, matching the counting convention everywhere
    else.
    """
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    domain = dataset.domain
    edges = np.linspace(domain.lo, domain.hi, bins + 1)
    counts = np.array(
        [count_in(dataset, Interval(edges[i], edges[i + 1])) for i in range(bins)]
    )
    if counts.sum() != dataset.n:
        raise AssertionError("histogram bins lost samples")
    heights = counts / (dataset.n * np.diff(edges))
    return DensityEstimate("flat", domain, edges, heights)
