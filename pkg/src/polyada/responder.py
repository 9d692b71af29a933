"""The data owner: holds the sample set and answers counting queries exactly.

No noise is ever added; a query for a cell returns the exact number of
samples it contains, found by binary search on the sorted sample array.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .partition import Interval


@dataclass(frozen=True)
class Dataset:
    """Sorted samples confined to a known domain interval."""

    samples: np.ndarray
    domain: Interval

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a nonempty 1-d array")
        if np.any(np.diff(samples) < 0):
            raise ValueError("samples must be sorted ascending")
        self.domain.validate()
        if samples[0] < self.domain.lo or samples[-1] > self.domain.hi:
            raise ValueError("samples fall outside the domain")
        object.__setattr__(self, "samples", samples)

    @property
    def n(self) -> int:
        return int(self.samples.size)

    @classmethod
    def from_values(cls, values, domain: Interval) -> "Dataset":
        return cls(np.sort(np.asarray(values, dtype=float)), domain)

    @classmethod
    def from_file(cls, path, domain: Interval) -> "Dataset":
        """Read one sample per line; blank lines and '#' comments are skipped."""
        values = []
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                try:
                    values.append(float(text))
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: not a number: {text!r}") from None
        if not values:
            raise ValueError(f"{path}: no samples found")
        return cls.from_values(values, domain)

    def to_file(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            for value in self.samples:
                handle.write(f"{float(value)!r}\n")


def count_in(dataset: Dataset, interval: Interval) -> int:
    """Exact count of samples with lo <= x < hi.

    The cell whose upper edge is the domain's upper edge is closed on the
    right, so every in-domain sample belongs to exactly one cell per level.
    """
    interval.validate()
    if interval.lo < dataset.domain.lo or interval.hi > dataset.domain.hi:
        raise ValueError(f"query interval {interval} extends outside the domain {dataset.domain}")
    side = "right" if interval.hi == dataset.domain.hi and interval.lo < interval.hi else "left"
    lo_idx = np.searchsorted(dataset.samples, interval.lo, side="left")
    hi_idx = np.searchsorted(dataset.samples, interval.hi, side=side)
    return int(hi_idx - lo_idx)


def fraction_in(dataset: Dataset, interval: Interval) -> float:
    """The empirical mean of the cell's indicator (count / n)."""
    return count_in(dataset, interval) / dataset.n
