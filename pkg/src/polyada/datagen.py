"""Ground-truth Gaussian mixtures and in-domain sampling for the benchmark.

The benchmark scenario draws equal-weight mixture components with means and
widths uniform over configured ranges, then samples the mixture with
rejection so that every sample lands inside the analysis domain.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .partition import Interval
from .responder import Dataset

# Benchmark defaults: 8 components, means within +-12.5, widths in [0.1, 4],
# domain [-25, 25).  Under these the chance a sample leaves the domain is
# below 1e-3 per draw.
DEFAULT_COMPONENTS = 8
DEFAULT_MU_LIM = 12.5
DEFAULT_SIGMA_LOW = 0.1
DEFAULT_SIGMA_HIGH = 4.0
DEFAULT_X_LIM = 25.0

_REJECTION_ATTEMPT_FACTOR = 1000


@dataclass(frozen=True)
class GaussianMixture:
    """Equal-weight mixture of Gaussians with analytic density."""

    mus: np.ndarray
    sigmas: np.ndarray

    def __post_init__(self) -> None:
        mus = np.atleast_1d(np.asarray(self.mus, dtype=float))
        sigmas = np.atleast_1d(np.asarray(self.sigmas, dtype=float))
        if mus.shape != sigmas.shape or mus.ndim != 1 or mus.size == 0:
            raise ValueError("mus and sigmas must be matching nonempty 1-d arrays")
        if np.any(sigmas <= 0):
            raise ValueError("all sigmas must be positive")
        object.__setattr__(self, "mus", mus)
        object.__setattr__(self, "sigmas", sigmas)

    @property
    def components(self) -> int:
        return int(self.mus.size)

    def pdf(self, x):
        """Mixture density (1/M) * sum of component normal pdfs, vectorized in x."""
        x = np.asarray(x, dtype=float)
        z = (x[..., None] - self.mus) / self.sigmas
        comps = np.exp(-0.5 * z * z) / (self.sigmas * math.sqrt(2.0 * math.pi))
        return comps.mean(axis=-1)

    def to_text(self) -> str:
        """Plain-text record of the component parameters, one 'mu sigma' pair per line."""
        out = io.StringIO()
        out.write("# gaussian mixture, equal weights; columns: mu sigma\n")
        for mu, sigma in zip(self.mus, self.sigmas):
            out.write(f"{float(mu)!r} {float(sigma)!r}\n")
        return out.getvalue()

    @classmethod
    def from_text(cls, text: str) -> "GaussianMixture":
        mus, sigmas = [], []
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'mu sigma', got {stripped!r}")
            mus.append(float(parts[0]))
            sigmas.append(float(parts[1]))
        if not mus:
            raise ValueError("no mixture components found")
        return cls(np.array(mus), np.array(sigmas))


def density(mixture: GaussianMixture, x):
    return mixture.pdf(x)


def random_mixture(
    rng_seed,
    components: int = DEFAULT_COMPONENTS,
    mu_lim: float = DEFAULT_MU_LIM,
    sigma_low: float = DEFAULT_SIGMA_LOW,
    sigma_high: float = DEFAULT_SIGMA_HIGH,
) -> GaussianMixture:
    """Draw component parameters independently and uniformly at random.

    Means are uniform on (-mu_lim, mu_lim), widths uniform on
    (sigma_low, sigma_high); all means are drawn before all widths, so a
    given seed pins the mixture exactly.
    """
    if components < 1:
        raise ValueError("components must be >= 1")
    if not 0 < sigma_low < sigma_high:
        raise ValueError(f"need 0 < sigma_low < sigma_high, got ({sigma_low}, {sigma_high})")
    if mu_lim < 0:
        raise ValueError("mu_lim must be nonnegative")
    rng = np.random.default_rng(rng_seed)
    mus = rng.uniform(-mu_lim, mu_lim, components)
    sigmas = rng.uniform(sigma_low, sigma_high, components)
    return GaussianMixture(mus, sigmas)


def sample_in_domain(mixture: GaussianMixture, n: int, domain: Interval, rng_seed) -> Dataset:
    """Draw n mixture samples, rejecting and redrawing any that leave the domain.

    Rejection (rather than clipping) keeps the root cell count equal to n.
    Raises if the mixture places so little mass in the domain that
    1000 * n total draws are not enough.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    domain.validate()
    rng = np.random.default_rng(rng_seed)
    collected: list[np.ndarray] = []
    remaining = n
    attempts = 0
    max_attempts = _REJECTION_ATTEMPT_FACTOR * n
    while remaining > 0:
        batch = remaining
        if attempts + batch > max_attempts:
            raise RuntimeError(
                f"rejection sampling exhausted {max_attempts} draws; "
                "mixture has negligible mass inside the domain"
            )
        comps = rng.integers(0, mixture.components, batch)
        draws = rng.normal(mixture.mus[comps], mixture.sigmas[comps])
        attempts += batch
        inside = draws[(draws >= domain.lo) & (draws < domain.hi)]
        collected.append(inside)
        remaining -= inside.size
    samples = np.concatenate(collected)[:n]
    return Dataset(np.sort(samples), domain)
