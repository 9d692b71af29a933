"""Adaptive counting-query density estimation with Polya-tree priors.

An analyst holds a prior over recursive binary splits of a bounded
interval, greedily picks the counting query that most reduces posterior
variance, updates conjugately from exact counts, and renders the posterior
as a density estimate.  A seeded harness benchmarks the adaptive estimates
against a fixed equal-width histogram on random Gaussian mixtures.
"""
from .analyst import (
    DEFAULT_DEPTH_CAP,
    DEFAULT_ETA_GROWTH,
    DEFAULT_ETA_SCALE,
    DepthExhausted,
    PriorSpec,
    QueryRecord,
    default_eta,
    default_prior_spec,
    max_meaningful_depth,
    run_ada,
    select_query,
    utility,
)
from .baseline import histogram_estimate
from .datagen import (
    GaussianMixture,
    density,
    random_mixture,
    sample_in_domain,
)
from .estimate import (
    DensityEstimate,
    flat_estimate,
    interpolated_estimate,
    junction_points,
)
from .harness import (
    ExperimentConfig,
    TrialResult,
    aggregate,
    build_estimates,
    emit_curves,
    emit_results,
    emit_summary,
    load_config,
    read_results,
    run_sweep,
    run_trial,
)
from .metrics import DEFAULT_GRID_POINTS, mse, tv
from .partition import ROOT, Interval, NodeId, interval_of
from .polya import (
    AnalysisTree,
    BetaParams,
    MassTree,
    averaged_sample_mass_tree,
    conjugate_update,
    leaf_cells,
    mean_mass_tree,
    posterior_mean_mass,
    sample_mass_tree,
)
from .responder import Dataset, count_in, fraction_in

__version__ = "0.1.0"

__all__ = [
    "AnalysisTree",
    "BetaParams",
    "DEFAULT_DEPTH_CAP",
    "DEFAULT_ETA_GROWTH",
    "DEFAULT_ETA_SCALE",
    "DEFAULT_GRID_POINTS",
    "Dataset",
    "DensityEstimate",
    "DepthExhausted",
    "ExperimentConfig",
    "GaussianMixture",
    "Interval",
    "MassTree",
    "NodeId",
    "PriorSpec",
    "QueryRecord",
    "ROOT",
    "TrialResult",
    "aggregate",
    "averaged_sample_mass_tree",
    "build_estimates",
    "conjugate_update",
    "count_in",
    "default_eta",
    "default_prior_spec",
    "density",
    "emit_curves",
    "emit_results",
    "emit_summary",
    "flat_estimate",
    "fraction_in",
    "histogram_estimate",
    "interpolated_estimate",
    "interval_of",
    "junction_points",
    "leaf_cells",
    "load_config",
    "max_meaningful_depth",
    "mean_mass_tree",
    "mse",
    "posterior_mean_mass",
    "random_mixture",
    "read_results",
    "run_ada",
    "run_sweep",
    "run_trial",
    "sample_in_domain",
    "sample_mass_tree",
    "select_query",
    "tv",
    "utility",
    "__version__",
]
