"""The adaptive analyst: prior elicitation, leaf scoring, query selection.

Each round the analyst scores every splittable leaf of the analysis tree
with a variance-reduction utility, queries the left child of the best leaf,
and conjugately updates that leaf's split law from the exact answer.  A
leaf's elicited prior is fixed at the round the leaf is created and reused
in later rounds, so every score is computed once; the run loop exploits
that with a priority queue.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable

from .partition import Interval, NodeId, ROOT, interval_of
from .polya import AnalysisTree, BetaParams, posterior_mean_mass
from .responder import Dataset, count_in

# Hard recursion guard, independent of the soft depth penalty below.
DEFAULT_DEPTH_CAP = 30

DEFAULT_ETA_SCALE = 0.4
DEFAULT_ETA_GROWTH = 1.02


class DepthExhausted(RuntimeError):
    """No leaf can be split without exceeding the hard depth cap."""


def max_meaningful_depth(half_width: float, min_peak_width: float) -> int:
    """Deepest split level worth probing: ceil(log2(half_width / min_peak_width)).

    Below this level, cells are narrower than the narrowest peak the analyst
    believes the density can contain.
    """
    if not (half_width > 0 and min_peak_width > 0):
        raise ValueError("widths must be positive")
    return math.ceil(math.log2(half_width / min_peak_width))


def default_eta(
    level: int,
    round_index: int,
    n: int,
    l_max: int,
    scale: float = DEFAULT_ETA_SCALE,
    growth: float = DEFAULT_ETA_GROWTH,
) -> float:
    """Split-confidence schedule scale * growth**i * l**2, with two adjustments.

    Levels beyond l_max get a heavy penalty factor 1 + (n/2)/l_max**2 that
    keeps them from being selected while shallower candidates remain useful.
    At level 0 the quadratic factor would vanish and leave an improper
    Beta(0, 0) split, so it is taken as 1 there.
    """
    if level < 0 or round_index < 0:
        raise ValueError("level and round_index must be nonnegative")
    eta = scale * growth**round_index * (level * level if level >= 1 else 1)
    if level > l_max:
        eta *= 1.0 + (n / 2.0) / (l_max * l_max)
    return eta


@dataclass(frozen=True)
class PriorSpec:
    """Rule mapping a node's (level, index) and creation round to its split prior.

    rho_rule gives the expected left-mass share; eta_rule gives the
    confidence in it as a function of level and the round at which the node
    entered the candidate set.
    """

    rho_rule: Callable[[int, int], float]
    eta_rule: Callable[[int, int], float]
    l_max: int

    def __post_init__(self) -> None:
        if self.l_max < 1:
            raise ValueError("l_max must be >= 1")

    def elicit(self, node: NodeId, round_index: int) -> BetaParams:
        rho = self.rho_rule(node.level, node.index)
        eta = self.eta_rule(node.level, round_index)
        return BetaParams.from_rho_eta(rho, eta)


def default_prior_spec(
    n: int,
    l_max: int | None = None,
    scale: float = DEFAULT_ETA_SCALE,
    growth: float = DEFAULT_ETA_GROWTH,
    half_width: float = 25.0,
    min_peak_width: float = 0.1,
) -> PriorSpec:
    """Equal split shares everywhere, with the default confidence schedule."""
    depth = l_max if l_max is not None else max_meaningful_depth(half_width, min_peak_width)
    return PriorSpec(
        rho_rule=lambda level, index: 0.5,
        eta_rule=lambda level, round_index: default_eta(level, round_index, n, depth, scale, growth),
        l_max=depth,
    )


def _utility_value(level: int, count: int, mean_mass: float, rho: float, eta: float) -> float:
    """Score 2**l * n * nu**2 * rho*(1-rho) / ((1+eta)*(1+eta+n)) for one leaf.

    This is the expected drop in the piecewise MSE from resolving the leaf's
    split with a query: proportional to the leaf's share of the estimation
    variance and to how much the posterior would tighten given its count.
    """
    return (
        math.ldexp(1.0, level)
        * count
        * mean_mass
        * mean_mass
        * rho
        * (1.0 - rho)
        / ((1.0 + eta) * (1.0 + eta + count))
    )


def utility(tree: AnalysisTree, leaf: NodeId, prior: BetaParams) -> float:
    """Variance-reduction utility of splitting `leaf` under its elicited prior."""
    if not tree.is_leaf(leaf):
        raise ValueError(f"{leaf} is not a leaf")
    nu = posterior_mean_mass(tree, leaf)
    return _utility_value(leaf.level, tree.count(leaf), nu, prior.rho, prior.eta)


def argmax_leaf(scored: list[tuple[NodeId, float]]) -> NodeId:
    """Highest-utility leaf; exact ties go to the lower level, then smaller index."""
    if not scored:
        raise DepthExhausted("no splittable leaves remain")
    return min(scored, key=lambda pair: (-pair[1], pair[0].level, pair[0].index))[0]


def select_query(
    tree: AnalysisTree,
    prior_spec: PriorSpec,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> NodeId:
    """The next node to query: the left child of the best splittable leaf."""
    scored = [
        (leaf, utility(tree, leaf, prior_spec.elicit(leaf, tree.created_round(leaf))))
        for leaf in tree.leaves()
        if leaf.level < depth_cap
    ]
    return argmax_leaf(scored).left_child()


@dataclass(frozen=True)
class QueryRecord:
    """One round of the loop: which cell was asked about and what came back."""

    round: int
    queried_node: NodeId
    interval: Interval
    count: int


QueryLog = list[QueryRecord]


@dataclass(order=True)
class _Candidate:
    neg_utility: float
    level: int
    index: int
    mean_mass: float = field(compare=False)


def run_ada(
    dataset: Dataset,
    prior_spec: PriorSpec,
    budget: int,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> tuple[AnalysisTree, QueryLog]:
    """Run the adaptive loop for up to `budget` queries against `dataset`.

    Every round selects the best splittable leaf, queries its left child's
    exact count, derives the right child's count from the parent, and
    conjugately updates the parent's split law.  Stops early, returning the
    rounds completed so far, if every leaf has reached the depth cap.

    A leaf's utility never changes after creation (its count, prior, and
    ancestors' posteriors are all settled by then), so candidates sit in a
    heap keyed by (-utility, level, index), which matches the tie-breaking
    of `select_query` exactly.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    tree = AnalysisTree(domain=dataset.domain, total_n=dataset.n)
    log: QueryLog = []
    heap: list[_Candidate] = []

    def push_candidate(node: NodeId, mean_mass: float, round_index: int) -> None:
        if node.level >= depth_cap:
            return
        prior = prior_spec.elicit(node, round_index)
        score = _utility_value(node.level, tree.count(node), mean_mass, prior.rho, prior.eta)
        heapq.heappush(heap, _Candidate(-score, node.level, node.index, mean_mass))

    push_candidate(ROOT, 1.0, 0)
    for round_index in range(budget):
        if not heap:
            break
        best = heapq.heappop(heap)
        leaf = NodeId(best.level, best.index)
        left = leaf.left_child()
        n_left = count_in(dataset, interval_of(left, dataset.domain))
        n_right = tree.count(leaf) - n_left
        prior = prior_spec.elicit(leaf, tree.created_round(leaf))
        posterior = tree.split_leaf(leaf, prior, n_left, n_right, round_index)
        log.append(
            QueryRecord(
                round=round_index + 1,
                queried_node=left,
                interval=interval_of(left, dataset.domain),
                count=n_left,
            )
        )
        push_candidate(left, best.mean_mass * posterior.rho, round_index)
        push_candidate(leaf.right_child(), best.mean_mass * (1.0 - posterior.rho), round_index)
    return tree, log
