"""Finite Polya-tree prior/posterior state over an analysis tree.

An analysis tree is a full-binary subtree of the dyadic partition: every
non-root node is present together with its sister, and each node carries
the exact sample count of its cell.  Internal nodes additionally carry the
Beta hyperparameters of the mass split toward their left child; leaves
carry none.  Conjugacy makes the posterior after any sequence of revealed
counts another finite Polya tree, with hyperparameters updated additively.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .partition import Interval, NodeId, ROOT, interval_of


@dataclass(frozen=True)
class BetaParams:
    """Beta(alpha, beta) split law for the left-child share of a node's mass."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"Beta parameters must be positive, got ({self.alpha}, {self.beta})")

    @property
    def rho(self) -> float:
        """Expected left-mass share alpha / (alpha + beta)."""
        return self.alpha / (self.alpha + self.beta)

    @property
    def eta(self) -> float:
        """Concentration alpha + beta; larger values mean a tighter split."""
        return self.alpha + self.beta

    @classmethod
    def from_rho_eta(cls, rho: float, eta: float) -> "BetaParams":
        if not 0.0 < rho < 1.0:
            raise ValueError(f"rho must be in (0, 1), got {rho}")
        if not eta > 0:
            raise ValueError(f"eta must be positive, got {eta}")
        return cls(rho * eta, (1.0 - rho) * eta)


def conjugate_update(params: BetaParams, n_left: int, n_right: int) -> BetaParams:
    """Posterior split law after observing the children's sample counts.

    The Beta family is conjugate to how a known parent count divides between
    the two children, so the update is additive: (alpha + n_left, beta + n_right).
    """
    if n_left < 0 or n_right < 0:
        raise ValueError("child counts must be nonnegative")
    return BetaParams(params.alpha + n_left, params.beta + n_right)


@dataclass
class _Node:
    count: int
    params: BetaParams | None = None
    created_round: int = 0


@dataclass
class AnalysisTree:
    """Revealed-count tree plus per-internal-node Beta hyperparameters.

    ``created_round`` of a node is the query round (0-based, root = 0) at
    which the node entered the tree; the analyst's prior for a leaf is a
    deterministic function of its level and that round, so storing the round
    makes the elicited prior recoverable at any time.
    """

    domain: Interval
    total_n: int
    nodes: dict[NodeId, _Node] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.total_n < 1:
            raise ValueError("total_n must be positive")
        self.domain.validate()
        if not self.nodes:
            self.nodes[ROOT] = _Node(count=self.total_n, created_round=0)

    # -- queries ---------------------------------------------------------

    def __contains__(self, node: NodeId) -> bool:
        return node in self.nodes

    def count(self, node: NodeId) -> int:
        return self._get(node).count

    def params(self, node: NodeId) -> BetaParams | None:
        return self._get(node).params

    def created_round(self, node: NodeId) -> int:
        return self._get(node).created_round

    def is_leaf(self, node: NodeId) -> bool:
        self._get(node)
        return node.left_child() not in self.nodes

    def leaves(self) -> list[NodeId]:
        return [n for n in self.nodes if n.left_child() not in self.nodes]

    def internal_nodes(self) -> list[NodeId]:
        return [n for n in self.nodes if n.left_child() in self.nodes]

    def leaf_count(self) -> int:
        return sum(1 for n in self.nodes if n.left_child() not in self.nodes)

    def _get(self, node: NodeId) -> _Node:
        try:
            return self.nodes[node]
        except KeyError:
            raise KeyError(f"node {node} not in tree") from None

    # -- growth ----------------------------------------------------------

    def split_leaf(
        self,
        leaf: NodeId,
        prior: BetaParams,
        n_left: int,
        n_right: int,
        round_index: int,
    ) -> BetaParams:
        """Turn `leaf` internal: record its posterior split law and add its children.

        The children enter as leaves carrying the revealed counts and the
        given creation round.  Returns the posterior params stored on `leaf`.
        """
        if not self.is_leaf(leaf):
            raise ValueError(f"{leaf} is not a leaf")
        if n_left < 0 or n_right < 0:
            raise ValueError("child counts must be nonnegative")
        if n_left + n_right != self.count(leaf):
            raise ValueError(
                f"child counts {n_left}+{n_right} do not sum to parent count {self.count(leaf)}"
            )
        posterior = conjugate_update(prior, n_left, n_right)
        self.nodes[leaf].params = posterior
        self.nodes[leaf.left_child()] = _Node(count=n_left, created_round=round_index)
        self.nodes[leaf.right_child()] = _Node(count=n_right, created_round=round_index)
        return posterior

    # -- validation ------------------------------------------------------

    def validate(self) -> None:
        """Check the full-binary, count-additivity, and params-placement invariants."""
        root = self.nodes.get(ROOT)
        if root is None or root.count != self.total_n:
            raise AssertionError("root missing or root count != total_n")
        for node in self.nodes:
            if not node.is_root and node.sister() not in self.nodes:
                raise AssertionError(f"{node} present without its sister")
            left, right = node.left_child(), node.right_child()
            if left in self.nodes:
                if right not in self.nodes:
                    raise AssertionError(f"{node} has only one child")
                if self.count(left) + self.count(right) != self.count(node):
                    raise AssertionError(f"child counts of {node} do not sum to parent")
                if self.params(node) is None:
                    raise AssertionError(f"internal node {node} lacks Beta params")
            elif self.params(node) is not None:
                raise AssertionError(f"leaf {node} carries Beta params")


def _path_from_root(node: NodeId) -> Iterator[tuple[NodeId, bool]]:
    """Yield (ancestor, step_is_left) for each edge on the root-to-node path."""
    for depth in range(node.level):
        ancestor = NodeId(depth, node.index >> (node.level - depth))
        step_is_left = (node.index >> (node.level - depth - 1)) & 1 == 0
        yield ancestor, step_is_left


def posterior_mean_mass(tree: AnalysisTree, node: NodeId) -> float:
    """Expected probability mass of `node`'s cell under the current tree state.

    Multiplies the expected split share (rho going left, 1 - rho going right)
    of every ancestor along the root-to-node path; the root has mass 1.
    """
    if node not in tree:
        raise KeyError(f"node {node} not in tree")
    mass = 1.0
    for ancestor, step_is_left in _path_from_root(node):
        params = tree.params(ancestor)
        if params is None:
            raise AssertionError(f"ancestor {ancestor} lacks Beta params")
        mass *= params.rho if step_is_left else 1.0 - params.rho
    return mass


@dataclass(frozen=True)
class MassTree:
    """Probability mass per tree node: root mass 1, children split the parent."""

    masses: dict[NodeId, float]

    def mass(self, node: NodeId) -> float:
        return self.masses[node]

    def __contains__(self, node: NodeId) -> bool:
        return node in self.masses

    def leaf_sum(self, tree: AnalysisTree) -> float:
        return math.fsum(self.masses[leaf] for leaf in tree.leaves())


def _propagate(tree: AnalysisTree, share_of) -> MassTree:
    masses: dict[NodeId, float] = {ROOT: 1.0}
    for node in sorted(tree.internal_nodes()):
        share = share_of(node)
        masses[node.left_child()] = masses[node] * share
        masses[node.right_child()] = masses[node] * (1.0 - share)
    return MassTree(masses)


def sample_mass_tree(tree: AnalysisTree, rng_seed) -> MassTree:
    """One random mass allocation: independent Beta draws at the internal nodes.

    Nodes are visited in (level, index) order, so a given seed always yields
    the same tree.  Accepts anything ``numpy.random.default_rng`` does.
    """
    rng = np.random.default_rng(rng_seed)
    return _propagate(tree, lambda node: float(rng.beta(tree.params(node).alpha, tree.params(node).beta)))


def mean_mass_tree(tree: AnalysisTree) -> MassTree:
    """Deterministic expectation of `sample_mass_tree`: every split takes its mean share.

    Because the split draws are independent, the node-wise expected mass is the
    product of expected shares, i.e. `posterior_mean_mass` at every node.
    """
    return _propagate(tree, lambda node: tree.params(node).rho)


def averaged_sample_mass_tree(tree: AnalysisTree, draws: int, rng_seed) -> MassTree:
    """Node-wise average of `draws` independent random mass trees."""
    if draws < 1:
        raise ValueError("draws must be positive")
    rng = np.random.default_rng(rng_seed)
    acc: dict[NodeId, float] = {}
    for _ in range(draws):
        sample = sample_mass_tree(tree, rng)
        for node, mass in sample.masses.items():
            acc[node] = acc.get(node, 0.0) + mass
    return MassTree({node: total / draws for node, total in acc.items()})


def leaf_cells(tree: AnalysisTree, mass_tree: MassTree) -> list[tuple[Interval, float]]:
    """(cell, mass) per leaf, ordered left to right across the domain."""
    cells = [(interval_of(leaf, tree.domain), mass_tree.mass(leaf)) for leaf in tree.leaves()]
    cells.sort(key=lambda pair: pair[0].lo)
    return cells
