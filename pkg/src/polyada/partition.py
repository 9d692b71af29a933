"""Dyadic nested partition of a bounded interval.

Cells are addressed by (level, index) pairs: the root cell (0, 0) is the
whole domain, and each cell splits at its midpoint into two children on the
next level.  Level l therefore tiles the domain with 2**l half-open cells
of equal length.
"""
from __future__ import annotations

from typing import NamedTuple


class NodeId(NamedTuple):
    """Address of one cell in the dyadic tree: ``index`` runs in [0, 2**level)."""

    level: int
    index: int

    def validate(self) -> "NodeId":
        if self.level < 0:
            raise ValueError(f"level must be nonnegative, got {self.level}")
        if not 0 <= self.index < (1 << self.level):
            raise ValueError(f"index {self.index} out of range for level {self.level}")
        return self

    @property
    def is_root(self) -> bool:
        return self.level == 0

    def parent(self) -> "NodeId":
        if self.is_root:
            raise ValueError("root node has no parent")
        return NodeId(self.level - 1, self.index // 2)

    def left_child(self) -> "NodeId":
        return NodeId(self.level + 1, 2 * self.index)

    def right_child(self) -> "NodeId":
        return NodeId(self.level + 1, 2 * self.index + 1)

    def sister(self) -> "NodeId":
        """The other child of this node's parent."""
        if self.is_root:
            raise ValueError("root node has no sister")
        return NodeId(self.level, self.index ^ 1)

    @property
    def is_left_child(self) -> bool:
        if self.is_root:
            raise ValueError("root node is neither a left nor a right child")
        return self.index % 2 == 0


ROOT = NodeId(0, 0)


class Interval(NamedTuple):
    """Half-open interval [lo, hi) in domain units.

    Partition cells always have lo < hi; degenerate lo == hi values are
    tolerated so that empty range queries are expressible.
    """

    lo: float
    hi: float

    def validate(self) -> "Interval":
        if not self.lo <= self.hi:
            raise ValueError(f"interval bounds out of order: [{self.lo}, {self.hi})")
        return self

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


def interval_of(node: NodeId, domain: Interval) -> Interval:
    """Geometry of `node`'s cell: [lo + s*L/2**l, lo + (s+1)*L/2**l).

    The 2**l cells of any level tile the domain exactly; midpoint splitting
    keeps all cell boundaries exact binary fractions of the domain length.
    """
    node.validate()
    if not domain.lo < domain.hi:
        raise ValueError(f"domain must be nondegenerate, got {domain}")
    width = domain.length / (1 << node.level)
    lo = domain.lo + node.index * width
    hi = domain.hi if node.index + 1 == (1 << node.level) else domain.lo + (node.index + 1) * width
    return Interval(lo, hi)


def parent(node: NodeId) -> NodeId:
    return node.parent()


def left_child(node: NodeId) -> NodeId:
    return node.left_child()


def right_child(node: NodeId) -> NodeId:
    return node.right_child()


def sister(node: NodeId) -> NodeId:
    return node.sister()
