import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polyada import (
    AnalysisTree,
    BetaParams,
    Interval,
    NodeId,
    ROOT,
    averaged_sample_mass_tree,
    conjugate_update,
    leaf_cells,
    mean_mass_tree,
    posterior_mean_mass,
    sample_mass_tree,
)


def two_level_tree() -> AnalysisTree:
    # root n=10 splits (4, 6); the left child splits (1, 3)
    tree = AnalysisTree(domain=Interval(0.0, 1.0), total_n=10)
    tree.split_leaf(ROOT, BetaParams(0.2, 0.2), 4, 6, round_index=0)
    tree.split_leaf(NodeId(1, 0), BetaParams(0.4, 0.4), 1, 3, round_index=1)
    tree.validate()
    return tree


def random_split_tree(rng: np.random.Generator) -> AnalysisTree:
    tree = AnalysisTree(domain=Interval(-1.0, 3.0), total_n=int(rng.integers(4, 300)))
    for round_index in range(int(rng.integers(1, 14))):
        leaves = sorted(leaf for leaf in tree.leaves() if leaf.level < 8)
        leaf = leaves[rng.integers(len(leaves))]
        count = tree.count(leaf)
        n_left = int(rng.integers(0, count + 1))
        prior = BetaParams(float(rng.uniform(0.05, 5)), float(rng.uniform(0.05, 5)))
        tree.split_leaf(leaf, prior, n_left, count - n_left, round_index)
    tree.validate()
    return tree


def test_beta_params_validation():
    with pytest.raises(ValueError):
        BetaParams(0.0, 1.0)
    with pytest.raises(ValueError):
        BetaParams(1.0, -2.0)
    with pytest.raises(ValueError):
        BetaParams.from_rho_eta(1.0, 2.0)
    with pytest.raises(ValueError):
        BetaParams.from_rho_eta(0.5, 0.0)


def test_rho_eta_oracle():
    params = BetaParams(0.4, 0.4)
    assert params.rho == 0.5
    assert params.eta == pytest.approx(0.8)
    again = BetaParams.from_rho_eta(0.5, 0.8)
    assert (again.alpha, again.beta) == (0.4, 0.4)


@given(st.floats(0.01, 0.99), st.floats(1e-3, 1e3))
def test_rho_eta_roundtrip(rho, eta):
    params = BetaParams.from_rho_eta(rho, eta)
    assert params.rho == pytest.approx(rho, rel=1e-12)
    assert params.eta == pytest.approx(eta, rel=1e-12)


def test_conjugate_update_oracle():
    post = conjugate_update(BetaParams(1.0, 1.0), 3, 7)
    assert (post.alpha, post.beta) == (4.0, 8.0)
    # posterior mean of the left share is (alpha + n_left) / (alpha + beta + n)
    assert post.rho == pytest.approx(4.0 / 12.0)
    with pytest.raises(ValueError):
        conjugate_update(BetaParams(1.0, 1.0), -1, 2)


@given(st.integers(0, 40), st.integers(0, 40), st.integers(0, 40), st.integers(0, 40))
def test_conjugate_update_is_additive(a1, b1, a2, b2):
    prior = BetaParams(0.7, 1.3)
    combined = conjugate_update(prior, a1 + a2, b1 + b2)
    stepwise = conjugate_update(conjugate_update(prior, a1, b1), a2, b2)
    assert (combined.alpha, combined.beta) == (stepwise.alpha, stepwise.beta)


def test_split_records_posterior_and_children():
    tree = two_level_tree()
    assert tree.count(ROOT) == 10
    assert tree.count(NodeId(1, 0)) == 4
    assert tree.count(NodeId(1, 1)) == 6
    root_post = tree.params(ROOT)
    assert (root_post.alpha, root_post.beta) == (4.2, 6.2)
    assert tree.params(NodeId(1, 1)) is None
    assert tree.created_round(NodeId(1, 0)) == 0
    assert tree.created_round(NodeId(2, 1)) == 1
    assert sorted(tree.leaves()) == [NodeId(1, 1), NodeId(2, 0), NodeId(2, 1)]
    assert sorted(tree.internal_nodes()) == [ROOT, NodeId(1, 0)]
    assert tree.leaf_count() == 3
    assert tree.is_leaf(NodeId(1, 1))
    assert not tree.is_leaf(ROOT)


def test_split_validation():
    tree = two_level_tree()
    with pytest.raises(ValueError):
        tree.split_leaf(ROOT, BetaParams(1, 1), 4, 6, 2)  # not a leaf
    with pytest.raises(ValueError):
        tree.split_leaf(NodeId(1, 1), BetaParams(1, 1), 4, 4, 2)  # counts don't sum
    with pytest.raises(KeyError):
        tree.count(NodeId(5, 0))


def test_validate_catches_corruption():
    tree = two_level_tree()
    tree.nodes[NodeId(1, 1)].count = 5
    with pytest.raises(AssertionError):
        tree.validate()


def test_posterior_mean_mass_oracle():
    tree = two_level_tree()
    # root split law Beta(4.2, 6.2), left-child split law Beta(1.4, 3.4)
    root_left = 4.2 / 10.4
    assert posterior_mean_mass(tree, ROOT) == 1.0
    assert posterior_mean_mass(tree, NodeId(1, 1)) == pytest.approx(1.0 - root_left)
    assert posterior_mean_mass(tree, NodeId(2, 0)) == pytest.approx(root_left * (1.4 / 4.8))
    assert posterior_mean_mass(tree, NodeId(2, 1)) == pytest.approx(root_left * (3.4 / 4.8))
    with pytest.raises(KeyError):
        posterior_mean_mass(tree, NodeId(3, 0))


def test_mean_mass_tree_matches_path_products_bitwise():
    rng = np.random.default_rng(7)
    for _ in range(40):
        tree = random_split_tree(rng)
        means = mean_mass_tree(tree)
        for node in tree.nodes:
            assert means.mass(node) == posterior_mean_mass(tree, node)


def test_mass_trees_conserve_and_split_exactly():
    rng = np.random.default_rng(3)
    for _ in range(20):
        tree = random_split_tree(rng)
        for mass_tree in (mean_mass_tree(tree), sample_mass_tree(tree, 42)):
            assert abs(mass_tree.leaf_sum(tree) - 1.0) <= 1e-12
            assert all(m >= 0.0 for m in mass_tree.masses.values())
            for node in tree.internal_nodes():
                left = mass_tree.mass(node.left_child())
                right = mass_tree.mass(node.right_child())
                assert left + right == pytest.approx(mass_tree.mass(node), abs=1e-15)


def test_sample_mass_tree_seeding():
    tree = two_level_tree()
    assert sample_mass_tree(tree, 42).masses == sample_mass_tree(tree, 42).masses
    assert sample_mass_tree(tree, 42).masses != sample_mass_tree(tree, 43).masses


def test_sampled_masses_average_to_posterior_mean():
    # crude stochastic check: leaf masses are bounded by 1, so the mean of
    # `draws` samples sits within 5 * 0.5/sqrt(draws) of its expectation
    tree = two_level_tree()
    draws = 4000
    averaged = averaged_sample_mass_tree(tree, draws, 11)
    bound = 5 * 0.5 / math.sqrt(draws)
    for leaf in tree.leaves():
        assert abs(averaged.mass(leaf) - posterior_mean_mass(tree, leaf)) < bound


def test_averaged_equals_manual_node_wise_average():
    tree = two_level_tree()
    rng = np.random.default_rng(9)
    samples = [sample_mass_tree(tree, rng) for _ in range(5)]
    averaged = averaged_sample_mass_tree(tree, 5, np.random.default_rng(9))
    for node in tree.nodes:
        manual = np.mean([s.mass(node) for s in samples])
        assert averaged.mass(node) == pytest.approx(manual, rel=1e-14)
    with pytest.raises(ValueError):
        averaged_sample_mass_tree(tree, 0, 1)


def test_leaf_cells_ordered_and_tiling():
    tree = two_level_tree()
    cells = leaf_cells(tree, mean_mass_tree(tree))
    assert [cell for cell, _ in cells] == [
        Interval(0.0, 0.25),
        Interval(0.25, 0.5),
        Interval(0.5, 1.0),
    ]
    assert math.fsum(mass for _, mass in cells) == pytest.approx(1.0, abs=1e-12)
