import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cstlz.bptree import BpNavigator
from cstlz.oracle import OrdinalTree

from conftest import FIG1_BP


@pytest.fixture(scope="module")
def fig1():
    return BpNavigator.from_string(FIG1_BP)


def test_fig1_shape(fig1):
    assert fig1.n_nodes == 24
    assert fig1.n_leaves == 15
    assert fig1.subtree_size(1) == 24
    assert fig1.to_string() == FIG1_BP
    assert fig1.degree(1) == 3


def test_fig1_node_2(fig1):
    assert fig1.is_leaf(2)
    assert fig1.parent(2) == 1
    assert fig1.depth(2) == 1
    assert fig1.leaf_select(1) == 2
    assert fig1.depth(1) == 0


def test_fig1_leaf_addressing(fig1):
    leaves = [fig1.leaf_select(i) for i in range(1, 16)]
    assert leaves == [2, 4, 7, 8, 10, 11, 12, 14, 16, 17, 18, 20, 22, 23, 24]
    assert all(fig1.leaf_rank(v) == i for i, v in enumerate(leaves, start=1))
    assert fig1.lmost_leaf(1) == 2
    for v in leaves:
        assert fig1.lmost_leaf(v) == v
        assert fig1.subtree_size(v) == 1
        assert fig1.level_anc(v, 0) == 1
        assert fig1.level_anc(v, fig1.depth(v)) == v


def test_fig1_children(fig1):
    kids = fig1.children(1)
    assert kids == [2, 3, 19]
    for i, c in enumerate(kids, start=1):
        assert fig1.child(1, i) == c
        assert fig1.parent(c) == 1
        assert fig1.child_rank(c) == i
    with pytest.raises(IndexError):
        fig1.child(1, 4)
    assert fig1.level_anc(12, 1) == 3
    assert fig1.level_anc(24, 1) == 19


def test_root_has_no_parent(fig1):
    with pytest.raises(ValueError):
        fig1.parent(1)


def test_unbalanced_rejected():
    for bad in ("", "(", "())(", ")(", "(()"):
        with pytest.raises(ValueError):
            BpNavigator.from_string(bad)


def random_parents(rng, n):
    # attach each new node below a random existing one; preorder is recomputed by the oracle
    return [0] + [int(rng.integers(0, k)) for k in range(1, n)]


def check_against_oracle(parents):
    ref = OrdinalTree.from_parent_list(parents)
    nav = BpNavigator.from_string(ref.bp())
    assert nav.n_nodes == len(ref.nodes)
    assert nav.n_leaves == len(ref.leaves)
    for i, leaf in enumerate(ref.leaves, start=1):
        assert nav.leaf_select(i) == leaf.pre
    for v in ref.nodes:
        p = v.pre
        assert nav.is_leaf(p) == (not v.children)
        assert nav.depth(p) == v.depth
        assert nav.subtree_size(p) == ref.subtree_size(v)
        assert nav.degree(p) == len(v.children)
        assert nav.leaf_range(p) == ref.leaf_range(v)
        assert nav.children(p) == [c.pre for c in v.children]
        if v.parent is not None:
            assert nav.parent(p) == v.parent.pre
            assert nav.child_rank(p) == ref.child_rank(v)
            for d in range(v.depth + 1):
                assert nav.level_anc(p, d) == ref.level_anc(v, d).pre
        if not v.children:
            assert nav.leaf_rank(p) == ref.leaf_rank(v)


def test_random_trees_small():
    rng = np.random.default_rng(11)
    for _ in range(40):
        check_against_oracle(random_parents(rng, int(rng.integers(1, 120))))


def test_deep_path_and_star():
    check_against_oracle(list(range(-1, 399)))      # a path: node k hangs below k - 1
    check_against_oracle([0] * 400)                 # a star


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=0, max_size=80))
def test_hypothesis_trees(seeds):
    parents = [0] + [s % k for k, s in enumerate(seeds, start=1)]
    check_against_oracle(parents)
