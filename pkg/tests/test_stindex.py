import numpy as np
import pytest

from cstlz.oracle import naive_lcp, naive_sa, pointer_suffix_tree, with_sentinel
from cstlz.stindex import (
    SentinelCollisionError,
    SuffixTreeIndex,
    build_index,
    index_from_bytes,
    prepare_text,
)

from conftest import FIG1_BP, FIG1_PSI, FIG1_SA, RUNNING, random_text


def test_prepare_running_example():
    t = prepare_text(RUNNING)
    assert t.sigma == 3
    assert t.n == 15
    assert t.restore() == RUNNING + b"\x00"
    assert list(t.symbols) == [2, 2, 2, 3, 2, 3, 2, 2, 2, 3, 2, 2, 3, 2, 1]


def test_prepare_edge_cases():
    t = prepare_text(b"")
    assert (t.n, t.sigma) == (1, 1)
    t = prepare_text(b"ca")
    assert list(t.symbols) == [3, 2, 1]
    assert list(t.restore_map) == [0, ord("a"), ord("c")]
    with pytest.raises(SentinelCollisionError, match="position 2"):
        prepare_text(b"a\x00b")


def test_running_index(running):
    assert running.psi_values == FIG1_PSI
    assert running.bp_string() == FIG1_BP
    assert running.alpha == 4
    assert running.tree.degree(1) == 3


def test_leaf_walk_recovers_sa(running):
    cur = running.smallest_leaf()
    assert running.tree.leaf_rank(cur.leaf) == 4
    labels = {}
    for _ in range(running.n):
        labels[running.tree.leaf_rank(cur.leaf)] = cur.label
        cur = running.next_leaf(cur)
    assert cur == running.smallest_leaf()
    assert [labels[r] for r in range(1, 16)] == FIG1_SA


def test_next_leaf_uses_psi(running):
    tree = running.tree
    cur = running.smallest_leaf()
    while cur.label != 14:
        cur = running.next_leaf(cur)
    assert tree.leaf_rank(cur.leaf) == 2
    nxt = running.next_leaf(cur)
    assert (tree.leaf_rank(nxt.leaf), nxt.label) == (1, 15)


def test_head_reads_text(running):
    t = RUNNING + b"\x00"
    cur = running.smallest_leaf()
    assert running.restore_char(running.head(cur.leaf)) == ord("a")
    for j in range(1, 16):
        assert running.restore_char(running.head(cur.leaf)) == t[j - 1]
        cur = running.next_leaf(cur)
    with pytest.raises(ValueError):
        running.head(1)


def test_fig1_string_depths(running):
    got = {v: running.str_depth(v) for v in range(1, 25) if not running.tree.is_leaf(v)}
    assert got == {1: 0, 3: 1, 5: 2, 6: 5, 9: 4, 13: 3, 15: 4, 19: 2, 21: 3}
    with pytest.raises(ValueError):
        running.str_depth(2)


def test_pointer_tree_matches(running):
    ref = pointer_suffix_tree(with_sentinel(RUNNING))
    assert ref.bp() == FIG1_BP
    assert [v.label for v in ref.leaves] == FIG1_SA


@pytest.mark.parametrize("raw", [b"", b"a", b"aaaaaaa", b"ab", b"zzzy"])
def test_tiny_alphabets(raw):
    _, idx = index_from_bytes(raw)
    assert idx.n == len(raw) + 1
    assert idx.tree.n_leaves == idx.n
    assert idx.tree.degree(1) == idx.sigma
    assert idx.str_depth(1) == 0


def check_index(raw):
    t = with_sentinel(raw)
    _, idx = index_from_bytes(raw)
    sa = naive_sa(t)
    n = len(t)
    isa = [0] * n
    for r, i in enumerate(sa):
        isa[i] = r
    psi = idx.psi_values
    assert sorted(psi) == list(range(1, n + 1))
    for r in range(n):
        if sa[r] != n - 1:
            assert sa[psi[r] - 1] == sa[r] + 1
    assert psi[isa[n - 1]] == idx.alpha
    tree = idx.tree
    assert tree.n_leaves == n
    assert tree.n_nodes - n <= n - 1
    assert tree.degree(1) == idx.sigma
    lcp = naive_lcp(t, sa)
    for v in range(1, tree.n_nodes + 1):
        if not tree.is_leaf(v):
            lo, hi = tree.leaf_range(v)
            assert idx.str_depth(v) == min(lcp[lo:hi])
    assert pointer_suffix_tree(t).bp() == idx.bp_string()


def test_random_indices_match_oracles():
    rng = np.random.default_rng(21)
    for k in range(40):
        sigma = [1, 2, 4, 26][k % 4]
        check_index(random_text(rng, int(rng.integers(0, 300)), sigma))


def test_save_load_roundtrip(tmp_path, running):
    path = tmp_path / "ex.idx"
    running.save(path)
    back = SuffixTreeIndex.load(path)
    assert back.psi_values == running.psi_values
    assert back.bp_string() == running.bp_string()
    assert (back.alpha, back.sigma, back.n) == (4, 3, 15)
    assert list(back.restore_map) == list(running.restore_map)


def test_load_rejects_garbage(tmp_path):
    p = tmp_path / "junk"
    p.write_bytes(b"hello")
    with pytest.raises(ValueError):
        SuffixTreeIndex.load(p)


def test_size_report(running):
    bits = running.size_in_bits()
    assert bits["bp"] == 48
    assert bits["psi"] == 15 * 4
    assert build_index(prepare_text(b"")).size_in_bits()["bp"] == 4
