from cstlz.oracle import (
    OrdinalTree,
    decode_lz77,
    decode_lz78,
    naive_lz77,
    naive_lz77_classic,
    naive_lz78,
    naive_lz78_trie,
    naive_psi,
    naive_rank,
    naive_select,
    pointer_suffix_tree,
    with_sentinel,
)

from conftest import FIG1_PSI, FIG1_SA, RUNNING


def c(fs):
    return [f.coding() for f in fs]


def test_fig2_rows():
    t = with_sentinel(RUNNING)
    assert c(naive_lz77(t)) == [b"a", (1, 2), b"b", (3, 3), (2, 4), (3, 3), b"\x00"]
    assert c(naive_lz77_classic(t)) == [b"a", (1, 2, b"b"), (3, 3, b"a"), (5, 4, b"b"), (1, 1, b"\x00")]
    assert c(naive_lz78(t)) == [b"a", (1, b"a"), b"b", (1, b"b"), (2, b"a"), (3, b"a"), (4, b"a"), b"\x00"]


def test_unary_and_sentinel():
    for n in range(2, 30):
        t = with_sentinel(b"a" * (n - 1))
        assert c(naive_lz77(t)) == ([b"a", (1, n - 2), b"\x00"] if n > 2 else [b"a", b"\x00"])
    for f in (naive_lz77, naive_lz77_classic, naive_lz78):
        assert c(f(b"\x00")) == [b"\x00"]


def test_decoders_invert():
    t = with_sentinel(b"abracadabra abracadabra")
    assert decode_lz77(naive_lz77(t)) == t
    assert decode_lz77(naive_lz77_classic(t)) == t
    assert decode_lz78(naive_lz78(t)) == t


def test_trie_consistent_with_stream():
    t = with_sentinel(RUNNING)
    bp, chars, idx = naive_lz78_trie(t)
    assert len(bp) == 18 and sorted(idx) == list(range(1, 9))
    assert len(chars) == 8


def test_pointer_suffix_tree_fig1():
    tree = pointer_suffix_tree(with_sentinel(RUNNING))
    assert [v.label for v in tree.leaves] == FIG1_SA
    assert len(tree.root.children) == 3
    assert len(tree.leaves) == 15
    assert naive_psi(with_sentinel(RUNNING)) == FIG1_PSI


def test_ordinal_tree_helpers():
    tree = OrdinalTree.from_parent_list([0, 0, 1, 1, 0])
    assert tree.bp() == "((()())())"
    a, b = tree.node(3), tree.node(4)
    assert tree.lca(a, b).pre == 2
    assert tree.leaf_range(tree.root) == (1, 3)


def test_naive_rank_select():
    bits = [0, 1, 1, 0, 1]
    assert naive_rank(bits, 1, 3) == 2
    assert naive_select(bits, 0, 2) == 4
    assert naive_select(bits, 1, 4) == -1
