"""Balanced-parentheses tree navigation.

A tree with ``N`` nodes is a bit sequence of length ``2N`` (1 = ``(``,
0 = ``)``), positions 1-based.  Nodes are addressed by preorder number
(root = 1), which is the rank of their opening parenthesis.  Leaves are the
``()`` patterns; a second rank/select directory over a materialised pattern
vector addresses them by leaf rank.

Searches over the excess ``E(p) = #open - #close in [1, p]`` go through a
range-min tree: one leaf per 64-bit word holding the block minimum and the
number of positions attaining it, internal nodes holding the merged values.
That gives O(lg n) ``findclose``/``enclose``/level-ancestor/child-rank.

Contract notes: ``leaf_rank`` and ``child_rank`` are 1-based (the leaf or
child itself is counted), so ``leaf_rank(leaf_select(i)) == i`` and
``child(v, child_rank(u)) == u``.
"""
from collections import namedtuple

import numpy as np
from numba import njit

from .bitvec import (
    getbit,
    make_rankdir,
    nwords_for,
    rank1,
    rankdir_bits,
    select1,
)

_ONE = np.uint64(1)
_BIG = np.int32(1 << 30)

# bp, leaf: RankDir over the parentheses / the "()" pattern; tmin, tcnt:
# range-min tree (1-based heap layout, leaves at tsize + word); nbits = 2N.
Nav = namedtuple("Nav", "bp leaf tmin tcnt tsize nbits nodes")


# ---------------------------------------------------------------------------
# construction kernels


@njit(cache=True)
def _leaf_pattern_words(words):
    nw = words.shape[0]
    out = np.zeros(nw, dtype=np.uint64)
    for w in range(nw):
        nxt = words[w + 1] if w + 1 < nw else np.uint64(0)
        out[w] = words[w] & ~((words[w] >> _ONE) | (nxt << np.uint64(63)))
    return out


@njit(cache=True)
def _minmax_tree(words, nbits):
    nw = words.shape[0]
    size = 1
    while size < nw:
        size <<= 1
    tmin = np.full(2 * size, _BIG, dtype=np.int32)
    tcnt = np.zeros(2 * size, dtype=np.int32)
    e = 0
    for w in range(nw):
        lo = w << 6
        hi = min(lo + 63, nbits)
        if lo > hi:
            break
        m = 1 << 30
        c = 0
        for p in range(lo, hi + 1):
            if p > 0:
                if (words[w] >> np.uint64(p & 63)) & _ONE:
                    e += 1
                else:
                    e -= 1
            if e < m:
                m = e
                c = 1
            elif e == m:
                c += 1
        tmin[size + w] = m
        tcnt[size + w] = c
    for i in range(size - 1, 0, -1):
        a = tmin[2 * i]
        b = tmin[2 * i + 1]
        if a < b:
            tmin[i] = a
            tcnt[i] = tcnt[2 * i]
        elif b < a:
            tmin[i] = b
            tcnt[i] = tcnt[2 * i + 1]
        else:
            tmin[i] = a
            tcnt[i] = tcnt[2 * i] + tcnt[2 * i + 1]
    return tmin, tcnt, size


def make_nav(words, nbits):
    words = np.ascontiguousarray(words, dtype=np.uint64)
    bp = make_rankdir(words, nbits)
    leaf = make_rankdir(_leaf_pattern_words(words), nbits)
    tmin, tcnt, size = _minmax_tree(words, np.int64(nbits))
    return Nav(bp, leaf, tmin, tcnt, np.int64(size), np.int64(nbits), np.int64(nbits // 2))


# ---------------------------------------------------------------------------
# excess searches


@njit(cache=True)
def excess(nav, p):
    return 2 * rank1(nav.bp, p) - p


@njit(cache=True)
def isopen(nav, p):
    return getbit(nav.bp.words, p) == _ONE


@njit(cache=True)
def fwd_le(nav, p, t):
    """Smallest q > p with E(q) <= t, or -1."""
    words = nav.bp.words
    e = excess(nav, p)
    w = p >> 6
    end = min((w << 6) + 63, nav.nbits)
    for q in range(p + 1, end + 1):
        if (words[q >> 6] >> np.uint64(q & 63)) & _ONE:
            e += 1
        else:
            e -= 1
        if e <= t:
            return q
    tmin = nav.tmin
    i = nav.tsize + w
    found = False
    while i > 1:
        if (i & 1) == 0 and tmin[i + 1] <= t:
            i += 1
            found = True
            break
        i >>= 1
    if not found:
        return -1
    while i < nav.tsize:
        i = 2 * i if tmin[2 * i] <= t else 2 * i + 1
    b = i - nav.tsize
    q = b << 6
    e = excess(nav, q)
    if e <= t:
        return q
    end = min(q + 63, nav.nbits)
    for q2 in range(q + 1, end + 1):
        if (words[q2 >> 6] >> np.uint64(q2 & 63)) & _ONE:
            e += 1
        else:
            e -= 1
        if e <= t:
            return q2
    return -1


@njit(cache=True)
def bwd_le(nav, p, t):
    """Largest q < p with E(q) <= t (q may be 0), or -1."""
    words = nav.bp.words
    e = excess(nav, p)
    w = p >> 6
    for q in range(p - 1, (w << 6) - 1, -1):
        if (words[(q + 1) >> 6] >> np.uint64((q + 1) & 63)) & _ONE:
            e -= 1
        else:
            e += 1
        if e <= t:
            return q
    tmin = nav.tmin
    i = nav.tsize + w
    found = False
    while i > 1:
        if (i & 1) == 1 and tmin[i - 1] <= t:
            i -= 1
            found = True
            break
        i >>= 1
    if not found:
        return -1
    while i < nav.tsize:
        i = 2 * i + 1 if tmin[2 * i + 1] <= t else 2 * i
    b = i - nav.tsize
    top = min((b << 6) + 63, nav.nbits)
    e = excess(nav, top)
    if e <= t:
        return top
    for q in range(top - 1, (b << 6) - 1, -1):
        if (words[(q + 1) >> 6] >> np.uint64((q + 1) & 63)) & _ONE:
            e -= 1
        else:
            e += 1
        if e <= t:
            return q
    return -1


@njit(cache=True)
def _count_scan(nav, a, b, m):
    words = nav.bp.words
    e = excess(nav, a)
    c = 1 if e == m else 0
    for q in range(a + 1, b + 1):
        if (words[q >> 6] >> np.uint64(q & 63)) & _ONE:
            e += 1
        else:
            e -= 1
        if e == m:
            c += 1
    return c


@njit(cache=True)
def count_eq(nav, a, b, m):
    """Positions q in [a, b] with E(q) == m, given min E over [a, b] >= m."""
    if a > b:
        return 0
    wa = a >> 6
    wb = b >> 6
    if wa == wb:
        return _count_scan(nav, a, b, m)
    c = _count_scan(nav, a, (wa << 6) + 63, m) + _count_scan(nav, wb << 6, b, m)
    lo = nav.tsize + wa + 1
    hi = nav.tsize + wb  # exclusive
    tmin = nav.tmin
    tcnt = nav.tcnt
    while lo < hi:
        if lo & 1:
            if tmin[lo] == m:
                c += tcnt[lo]
            lo += 1
        if hi & 1:
            hi -= 1
            if tmin[hi] == m:
                c += tcnt[hi]
        lo >>= 1
        hi >>= 1
    return c


# ---------------------------------------------------------------------------
# node-level kernels (nodes are preorder numbers)


@njit(cache=True)
def open_of(nav, v):
    return select1(nav.bp, v)


@njit(cache=True)
def node_at(nav, q):
    return rank1(nav.bp, q)


@njit(cache=True)
def close_of(nav, q):
    return fwd_le(nav, q, excess(nav, q) - 1)


@njit(cache=True)
def is_leaf_k(nav, v):
    return not isopen(nav, open_of(nav, v) + 1)


@njit(cache=True)
def depth_k(nav, v):
    return excess(nav, open_of(nav, v)) - 1


@njit(cache=True)
def level_anc_k(nav, v, d):
    p = open_of(nav, v)
    if excess(nav, p) - 1 == d:
        return v
    return node_at(nav, bwd_le(nav, p, d) + 1)


@njit(cache=True)
def parent_k(nav, v):
    p = open_of(nav, v)
    return node_at(nav, bwd_le(nav, p, excess(nav, p) - 2) + 1)


@njit(cache=True)
def leaf_rank_k(nav, v):
    return rank1(nav.leaf, open_of(nav, v))


@njit(cache=True)
def leaf_select_k(nav, i):
    return node_at(nav, select1(nav.leaf, i))


@njit(cache=True)
def lmost_rank_k(nav, v):
    return rank1(nav.leaf, open_of(nav, v) - 1) + 1


@njit(cache=True)
def rmost_rank_k(nav, v):
    return rank1(nav.leaf, close_of(nav, open_of(nav, v)))


@njit(cache=True)
def subtree_size_k(nav, v):
    p = open_of(nav, v)
    return (close_of(nav, p) - p + 1) >> 1


@njit(cache=True)
def child_k(nav, v, i):
    """i-th child of v, or -1 when v has fewer than i children."""
    q = open_of(nav, v) + 1
    if not isopen(nav, q):
        return -1
    for _ in range(i - 1):
        q = close_of(nav, q) + 1
        if not isopen(nav, q):
            return -1
    return node_at(nav, q)


@njit(cache=True)
def degree_k(nav, v):
    p = open_of(nav, v)
    return count_eq(nav, p + 1, close_of(nav, p) - 1, excess(nav, p))


@njit(cache=True)
def child_rank_k(nav, v):
    p = open_of(nav, v)
    o = bwd_le(nav, p, excess(nav, p) - 2) + 1
    return count_eq(nav, o + 1, p - 1, excess(nav, o)) + 1


@njit(cache=True)
def _node_table(nav, anc_depth):
    # per node: parent, depth, size, degree, child rank, leaf rank (0 when
    # internal), first and last leaf rank, level ancestor at anc_depth[v]
    N = nav.nodes
    out = np.zeros((9, N + 1), dtype=np.int64)
    for v in range(1, N + 1):
        out[0, v] = parent_k(nav, v) if v > 1 else 0
        out[1, v] = depth_k(nav, v)
        out[2, v] = subtree_size_k(nav, v)
        out[3, v] = degree_k(nav, v)
        out[4, v] = child_rank_k(nav, v) if v > 1 else 0
        out[5, v] = leaf_rank_k(nav, v) if is_leaf_k(nav, v) else 0
        out[6, v] = lmost_rank_k(nav, v)
        out[7, v] = rmost_rank_k(nav, v)
        out[8, v] = level_anc_k(nav, v, anc_depth[v])
    return out


TABLE_FIELDS = ("parent", "depth", "size", "degree", "child_rank", "leaf_rank",
                "lmost_rank", "rmost_rank", "level_anc")


# ---------------------------------------------------------------------------
# Python surface


def parse_parens(text):
    """Bit words and length for a '(' / ')' string; validates balance."""
    nbits = len(text)
    if nbits == 0 or nbits % 2:
        raise ValueError("a BP sequence has positive even length")
    arr = np.frombuffer(text.encode("ascii"), dtype=np.uint8)
    opens = arr == ord("(")
    if not np.all(opens | (arr == ord(")"))):
        raise ValueError("BP text may only contain '(' and ')'")
    exc = np.cumsum(np.where(opens, 1, -1))
    if exc[-1] != 0 or exc.min() < 0 or np.any(exc[:-1] == 0):
        raise ValueError("parentheses are not balanced as a single tree")
    return bits_to_words(opens), nbits


def bits_to_words(bits):
    """Pack a 0/1 array (position 1 first) into 1-based uint64 words."""
    bits = np.asarray(bits, dtype=bool)
    nbits = bits.size
    padded = np.zeros(nwords_for(nbits) * 64, dtype=bool)
    padded[1:nbits + 1] = bits
    return np.packbits(padded.reshape(-1, 8)[:, ::-1]).view("<u8").astype(np.uint64)


def words_to_bits(words, nbits):
    raw = np.unpackbits(words.astype("<u8").view(np.uint8)).reshape(-1, 8)[:, ::-1].ravel()
    return raw[1:nbits + 1].astype(bool)


class BpNavigator:
    """Static ordinal tree in balanced-parentheses form."""

    def __init__(self, words, nbits):
        self.nav = make_nav(words, nbits)
        self.n_bits = int(nbits)
        self.n_nodes = self.n_bits // 2
        self.n_leaves = int(rank1(self.nav.leaf, self.nav.nbits))

    @classmethod
    def from_string(cls, text):
        words, nbits = parse_parens(text)
        return cls(words, nbits)

    @classmethod
    def from_bits(cls, bits):
        bits = np.asarray(bits, dtype=bool)
        return cls(bits_to_words(bits), bits.size)

    def to_string(self):
        bits = words_to_bits(self.nav.bp.words, self.n_bits)
        return np.where(bits, ord("("), ord(")")).astype(np.uint8).tobytes().decode("ascii")

    # validation helpers
    def _node(self, v):
        if not 1 <= v <= self.n_nodes:
            raise IndexError(f"node {v} outside [1, {self.n_nodes}]")
        return v

    root = 1

    def is_leaf(self, v):
        return bool(is_leaf_k(self.nav, self._node(v)))

    def is_internal(self, v):
        return not self.is_leaf(v)

    def open_position(self, v):
        return int(open_of(self.nav, self._node(v)))

    def close_position(self, v):
        return int(close_of(self.nav, self.open_position(v)))

    def parent(self, v):
        if self._node(v) == 1:
            raise ValueError("the root has no parent")
        return int(parent_k(self.nav, v))

    def depth(self, v):
        return int(depth_k(self.nav, self._node(v)))

    def level_anc(self, v, d):
        if not 0 <= d <= self.depth(v):
            raise ValueError(f"depth {d} outside [0, {self.depth(v)}]")
        return int(level_anc_k(self.nav, v, d))

    def leaf_select(self, i):
        if not 1 <= i <= self.n_leaves:
            raise IndexError(f"leaf rank {i} outside [1, {self.n_leaves}]")
        return int(leaf_select_k(self.nav, i))

    def leaf_rank(self, v):
        if not self.is_leaf(v):
            raise ValueError(f"node {v} is not a leaf")
        return int(leaf_rank_k(self.nav, v))

    def degree(self, v):
        return int(degree_k(self.nav, self._node(v)))

    def child(self, v, i):
        c = int(child_k(self.nav, self._node(v), i)) if i >= 1 else -1
        if c < 0:
            raise IndexError(f"node {v} has no child {i}")
        return c

    def children(self, v):
        out = []
        q = self.open_position(v) + 1
        while isopen(self.nav, q):
            out.append(int(node_at(self.nav, q)))
            q = int(close_of(self.nav, q)) + 1
        return out

    def child_rank(self, v):
        if self._node(v) == 1:
            raise ValueError("the root has no siblings")
        return int(child_rank_k(self.nav, v))

    def lmost_leaf(self, v):
        return int(leaf_select_k(self.nav, lmost_rank_k(self.nav, self._node(v))))

    def rmost_leaf(self, v):
        return int(leaf_select_k(self.nav, rmost_rank_k(self.nav, self._node(v))))

    def leaf_range(self, v):
        """Leaf ranks (first, last) under v."""
        self._node(v)
        return int(lmost_rank_k(self.nav, v)), int(rmost_rank_k(self.nav, v))

    def subtree_size(self, v):
        return int(subtree_size_k(self.nav, self._node(v)))

    def excess(self, p):
        return int(excess(self.nav, p))

    def node_table(self, anc_depth=None):
        """Every navigation answer for every node in one call.

        Returns a dict of int64 arrays indexed by preorder (entry 0 unused).
        ``level_anc`` is taken at ``anc_depth[v]`` (default 0, the root);
        the root's parent and child rank read 0, internal leaf ranks 0.
        """
        if anc_depth is None:
            anc_depth = np.zeros(self.n_nodes + 1, dtype=np.int64)
        anc_depth = np.asarray(anc_depth, dtype=np.int64)
        table = _node_table(self.nav, anc_depth)
        return dict(zip(TABLE_FIELDS, table))

    def size_in_bits(self):
        """Parentheses plus every navigation directory."""
        tree = self.nav.tmin.size * 32 + self.nav.tcnt.size * 32
        return (self.n_bits + rankdir_bits(self.nav.bp)
                + self.n_bits + rankdir_bits(self.nav.leaf) + tree)

    def __repr__(self):
        return f"BpNavigator(nodes={self.n_nodes}, leaves={self.n_leaves})"
