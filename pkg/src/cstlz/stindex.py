"""Suffix-tree index: effective alphabet, psi-array and BP topology.

The retained index is only psi, the parentheses of the suffix tree with
their navigation directories, and ``alpha`` (leaf rank of the suffix starting
at text position 1).  SA and LCP are built transiently and dropped.  Leaf
labels are never stored; a :class:`LeafCursor` tracks the label of the leaf
it sits on.
"""
import struct
from dataclasses import dataclass

import numpy as np
from numba import njit

from .bitvec import rank1, setbit
from .bptree import (
    BpNavigator,
    bwd_le,
    close_of,
    count_eq,
    isopen,
    leaf_rank_k,
    leaf_select_k,
    open_of,
)

SENTINEL = 0
INDEX_MAGIC = b"CSTIDX1\n"


class SentinelCollisionError(ValueError):
    """The input contains the byte reserved for the sentinel."""


@dataclass(frozen=True)
class Text:
    symbols: np.ndarray      # ranks in [1, sigma], sentinel rank 1 at the end
    sigma: int
    restore_map: np.ndarray  # restore_map[rank - 1] -> original byte

    @property
    def n(self):
        return int(self.symbols.size)

    def restore(self, ranks=None):
        ranks = self.symbols if ranks is None else np.asarray(ranks)
        return self.restore_map[ranks - 1].tobytes()


def prepare_text(raw):
    """Append the sentinel and remap bytes to dense ranks (sentinel = 1)."""
    data = np.frombuffer(bytes(raw), dtype=np.uint8)
    if data.size and (data == SENTINEL).any():
        pos = int(np.flatnonzero(data == SENTINEL)[0]) + 1
        raise SentinelCollisionError(f"byte 0 at position {pos} is reserved for the sentinel")
    present = np.unique(data)
    restore_map = np.concatenate([[SENTINEL], present]).astype(np.uint8)
    lookup = np.zeros(256, dtype=np.int32)
    lookup[present] = np.arange(2, present.size + 2, dtype=np.int32)
    symbols = np.empty(data.size + 1, dtype=np.int32)
    symbols[:-1] = lookup[data]
    symbols[-1] = 1
    return Text(symbols, int(restore_map.size), restore_map)


# ---------------------------------------------------------------------------
# construction kernels (0-based text positions inside)


@njit(cache=True)
def _suffix_array(s):
    # prefix doubling; keys are (rank[i], rank[i + k]) packed in one int64
    n = s.shape[0]
    rank = s.astype(np.int64)
    sa = np.argsort(rank, kind="mergesort")
    key = np.empty(n, dtype=np.int64)
    k = 1
    while True:
        for i in range(n):
            key[i] = rank[i] * (n + 1) + (rank[i + k] if i + k < n else 0)
        sa = np.argsort(key, kind="mergesort")
        newrank = np.empty(n, dtype=np.int64)
        r = 1
        newrank[sa[0]] = 1
        for t in range(1, n):
            if key[sa[t]] != key[sa[t - 1]]:
                r += 1
            newrank[sa[t]] = r
        rank = newrank
        if r == n or k >= n:
            break
        k *= 2
    return sa


@njit(cache=True)
def _lcp_kasai(s, sa, isa):
    n = s.shape[0]
    lcp = np.zeros(n, dtype=np.int64)
    h = 0
    for i in range(n):
        r = isa[i]
        if r > 0:
            j = sa[r - 1]
            while i + h < n and j + h < n and s[i + h] == s[j + h]:
                h += 1
            lcp[r] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return lcp


@njit(cache=True)
def _bp_words(lcp):
    # lcp-interval traversal: count the opens before and closes after each leaf
    n = lcp.shape[0]
    opens = np.zeros(n, dtype=np.int64)
    closes = np.zeros(n, dtype=np.int64)
    st_l = np.zeros(n + 1, dtype=np.int64)
    st_b = np.zeros(n + 1, dtype=np.int64)
    top = 0
    for i in range(1, n + 1):
        ll = lcp[i] if i < n else 0
        lb = i - 1
        while ll < st_l[top]:
            opens[st_b[top]] += 1
            closes[i - 1] += 1
            lb = st_b[top]
            top -= 1
        if ll > st_l[top]:
            top += 1
            st_l[top] = ll
            st_b[top] = lb
    opens[0] += 1
    closes[n - 1] += 1
    nodes = n + opens.sum()
    nbits = 2 * nodes
    words = np.zeros((nbits >> 6) + 1, dtype=np.uint64)
    p = 1
    for i in range(n):
        for _ in range(opens[i] + 1):
            setbit(words, p)
            p += 1
        p += 1 + closes[i]
    return words, nbits


def _construct(symbols):
    s = symbols.astype(np.int64)
    n = s.size
    sa = _suffix_array(s)
    isa = np.empty(n, dtype=np.int64)
    isa[sa] = np.arange(n)
    lcp = _lcp_kasai(s, sa, isa)
    words, nbits = _bp_words(lcp)
    psi = np.zeros(n + 1, dtype=np.int64)
    nxt = sa + 1
    nxt[nxt == n] = 0
    psi[1:] = isa[nxt] + 1
    return sa, psi, words, int(nbits), int(isa[0]) + 1


# ---------------------------------------------------------------------------
# derived-primitive kernels


@njit(cache=True)
def head_k(nav, leaf):
    """Alphabet rank of the first character of the leaf's suffix."""
    p = open_of(nav, leaf)
    q = bwd_le(nav, p, 1) + 1  # open of the depth-1 ancestor
    return count_eq(nav, 2, q - 1, 1) + 1


@njit(cache=True)
def head_r(nav, r):
    return head_k(nav, leaf_select_k(nav, r))


@njit(cache=True)
def str_depth_k(nav, psi, v, counters):
    """String depth of internal node v; each lockstep advance costs two next_leaf."""
    p = open_of(nav, v)
    c2 = close_of(nav, p + 1) + 1
    if not isopen(nav, c2):
        return 0  # unary root of the sentinel-only text
    a = _lmost_rank_at(nav, p + 1)
    b = _lmost_rank_at(nav, c2)
    m = 0
    while head_r(nav, a) == head_r(nav, b):
        a = psi[a]
        b = psi[b]
        counters[1] += 2
        m += 1
    return m


@njit(cache=True)
def _lmost_rank_at(nav, q):
    # leaf rank of the first leaf at or after BP position q
    return rank1(nav.leaf, q - 1) + 1


@njit(cache=True)
def _all_str_depths(nav, psi):
    out = np.zeros(nav.nodes + 1, dtype=np.int64)
    counters = np.zeros(8, dtype=np.int64)
    for v in range(1, nav.nodes + 1):
        if isopen(nav, open_of(nav, v) + 1):
            out[v] = str_depth_k(nav, psi, v, counters)
    return out


def make_counters():
    """Instrumentation slots: cursor steps, next_leaf calls, parent climbs, explore calls."""
    return np.zeros(8, dtype=np.int64)


# ---------------------------------------------------------------------------
# Python surface


@dataclass(frozen=True)
class LeafCursor:
    leaf: int
    label: int


class SuffixTreeIndex:
    """psi-array plus BP topology of the suffix tree of a prepared text."""

    def __init__(self, psi, tree, alpha, sigma, restore_map):
        self.psi = psi                # 1-based, psi[0] unused
        self.tree = tree
        self.nav = tree.nav
        self.alpha = int(alpha)
        self.sigma = int(sigma)
        self.n = int(psi.size - 1)
        self.restore_map = np.asarray(restore_map, dtype=np.uint8)

    @property
    def psi_values(self):
        return [int(x) for x in self.psi[1:]]

    @property
    def root(self):
        return 1

    def bp_string(self):
        return self.tree.to_string()

    # derived primitives
    def smallest_leaf(self):
        return LeafCursor(int(leaf_select_k(self.nav, self.alpha)), 1)

    def next_leaf(self, cur):
        r = int(self.psi[leaf_rank_k(self.nav, cur.leaf)])
        label = cur.label + 1 if cur.label < self.n else 1
        return LeafCursor(int(leaf_select_k(self.nav, r)), label)

    def head(self, leaf):
        if not self.tree.is_leaf(leaf):
            raise ValueError(f"node {leaf} is not a leaf")
        return int(head_k(self.nav, leaf))

    def str_depth(self, v, counters=None):
        if self.tree.is_leaf(v):
            raise ValueError("string depth of a leaf needs its label; use n + 1 - label")
        if counters is None:
            counters = make_counters()
        return int(str_depth_k(self.nav, self.psi, v, counters))

    def str_depths(self):
        """String depth of every internal node by preorder (leaves read 0)."""
        return _all_str_depths(self.nav, self.psi)

    def restore_char(self, rank):
        return int(self.restore_map[rank - 1])

    def size_in_bits(self):
        """Bits of the retained structures, packed psi at ceil(lg(n+1)) bits per entry."""
        width = max(1, int(self.n).bit_length())
        return {
            "psi": self.n * width,
            "bp": self.tree.n_bits,
            "bp_supports": self.tree.size_in_bits() - self.tree.n_bits,
        }

    # serialization
    def save(self, path):
        width = 4 if self.n < 2**32 else 8
        with open(path, "wb") as fh:
            fh.write(INDEX_MAGIC)
            fh.write(struct.pack("<QQQB", self.n, self.sigma, self.alpha, width))
            fh.write(self.restore_map.tobytes())
            fh.write(self.psi[1:].astype(f"<u{width}").tobytes())
            fh.write(self.bp_string().encode("ascii"))

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            blob = fh.read()
        if not blob.startswith(INDEX_MAGIC):
            raise ValueError(f"{path}: not an index file")
        off = len(INDEX_MAGIC)
        n, sigma, alpha, width = struct.unpack_from("<QQQB", blob, off)
        off += struct.calcsize("<QQQB")
        restore_map = np.frombuffer(blob, dtype=np.uint8, count=sigma, offset=off).copy()
        off += sigma
        psi = np.zeros(n + 1, dtype=np.int64)
        psi[1:] = np.frombuffer(blob, dtype=f"<u{width}", count=n, offset=off)
        off += n * width
        tree = BpNavigator.from_string(blob[off:].decode("ascii"))
        return cls(psi, tree, alpha, sigma, restore_map)

    def __repr__(self):
        return f"SuffixTreeIndex(n={self.n}, sigma={self.sigma}, nodes={self.tree.n_nodes})"


def build_index(text):
    """Build psi, BP and alpha for a :class:`Text`; SA/LCP are discarded."""
    _, psi, words, nbits, alpha = _construct(text.symbols)
    tree = BpNavigator(words, nbits)
    return SuffixTreeIndex(psi, tree, alpha, text.sigma, text.restore_map)


def index_from_bytes(raw):
    text = prepare_text(raw)
    return text, build_index(text)
