"""LZ78 by superimposing the LZ trie on the suffix tree.

Every suffix-tree edge ``(u, v)`` carries an exploration counter ``n_v``:
how many LZ trie nodes already sit on it.  Fully explored edges are marked in
``V`` and forget their counter.  The rest are stored by node class:

* micro nodes (subtree of at most ``thr = floor(lg n)`` nodes): number of set
  bits of ``C`` over the node's leaf range;
* jump nodes (not micro, all children micro): a slot of ``J`` by jump rank;
* any other node borrows the slot of its leftmost descendant jump node, which
  is free while the node's own edge is only partially explored.

The passes visit only the leaves that start a factor.  For the leaf ``l``
at factor position ``p``, ``find_edge`` returns the first edge on the
root-to-``l`` path that is not full; with ``s`` the string depth of its
upper end and ``m`` the counter, the factor has length ``s + m + 1``.

Instrumentation counters: slot 0 cursor steps, 1 next_leaf calls, 2 level
ancestor steps, 3 explore calls, 4 shadow-counter mismatches, 5-7 explore
calls that read a jump slot, a borrowed slot, a micro popcount.
"""
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .bitvec import (
    BitVector,
    clear_span,
    getbit,
    make_rankdir,
    popcount_span,
    rank1,
    select1,
    setbit,
)
from .bptree import (
    BpNavigator,
    bits_to_words,
    child_k,
    close_of,
    depth_k,
    isopen,
    leaf_rank_k,
    leaf_select_k,
    level_anc_k,
    lmost_rank_k,
    node_at,
    open_of,
    rmost_rank_k,
    subtree_size_k,
)
from .stindex import head_r, make_counters, str_depth_k

JUMP, BORROWED, MICRO = 0, 1, 2
PASS1, PASS2, PASS3 = 1, 2, 3


@dataclass(frozen=True)
class Lz78Factor:
    """``ref`` is the referred factor index (0 for a fresh factor)."""

    ref: int
    char: int

    def coding(self):
        if self.ref == 0:
            return bytes([self.char])
        return (self.ref, bytes([self.char]))


# ---------------------------------------------------------------------------
# kernels


@njit(cache=True)
def micro_threshold(n):
    t = 0
    while (2 << t) <= n:
        t += 1
    return max(1, t)


@njit(cache=True)
def _classify(nav, thr):
    nodes = nav.nodes
    words = np.zeros((nodes >> 6) + 1, dtype=np.uint64)
    for v in range(1, nodes + 1):
        p = open_of(nav, v)
        if not isopen(nav, p + 1):
            continue
        if (close_of(nav, p) - p + 1) >> 1 <= thr:
            continue
        jump = True
        q = p + 1
        while isopen(nav, q):
            c = close_of(nav, q)
            if (c - q + 1) >> 1 > thr:
                jump = False
                break
            q = c + 1
        if jump:
            setbit(words, v)
    return words


@njit(cache=True)
def find_edge_k(nav, V, leaf, counters):
    """(u, v, depth of v): first edge from the root to ``leaf`` not fully explored."""
    d = 1
    u = 1
    while True:
        v = level_anc_k(nav, leaf, d)
        counters[2] += 1
        if v == leaf or not getbit(V, v):
            return u, v, d
        u = v
        d += 1


@njit(cache=True)
def counter_read_k(nav, C, Jrd, Jslots, thr, v):
    """(n_v, representation kind, J slot)."""
    if getbit(Jrd.words, v):
        slot = rank1(Jrd, v)
        return Jslots[slot], JUMP, slot
    size = subtree_size_k(nav, v)
    if size > thr:
        slot = rank1(Jrd, v) + 1
        jpos = select1(Jrd, slot)
        if jpos < 0 or jpos >= v + size:
            raise AssertionError("non-micro node without a descendant jump node")
        return Jslots[slot], BORROWED, slot
    return popcount_span(C, lmost_rank_k(nav, v), rmost_rank_k(nav, v)), MICRO, 0


@njit(cache=True)
def counter_bump_k(nav, V, C, Jslots, v, kind, slot, full, leafrank):
    if full:
        setbit(V, v)
        if kind == MICRO:
            clear_span(C, lmost_rank_k(nav, v), rmost_rank_k(nav, v))
        else:
            Jslots[slot] = 0
    elif kind == MICRO:
        setbit(C, leafrank)
    else:
        Jslots[slot] += 1


@njit(cache=True)
def _other_child(nav, v, avoid):
    c = child_k(nav, v, 1)
    if c == avoid:
        c = child_k(nav, v, 2)
    return c


@njit(cache=True)
def _advance(psi, r, k, counters):
    for _ in range(k):
        r = psi[r]
    counters[1] += k
    return r


@njit(cache=True)
def _explore_k(nav, psi, V, C, Jrd, Jslots, thr, v, leaf, s, counters):
    """Post-increment n_v; compares two leaves with LCA v after m + s + 1 steps."""
    m, kind, slot = counter_read_k(nav, C, Jrd, Jslots, thr, v)
    d = depth_k(nav, v)
    cv = level_anc_k(nav, leaf, d + 1)
    oc = _other_child(nav, v, cv)
    a = _advance(psi, leaf_rank_k(nav, leaf), m + s + 1, counters)
    b = _advance(psi, lmost_rank_k(nav, oc), m + s + 1, counters)
    full = head_r(nav, a) != head_r(nav, b)
    counter_bump_k(nav, V, C, Jslots, v, kind, slot, full, leaf_rank_k(nav, leaf))
    counters[3] += 1
    return m


@njit(cache=True)
def _run(nav, psi, alpha, n, mode, V, C, L, Jrd, Jslots, thr,
         W, Wrd, Wslots, out_ref, out_char, Urd, Erd, fidx,
         shadow, trace_v, trace_m, counters):
    """One pass over the corresponding leaves; returns the factor count."""
    r = alpha
    label = 1
    x = 0
    while label <= n:
        x += 1
        r0 = r
        leaf = leaf_select_k(nav, r)
        u, v, d = find_edge_k(nav, V, leaf, counters)
        s = 0
        if u != 1:
            # string depth of u, walking l itself against a leaf beside v
            b = lmost_rank_k(nav, _other_child(nav, u, v))
            while head_r(nav, r) == head_r(nav, b):
                r = psi[r]
                b = psi[b]
                s += 1
            counters[1] += 2 * s
        if v == leaf:
            if mode == PASS1:
                setbit(L, r0)
            elif mode == PASS2:
                out_ref[x - 1] = 0 if u == 1 else Wslots[rank1(Wrd, u)]
                if u != 1 and out_ref[x - 1] == 0:
                    raise AssertionError("parent witness has no factor index")
                out_char[x - 1] = head_r(nav, r)
            else:
                fidx[select1(Erd, rank1(Urd, v))] = x
            r = psi[r]
            counters[1] += 1
            counters[0] += s + 1
            label += s + 1
            continue
        m, kind, slot = counter_read_k(nav, C, Jrd, Jslots, thr, v)
        counters[3] += 1
        counters[5 + kind] += 1
        if shadow.shape[0] > 0:
            if shadow[v] != m:
                counters[4] += 1
            shadow[v] += 1
        if trace_v.shape[0] > 0:
            trace_v[counters[3] - 1] = v
            trace_m[counters[3] - 1] = m
        if mode == PASS1:
            setbit(W, v)
        elif mode == PASS2:
            wid = rank1(Wrd, v)
            y = Wslots[wid]
            if y == 0:
                y = 0 if u == 1 else Wslots[rank1(Wrd, u)]
                if u != 1 and y == 0:
                    raise AssertionError("parent witness has no factor index")
            out_ref[x - 1] = y
            Wslots[wid] = x
        else:
            fidx[select1(Erd, rank1(Urd, v)) + m] = x
        oc = _other_child(nav, v, level_anc_k(nav, leaf, d + 1))
        counters[2] += 1
        rp = _advance(psi, lmost_rank_k(nav, oc), s + m, counters)
        r = _advance(psi, r, m, counters)
        if mode == PASS2:
            out_char[x - 1] = head_r(nav, r)
        r = psi[r]
        rp = psi[rp]
        counters[1] += 2
        full = head_r(nav, r) != head_r(nav, rp)
        counter_bump_k(nav, V, C, Jslots, v, kind, slot, full, r0)
        counters[0] += s + m + 1
        label += s + m + 1
    return x


@njit(cache=True)
def _build_trie(nav, psi, n, V, C, L, Jrd, Jslots, thr, counters):
    nbits = nav.nbits
    parens = np.zeros(2 * (n + 1), dtype=np.uint8)
    chars = np.zeros(n + 2, dtype=np.int64)
    ebits = np.zeros(n + 2, dtype=np.uint8)
    U = np.zeros((nav.nodes >> 6) + 1, dtype=np.uint64)
    st_k = np.zeros(nav.nodes + 1, dtype=np.int64)
    st_sd = np.zeros(nav.nodes + 1, dtype=np.int64)
    top = 0
    w = 0
    parens[w] = 1
    w += 1
    pre = 1
    q = 2
    while q < nbits:
        if isopen(nav, q):
            v = node_at(nav, q)
            sd_u = st_sd[top]
            full = False
            sdv = 0
            if not isopen(nav, q + 1):
                k = np.int64(getbit(L, leaf_rank_k(nav, v)))
            elif getbit(V, v):
                full = True
                sdv = str_depth_k(nav, psi, v, counters)
                k = sdv - sd_u
            else:
                k, _, _ = counter_read_k(nav, C, Jrd, Jslots, thr, v)
            if k > 0:
                setbit(U, v)
                ebits[pre + 1] = 1
                a = lmost_rank_k(nav, v)
                for _ in range(sd_u):
                    a = psi[a]
                counters[1] += sd_u
                for j in range(k):
                    pre += 1
                    parens[w] = 1
                    w += 1
                    chars[pre] = head_r(nav, a)
                    if j + 1 < k:
                        a = psi[a]
                        counters[1] += 1
            if full:
                top += 1
                st_k[top] = k
                st_sd[top] = sdv
                q += 1
            else:
                w += k
                q = close_of(nav, q) + 1
        else:
            w += st_k[top]
            top -= 1
            q += 1
    w += 1
    return parens[:w], chars[2:pre + 1], U, ebits[1:pre + 1], pre - 1


# ---------------------------------------------------------------------------
# Python surface


def _empty_i64():
    return np.zeros(0, dtype=np.int64)


def _dummy_rankdir():
    return make_rankdir(np.zeros(1, dtype=np.uint64), 1)


def classify_nodes(idx):
    """``bv_J`` marking the jump nodes, and the micro threshold."""
    thr = int(micro_threshold(idx.n))
    words = _classify(idx.nav, thr)
    bv = BitVector.from_words(words, idx.tree.n_nodes)
    bv.support()
    return bv, thr


class ExplorationState:
    """Mutable per-run state: V, C, the leaf-edge marks and the J slots."""

    def __init__(self, idx, bv_j=None, thr=None):
        if bv_j is None:
            bv_j, thr = classify_nodes(idx)
        self.idx = idx
        self.bv_j = bv_j
        self.jrd = bv_j.support().rd
        self.n_jump = bv_j.support().ones
        self.thr = int(thr)
        nodes = idx.tree.n_nodes
        self.bv_v = BitVector(nodes)
        self.bv_c = BitVector(idx.n)
        self.bv_l = BitVector(idx.n)    # leaf edges holding an LZ node
        self.J = np.zeros(self.n_jump + 2, dtype=np.int64)

    def reset(self):
        for bv in (self.bv_v, self.bv_c, self.bv_l):
            bv.clear()
        self.J[:] = 0

    def _touch(self):
        for bv in (self.bv_v, self.bv_c, self.bv_l):
            bv.generation += 1

    def counter(self, v):
        """Current n_v of an internal node whose edge is not full."""
        m, _, _ = counter_read_k(self.idx.nav, self.bv_c.words, self.jrd, self.J, self.thr, v)
        return int(m)

    def is_micro(self, v):
        return self.idx.tree.subtree_size(v) <= self.thr

    def size_in_bits(self):
        lg = max(1, math.ceil(math.log2(self.idx.n + 1)))
        return {
            "bv_V": self.bv_v.n_bits,
            "bv_C": self.bv_c.n_bits,
            "bv_J": self.bv_j.n_bits + self.bv_j.support().size_in_bits(),
            "J": self.n_jump * lg,
        }


def find_edge(idx, state, cursor):
    u, v, _ = find_edge_k(idx.nav, state.bv_v.words, cursor.leaf, make_counters())
    return int(u), int(v)


def explore(idx, state, v, cursor, s, counters=None):
    """Post-increment n_v for internal v on the path to the cursor's leaf."""
    if idx.tree.is_leaf(v):
        raise ValueError("explore takes an internal node")
    if getbit(state.bv_v.words, v):
        raise ValueError(f"edge into node {v} is already fully explored")
    if counters is None:
        counters = make_counters()
    m = _explore_k(idx.nav, idx.psi, state.bv_v.words, state.bv_c.words, state.jrd,
                   state.J, state.thr, v, cursor.leaf, s, counters)
    state._touch()
    return int(m)


@dataclass
class Lz78Pass:
    z: int
    counters: np.ndarray
    trace_v: np.ndarray | None = None
    trace_m: np.ndarray | None = None


def _call(idx, state, mode, W=None, Wrd=None, Wslots=None, out=None, Urd=None, Erd=None,
          fidx=None, check=False):
    n = idx.n
    counters = make_counters()
    if check:
        shadow = np.zeros(idx.tree.n_nodes + 1, dtype=np.int64)
        tv = np.zeros(n + 1, dtype=np.int64)
        tm = np.zeros(n + 1, dtype=np.int64)
    else:
        shadow = tv = tm = _empty_i64()
    dummy_rd = _dummy_rankdir()
    empty_words = np.zeros(1, dtype=np.uint64)
    out_ref, out_char = out if out is not None else (_empty_i64(), _empty_i64())
    z = _run(idx.nav, idx.psi, idx.alpha, n, mode,
             state.bv_v.words, state.bv_c.words, state.bv_l.words, state.jrd, state.J, state.thr,
             W if W is not None else empty_words,
             Wrd if Wrd is not None else dummy_rd,
             Wslots if Wslots is not None else _empty_i64(),
             out_ref, out_char,
             Urd if Urd is not None else dummy_rd,
             Erd if Erd is not None else dummy_rd,
             fidx if fidx is not None else _empty_i64(),
             shadow, tv, tm, counters)
    state._touch()
    k = int(counters[3])
    return Lz78Pass(int(z), counters, tv[:k] if check else None, tm[:k] if check else None)


def lz78_pass1(idx, state, check=False):
    """Explore the LZ trie once; returns (bv_W, pass record)."""
    bv_w = BitVector(idx.tree.n_nodes)
    rec = _call(idx, state, PASS1, W=bv_w.words, check=check)
    bv_w.generation += 1
    return bv_w, rec


def lz78_pass2(idx, state, bv_w, check=False):
    """Re-explore from a reset state and emit the factors; returns (factors, W, record)."""
    state.reset()
    rs = bv_w.support()
    Wslots = np.zeros(rs.ones + 1, dtype=np.int64)
    out = (np.zeros(idx.n, dtype=np.int64), np.zeros(idx.n, dtype=np.int64))
    rec = _call(idx, state, PASS2, Wrd=rs.rd, Wslots=Wslots, out=out, check=check)
    rm = idx.restore_map
    factors = [Lz78Factor(int(out[0][k]), int(rm[out[1][k] - 1])) for k in range(rec.z)]
    return factors, [int(y) for y in Wslots[1:]], rec


@dataclass
class LZTrie:
    """LZ trie in BP form; per-node arrays are in trie preorder without the root."""

    bp: str
    edge_chars: np.ndarray
    factor_index: np.ndarray
    restore_map: np.ndarray

    @property
    def z(self):
        return len(self.bp) // 2 - 1

    def navigator(self):
        return BpNavigator.from_string(self.bp)

    def factors(self):
        """Factorization read off the labelled trie, in factor-index order."""
        tree = self.navigator()
        z = self.z
        out = [None] * z
        for pre in range(2, z + 2):
            par = tree.parent(pre)
            ref = 0 if par == 1 else int(self.factor_index[par - 2])
            x = int(self.factor_index[pre - 2])
            out[x - 1] = Lz78Factor(ref, int(self.restore_map[self.edge_chars[pre - 2] - 1]))
        return out

    def serialize(self):
        chars = " ".join(escape_byte(int(self.restore_map[c - 1])) for c in self.edge_chars)
        idxs = " ".join(str(int(x)) for x in self.factor_index)
        return f"{self.bp}\n{chars}\n{idxs}\n"

    @classmethod
    def parse(cls, text):
        lines = text.split("\n")
        if len(lines) < 3:
            raise ValueError("an LZ trie file has three lines")
        bp = lines[0].strip()
        BpNavigator.from_string(bp)
        raw = bytes(unescape_byte(tok) for tok in lines[1].split())
        fidx = np.array([int(t) for t in lines[2].split()], dtype=np.int64)
        z = len(bp) // 2 - 1
        if len(raw) != z or fidx.size != z:
            raise ValueError("LZ trie lines disagree on the node count")
        present = sorted(set(raw))
        restore_map = np.array(present, dtype=np.uint8)
        lookup = {b: i + 1 for i, b in enumerate(present)}
        chars = np.array([lookup[b] for b in raw], dtype=np.int64)
        return cls(bp, chars, fidx, restore_map)


def escape_byte(b):
    """Printable ASCII other than backslash stays literal; everything else is \\xHH."""
    if 0x21 <= b <= 0x7E and b != 0x5C:
        return chr(b)
    return f"\\x{b:02x}"


def unescape_byte(tok):
    if len(tok) == 1:
        return ord(tok)
    if len(tok) == 4 and tok.startswith("\\x"):
        return int(tok[2:], 16)
    raise ValueError(f"bad byte token {tok!r}")


def build_lz_trie(idx, state, z):
    """Trie topology and edge characters from the pass-1 state.

    Returns ``(trie, bv_U, bv_E)``; ``factor_index`` is still all zero.
    """
    counters = make_counters()
    parens, chars, U, ebits, nlz = _build_trie(
        idx.nav, idx.psi, idx.n, state.bv_v.words, state.bv_c.words, state.bv_l.words,
        state.jrd, state.J, state.thr, counters)
    if nlz != z:
        raise AssertionError(f"trie has {nlz} nodes for {z} factors")
    bp = np.where(parens.astype(bool), ord("("), ord(")")).astype(np.uint8).tobytes().decode()
    bv_u = BitVector.from_words(U, idx.tree.n_nodes)
    bv_e = BitVector.from_words(bits_to_words(ebits), max(1, ebits.size))
    trie = LZTrie(bp, chars, np.zeros(z, dtype=np.int64), idx.restore_map)
    return trie, bv_u, bv_e


def lz78_pass3(idx, state, trie, bv_u, bv_e):
    """Re-explore and write each factor index into its trie node."""
    state.reset()
    fidx = np.zeros(trie.z + 2, dtype=np.int64)
    rec = _call(idx, state, PASS3, Urd=bv_u.support().rd, Erd=bv_e.support().rd, fidx=fidx)
    trie.factor_index = fidx[2:trie.z + 2].copy()
    if trie.z and trie.factor_index.min() == 0:
        raise AssertionError("a trie node received no factor index")
    return trie, rec


@dataclass
class Lz78Result:
    factors: list
    z_w: int
    witness_indices: list
    passes: list
    bv_w: BitVector | None = None

    @property
    def z(self):
        return len(self.factors)

    @property
    def z_r(self):
        return sum(1 for f in self.factors if f.ref)


def lz78(idx, check=False):
    """Two-pass streaming LZ78."""
    state = ExplorationState(idx)
    bv_w, p1 = lz78_pass1(idx, state, check=check)
    factors, slots, p2 = lz78_pass2(idx, state, bv_w, check=check)
    return Lz78Result(factors, len(slots), slots, [p1, p2], bv_w)


def lz78_trie(idx):
    """Explicit LZ trie labelled with factor indices (passes 1 and 3)."""
    state = ExplorationState(idx)
    _, p1 = lz78_pass1(idx, state)
    trie, bv_u, bv_e = build_lz_trie(idx, state, p1.z)
    trie, p3 = lz78_pass3(idx, state, trie, bv_u, bv_e)
    return trie, [p1, p3]
