"""LZ77 and classic-LZ77 by two passes over the leaves in text order.

Pass 1 climbs from every leaf towards the root, marking visited nodes in
``V`` and stopping at the first node already marked.  When the leaf starts a
factor, that stopping node is the factor's witness: its string depth is the
factor length, and the first leaf that ever climbed through it carries the
referred position.  Pass 2 repeats the walk with the witnesses ranked and
records, per witness, the label of the first leaf passing through it.

Counters (see :func:`cstlz.stindex.make_counters`): slot 0 cursor steps,
slot 1 next_leaf calls (cursor + string-depth walks), slot 2 parent climbs.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .bitvec import BitVector, getbit, make_rankdir, rank1, setbit
from .bptree import leaf_select_k, parent_k
from .stindex import head_k, make_counters, str_depth_k

LITERAL, COPY, CLASSIC = 0, 1, 2


@dataclass(frozen=True)
class Lz77Factor:
    """A literal (``ref == 0``) or a copy of ``length`` bytes from ``ref``.

    Classic factors carry the trailing byte in ``char`` as well.
    """

    char: int | None = None
    ref: int = 0
    length: int = 0

    @property
    def is_literal(self):
        return self.ref == 0

    @property
    def span(self):
        """Text positions covered by the factor."""
        if self.is_literal:
            return 1
        return self.length + (1 if self.char is not None else 0)

    def coding(self):
        if self.is_literal:
            return bytes([self.char])
        if self.char is None:
            return (self.ref, self.length)
        return (self.ref, self.length, bytes([self.char]))


# ---------------------------------------------------------------------------
# kernels


@njit(cache=True)
def _pass1(nav, psi, alpha, n, V, W, classic, prev_j, budget, collect, trace, counters):
    """Returns (j_end, new witnesses, z, z_R, collected)."""
    r = alpha
    p = 1
    z = 0
    zr = 0
    fresh_marks = 0
    ncol = 0
    for label in range(1, n + 1):
        leaf = leaf_select_k(nav, r)
        corresponding = label == p
        if corresponding:
            if trace.shape[0] > 0:
                trace[z] = label
            z += 1
        v = parent_k(nav, leaf)
        counters[2] += 1
        hit = False
        while v != 1:
            if getbit(V, v):
                if corresponding:
                    zr += 1
                    if label > prev_j:
                        if collect.shape[0] > 0:
                            collect[ncol] = v
                            ncol += 1
                        elif not getbit(W, v):
                            if fresh_marks == budget:
                                return label - 1, fresh_marks, z - 1, zr - 1, ncol
                            setbit(W, v)
                            fresh_marks += 1
                    s = str_depth_k(nav, psi, v, counters)
                    p += s + 1 if classic else s
                hit = True
                break
            setbit(V, v)
            v = parent_k(nav, v)
            counters[2] += 1
        if not hit:
            if corresponding:
                p += 1
            elif not classic:
                raise AssertionError("non-corresponding leaf reached the root")
        r = psi[r]
        counters[0] += 1
        counters[1] += 1
    return n, fresh_marks, z, zr, ncol


@njit(cache=True)
def _pass2(nav, psi, alpha, n, V, Wrd, slots, classic, prev_j, j_end,
           out_kind, out_a, out_b, out_c, counters):
    """Fill the factor arrays for factor positions in (prev_j, j_end]."""
    r = alpha
    p = 1
    nf = 0
    pending = -1
    for label in range(1, n + 1):
        if label > j_end and pending < 0:
            break
        leaf = leaf_select_k(nav, r)
        if pending >= 0 and label == p - 1:
            out_c[pending] = head_k(nav, leaf)
            pending = -1
        corresponding = label == p
        emit = corresponding and label > prev_j and label <= j_end
        v = parent_k(nav, leaf)
        counters[2] += 1
        hit = False
        while v != 1:
            if getbit(V, v):
                if corresponding:
                    s = str_depth_k(nav, psi, v, counters)
                    if emit:
                        if not getbit(Wrd.words, v):
                            raise AssertionError("corresponding leaf hit a visited non-witness")
                        out_kind[nf] = CLASSIC if classic else COPY
                        out_a[nf] = slots[rank1(Wrd, v)]
                        out_b[nf] = s
                        if classic:
                            pending = nf
                        nf += 1
                    p += s + 1 if classic else s
                hit = True
                break
            if getbit(Wrd.words, v):
                slots[rank1(Wrd, v)] = label
            setbit(V, v)
            v = parent_k(nav, v)
            counters[2] += 1
        if not hit and corresponding:
            if emit:
                out_kind[nf] = LITERAL
                out_c[nf] = head_k(nav, leaf)
                nf += 1
            p += 1
        r = psi[r]
        counters[0] += 1
        counters[1] += 1
    return nf


# ---------------------------------------------------------------------------
# Python surface


@dataclass
class Pass1Result:
    bv_w: BitVector
    z: int
    z_r: int
    labels: list | None
    counters: np.ndarray
    j_end: int = 0


@dataclass
class Lz77Result:
    factors: list
    z_w: int
    z_r: int
    witness_positions: list
    rounds: int = 1
    counters: list = field(default_factory=list)

    @property
    def z(self):
        return len(self.factors)


def _empty():
    return np.zeros(0, dtype=np.int64)


def lz77_pass1(idx, classic=False, trace=False):
    """Mark witnesses in a fresh ``bv_W`` over node preorders."""
    nodes = idx.tree.n_nodes
    V = np.zeros(nodes // 64 + 1, dtype=np.uint64)
    bv_w = BitVector(nodes)
    counters = make_counters()
    tr = np.zeros(idx.n + 1, dtype=np.int64) if trace else _empty()
    j_end, _, z, zr, _ = _pass1(idx.nav, idx.psi, idx.alpha, idx.n, V, bv_w.words,
                                classic, 0, -1, _empty(), tr, counters)
    bv_w.generation += 1
    labels = [int(x) for x in tr[:z]] if trace else None
    return Pass1Result(bv_w, z, zr, labels, counters, j_end)


def collect_witnesses(idx, classic=False):
    """Pass-1 variant that lists witness preorders instead of marking a bit vector."""
    nodes = idx.tree.n_nodes
    V = np.zeros(nodes // 64 + 1, dtype=np.uint64)
    counters = make_counters()
    col = np.zeros(idx.n + 1, dtype=np.int64)
    dummy = np.zeros(nodes // 64 + 1, dtype=np.uint64)
    _, _, z, zr, ncol = _pass1(idx.nav, idx.psi, idx.alpha, idx.n, V, dummy,
                               classic, 0, -1, col, _empty(), counters)
    return np.unique(col[:ncol]), z, zr


def compress_witness_vector(preorders, n_slots):
    """Frozen bit vector with ones exactly at the given sorted, distinct preorders."""
    pre = np.asarray(preorders, dtype=np.int64)
    if pre.size and np.any(np.diff(pre) <= 0):
        raise ValueError("witness preorders must be strictly increasing (no duplicates)")
    if pre.size and (pre[0] < 1 or pre[-1] > n_slots):
        raise ValueError("witness preorder outside the node range")
    bv = BitVector(n_slots)
    for v in pre:
        bv.set(int(v))
    bv.support()
    return bv


def _run_pass2(idx, bv_w, classic, prev_j, j_end, counters):
    nodes = idx.tree.n_nodes
    V = np.zeros(nodes // 64 + 1, dtype=np.uint64)
    rd = make_rankdir(bv_w.words, bv_w.n_bits)
    z_w = int(rd.sup[-1])
    slots = np.zeros(z_w + 1, dtype=np.int64)
    n = idx.n
    kind = np.zeros(n, dtype=np.int64)
    a = np.zeros(n, dtype=np.int64)
    b = np.zeros(n, dtype=np.int64)
    c = np.zeros(n, dtype=np.int64)
    nf = _pass2(idx.nav, idx.psi, idx.alpha, n, V, rd, slots, classic, prev_j, j_end,
                kind, a, b, c, counters)
    rm = idx.restore_map
    out = []
    for k in range(nf):
        if kind[k] == LITERAL:
            out.append(Lz77Factor(char=int(rm[c[k] - 1])))
        elif kind[k] == COPY:
            out.append(Lz77Factor(ref=int(a[k]), length=int(b[k])))
        else:
            out.append(Lz77Factor(char=int(rm[c[k] - 1]), ref=int(a[k]), length=int(b[k])))
    return out, [int(x) for x in slots[1:]]


def lz77_pass2(idx, bv_w, classic=False):
    """Stream the factors given the pass-1 witnesses; returns (factors, W, counters)."""
    counters = make_counters()
    factors, slots = _run_pass2(idx, bv_w, classic, 0, idx.n, counters)
    return factors, slots, counters


def lz77(idx, classic=False, compressed_witnesses=False):
    """Full two-pass run.  ``compressed_witnesses`` gathers preorders then packs them."""
    if compressed_witnesses:
        pre, _, z_r = collect_witnesses(idx, classic)
        bv_w = compress_witness_vector(pre, idx.tree.n_nodes)
        c1 = None
    else:
        p1 = lz77_pass1(idx, classic)
        bv_w, z_r, c1 = p1.bv_w, p1.z_r, p1.counters
    factors, slots, c2 = lz77_pass2(idx, bv_w, classic)
    counters = [c for c in (c1, c2) if c is not None]
    return Lz77Result(factors, len(slots), z_r, slots, 1, counters)


def lz77_classic(idx):
    return lz77(idx, classic=True)


def lz77_tradeoff(idx, budget):
    """LZ77 using at most ``budget`` witness slots per round.

    Each round reruns pass 1 from the first leaf, suppresses witness marking
    for factors already emitted, and stops before a factor that would need a
    witness beyond the budget; pass 2 then emits the factors of that round.
    """
    budget = int(budget)
    if budget < 1:
        raise ValueError("the witness budget must be at least 1")
    nodes = idx.tree.n_nodes
    factors = []
    counters = []
    prev_j = 0
    rounds = 0
    max_slots = 0
    while prev_j < idx.n:
        rounds += 1
        V = np.zeros(nodes // 64 + 1, dtype=np.uint64)
        bv_w = BitVector(nodes)
        c1 = make_counters()
        j_end, _, _, _, _ = _pass1(idx.nav, idx.psi, idx.alpha, idx.n, V, bv_w.words,
                                        False, prev_j, budget, _empty(), _empty(), c1)
        bv_w.generation += 1
        if j_end == prev_j:
            raise AssertionError("trade-off round made no progress")
        c2 = make_counters()
        chunk, slots = _run_pass2(idx, bv_w, False, prev_j, j_end, c2)
        factors.extend(chunk)
        counters += [c1, c2]
        max_slots = max(max_slots, len(slots))
        prev_j = j_end
    # z_W here is the most witness slots any single round held
    z_r = sum(1 for f in factors if not f.is_literal)
    return Lz77Result(factors, max_slots, z_r, [], rounds, counters)


def factor_positions(factors):
    """Factor positions (1-based) of a factor list."""
    out = []
    p = 1
    for f in factors:
        out.append(p)
        p += f.span
    return out


def witness_bits(idx, z_w):
    return z_w * max(1, math.ceil(math.log2(idx.n + 1)))
