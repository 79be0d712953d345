"""Fixed-length bit vectors with rank/select supports.

Positions are 1-based. Bit ``p`` lives at bit ``p & 63`` of word ``p >> 6``;
bit 0 of word 0 is a permanently clear pad so that position 0 never counts.

The njit kernels at the top of this module operate on raw ``uint64`` word
arrays and on :class:`RankDir` tuples; the higher layers (tree navigation,
factorization passes) call them directly.  :class:`BitVector` and
:class:`RankSelect` are the Python-facing wrappers.
"""
from collections import namedtuple

import numpy as np
from numba import njit

WORD = 64
WORDS_PER_SUPER = 8
SUPER = WORD * WORDS_PER_SUPER

_ONE = np.uint64(1)
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)

# words: uint64[]; sup: int64 ones before each superblock; rel: uint16 ones
# before each word inside its superblock; nbits: logical length.
RankDir = namedtuple("RankDir", "words sup rel nbits")


class StaleSupportError(RuntimeError):
    """A rank/select support was queried after its vector changed."""


# ---------------------------------------------------------------------------
# kernels


@njit(cache=True)
def popcount64(x):
    x = x - ((x >> _ONE) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True)
def nwords_for(nbits):
    return (nbits >> 6) + 1


@njit(cache=True)
def getbit(words, p):
    return (words[p >> 6] >> np.uint64(p & 63)) & _ONE


@njit(cache=True)
def setbit(words, p):
    words[p >> 6] |= _ONE << np.uint64(p & 63)


@njit(cache=True)
def unsetbit(words, p):
    words[p >> 6] &= ~(_ONE << np.uint64(p & 63))


@njit(cache=True)
def _low_mask(b):
    # bits 0..b inclusive
    if b >= 63:
        return _ALL
    return (_ONE << np.uint64(b + 1)) - _ONE


@njit(cache=True)
def popcount_upto(words, i):
    """Ones in positions [0, i] by a plain word scan (no directory)."""
    if i < 0:
        return 0
    w = i >> 6
    c = 0
    for k in range(w):
        c += popcount64(words[k])
    return c + popcount64(words[w] & _low_mask(i & 63))


@njit(cache=True)
def popcount_span(words, i, j):
    """Ones in positions [i, j], i <= j."""
    wi = i >> 6
    wj = j >> 6
    lo = ~(_low_mask((i & 63) - 1)) if (i & 63) > 0 else _ALL
    hi = _low_mask(j & 63)
    if wi == wj:
        return popcount64(words[wi] & lo & hi)
    c = popcount64(words[wi] & lo) + popcount64(words[wj] & hi)
    for k in range(wi + 1, wj):
        c += popcount64(words[k])
    return c


@njit(cache=True)
def clear_span(words, i, j):
    wi = i >> 6
    wj = j >> 6
    lo = ~(_low_mask((i & 63) - 1)) if (i & 63) > 0 else _ALL
    hi = _low_mask(j & 63)
    if wi == wj:
        words[wi] &= ~(lo & hi)
        return
    words[wi] &= ~lo
    words[wj] &= ~hi
    for k in range(wi + 1, wj):
        words[k] = np.uint64(0)


@njit(cache=True)
def build_directory(words):
    nw = words.shape[0]
    nsup = (nw + WORDS_PER_SUPER - 1) // WORDS_PER_SUPER
    sup = np.zeros(nsup + 1, dtype=np.int64)
    rel = np.zeros(nw, dtype=np.uint16)
    total = 0
    inner = 0
    for w in range(nw):
        if w % WORDS_PER_SUPER == 0:
            sup[w // WORDS_PER_SUPER] = total
            inner = 0
        rel[w] = inner
        c = popcount64(words[w])
        inner += c
        total += c
    sup[nsup] = total
    return sup, rel


@njit(cache=True)
def rank1(rd, i):
    """Ones in positions 1..i (0 <= i <= nbits)."""
    w = i >> 6
    return (rd.sup[w >> 3] + np.int64(rd.rel[w])
            + popcount64(rd.words[w] & _low_mask(i & 63)))


@njit(cache=True)
def _ones_before_word(rd, w):
    return rd.sup[w >> 3] + np.int64(rd.rel[w])


@njit(cache=True)
def _select_in_word(x, j):
    # position (0..63) of the j-th set bit of x, j >= 1
    for b in range(64):
        if (x >> np.uint64(b)) & _ONE:
            j -= 1
            if j == 0:
                return b
    return -1


@njit(cache=True)
def select1(rd, j):
    """Position of the j-th one; -1 when there are fewer than j ones."""
    sup = rd.sup
    nsup = sup.shape[0] - 1
    if j < 1 or j > sup[nsup]:
        return -1
    lo = 0
    hi = nsup - 1
    while lo < hi:  # last superblock with sup[k] < j
        mid = (lo + hi + 1) >> 1
        if sup[mid] < j:
            lo = mid
        else:
            hi = mid - 1
    nw = rd.words.shape[0]
    w = lo * WORDS_PER_SUPER
    end = min(w + WORDS_PER_SUPER, nw)
    while w + 1 < end and _ones_before_word(rd, w + 1) < j:
        w += 1
    return (w << 6) + _select_in_word(rd.words[w], j - _ones_before_word(rd, w))


@njit(cache=True)
def _zeros_before_word(rd, w):
    # real zero positions in words[0..w-1]; the pad bit 0 is excluded
    if w == 0:
        return 0
    return (w << 6) - _ones_before_word(rd, w) - 1


@njit(cache=True)
def select0(rd, j):
    """Position of the j-th zero in 1..nbits; -1 when absent."""
    total_zeros = rd.nbits - rank1(rd, rd.nbits)
    if j < 1 or j > total_zeros:
        return -1
    nsup = rd.sup.shape[0] - 1
    lo = 0
    hi = nsup - 1
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        if _zeros_before_word(rd, mid * WORDS_PER_SUPER) < j:
            lo = mid
        else:
            hi = mid - 1
    nw = rd.words.shape[0]
    w = lo * WORDS_PER_SUPER
    end = min(w + WORDS_PER_SUPER, nw)
    while w + 1 < end and _zeros_before_word(rd, w + 1) < j:
        w += 1
    inv = ~rd.words[w]
    if w == 0:
        inv &= ~_ONE
    return (w << 6) + _select_in_word(inv, j - _zeros_before_word(rd, w))


@njit(cache=True)
def _rank_many(rd, pos, out):
    for k in range(pos.shape[0]):
        out[k] = rank1(rd, pos[k])


@njit(cache=True)
def _select_many(rd, js, zero, out):
    for k in range(js.shape[0]):
        out[k] = select0(rd, js[k]) if zero else select1(rd, js[k])


def make_rankdir(words, nbits):
    sup, rel = build_directory(words)
    return RankDir(words, sup, rel, np.int64(nbits))


def rankdir_bits(rd):
    """Bits taken by the directory (not the payload)."""
    return int(rd.sup.size) * 64 + int(rd.rel.size) * 16


# ---------------------------------------------------------------------------
# Python surface


class BitVector:
    """Mutable bit vector of fixed length with 1-based positions."""

    def __init__(self, n_bits):
        n_bits = int(n_bits)
        if n_bits < 1:
            raise ValueError("a bit vector needs at least one position")
        self.n_bits = n_bits
        self.words = np.zeros(nwords_for(n_bits), dtype=np.uint64)
        self.generation = 0
        self._support = None

    @classmethod
    def from_positions(cls, n_bits, positions):
        bv = cls(n_bits)
        for p in positions:
            bv.set(p)
        return bv

    @classmethod
    def from_string(cls, bits):
        bv = cls(len(bits))
        for p, ch in enumerate(bits, start=1):
            if ch == "1":
                bv.set(p)
            elif ch != "0":
                raise ValueError(f"not a bit: {ch!r}")
        return bv

    @classmethod
    def from_words(cls, words, n_bits):
        bv = cls(n_bits)
        if words.shape != bv.words.shape:
            raise ValueError("word array does not match the length")
        bv.words = words
        return bv

    def __len__(self):
        return self.n_bits

    def _check(self, p):
        if not 1 <= p <= self.n_bits:
            raise IndexError(f"position {p} outside [1, {self.n_bits}]")

    def __getitem__(self, p):
        self._check(p)
        return int(getbit(self.words, p))

    def __setitem__(self, p, bit):
        if bit:
            self.set(p)
        else:
            self.unset(p)

    def set(self, p):
        self._check(p)
        setbit(self.words, p)
        self.generation += 1

    def unset(self, p):
        self._check(p)
        unsetbit(self.words, p)
        self.generation += 1

    def clear(self):
        self.words[:] = 0
        self.generation += 1

    def clear_range(self, i, j):
        if i > j:
            raise ValueError(f"inverted range [{i}, {j}]")
        self._check(i)
        self._check(j)
        clear_span(self.words, i, j)
        self.generation += 1

    def popcount_range(self, i, j):
        if i > j:
            raise ValueError(f"empty or inverted range [{i}, {j}]")
        self._check(i)
        self._check(j)
        return int(popcount_span(self.words, i, j))

    def count(self):
        return int(popcount_upto(self.words, self.n_bits))

    def positions(self):
        return [p for p in range(1, self.n_bits + 1) if getbit(self.words, p)]

    def to_string(self):
        return "".join(str(int(getbit(self.words, p))) for p in range(1, self.n_bits + 1))

    def support(self):
        """A rank/select support over the current contents (cached until mutated)."""
        if self._support is None or self._support.generation != self.generation:
            self._support = RankSelect(self)
        return self._support

    def rank(self, c, i):
        return self.support().rank(c, i)

    def select(self, c, j):
        return self.support().select(c, j)

    def size_in_bits(self):
        return self.n_bits

    def __eq__(self, other):
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.n_bits == other.n_bits and bool(np.array_equal(self.words, other.words))

    def __repr__(self):
        if self.n_bits <= 64:
            return f"BitVector({self.to_string()!r})"
        return f"BitVector(n_bits={self.n_bits}, ones={self.count()})"


class RankSelect:
    """Rank/select directory over a snapshot of a :class:`BitVector`.

    Querying after the vector has been mutated raises
    :class:`StaleSupportError` (checked unless Python runs with ``-O``).
    """

    def __init__(self, bv):
        self.bv = bv
        self.generation = bv.generation
        self.rd = make_rankdir(bv.words, bv.n_bits)
        self.ones = int(self.rd.sup[-1])

    def _fresh(self):
        if __debug__ and self.bv.generation != self.generation:
            raise StaleSupportError("bit vector changed after its support was built")

    def rank(self, c, i):
        self._fresh()
        if not 0 <= i <= self.bv.n_bits:
            raise IndexError(f"rank position {i} outside [0, {self.bv.n_bits}]")
        r1 = int(rank1(self.rd, i))
        return r1 if c else i - r1

    def select(self, c, j):
        self._fresh()
        p = int(select1(self.rd, j) if c else select0(self.rd, j))
        if p < 0:
            raise IndexError(f"no {int(bool(c))}-bit with rank {j}")
        return p

    def rank_many(self, c, positions):
        """Vectorised :meth:`rank` over an integer array."""
        self._fresh()
        pos = np.asarray(positions, dtype=np.int64)
        if pos.size and (pos.min() < 0 or pos.max() > self.bv.n_bits):
            raise IndexError("rank position outside the vector")
        out = np.empty(pos.size, dtype=np.int64)
        _rank_many(self.rd, pos, out)
        return out if c else pos - out

    def select_many(self, c, ranks):
        """Vectorised :meth:`select`; -1 marks ranks with no answer."""
        self._fresh()
        js = np.asarray(ranks, dtype=np.int64)
        out = np.empty(js.size, dtype=np.int64)
        _select_many(self.rd, js, not c, out)
        return out

    def size_in_bits(self):
        return rankdir_bits(self.rd)
