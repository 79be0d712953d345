import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cstlz.bitvec import BitVector, StaleSupportError
from cstlz.oracle import naive_rank, naive_select

from conftest import FIG1_LEAVES


def test_new_vectors_are_zero():
    assert BitVector(3).to_string() == "000"
    bv = BitVector(1)
    bv.set(1)
    assert bv.to_string() == "1"
    with pytest.raises(ValueError):
        BitVector(0)


def test_fig1_leaves_row():
    ones = [p for p, c in enumerate(FIG1_LEAVES, start=1) if c == "1"]
    bv = BitVector.from_positions(48, ones)
    assert bv.to_string() == FIG1_LEAVES
    assert bv.rank(1, 6) == 2
    assert bv.select(1, 2) == 5


def test_small_rank_select():
    assert BitVector.from_string("000").rank(1, 3) == 0
    assert BitVector.from_string("010").select(1, 1) == 2
    assert BitVector.from_string("010").select(0, 2) == 3
    with pytest.raises(IndexError):
        BitVector.from_string("010").select(1, 2)


def test_clear_range():
    bv = BitVector.from_string("111")
    bv.clear_range(2, 2)
    assert bv.to_string() == "101"
    bv.clear_range(1, 3)
    assert bv.count() == 0
    bv = BitVector.from_positions(8, [3, 7])
    bv.clear_range(4, 6)
    assert bv.positions() == [3, 7]
    with pytest.raises(ValueError):
        bv.clear_range(5, 4)


def test_clear_range_across_words():
    bv = BitVector.from_positions(300, range(1, 301))
    bv.clear_range(60, 200)
    assert bv.positions() == list(range(1, 60)) + list(range(201, 301))


def test_popcount_range():
    assert BitVector(5).popcount_range(1, 5) == 0
    bv = BitVector.from_string("1101101")
    for i in range(1, 8):
        for j in range(i, 8):
            assert bv.popcount_range(i, j) == bv.rank(1, j) - bv.rank(1, i - 1)


def test_stale_support_detected():
    bv = BitVector.from_string("0101")
    rs = bv.support()
    assert rs.rank(1, 4) == 2
    bv.set(1)
    with pytest.raises(StaleSupportError):
        rs.rank(1, 4)
    assert bv.support().rank(1, 4) == 3


def test_out_of_range_positions():
    bv = BitVector(4)
    with pytest.raises(IndexError):
        bv[5]
    with pytest.raises(IndexError):
        bv.set(0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=700))
def test_rank_select_match_scan(bits):
    bv = BitVector.from_string("".join(map(str, bits)))
    rs = bv.support()
    for i in range(len(bits) + 1):
        r1 = rs.rank(1, i)
        assert r1 == naive_rank(bits, 1, i)
        assert r1 + rs.rank(0, i) == i
    for c in (0, 1):
        for j in range(1, bits.count(c) + 1):
            assert rs.select(c, j) == naive_select(bits, c, j)


def test_select_inverts_rank_dense():
    rng = np.random.default_rng(3)
    bits = (rng.random(5000) < 0.5).astype(int)
    bv = BitVector.from_string("".join(map(str, bits)))
    for p in np.flatnonzero(bits)[::7] + 1:
        assert bv.select(1, bv.rank(1, int(p))) == p
