"""LZ77 and LZ78 factorization by walking a compressed suffix tree.

The index keeps only the psi-array and the balanced-parentheses topology of
the suffix tree; the factorizers visit its leaves in text order and store
their per-run state in bit vectors.
"""
from .bitvec import BitVector, RankSelect, StaleSupportError
from .bptree import BpNavigator
from .codec import decode, decode_factors, encode
from .lz77 import Lz77Factor, lz77, lz77_classic, lz77_tradeoff
from .lz78 import LZTrie, Lz78Factor, lz78, lz78_trie
from .stindex import (
    SentinelCollisionError,
    SuffixTreeIndex,
    build_index,
    index_from_bytes,
    prepare_text,
)

__all__ = [
    "BitVector", "RankSelect", "StaleSupportError", "BpNavigator",
    "decode", "decode_factors", "encode",
    "Lz77Factor", "lz77", "lz77_classic", "lz77_tradeoff",
    "LZTrie", "Lz78Factor", "lz78", "lz78_trie",
    "SentinelCollisionError", "SuffixTreeIndex", "build_index", "index_from_bytes", "prepare_text",
]
