"""Operation counts and retained bits as the text grows.

The per-character ratios should stay flat: each pass makes at most 3n
next_leaf calls and at most 2n + (nodes) parent or level-ancestor steps.
"""
import time

import numpy as np

from cstlz import index_from_bytes
from cstlz.lz77 import lz77
from cstlz.lz78 import lz78

rng = np.random.default_rng(0)
print(f"{'n':>8} {'algo':>5} {'z':>7} {'next_leaf/n':>12} {'climbs/n':>9} {'bits/char':>10} {'sec':>6}")
for n in (1 << 12, 1 << 14, 1 << 16, 1 << 18):
    raw = rng.choice(np.arange(97, 101), n).astype(np.uint8).tobytes()
    _, idx = index_from_bytes(raw)
    bits = sum(idx.size_in_bits().values())
    for name, fn in (("lz77", lz77), ("lz78", lz78)):
        t0 = time.perf_counter()
        res = fn(idx)
        dt = time.perf_counter() - t0
        c = res.counters[0] if name == "lz77" else res.passes[0].counters
        print(f"{n:8d} {name:>5} {res.z:7d} {c[1] / idx.n:12.2f} {c[2] / idx.n:9.2f} "
              f"{bits / idx.n:10.1f} {dt:6.2f}")
