"""LZ78 as a trie laid over the suffix tree.

Shows the node classes that decide where each exploration counter lives,
the state left by pass 1, and the explicit trie after pass 3.
"""
from cstlz import index_from_bytes
from cstlz.lz78 import ExplorationState, build_lz_trie, lz78, lz78_pass1, lz78_pass3

_, idx = index_from_bytes(b"aaababaaabaaba")
tree = idx.tree
state = ExplorationState(idx)
print(f"micro threshold: {state.thr}, jump nodes: {state.bv_j.positions()}")
for v in range(1, tree.n_nodes + 1):
    if tree.is_internal(v):
        kind = ("jump" if state.bv_j[v] else "micro" if state.is_micro(v) else "borrows a slot")
        print(f"  node {v:2d}: subtree {tree.subtree_size(v):2d}  {kind}")

bv_w, rec = lz78_pass1(idx, state, check=True)
print("\nafter pass 1")
print("  V (full edges)   :", state.bv_v.positions())
print("  W (witnesses)    :", bv_w.positions())
print("  C (micro counts) :", state.bv_c.positions())
print("  explore calls (node, counter read):", list(zip(rec.trace_v.tolist(), rec.trace_m.tolist())))

trie, bv_u, bv_e = build_lz_trie(idx, state, rec.z)
trie, _ = lz78_pass3(idx, state, trie, bv_u, bv_e)
print("\nLZ trie:", trie.bp)
print("factor index per trie node:", [int(x) for x in trie.factor_index])

res = lz78(idx)
print("\nLZ78:", "; ".join(
    (chr(f.char) if f.char else "$") if f.ref == 0 else f"({f.ref},{chr(f.char) if f.char else '$'})"
    for f in res.factors))
print("trie agrees with the stream:", trie.factors() == res.factors)
