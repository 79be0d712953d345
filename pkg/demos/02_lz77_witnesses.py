"""LZ77 by witnesses: what pass 1 marks and what pass 2 reads back."""
from cstlz import index_from_bytes
from cstlz.lz77 import factor_positions, lz77, lz77_classic, lz77_pass1, lz77_tradeoff

_, idx = index_from_bytes(b"aaababaaabaaba")


def show(factors):
    return "; ".join(
        ("$" if f.char == 0 else chr(f.char)) if f.is_literal else
        f"({f.ref},{f.length}" + ("" if f.char is None else f",{chr(f.char) if f.char else '$'}") + ")"
        for f in factors)


p1 = lz77_pass1(idx, trace=True)
print("witness preorders:", p1.bv_w.positions())
print("factor positions :", p1.labels)
for w in p1.bv_w.positions():
    print(f"  witness {w}: string depth {idx.str_depth(w)}")

res = lz77(idx)
print("\nLZ77   :", show(res.factors))
print(f"z={res.z}  z_R={res.z_r}  z_W={res.z_w}  W={res.witness_positions}")
print("cursor steps / next_leaf / parent climbs (pass 1):", [int(c) for c in p1.counters[:3]])

cl = lz77_classic(idx)
print("\nclassic:", show(cl.factors))
print(f"z_W={cl.z_w}  W={cl.witness_positions}  positions={factor_positions(cl.factors)}")

# fewer witness slots cost more rounds; the output does not change
print("\nbudget  rounds  same output")
for b in (1, 2, 3):
    tr = lz77_tradeoff(idx, b)
    print(f"{b:6d}  {tr.rounds:6d}  {tr.factors == res.factors}")
