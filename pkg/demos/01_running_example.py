"""Walk through the suffix-tree index of the text aaababaaabaaba.

Prints the psi-array, the parentheses of the tree, the leaves in text order
and the string depth of every internal node.
"""
from cstlz import index_from_bytes

text, idx = index_from_bytes(b"aaababaaabaaba")
tree = idx.tree

print("psi  :", idx.psi_values)
print("BP   :", idx.bp_string())
print(f"nodes: {tree.n_nodes}, leaves: {tree.n_leaves}, root degree: {tree.degree(1)}")
print("alpha (leaf rank of the suffix at position 1):", idx.alpha)

# the cursor is the only place a leaf label lives
print("\nleaves in text order (label, leaf rank, preorder, first char):")
cur = idx.smallest_leaf()
for _ in range(idx.n):
    ch = idx.restore_char(idx.head(cur.leaf))
    print(f"  {cur.label:2d}  rank {tree.leaf_rank(cur.leaf):2d}  node {cur.leaf:2d}  "
          f"{chr(ch) if ch else '$'}")
    cur = idx.next_leaf(cur)

print("\nstring depths of internal nodes:")
for v in range(1, tree.n_nodes + 1):
    if tree.is_internal(v):
        print(f"  node {v:2d}: depth {tree.depth(v)}, string depth {idx.str_depth(v)}")

print("\nretained bits:", idx.size_in_bits())
