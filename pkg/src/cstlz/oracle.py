"""Brute-force references, written straight from the definitions.

Nothing here touches the succinct machinery: texts are plain ``bytes`` with
the sentinel byte 0 appended, trees are pointer structures, and every answer
comes from direct search.  The factorizers return the same record types as
the fast path so results compare with ``==``.
"""
from .lz77 import Lz77Factor
from .lz78 import Lz78Factor


def with_sentinel(raw):
    raw = bytes(raw)
    if 0 in raw:
        raise ValueError("text already contains the sentinel byte")
    return raw + b"\x00"


# ---------------------------------------------------------------------------
# factorizations


def naive_lz77(t):
    """Longest previous factor, leftmost source, literal when nothing repeats."""
    out = []
    n = len(t)
    j = 0
    while j < n:
        best_i, L = -1, 0
        i = 0
        # an occurrence of the longer prefix is also one of the shorter, so the
        # leftmost start only moves right while the prefix grows
        while j + L < n:
            k = t.find(t[j:j + L + 1], i, j + L)
            if k < 0 or k >= j:
                break
            best_i, i, L = k, k, L + 1
        if L == 0:
            out.append(Lz77Factor(char=t[j]))
            j += 1
        else:
            out.append(Lz77Factor(ref=best_i + 1, length=L))
            j += L
    return out


def naive_lz77_classic(t):
    """Longest previous factor followed by one explicit character."""
    out = []
    n = len(t)
    j = 0
    while j < n:
        best_i, L = -1, 0
        i = 0
        while j + L + 1 < n:
            k = t.find(t[j:j + L + 1], i, j + L)
            if k < 0 or k >= j:
                break
            best_i, i, L = k, k, L + 1
        if L == 0:
            out.append(Lz77Factor(char=t[j]))
        else:
            out.append(Lz77Factor(char=t[j + L], ref=best_i + 1, length=L))
        j += L + 1
    return out


def naive_lz78(t):
    """Each factor is the longest earlier factor plus one character."""
    trie = {}
    out = []
    j = 0
    n = len(t)
    while j < n:
        node, ref = trie, 0
        while j < n and t[j] in node:
            ref, node = node[t[j]]
            j += 1
        if j == n:
            raise AssertionError("text ended inside a previous factor")
        node[t[j]] = (len(out) + 1, {})
        out.append(Lz78Factor(ref, t[j]))
        j += 1
    return out


def naive_lz78_trie(t):
    """(bp, edge bytes, factor indices) of the LZ78 trie, children by byte order."""
    factors = naive_lz78(t)
    nodes = [{}]  # nodes[x] maps child byte -> child factor index
    for x, f in enumerate(factors, start=1):
        nodes.append({})
        nodes[f.ref][f.char] = x
    bp, chars, idx = ["("], [], []

    def dfs(x):
        for c in sorted(nodes[x]):
            y = nodes[x][c]
            bp.append("(")
            chars.append(c)
            idx.append(y)
            dfs(y)
            bp.append(")")

    dfs(0)
    bp.append(")")
    return "".join(bp), bytes(chars), idx


def naive_tradeoff_rounds(t, budget):
    """Rounds of the budgeted LZ77 run, from the brute-force factorization.

    A witness is identified by the occurrence set of the factor string (two
    strings with the same occurrences end on the same suffix-tree edge).  A
    round takes factors in text order until one needs a witness beyond the
    budget of distinct witnesses collected in that round.
    """
    rounds, seen = 1, set()
    p = 0
    for f in naive_lz77(t):
        if not f.is_literal:
            s = t[p:p + f.length]
            key = frozenset(i for i in range(len(t)) if t.startswith(s, i))
            if key not in seen:
                if len(seen) == budget:
                    rounds += 1
                    seen = set()
                seen.add(key)
        p += f.span
    return rounds


def decode_lz77(factors):
    out = bytearray()
    for f in factors:
        if f.is_literal:
            out.append(f.char)
            continue
        for k in range(f.length):
            out.append(out[f.ref - 1 + k])
        if f.char is not None:
            out.append(f.char)
    return bytes(out)


def decode_lz78(factors):
    pieces = [b""]
    for f in factors:
        pieces.append(pieces[f.ref] + bytes([f.char]))
    return b"".join(pieces)


# ---------------------------------------------------------------------------
# suffix arrays


def naive_sa(t):
    """0-based suffix array; byte 0 sorts first, as the sentinel should."""
    return sorted(range(len(t)), key=lambda i: t[i:])


def naive_lcp(t, sa):
    """lcp[r] = LCP of suffixes sa[r-1] and sa[r]; lcp[0] = 0."""
    out = [0]
    for r in range(1, len(sa)):
        a, b = t[sa[r - 1]:], t[sa[r]:]
        k = 0
        while k < len(a) and k < len(b) and a[k] == b[k]:
            k += 1
        out.append(k)
    return out


def naive_psi(t):
    """1-based psi values: rank of suffix i+1 for the suffix of rank r."""
    sa = naive_sa(t)
    n = len(t)
    isa = [0] * n
    for r, i in enumerate(sa):
        isa[i] = r
    return [isa[(i + 1) % n] + 1 for i in sa]


# ---------------------------------------------------------------------------
# pointer trees


class Node:
    __slots__ = ("parent", "children", "label", "depth", "str_depth", "pre")

    def __init__(self, parent=None):
        self.parent = parent
        self.children = []
        self.label = None    # text position (1-based) for suffix-tree leaves
        self.depth = 0
        self.str_depth = 0
        self.pre = 0


class OrdinalTree:
    """Pointer tree with the navigation answers computed by brute force."""

    def __init__(self, root):
        self.root = root
        self.nodes = []

        stack = [root]
        while stack:
            v = stack.pop()
            self.nodes.append(v)
            v.pre = len(self.nodes)
            for c in reversed(v.children):
                c.depth = v.depth + 1
                stack.append(c)
        self.leaves = [v for v in self.nodes if not v.children]

    @classmethod
    def from_parent_list(cls, parents):
        """``parents[k]`` is the index of node k's parent (k >= 1); node 0 is the root."""
        nodes = [Node()]
        for k, p in enumerate(parents[1:], start=1):
            nodes.append(Node(nodes[p]))
            nodes[p].children.append(nodes[k])
        return cls(nodes[0])

    def node(self, pre):
        return self.nodes[pre - 1]

    def tables(self, anc_depth):
        """Per-preorder answers, same layout as ``BpNavigator.node_table``."""
        N = len(self.nodes)
        t = {k: [0] * (N + 1) for k in ("parent", "depth", "size", "degree", "child_rank",
                                         "leaf_rank", "lmost_rank", "rmost_rank", "level_anc")}
        for r, leaf in enumerate(self.leaves, start=1):
            t["leaf_rank"][leaf.pre] = r
        for v in reversed(self.nodes):  # children before parents
            p = v.pre
            t["depth"][p] = v.depth
            t["degree"][p] = len(v.children)
            if v.children:
                t["size"][p] = 1 + sum(t["size"][c.pre] for c in v.children)
                t["lmost_rank"][p] = t["lmost_rank"][v.children[0].pre]
                t["rmost_rank"][p] = t["rmost_rank"][v.children[-1].pre]
            else:
                t["size"][p] = 1
                t["lmost_rank"][p] = t["rmost_rank"][p] = t["leaf_rank"][p]
            for i, c in enumerate(v.children, start=1):
                t["parent"][c.pre] = p
                t["child_rank"][c.pre] = i
            t["level_anc"][p] = self.level_anc(v, anc_depth[p]).pre
        return t

    def bp(self):
        out = []
        stack = [(self.root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                out.append(")")
                continue
            out.append("(")
            stack.append((v, True))
            for c in reversed(v.children):
                stack.append((c, False))
        return "".join(out)

    def subtree(self, v):
        out = []
        stack = [v]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(reversed(x.children))
        return out

    def subtree_size(self, v):
        return len(self.subtree(v))

    def leaf_rank(self, v):
        return self.leaves.index(v) + 1

    def leaf_range(self, v):
        ls = [x for x in self.subtree(v) if not x.children]
        return self.leaf_rank(ls[0]), self.leaf_rank(ls[-1])

    def level_anc(self, v, d):
        while v.depth > d:
            v = v.parent
        return v

    def child_rank(self, v):
        return v.parent.children.index(v) + 1

    def lca(self, a, b):
        while a.depth > b.depth:
            a = a.parent
        while b.depth > a.depth:
            b = b.parent
        while a is not b:
            a, b = a.parent, b.parent
        return a


def pointer_suffix_tree(t):
    """Suffix tree of ``t`` (sentinel included) by inserting suffixes into a compacted trie.

    Edges are kept as ``(start, end)`` slices of ``t`` in a side dict; each
    node records its string depth, leaves their 1-based text position.
    """
    n = len(t)
    root = Node()
    edge = {}  # id(node) -> (start, end) of its in-edge label

    for i in range(n):
        v = root
        k = i
        while True:
            nxt = None
            for c in v.children:
                s, _ = edge[id(c)]
                if t[s] == t[k]:
                    nxt = c
                    break
            if nxt is None:
                leaf = Node(v)
                leaf.label = i + 1
                leaf.str_depth = n - i
                edge[id(leaf)] = (k, n)
                _insert_sorted(v, leaf, t, edge)
                break
            s, e = edge[id(nxt)]
            m = 0
            while s + m < e and t[s + m] == t[k + m]:
                m += 1
            if s + m == e:
                v, k = nxt, k + m
                continue
            mid = Node(v)
            mid.str_depth = v.str_depth + m
            edge[id(mid)] = (s, s + m)
            v.children[v.children.index(nxt)] = mid
            nxt.parent = mid
            edge[id(nxt)] = (s + m, e)
            mid.children.append(nxt)
            leaf = Node(mid)
            leaf.label = i + 1
            leaf.str_depth = n - i
            edge[id(leaf)] = (k + m, n)
            _insert_sorted(mid, leaf, t, edge)
            break

    tree = OrdinalTree(root)
    tree.edge_len = {v.pre: edge[id(v)][1] - edge[id(v)][0] for v in tree.nodes if v is not root}
    return tree


def _insert_sorted(v, c, t, edge):
    v.children.append(c)
    v.children.sort(key=lambda x: t[edge[id(x)][0]])


# ---------------------------------------------------------------------------
# bit vectors


def naive_rank(bits, c, i):
    """Occurrences of bit ``c`` in positions 1..i of a 0/1 sequence."""
    return sum(1 for b in bits[:i] if b == c)


def naive_select(bits, c, j):
    seen = 0
    for p, b in enumerate(bits, start=1):
        if b == c:
            seen += 1
            if seen == j:
                return p
    return -1
