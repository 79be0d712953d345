"""``cstlz`` command line: build, factorize, decode, verify, stats.

Exit codes: 0 ok, 1 I/O error, 2 input contains byte 0, 3 bad flags,
4 malformed factor or index file, 5 verification mismatch.
"""
import argparse
import sys

from . import codec, oracle
from .lz77 import lz77, lz77_tradeoff, witness_bits
from .lz78 import ExplorationState, LZTrie, lz78, lz78_trie
from .stindex import SentinelCollisionError, SuffixTreeIndex, index_from_bytes

EXIT_IO, EXIT_SENTINEL, EXIT_FLAGS, EXIT_FORMAT, EXIT_MISMATCH = 1, 2, 3, 4, 5
ALGOS = ("lz77", "lz77-classic", "lz78")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_FLAGS)


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, data):
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode) as fh:
        fh.write(data)


def _index(args, raw):
    if getattr(args, "index", None):
        try:
            idx = SuffixTreeIndex.load(args.index)
        except ValueError as e:
            raise codec.CodecError(str(e)) from None
        if idx.n != len(raw) + 1:
            raise UsageError(f"index {args.index} was built for a text of length {idx.n - 1}")
        return idx
    _, idx = index_from_bytes(raw)
    return idx


def factorize(idx, algo, budget=None):
    """(factors, result object) for one algorithm."""
    if algo == "lz78":
        res = lz78(idx)
    elif budget is not None:
        res = lz77_tradeoff(idx, budget)
    else:
        res = lz77(idx, classic=(algo == "lz77-classic"))
    return res.factors, res


def _check_flags(args):
    if args.budget is not None:
        if args.algo != "lz77":
            raise UsageError("--budget applies to --algo lz77 only")
        if args.budget < 1:
            raise UsageError("--budget must be at least 1")
    if getattr(args, "trie_out", None) and args.algo != "lz78":
        raise UsageError("--trie-out applies to --algo lz78 only")


def cmd_build(args):
    raw = _read(args.input)
    _, idx = index_from_bytes(raw)
    idx.save(args.output)
    return 0


def cmd_factorize(args):
    _check_flags(args)
    raw = _read(args.input)
    idx = _index(args, raw)
    factors, _ = factorize(idx, args.algo, args.budget)
    _write(args.output, codec.encode(factors, args.algo, idx.n, idx.sigma))
    if args.trie_out:
        trie, _ = lz78_trie(idx)
        _write(args.trie_out, trie.serialize())
    return 0


def cmd_decode(args):
    data = codec.decode(_read(args.input).decode("ascii", errors="replace"))
    _write(args.output, codec.strip_sentinel(data))
    return 0


def cmd_verify(args):
    _check_flags(args)
    raw = _read(args.input)
    idx = _index(args, raw)
    t = oracle.with_sentinel(raw)
    factors, _ = factorize(idx, args.algo, args.budget)
    ref = {"lz77": oracle.naive_lz77, "lz77-classic": oracle.naive_lz77_classic,
           "lz78": oracle.naive_lz78}[args.algo](t)
    problems = []
    if factors != ref:
        k = next((i for i, (a, b) in enumerate(zip(factors, ref)) if a != b), min(len(factors), len(ref)))
        problems.append(f"factorization differs from the brute-force reference at factor {k + 1}")
    back = codec.decode(codec.encode(factors, args.algo, idx.n, idx.sigma))
    if back != t:
        problems.append("decoded text differs from the input")
    if args.algo == "lz78":
        trie, _ = lz78_trie(idx)
        if LZTrie.parse(trie.serialize()).factors() != factors:
            problems.append("explicit trie disagrees with the streamed factors")
    for p in problems:
        print(f"MISMATCH\t{p}", file=sys.stderr)
    if problems:
        return EXIT_MISMATCH
    print(f"ok\t{args.algo}\tz={len(factors)}")
    return 0


def stats_rows(idx, algo, budget=None):
    factors, res = factorize(idx, algo, budget)
    rows = [("n", idx.n), ("sigma", idx.sigma), ("z", len(factors)), ("z_R", res.z_r)]
    rows.append(("z_W", res.z_w))
    if budget is not None:
        rows.append(("rounds", res.rounds))
    for k, v in idx.size_in_bits().items():
        rows.append((f"bits_{k}", v))
    nodes = idx.tree.n_nodes
    rows.append(("bits_bv_V", nodes))
    rows.append(("bits_bv_W", nodes))
    if algo == "lz78":
        for k, v in ExplorationState(idx).size_in_bits().items():
            if k != "bv_V":
                rows.append((f"bits_{k}", v))
        counters = [p.counters for p in res.passes]
        climb = "level_anc_steps"
    else:
        counters = res.counters
        climb = "parent_climbs"
    rows.append(("bits_W", witness_bits(idx, rows[4][1])))
    for i, c in enumerate(counters, start=1):
        tag = f"pass{i}" if budget is None else f"round{(i + 1) // 2}_pass{2 - i % 2}"
        rows.append((f"next_leaf_{tag}", int(c[1])))
        rows.append((f"{climb}_{tag}", int(c[2])))
        if algo == "lz78":
            rows.append((f"explore_calls_{tag}", int(c[3])))
    return rows


def cmd_stats(args):
    _check_flags(args)
    raw = _read(args.input)
    idx = _index(args, raw)
    for k, v in stats_rows(idx, args.algo, args.budget):
        print(f"{k}\t{v}")
    return 0


def build_parser():
    p = _Parser(prog="cstlz", description="LZ77 and LZ78 factorization over a compressed suffix tree.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="build and save the suffix-tree index of a file")
    b.add_argument("input")
    b.add_argument("--output", "-o", required=True)
    b.set_defaults(func=cmd_build)

    def algo_flags(sp, out):
        sp.add_argument("input")
        sp.add_argument("--algo", choices=ALGOS, default="lz77")
        sp.add_argument("--budget", type=int, default=None,
                        help="witness slots per round (LZ77 trade-off variant)")
        sp.add_argument("--index", default=None, help="prebuilt index from `cstlz build`")
        if out:
            sp.add_argument("--output", "-o", required=True)
            sp.add_argument("--trie-out", default=None, help="also write the LZ78 trie")

    f = sub.add_parser("factorize", help="write the factor file of a text")
    algo_flags(f, True)
    f.set_defaults(func=cmd_factorize)

    d = sub.add_parser("decode", help="restore the original file from a factor file")
    d.add_argument("input")
    d.add_argument("--output", "-o", required=True)
    d.set_defaults(func=cmd_decode)

    v = sub.add_parser("verify", help="check the factorization against brute force and a decode")
    algo_flags(v, False)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="print sizes and operation counts")
    algo_flags(s, False)
    s.set_defaults(func=cmd_stats)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"cstlz: error: {e}", file=sys.stderr)
        return EXIT_FLAGS
    except SentinelCollisionError as e:
        print(f"cstlz: {e}", file=sys.stderr)
        return EXIT_SENTINEL
    except codec.CodecError as e:
        print(f"cstlz: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as e:
        print(f"cstlz: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
