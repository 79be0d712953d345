"""Line-oriented factor files and their decoders.

A file is a header line ``LZCICS1 <tag> <n> <sigma> <z>`` followed by one
record per factor::

    L <c>               literal
    C <pos> <len>       LZ77 copy
    K <pos> <len> <c>   classic LZ77 copy with its trailing character
    R <idx> <c>         LZ78 factor; idx 0 means a fresh factor

Characters are single printable ASCII bytes, or ``\\xHH`` for anything else
(the sentinel prints as ``\\x00``).  Decoding yields the text including the
sentinel.
"""
from .lz77 import Lz77Factor
from .lz78 import Lz78Factor, escape_byte, unescape_byte

MAGIC = "LZCICS1"
TAGS = {"lz77": "Z77", "lz77-classic": "Z7C", "lz78": "Z78"}
ALGOS = {v: k for k, v in TAGS.items()}


class CodecError(ValueError):
    code = 10


class MalformedHeaderError(CodecError):
    code = 11


class MalformedRecordError(CodecError):
    code = 12


class ReferenceRangeError(CodecError):
    code = 13


class LengthOverrunError(CodecError):
    code = 14


def encode(factors, algo, n, sigma):
    """FactorFile text for a factor list."""
    if algo not in TAGS:
        raise ValueError(f"unknown algorithm {algo!r}")
    lines = [f"{MAGIC} {TAGS[algo]} {n} {sigma} {len(factors)}"]
    for f in factors:
        if isinstance(f, Lz78Factor):
            lines.append(f"R {f.ref} {escape_byte(f.char)}")
        elif f.is_literal:
            lines.append(f"L {escape_byte(f.char)}")
        elif f.char is None:
            lines.append(f"C {f.ref} {f.length}")
        else:
            lines.append(f"K {f.ref} {f.length} {escape_byte(f.char)}")
    return "\n".join(lines) + "\n"


def _int(tok, what, lineno):
    try:
        v = int(tok)
    except ValueError:
        raise MalformedRecordError(f"line {lineno}: {what} {tok!r} is not an integer") from None
    if v < 0:
        raise MalformedRecordError(f"line {lineno}: negative {what}")
    return v


def _char(tok, lineno):
    try:
        return unescape_byte(tok)
    except ValueError:
        raise MalformedRecordError(f"line {lineno}: bad character {tok!r}") from None


def parse(text):
    """(algo, n, sigma, factors) from FactorFile text; no semantic checks yet."""
    lines = text.splitlines()
    if not lines:
        raise MalformedHeaderError("empty factor file")
    head = lines[0].split()
    if len(head) != 5 or head[0] != MAGIC or head[1] not in ALGOS:
        raise MalformedHeaderError(f"bad header {lines[0]!r}")
    try:
        n, sigma, z = (int(x) for x in head[2:])
    except ValueError:
        raise MalformedHeaderError(f"bad header numbers in {lines[0]!r}") from None
    if n < 1 or sigma < 1 or z < 1:
        raise MalformedHeaderError("n, sigma and z must be positive")
    algo = ALGOS[head[1]]
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != z:
        raise MalformedHeaderError(f"header announces {z} records, file has {len(body)}")
    want = {"lz77": "LC", "lz77-classic": "LK", "lz78": "R"}[algo]
    arity = {"L": 2, "C": 3, "K": 4, "R": 3}
    factors = []
    for lineno, ln in enumerate(body, start=2):
        tok = ln.split()
        kind = tok[0]
        if kind not in want or len(tok) != arity[kind]:
            raise MalformedRecordError(f"line {lineno}: unexpected record {ln!r} for {algo}")
        if kind in "CK" and _int(tok[1], "position", lineno) == 0:
            raise ReferenceRangeError(f"line {lineno}: copy from position 0")
        if kind == "L":
            factors.append(Lz77Factor(char=_char(tok[1], lineno)))
        elif kind == "C":
            factors.append(Lz77Factor(ref=_int(tok[1], "position", lineno),
                                      length=_int(tok[2], "length", lineno)))
        elif kind == "K":
            factors.append(Lz77Factor(char=_char(tok[3], lineno), ref=_int(tok[1], "position", lineno),
                                      length=_int(tok[2], "length", lineno)))
        else:
            factors.append(Lz78Factor(_int(tok[1], "index", lineno), _char(tok[2], lineno)))
    return algo, n, sigma, factors


def decode_factors(factors, n=None):
    """Expand a factor list; raises on references forward or out of range."""
    out = bytearray()
    if factors and isinstance(factors[0], Lz78Factor):
        starts = [0]
        lens = [0]
        for x, f in enumerate(factors, start=1):
            if f.ref >= x:
                raise ReferenceRangeError(f"factor {x} refers to factor {f.ref}")
            p = len(out)
            s, L = starts[f.ref], lens[f.ref]
            out += out[s:s + L]
            out.append(f.char)
            starts.append(p)
            lens.append(L + 1)
            if n is not None and len(out) > n:
                raise LengthOverrunError(f"factor {x} runs past n = {n}")
        if n is not None and len(out) != n:
            raise LengthOverrunError(f"decoded {len(out)} bytes, header says {n}")
        return bytes(out)
    for x, f in enumerate(factors, start=1):
        pos = len(out) + 1
        if not f.is_literal:
            if f.length < 1:
                raise MalformedRecordError(f"factor {x} has zero length")
            if f.ref < 1 or f.ref >= pos:
                raise ReferenceRangeError(f"factor {x} at position {pos} refers to {f.ref}")
            if n is not None and pos - 1 + f.span > n:
                raise LengthOverrunError(f"factor {x} runs past n = {n}")
            src = f.ref - 1
            if src + f.length <= pos - 1:
                out += out[src:src + f.length]
            else:
                for k in range(f.length):  # overlapping copy
                    out.append(out[src + k])
            if f.char is not None:
                out.append(f.char)
        else:
            if n is not None and pos > n:
                raise LengthOverrunError(f"factor {x} runs past n = {n}")
            out.append(f.char)
    if n is not None and len(out) != n:
        raise LengthOverrunError(f"decoded {len(out)} bytes, header says {n}")
    return bytes(out)


def decode(text):
    """Text (sentinel included) from FactorFile text."""
    _, n, _, factors = parse(text)
    return decode_factors(factors, n)


def strip_sentinel(data):
    if not data.endswith(b"\x00"):
        raise CodecError("decoded text does not end with the sentinel")
    return data[:-1]
