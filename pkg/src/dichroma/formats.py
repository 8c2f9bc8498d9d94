"""Text formats for digraphs and colourings (1-based vertex ids on disk).

Digraph file::

    c optional comment lines
    p dgr <n> <m>
    a <u> <v>        (exactly m lines, 1 <= u, v <= n, u != v)

Colouring file::

    s dicol <n> <k>
    v <vertex> <colour>   (n lines, 0 <= colour < k)
"""

from __future__ import annotations

from .digraph import Digraph
from .errors import ParseError
from .kernels import Colouring


def _ints(fields, lineno, count):
    if len(fields) != count:
        raise ParseError(f"expected {count} fields, got {len(fields)}", lineno)
    try:
        return [int(x) for x in fields]
    except ValueError:
        raise ParseError(f"non-integer field in {' '.join(fields)!r}", lineno) from None


def parse_digraph(text: str) -> Digraph:
    n = m = None
    arcs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if not fields or fields[0] == "c":
            continue
        tag = fields[0]
        if tag == "p":
            if n is not None:
                raise ParseError("second header line", lineno)
            if len(fields) != 4 or fields[1] != "dgr":
                raise ParseError("header must read 'p dgr <n> <m>'", lineno)
            n, m = _ints(fields[2:], lineno, 2)
            if n < 0 or m < 0:
                raise ParseError("negative count in header", lineno)
        elif tag == "a":
            if n is None:
                raise ParseError("arc line before header", lineno)
            u, v = _ints(fields[1:], lineno, 2)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError(f"vertex {x} out of range 1..{n}", lineno)
            if u == v:
                raise ParseError(f"loop at vertex {u}", lineno)
            arcs.append((u - 1, v - 1))
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise ParseError("missing 'p dgr' header")
    if len(arcs) != m:
        raise ParseError(f"header announces {m} arcs but {len(arcs)} were given")
    return Digraph(n, arcs)


def serialize_digraph(D: Digraph) -> str:
    lines = [f"p dgr {D.n} {len(D.arcs)}"]
    lines.extend(f"a {u + 1} {v + 1}" for u, v in D.sorted_arcs())
    return "\n".join(lines) + "\n"


def parse_colouring(text: str, n: int | None = None) -> Colouring:
    header = None
    assignment = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if not fields or fields[0] == "c":
            continue
        if fields[0] == "s":
            if header is not None:
                raise ParseError("second header line", lineno)
            if len(fields) != 4 or fields[1] != "dicol":
                raise ParseError("header must read 's dicol <n> <k>'", lineno)
            header = _ints(fields[2:], lineno, 2)
        elif fields[0] == "v":
            if header is None:
                raise ParseError("vertex line before header", lineno)
            vertex, colour = _ints(fields[1:], lineno, 2)
            hn, hk = header
            if not 1 <= vertex <= hn:
                raise ParseError(f"vertex {vertex} out of range 1..{hn}", lineno)
            if not 0 <= colour < hk:
                raise ParseError(f"colour {colour} out of range 0..{hk - 1}", lineno)
            if vertex - 1 in assignment:
                raise ParseError(f"vertex {vertex} coloured twice", lineno)
            assignment[vertex - 1] = colour
        else:
            raise ParseError(f"unknown line type {fields[0]!r}", lineno)
    if header is None:
        raise ParseError("missing 's dicol' header")
    if len(assignment) != header[0]:
        raise ParseError(f"header announces {header[0]} vertices but {len(assignment)} were given")
    if n is not None and header[0] != n:
        raise ParseError(f"colouring is for {header[0]} vertices, digraph has {n}")
    return Colouring(assignment)


def serialize_colouring(col: Colouring, n: int | None = None) -> str:
    col = col.normalised()
    n = len(col.assignment) if n is None else n
    lines = [f"s dicol {n} {col.colours_used}"]
    lines.extend(f"v {v + 1} {col.assignment[v]}" for v in range(n))
    return "\n".join(lines) + "\n"
