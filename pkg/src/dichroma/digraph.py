"""Core digraph representation and the structural queries built on it.

Vertices are ``0..n-1``. Adjacency is kept both as frozensets (for the public
API) and as int bitmasks (for the inner loops of the searches); both views are
derived from the arc set once, at construction.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .errors import LoopError, VertexRangeError

VertexSet = frozenset


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def from_mask(mask: int) -> frozenset:
    return frozenset(iter_bits(mask))


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class Digraph:
    """An immutable digraph without loops or parallel arcs.

    Digons (both ``(u, v)`` and ``(v, u)``) are allowed here; it is up to the
    class-restricted algorithms to reject them.
    """

    __slots__ = ("n", "arcs", "out", "inn", "out_mask", "in_mask", "adj_mask")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        arc_set = set()
        for u, v in arcs:
            for x in (u, v):
                if not 0 <= x < n:
                    raise VertexRangeError(x, n)
            if u == v:
                raise LoopError(u)
            arc_set.add((u, v))
        out_mask = [0] * n
        in_mask = [0] * n
        for u, v in arc_set:
            out_mask[u] |= 1 << v
            in_mask[v] |= 1 << u
        self.n = n
        self.arcs = frozenset(arc_set)
        self.out_mask = tuple(out_mask)
        self.in_mask = tuple(in_mask)
        self.adj_mask = tuple(o | i for o, i in zip(out_mask, in_mask))
        self.out = tuple(from_mask(m) for m in out_mask)
        self.inn = tuple(from_mask(m) for m in in_mask)

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out_mask[u] >> v & 1)

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adj_mask[u] >> v & 1)

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.arcs == other.arcs

    def __hash__(self):
        return hash((self.n, self.arcs))

    def __repr__(self):
        return f"Digraph(n={self.n}, arcs={self.sorted_arcs()})"


def make_digraph(n: int, arcs: Iterable[tuple[int, int]] = ()) -> Digraph:
    """Build a digraph, collapsing duplicate arcs and rejecting loops."""
    return Digraph(n, arcs)


def induced_subdigraph(D: Digraph, X: Iterable[int]) -> tuple[Digraph, dict[int, int]]:
    """Return ``D[X]`` relabelled onto ``0..|X|-1`` in increasing vertex order.

    The second value maps each original vertex of X to its new label.
    """
    members = sorted(set(X))
    for v in members:
        if not 0 <= v < D.n:
            raise VertexRangeError(v, D.n)
    relabel = {v: i for i, v in enumerate(members)}
    mask = to_mask(members)
    arcs = []
    for v in members:
        i = relabel[v]
        for w in iter_bits(D.out_mask[v] & mask):
            arcs.append((i, relabel[w]))
    return Digraph(len(members), arcs), relabel


def reverse(D: Digraph) -> Digraph:
    return Digraph(D.n, ((v, u) for u, v in D.arcs))


def strong_components(D: Digraph) -> list[tuple[int, ...]]:
    """Strongly connected components, sources of the condensation first.

    Iterative Tarjan; each component is returned as a sorted tuple.
    """
    index = [-1] * D.n
    low = [0] * D.n
    on_stack = [False] * D.n
    stack: list[int] = []
    found: list[tuple[int, ...]] = []
    counter = 0
    succ = [sorted(s) for s in D.out]

    for root in range(D.n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                found.append(tuple(sorted(comp)))
    found.reverse()
    return found


def cycle_within(D: Digraph, mask: int) -> tuple[int, ...] | None:
    """Find a directed cycle of ``D[mask]``, or ``None`` if it is acyclic.

    Peels vertices without an in- or out-neighbour inside the set until
    nothing changes; whatever survives has a cycle through every vertex.
    """
    rem = mask
    changed = True
    while changed and rem:
        changed = False
        for v in iter_bits(rem):
            if not (D.in_mask[v] & rem) or not (D.out_mask[v] & rem):
                rem &= ~(1 << v)
                changed = True
    if not rem:
        return None
    walk = [lowest_bit(rem)]
    position = {walk[0]: 0}
    while True:
        nxt = lowest_bit(D.out_mask[walk[-1]] & rem)
        if nxt in position:
            return tuple(walk[position[nxt]:])
        position[nxt] = len(walk)
        walk.append(nxt)


def is_acyclic_set(D: Digraph, vertices: Iterable[int]) -> bool:
    return cycle_within(D, to_mask(vertices)) is None


class TopoResult(NamedTuple):
    order: list[int] | None
    cycle: tuple[int, ...] | None


def topological_order(D: Digraph) -> TopoResult:
    """Kahn's algorithm, always releasing the smallest available vertex."""
    indeg = [len(s) for s in D.inn]
    ready = [v for v in range(D.n) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in D.out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    if len(order) == D.n:
        return TopoResult(order, None)
    return TopoResult(None, cycle_within(D, D.full_mask))


@dataclass(frozen=True)
class LevelStructure:
    """Iterated out/in neighbourhoods of a base set, lower levels subtracted.

    ``plus_paths[v]`` is a directed path ``x_0 ... x_k`` ending at ``v`` with
    ``x_i`` in ``plus_levels[i]``; ``minus_paths[v]`` is a directed path
    ``x_k ... x_0`` starting at ``v`` with ``x_i`` in ``minus_levels[i]``.
    """

    base: frozenset
    depth: int
    plus_levels: tuple[frozenset, ...]
    minus_levels: tuple[frozenset, ...]
    levels: tuple[frozenset, ...]
    plus_paths: dict = field(repr=False, compare=False)
    minus_paths: dict = field(repr=False, compare=False)

    def union_upto(self, k: int) -> frozenset:
        return frozenset().union(*self.levels[: k + 1])


def level_sets(D: Digraph, X: Iterable[int], depth: int) -> LevelStructure:
    base_mask = to_mask(X)
    if not base_mask:
        raise ValueError("level_sets needs a nonempty base set")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if base_mask >> D.n:
        raise VertexRangeError(base_mask.bit_length() - 1, D.n)

    plus = [base_mask]
    minus = [base_mask]
    seen = base_mask
    for _ in range(depth):
        nxt_plus = 0
        for v in iter_bits(plus[-1]):
            nxt_plus |= D.out_mask[v]
        nxt_minus = 0
        for v in iter_bits(minus[-1]):
            nxt_minus |= D.in_mask[v]
        nxt_plus &= ~seen
        nxt_minus &= ~seen
        plus.append(nxt_plus)
        minus.append(nxt_minus)
        seen |= nxt_plus | nxt_minus

    plus_paths = {v: (v,) for v in iter_bits(base_mask)}
    minus_paths = dict(plus_paths)
    for k in range(1, depth + 1):
        for v in iter_bits(plus[k]):
            pred = lowest_bit(D.in_mask[v] & plus[k - 1])
            plus_paths[v] = plus_paths[pred] + (v,)
        for v in iter_bits(minus[k]):
            succ = lowest_bit(D.out_mask[v] & minus[k - 1])
            minus_paths[v] = (v,) + minus_paths[succ]

    return LevelStructure(
        base=from_mask(base_mask),
        depth=depth,
        plus_levels=tuple(from_mask(m) for m in plus),
        minus_levels=tuple(from_mask(m) for m in minus),
        levels=tuple(from_mask(p | m) for p, m in zip(plus, minus)),
        plus_paths=plus_paths,
        minus_paths=minus_paths,
    )
