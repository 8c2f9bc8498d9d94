"""Finders for the small structures the colouring pipeline forbids or uses.

Every finder scans vertices in increasing order and returns the
lexicographically first instance, so fixtures are reproducible.  Every
returned object can be re-checked against the arc set with the matching
``validate_*`` function.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .digraph import Digraph, iter_bits, lowest_bit, reverse, strong_components, to_mask
from .errors import ContractError, InternalError, SearchBudgetExceeded


class WitnessKind(str, Enum):
    DIGON = "digon"
    TRIANGLE = "triangle"
    INDUCED_P6 = "p6"
    INDUCED_C32 = "c32"


_WITNESS_SIZE = {
    WitnessKind.DIGON: 2,
    WitnessKind.TRIANGLE: 3,
    WitnessKind.INDUCED_P6: 6,
    WitnessKind.INDUCED_C32: 5,
}

# role order (u, v1, v2, w1, w2)
C32_ARCS = ((0, 1), (1, 2), (2, 4), (0, 3), (3, 4))


@dataclass(frozen=True)
class ForbiddenWitness:
    kind: WitnessKind
    vertices: tuple[int, ...]

    def relabel(self, mapping) -> ForbiddenWitness:
        return ForbiddenWitness(self.kind, tuple(mapping[v] for v in self.vertices))


@dataclass(frozen=True)
class OddCycle:
    vertices: tuple[int, ...]
    minimal: bool = False

    def __len__(self):
        return len(self.vertices)

    def arcs(self):
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


class P4Shape(str, Enum):
    OUT_PATH = "out_path"  # a -> b -> c -> d induced
    IN_PATH = "in_path"  # b -> c -> d -> a induced
    C4 = "c4"  # a -> b -> c -> d -> a


@dataclass(frozen=True)
class P4Certificate:
    shape: P4Shape
    a: int
    b: int
    c: int
    d: int


def _exact_arcs(D: Digraph, vertices, expected) -> bool:
    """True iff, among ``vertices``, D has exactly the arcs in ``expected``.

    ``expected`` holds index pairs into ``vertices``.
    """
    if len(set(vertices)) != len(vertices):
        return False
    want = {(vertices[i], vertices[j]) for i, j in expected}
    for x in vertices:
        for y in vertices:
            if x != y and D.has_arc(x, y) != ((x, y) in want):
                return False
    return True


def validate_witness(D: Digraph, w: ForbiddenWitness) -> bool:
    vs = w.vertices
    if len(vs) != _WITNESS_SIZE[w.kind] or any(not 0 <= v < D.n for v in vs):
        return False
    if len(set(vs)) != len(vs):
        return False
    if w.kind is WitnessKind.DIGON:
        return D.has_arc(vs[0], vs[1]) and D.has_arc(vs[1], vs[0])
    if w.kind is WitnessKind.TRIANGLE:
        a, b, c = vs
        return D.adjacent(a, b) and D.adjacent(b, c) and D.adjacent(a, c)
    if w.kind is WitnessKind.INDUCED_P6:
        return _exact_arcs(D, vs, [(i, i + 1) for i in range(5)])
    return _exact_arcs(D, vs, C32_ARCS)


def validate_odd_cycle(D: Digraph, c: OddCycle) -> bool:
    vs = c.vertices
    if len(vs) < 3 or len(vs) % 2 == 0 or len(set(vs)) != len(vs):
        return False
    return all(D.has_arc(u, v) for u, v in c.arcs())


def validate_p4(D: Digraph, cert: P4Certificate) -> bool:
    a, b, c, d = cert.a, cert.b, cert.c, cert.d
    if cert.shape is P4Shape.OUT_PATH:
        return _exact_arcs(D, (a, b, c, d), [(0, 1), (1, 2), (2, 3)])
    if cert.shape is P4Shape.IN_PATH:
        return _exact_arcs(D, (b, c, d, a), [(0, 1), (1, 2), (2, 3)])
    if len({a, b, c, d}) != 4:
        return False
    return D.has_arc(a, b) and D.has_arc(b, c) and D.has_arc(c, d) and D.has_arc(d, a)


def find_digon(D: Digraph) -> ForbiddenWitness | None:
    for u in range(D.n):
        both = D.out_mask[u] & D.in_mask[u] & ~((2 << u) - 1)
        if both:
            return ForbiddenWitness(WitnessKind.DIGON, (u, lowest_bit(both)))
    return None


def find_triangle(D: Digraph) -> ForbiddenWitness | None:
    adj = D.adj_mask
    for a in range(D.n):
        for b in iter_bits(adj[a] & ~((2 << a) - 1)):
            common = adj[a] & adj[b] & ~((2 << b) - 1)
            if common:
                return ForbiddenWitness(WitnessKind.TRIANGLE, (a, b, lowest_bit(common)))
    return None


def find_induced_p6(D: Digraph, node_budget: int | None = None) -> ForbiddenWitness | None:
    """Backtracking over induced directed paths, pruning at each extension.

    ``node_budget`` caps the number of path extensions tried; exceeding it
    raises :class:`SearchBudgetExceeded` instead of answering.
    """
    out, inn, adj = D.out_mask, D.in_mask, D.adj_mask
    path: list[int] = []
    nodes = 0

    def extend(last: int, blocked: int) -> bool:
        # blocked: path vertices plus neighbours of every path vertex but the last
        nonlocal nodes
        if len(path) == 6:
            return True
        cand = out[last] & ~inn[last] & ~blocked
        grown = blocked | adj[last]
        for w in iter_bits(cand):
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                raise SearchBudgetExceeded(node_budget)
            path.append(w)
            if extend(w, grown | (1 << w)):
                return True
            path.pop()
        return False

    for v in range(D.n):
        path.append(v)
        if extend(v, 1 << v):
            return ForbiddenWitness(WitnessKind.INDUCED_P6, tuple(path))
        path.pop()
    return None


def find_induced_c32(D: Digraph) -> ForbiddenWitness | None:
    """Induced copy with arcs u->v1->v2->w2 and u->w1->w2, in role order."""
    out, inn, adj = D.out_mask, D.in_mask, D.adj_mask
    one_way = [o & ~i for o, i in zip(out, inn)]
    for u in range(D.n):
        u_bit = 1 << u
        for v1 in iter_bits(one_way[u]):
            v1_bit = 1 << v1
            for v2 in iter_bits(one_way[v1] & ~adj[u] & ~u_bit):
                v2_bit = 1 << v2
                w1_cand = one_way[u] & ~adj[v1] & ~adj[v2] & ~v1_bit & ~v2_bit
                for w1 in iter_bits(w1_cand):
                    w2_cand = one_way[v2] & one_way[w1] & ~adj[u] & ~adj[v1] & ~u_bit & ~v1_bit
                    if w2_cand:
                        return ForbiddenWitness(
                            WitnessKind.INDUCED_C32, (u, v1, v2, w1, lowest_bit(w2_cand))
                        )
    return None


def _split_odd_cycle(walk: list[int]) -> list[int]:
    """Cut a closed walk (first vertex not repeated at the end) down to a
    simple cycle of odd length by excising sub-loops."""
    walk = list(walk)
    while True:
        seen = {}
        for i, v in enumerate(walk):
            if v in seen:
                j = seen[v]
                inner = walk[j:i]
                outer = walk[:j] + walk[i:]
                walk = inner if len(inner) % 2 else outer
                break
            seen[v] = i
        else:
            return walk


def min_odd_cycle(D: Digraph) -> OddCycle | None:
    """A globally shortest odd directed cycle, or ``None``.

    Parity-layered BFS from every start vertex ``s``, restricted to the strong
    component of ``s`` and to vertices ``>= s``; a shortest odd closed walk
    through ``s`` is read back from the layers and reduced to a cycle.
    """
    comp_mask = [0] * D.n
    for comp in strong_components(D):
        m = to_mask(comp)
        for v in comp:
            comp_mask[v] = m
    out = D.out_mask
    best_len = None
    best_layers = None
    best_start = None
    for s in range(D.n):
        allowed = comp_mask[s] & ~((1 << s) - 1)
        if allowed.bit_count() < 3:
            continue
        visited = [1 << s, 0]
        layers = [1 << s]
        d = 0
        while layers[-1]:
            if best_len is not None and d + 1 >= best_len:
                break
            nxt = 0
            for v in iter_bits(layers[-1]):
                nxt |= out[v]
            parity = (d + 1) & 1
            nxt &= allowed & ~visited[parity]
            d += 1
            layers.append(nxt)
            visited[parity] |= nxt
            if parity == 1 and nxt >> s & 1:
                best_len, best_layers, best_start = d, layers, s
                break
    if best_len is None:
        return None

    walk = [best_start]
    cur = best_start
    for k in range(best_len - 1, 0, -1):
        cur = lowest_bit(D.in_mask[cur] & best_layers[k])
        walk.append(cur)
    walk.reverse()  # best_start first, then forward along arcs
    walk = [best_start] + walk[:-1]
    cycle = _split_odd_cycle(walk)
    if len(cycle) != best_len:
        raise InternalError("shortest odd closed walk is not a cycle", {"walk": walk})
    return OddCycle(tuple(cycle), minimal=True)


def p4_certificate(D: Digraph, C: OddCycle, a: int, check: bool = True) -> P4Certificate:
    """Locate consecutive cycle vertices b -> c -> d forming a P4 or C4 with a.

    If ``a`` has an arc into the cycle the search runs on ``D`` and yields an
    out-path or a C4; otherwise it runs on the reversal and yields an in-path.
    The certificate is re-validated before it is returned.
    """
    cyc = C.vertices
    on_cycle = set(cyc)
    if a in on_cycle:
        raise ContractError(f"vertex {a} lies on the cycle")
    into = [x for x in cyc if D.has_arc(a, x)]
    from_ = [x for x in cyc if D.has_arc(x, a)]
    if not into and not from_:
        raise ContractError(f"vertex {a} is not adjacent to the cycle")
    if check:
        bad = find_digon(D) or find_triangle(D)
        if bad is not None:
            raise ContractError(f"input contains a {bad.kind.value}", bad)

    if into:
        G, seq, reversed_ = D, list(cyc), False
    else:
        G, seq, reversed_ = reverse(D), list(reversed(cyc)), True
    start = next(i for i, x in enumerate(seq) if G.has_arc(a, x))
    xs = seq[start:] + seq[:start]
    top = max(i for i in range(0, len(xs), 2) if G.has_arc(a, xs[i]))
    if top == len(xs) - 1:
        witness = ForbiddenWitness(WitnessKind.TRIANGLE, tuple(sorted((a, xs[0], xs[-1]))))
        raise ContractError("input contains a triangle", witness)
    b, c, d = xs[top], xs[top + 1], xs[top + 2]
    shape = P4Shape.C4 if G.has_arc(d, a) else P4Shape.OUT_PATH
    if reversed_:
        b, d = d, b
        if shape is P4Shape.OUT_PATH:
            shape = P4Shape.IN_PATH
    cert = P4Certificate(shape, a, b, c, d)
    if not validate_p4(D, cert):
        raise ContractError(f"no valid certificate around vertex {a}; is D triangle-free?", cert)
    return cert
