"""Exact dichromatic numbers for small digraphs, plus exhaustive enumerators."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator

from .digraph import Digraph
from .errors import ColourBoundExceeded
from .kernels import Colouring

BRUTE_FORCE_MAX_N = 8
ORIENTED_MAX_N = 5
DIGRAPHS_MAX_N = 4


@dataclass(frozen=True)
class ExactResult:
    chi: int
    witness: Colouring
    nodes_explored: int


def _closes_cycle(D: Digraph, v: int, cls: int) -> bool:
    """Would adding v to the acyclic class ``cls`` create a directed cycle?"""
    target = D.in_mask[v] & cls
    if not target:
        return False
    out = D.out_mask
    seen = frontier = out[v] & cls
    while frontier:
        if seen & target:
            return True
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= out[low.bit_length() - 1]
            frontier ^= low
        frontier = nxt & cls & ~seen
        seen |= frontier
    return bool(seen & target)


def exact_dichromatic(D: Digraph, k_max: int | None = None) -> ExactResult:
    """Iterative deepening on k with backtracking colour assignment.

    Vertices are branched in order of decreasing total degree.  A vertex may
    open at most one new colour, and only the smallest unused one, which
    removes colour-permutation symmetry.  Raises :class:`ColourBoundExceeded`
    when no colouring with ``k_max`` colours exists.
    """
    n = D.n
    if n == 0:
        return ExactResult(0, Colouring({}), 0)
    if k_max is None:
        k_max = n
    order = sorted(range(n), key=lambda v: (-(len(D.out[v]) + len(D.inn[v])), v))
    nodes = 0

    for k in range(1, k_max + 1):
        classes = [0] * k
        colour = [0] * n

        def assign(i: int, used: int) -> bool:
            nonlocal nodes
            if i == n:
                return True
            v = order[i]
            bit = 1 << v
            for c in range(min(used + 1, k)):
                nodes += 1
                if _closes_cycle(D, v, classes[c]):
                    continue
                classes[c] |= bit
                colour[v] = c
                if assign(i + 1, max(used, c + 1)):
                    return True
                classes[c] ^= bit
            return False

        if assign(0, 0):
            return ExactResult(k, Colouring({v: colour[v] for v in range(n)}), nodes)
    raise ColourBoundExceeded(k_max, nodes)


def _class_is_acyclic(members: frozenset, arcs: frozenset) -> bool:
    remaining = set(members)
    while remaining:
        sinks = [v for v in remaining if not any((v, w) in arcs for w in remaining)]
        if not sinks:
            return False
        remaining.difference_update(sinks)
    return True


def brute_force_dichromatic(D: Digraph) -> int:
    """Smallest k for which some k-assignment has only acyclic classes.

    Tries every assignment in ``range(k) ** n``; kept deliberately naive as an
    independent check of :func:`exact_dichromatic`.
    """
    n = D.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force refuses n={n} > {BRUTE_FORCE_MAX_N}")
    if n == 0:
        return 0
    cache: dict[frozenset, bool] = {}

    def ok(members: frozenset) -> bool:
        if members not in cache:
            cache[members] = _class_is_acyclic(members, D.arcs)
        return cache[members]

    for k in range(1, n + 1):
        for assignment in product(range(k), repeat=n):
            classes = [frozenset(v for v in range(n) if assignment[v] == c) for c in range(k)]
            if all(ok(cls) for cls in classes):
                return k
    raise AssertionError("n colours always suffice")


def enumerate_oriented(n: int) -> Iterator[Digraph]:
    """All 3^(n(n-1)/2) oriented digraphs on n labelled vertices.

    Pairs are taken in lexicographic order; each is absent, forward (i->j)
    or backward (j->i).
    """
    if n > ORIENTED_MAX_N:
        raise ValueError(f"full enumeration refuses n={n} > {ORIENTED_MAX_N}")
    pairs = list(combinations(range(n), 2))
    for states in product((0, 1, 2), repeat=len(pairs)):
        arcs = [(i, j) if s == 1 else (j, i) for (i, j), s in zip(pairs, states) if s]
        yield Digraph(n, arcs)


def enumerate_digraphs(n: int) -> Iterator[Digraph]:
    """All 4^(n(n-1)/2) loopless digraphs on n labelled vertices, digons included."""
    if n > DIGRAPHS_MAX_N:
        raise ValueError(f"full enumeration refuses n={n} > {DIGRAPHS_MAX_N}")
    pairs = list(combinations(range(n), 2))
    for states in product(range(4), repeat=len(pairs)):
        arcs = []
        for (i, j), s in zip(pairs, states):
            if s & 1:
                arcs.append((i, j))
            if s & 2:
                arcs.append((j, i))
        yield Digraph(n, arcs)
