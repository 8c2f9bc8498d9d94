"""Seeded generators for the digraph families used in testing."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .digraph import Digraph
from .errors import GenerationError
from .witness import ForbiddenWitness, OddCycle, find_induced_p6, find_triangle, min_odd_cycle

KINDS = ("random_oriented", "in_class_p6_trianglefree", "no_odd_cycle", "odd_cycle_blowup")


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    p: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.kind == "odd_cycle_blowup" and self.n < 5:
            raise ValueError("odd_cycle_blowup needs n >= 5")


def _random_arcs(n: int, p: float, rng: random.Random, pairs=None) -> set:
    arcs = set()
    if pairs is None:
        pairs = ((i, j) for i in range(n) for j in range(i + 1, n))
    for i, j in pairs:
        if rng.random() < p:
            arcs.add((i, j) if rng.random() < 0.5 else (j, i))
    return arcs


def _witness_arcs(G: Digraph, w) -> list:
    if isinstance(w, OddCycle):
        return sorted(w.arcs())
    assert isinstance(w, ForbiddenWitness)
    vs = set(w.vertices)
    return sorted((u, v) for u, v in G.arcs if u in vs and v in vs)


def repair(n: int, arcs, rng: random.Random, finders, max_repairs: int | None = None,
           keep=frozenset()) -> Digraph:
    """Delete one random arc of a found witness until no finder fires.

    Arcs in ``keep`` are only deleted when the witness has no other arc.
    """
    arcs = set(arcs)
    cap = len(arcs) + 1 if max_repairs is None else max_repairs
    for _ in range(cap + 1):
        G = Digraph(n, arcs)
        w = None
        for finder in finders:
            w = finder(G)
            if w is not None:
                break
        if w is None:
            return G
        candidates = _witness_arcs(G, w)
        preferred = [a for a in candidates if a not in keep]
        arcs.discard(rng.choice(preferred or candidates))
    raise GenerationError(f"repair loop did not converge within {cap} deletions")


_IN_CLASS = (find_triangle, find_induced_p6)


def _blowup(spec: GenSpec, rng: random.Random) -> tuple[set, frozenset]:
    # a blown-up 5-cycle is triangle-free and has no induced P6 (any six
    # vertices along it wrap around), so repairs never need its arcs; longer
    # odd cycles would contain six consecutive parts and be torn apart
    n = spec.n
    core = max(5, n // 2)
    part = list(range(5)) + [rng.randrange(5) for _ in range(core - 5)]
    skeleton = {(u, v) for u in range(core) for v in range(core) if part[v] == (part[u] + 1) % 5}
    periphery = ((i, j) for i in range(n) for j in range(max(i + 1, core), n))
    arcs = skeleton | _random_arcs(n, spec.p, rng, periphery)
    perm = list(range(n))
    rng.shuffle(perm)
    return ({(perm[u], perm[v]) for u, v in arcs},
            frozenset((perm[u], perm[v]) for u, v in skeleton))


def generate(spec: GenSpec, max_repairs: int | None = None) -> Digraph:
    """Identical specs give identical digraphs.

    ``odd_cycle_blowup`` builds a blown-up 5-cycle on half the vertices,
    attaches the other half at density ``p`` and repairs the result into the
    triangle-free, induced-P6-free class, sparing the blown-up cycle where it
    can.
    """
    rng = random.Random(spec.seed)
    n = spec.n
    if spec.kind == "random_oriented":
        return Digraph(n, _random_arcs(n, spec.p, rng))
    if spec.kind == "in_class_p6_trianglefree":
        return repair(n, _random_arcs(n, spec.p, rng), rng, _IN_CLASS, max_repairs)
    if spec.kind == "no_odd_cycle":
        return repair(n, _random_arcs(n, spec.p, rng), rng, (min_odd_cycle,), max_repairs)
    arcs, skeleton = _blowup(spec, rng)
    return repair(n, arcs, rng, _IN_CLASS, max_repairs, keep=skeleton)
