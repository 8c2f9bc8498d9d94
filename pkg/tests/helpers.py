"""Small builders and strategies shared by the test modules."""

import random

from hypothesis import strategies as st

from dichroma.digraph import Digraph


def cycle(n, start=0):
    """Directed cycle on start..start+n-1."""
    return [(start + i, start + (i + 1) % n) for i in range(n)]


def path(n, start=0):
    return [(start + i, start + i + 1) for i in range(n - 1)]


def random_digraph(rng: random.Random, n: int, p: float, digons: bool = False) -> Digraph:
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                r = rng.random()
                if digons and r < 0.15:
                    arcs += [(i, j), (j, i)]
                else:
                    arcs.append((i, j) if r < 0.55 else (j, i))
    return Digraph(n, arcs)


@st.composite
def digraphs(draw, max_n=8, min_n=0, oriented=True):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    choices = 3 if oriented else 4
    picks = draw(st.lists(st.integers(0, choices - 1), min_size=len(pairs), max_size=len(pairs)))
    arcs = []
    for (i, j), c in zip(pairs, picks):
        if c == 1:
            arcs.append((i, j))
        elif c == 2:
            arcs.append((j, i))
        elif c == 3:
            arcs += [(i, j), (j, i)]
    return Digraph(n, arcs)
