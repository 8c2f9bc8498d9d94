import random

import pytest
from hypothesis import given, settings

from dichroma.digraph import Digraph, is_acyclic_set, reverse
from dichroma.errors import ColourBoundExceeded
from dichroma.exact import (
    brute_force_dichromatic,
    enumerate_digraphs,
    enumerate_oriented,
    exact_dichromatic,
)
from dichroma.kernels import verify_colouring
from dichroma.witness import find_digon, min_odd_cycle

from helpers import cycle, digraphs, path, random_digraph


def test_exact_examples(c3, c5):
    assert exact_dichromatic(c3).chi == 2
    assert exact_dichromatic(Digraph(4, path(4) + [(0, 3)])).chi == 1
    assert exact_dichromatic(c5).chi == 2
    assert exact_dichromatic(Digraph(0)).chi == 0


def test_complete_digraph_needs_one_colour_per_vertex():
    n = 4
    D = Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v])
    res = exact_dichromatic(D)
    assert res.chi == n
    assert brute_force_dichromatic(D) == n


def test_kmax_exceeded(c3):
    with pytest.raises(ColourBoundExceeded) as exc:
        exact_dichromatic(c3, k_max=1)
    assert exc.value.k_max == 1


def test_brute_force_examples(c3):
    assert brute_force_dichromatic(c3) == 2
    two_triangles = Digraph(6, cycle(3) + cycle(3, 3) + [(u, v) for u in range(3) for v in range(3, 6)])
    assert brute_force_dichromatic(two_triangles) == 2
    assert brute_force_dichromatic(Digraph(1)) == 1


def test_brute_force_refuses_large():
    with pytest.raises(ValueError):
        brute_force_dichromatic(Digraph(9))


def test_enumeration_counts():
    assert sum(1 for _ in enumerate_oriented(2)) == 3
    assert sum(1 for _ in enumerate_oriented(3)) == 27
    assert sum(1 for _ in enumerate_digraphs(2)) == 4
    assert sum(1 for _ in enumerate_digraphs(3)) == 64
    assert sum(1 for _ in enumerate_digraphs(4)) == 4 ** 6
    assert len(set(enumerate_oriented(3))) == 27  # no repeats


@pytest.mark.slow
def test_enumeration_count_five():
    assert sum(1 for _ in enumerate_oriented(5)) == 3 ** 10


def test_exact_matches_brute_exhaustive_small():
    for n in range(5):
        for D in enumerate_oriented(n):
            assert exact_dichromatic(D).chi == brute_force_dichromatic(D)
    for D in enumerate_digraphs(3):
        assert exact_dichromatic(D).chi == brute_force_dichromatic(D)


def test_exact_matches_brute_random():
    rng = random.Random(678)
    for _ in range(500):
        n = rng.choice((6, 7, 8))
        D = random_digraph(rng, n, rng.choice((0.3, 0.5, 0.8)), digons=rng.random() < 0.3)
        res = exact_dichromatic(D)
        assert res.chi == brute_force_dichromatic(D)
        assert verify_colouring(D, res.witness).valid
        assert res.witness.colours_used == res.chi


@settings(max_examples=150)
@given(digraphs(max_n=8, oriented=False))
def test_exact_properties(D):
    res = exact_dichromatic(D)
    assert verify_colouring(D, res.witness).valid
    assert res.witness.colours_used == res.chi
    assert (res.chi <= 1) == is_acyclic_set(D, D.vertices)
    assert exact_dichromatic(reverse(D)).chi == res.chi
    if find_digon(D) is None and min_odd_cycle(D) is None:
        assert res.chi <= 2
    if res.chi > 1:
        # no colouring with one colour fewer exists
        with pytest.raises(ColourBoundExceeded):
            exact_dichromatic(D, k_max=res.chi - 1)
