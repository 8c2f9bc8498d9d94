import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dichroma.digraph import Digraph, induced_subdigraph, is_acyclic_set, topological_order
from dichroma.errors import ContractError
from dichroma.exact import enumerate_oriented, exact_dichromatic
from dichroma.kernels import (
    Colouring,
    DipolarCertificate,
    DipolarViolation,
    colouring_to_order,
    is_dipolar,
    order_to_colouring,
    peel,
    two_colour_no_odd,
    verify_colouring,
)
from dichroma.selftest import longest_backward_path_brute
from dichroma.witness import OddCycle, min_odd_cycle

from helpers import cycle, digraphs, path, random_digraph


def test_colouring_helpers():
    col = Colouring({0: 5, 1: 2, 2: 5})
    assert col.colours_used == 2 and col.max_colour == 5
    assert col.classes() == {2: [1], 5: [0, 2]}
    assert col.normalised().assignment == {0: 1, 1: 0, 2: 1}
    assert col.shifted(3).assignment == {0: 8, 1: 5, 2: 8}
    assert Colouring({}).colours_used == 0


def test_verify_examples(c3):
    assert verify_colouring(c3, Colouring({0: 0, 1: 0, 2: 1})).valid
    bad = verify_colouring(c3, Colouring({0: 0, 1: 0, 2: 0}))
    assert not bad.valid and set(bad.cycle) == {0, 1, 2} and bad.colour == 0
    acyclic = Digraph(4, path(4) + [(0, 3)])
    assert verify_colouring(acyclic, Colouring(dict.fromkeys(range(4), 0))).valid


def test_verify_requires_total(c3):
    with pytest.raises(ContractError):
        verify_colouring(c3, Colouring({0: 0}))


@given(digraphs(max_n=7, oriented=False), st.data())
def test_monochromatic_cycle_is_genuine(D, data):
    colours = data.draw(st.lists(st.integers(0, 2), min_size=D.n, max_size=D.n))
    check = verify_colouring(D, Colouring(dict(enumerate(colours))))
    classes_ok = all(is_acyclic_set(D, [v for v in D.vertices if colours[v] == c]) for c in range(3))
    assert check.valid == classes_ok
    if not check.valid:
        cyc = check.cycle
        assert all(colours[v] == check.colour for v in cyc)
        assert all(D.has_arc(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc)))


def test_two_colour_examples(c5):
    col = two_colour_no_odd(Digraph(4, cycle(4)))
    assert isinstance(col, Colouring)
    assert col.classes() == {0: [0, 2], 1: [1, 3]}
    assert two_colour_no_odd(Digraph(3, path(3))).colours_used == 1
    res = two_colour_no_odd(c5)
    assert isinstance(res, OddCycle) and len(res) == 5


@given(digraphs(max_n=9))
def test_two_colour_valid_or_odd_cycle(D):
    res = two_colour_no_odd(D)
    if isinstance(res, OddCycle):
        assert min_odd_cycle(D) is not None
    else:
        assert min_odd_cycle(D) is None
        assert res.colours_used <= 2 and verify_colouring(D, res).valid


def test_order_to_colouring_c3(c3):
    col, k = order_to_colouring(c3, [0, 1, 2])
    assert k == 2
    assert col.classes() == {0: [1, 2], 1: [0]}
    assert verify_colouring(c3, col).valid


def test_order_to_colouring_forward_only():
    D = Digraph(4, path(4) + [(0, 2)])
    col, k = order_to_colouring(D, [0, 1, 2, 3])
    assert k == 1 and col.colours_used == 1


@settings(max_examples=200)
@given(digraphs(max_n=8, oriented=False), st.randoms(use_true_random=False))
def test_order_to_colouring_always_valid(D, rnd):
    order = list(D.vertices)
    rnd.shuffle(order)
    col, k = order_to_colouring(D, order)
    assert verify_colouring(D, col).valid
    assert col.colours_used == k
    if D.n:
        assert k == longest_backward_path_brute(D, order)


def test_order_to_colouring_matches_backward_path_oracle():
    rng = random.Random(33)
    for _ in range(500):
        D = random_digraph(rng, rng.randint(1, 10), rng.random() * 0.6)
        order = list(range(D.n))
        rng.shuffle(order)
        col, k = order_to_colouring(D, order)
        assert k == longest_backward_path_brute(D, order)
        assert verify_colouring(D, col).valid


def test_colouring_to_order_examples(c3):
    order = colouring_to_order(c3, Colouring({0: 0, 1: 1, 2: 1}))
    assert order == [0, 1, 2]
    assert longest_backward_path_brute(c3, order) <= 2
    D = Digraph(3, [(2, 1), (1, 0)])
    order = colouring_to_order(D, Colouring(dict.fromkeys(range(3), 0)))
    assert order == topological_order(D).order == [2, 1, 0]


def test_round_trip_never_increases():
    rng = random.Random(261)
    for _ in range(500):
        D = random_digraph(rng, rng.randint(1, 9), rng.random() * 0.7)
        colours = [rng.randrange(3) for _ in range(D.n)]
        col = Colouring(dict(enumerate(colours)))
        if not verify_colouring(D, col).valid:
            col = exact_dichromatic(D).witness
        _, k = order_to_colouring(D, colouring_to_order(D, col))
        assert k <= col.colours_used


def test_orders_reach_exact_chi_small():
    # both directions at n <= 4: some order attains chi and none beats it
    for n in range(5):
        for D in enumerate_oriented(n):
            chi = exact_dichromatic(D).chi
            best = min(order_to_colouring(D, p)[1] for p in itertools.permutations(range(n)))
            assert best == chi


# dipolar sets ---------------------------------------------------------------

def _brute_dipolar(D, S):
    return all(D.out[x] <= S or D.inn[x] <= S for x in S)


def test_dipolar_examples(c5):
    cert = is_dipolar(c5, range(5))
    assert isinstance(cert, DipolarCertificate)
    assert cert.s_plus == cert.s_minus == frozenset(range(5))
    assert is_dipolar(Digraph(3, path(3)), {1}) == DipolarViolation(1)


def test_dipolar_exhaustive():
    for n in range(6):
        subsets = [frozenset(s) for r in range(n + 1) for s in itertools.combinations(range(n), r)]
        for D in enumerate_oriented(n):
            for S in subsets:
                res = is_dipolar(D, S)
                assert isinstance(res, DipolarCertificate) == _brute_dipolar(D, S)
                if isinstance(res, DipolarCertificate):
                    assert res.s_plus | res.s_minus == S
                else:
                    x = res.vertex
                    assert x in S and not D.out[x] <= S and not D.inn[x] <= S


# peeling ----------------------------------------------------------------------

def _whole_graph_oracle(G):
    col = two_colour_no_odd(G)
    assert isinstance(col, Colouring)
    return range(G.n), col


def test_peel_single_layer():
    D = Digraph(4, cycle(4))
    col = peel(D, _whole_graph_oracle, 2)
    assert verify_colouring(D, col).valid and col.colours_used <= 2


def test_peel_empty():
    assert peel(Digraph(0), _whole_graph_oracle, 2).colours_used == 0


def test_peel_shifts_lower_side():
    # S = {0} is dipolar although 0 has an in-neighbour outside it
    D = Digraph(2, [(1, 0)])

    def first_vertex(G):
        return [0], Colouring({0: 0})

    col = peel(D, first_vertex, 1)
    assert col.assignment == {0: 1, 1: 0}
    assert verify_colouring(D, col).valid


def _bad_oracle(kind):
    def oracle(G):
        if kind == "empty":
            return [], Colouring({})
        if kind == "nondipolar":
            return [1], Colouring({1: 0})
        if kind == "palette":
            return range(G.n), Colouring(dict.fromkeys(range(G.n), 7))
        return range(G.n), Colouring(dict.fromkeys(range(G.n), 0))
    return oracle


@pytest.mark.parametrize("kind", ["empty", "nondipolar", "palette", "monochromatic"])
def test_peel_rejects_bad_layers(kind, c3):
    with pytest.raises(ContractError):
        peel(c3, _bad_oracle(kind), 2)


def test_peel_with_random_dipolar_layers():
    rng = random.Random(5)
    for _ in range(100):
        D = random_digraph(rng, rng.randint(1, 12), 0.3)

        def oracle(G):
            # grow a random dipolar set: a vertex plus all of its out-neighbours
            v = rng.randrange(G.n)
            S = {v} | set(G.out[v])
            while isinstance(is_dipolar(G, S), DipolarViolation):
                S.add(next(iter(set(G.out[is_dipolar(G, S).vertex]) - S)))
            sub, relabel = induced_subdigraph(G, S)
            col, _ = order_to_colouring(sub, range(sub.n))
            back = {i: v for v, i in relabel.items()}
            return S, col.relabel(back)

        col = peel(D, oracle, D.n)
        assert verify_colouring(D, col).valid
