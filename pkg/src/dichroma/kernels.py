"""Dicolouring primitives: validity, two-colouring, orderings, dipolar peeling."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple

from .digraph import Digraph, cycle_within, induced_subdigraph, strong_components, topological_order, to_mask
from .errors import ContractError, InternalError
from .witness import OddCycle, min_odd_cycle


@dataclass(frozen=True)
class Colouring:
    """Vertex -> colour map; colours are small non-negative ints.

    A colouring may cover only part of a digraph (the pipeline colours parts
    of a layer separately); :func:`verify_colouring` insists on totality.
    """

    assignment: Mapping[int, int]

    @property
    def colours_used(self) -> int:
        return len(set(self.assignment.values()))

    @property
    def max_colour(self) -> int:
        return max(self.assignment.values(), default=-1)

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v in sorted(self.assignment):
            out.setdefault(self.assignment[v], []).append(v)
        return dict(sorted(out.items()))

    def normalised(self) -> Colouring:
        """Relabel colours onto 0..k-1, preserving their relative order."""
        remap = {c: i for i, c in enumerate(sorted(set(self.assignment.values())))}
        return Colouring({v: remap[c] for v, c in self.assignment.items()})

    def shifted(self, offset: int) -> Colouring:
        return Colouring({v: c + offset for v, c in self.assignment.items()})

    def relabel(self, mapping) -> Colouring:
        return Colouring({mapping[v]: c for v, c in self.assignment.items()})

    def as_list(self, n: int) -> list[int]:
        return [self.assignment[v] for v in range(n)]


class ColouringCheck(NamedTuple):
    valid: bool
    cycle: tuple[int, ...] | None = None
    colour: int | None = None


def find_monochromatic_cycle(D: Digraph, assignment: Mapping[int, int]) -> ColouringCheck:
    """Check every colour class of a (possibly partial) assignment."""
    masks: dict[int, int] = {}
    for v, c in assignment.items():
        masks[c] = masks.get(c, 0) | (1 << v)
    for c in sorted(masks):
        cyc = cycle_within(D, masks[c])
        if cyc is not None:
            return ColouringCheck(False, cyc, c)
    return ColouringCheck(True)


def verify_colouring(D: Digraph, col: Colouring) -> ColouringCheck:
    if set(col.assignment) != set(range(D.n)):
        missing = sorted(set(range(D.n)) - set(col.assignment))
        raise ContractError(f"colouring is not total on the digraph (missing {missing[:5]})")
    return find_monochromatic_cycle(D, col.assignment)


def two_colour_no_odd(D: Digraph) -> Colouring | OddCycle:
    """A colouring with at most 2 colours, or an odd directed cycle.

    Each strong component is coloured by a bipartition of its underlying
    graph; components are coloured independently and singletons get colour 0.
    """
    colour: dict[int, int] = {}
    for comp in strong_components(D):
        if len(comp) == 1:
            colour[comp[0]] = 0
            continue
        inside = to_mask(comp)
        start = comp[0]
        colour[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            nbrs = D.adj_mask[v] & inside
            while nbrs:
                low = nbrs & -nbrs
                w = low.bit_length() - 1
                nbrs ^= low
                if w not in colour:
                    colour[w] = 1 - colour[v]
                    queue.append(w)
                elif colour[w] == colour[v]:
                    odd = min_odd_cycle(D)
                    if odd is None:
                        raise InternalError(
                            "strong component is not bipartite but no odd directed cycle exists",
                            {"component": comp},
                        )
                    return odd
    return Colouring(colour)


def _backward_levels(D: Digraph, order) -> dict[int, int]:
    """f(x) = most vertices on a backward-arc-only path ending at x."""
    pos = {v: i for i, v in enumerate(order)}
    f: dict[int, int] = {}
    for x in reversed(order):
        best = 0
        px = pos[x]
        for u in D.inn[x]:
            pu = pos.get(u)
            if pu is not None and pu > px and f[u] > best:
                best = f[u]
        f[x] = best + 1
    return f


def order_to_colouring(D: Digraph, order: Iterable[int]) -> tuple[Colouring, int]:
    order = list(order)
    if sorted(order) != list(range(D.n)):
        raise ContractError("order must list every vertex exactly once")
    f = _backward_levels(D, order)
    k = max(f.values(), default=0)
    return Colouring({v: level - 1 for v, level in f.items()}), k


def colouring_to_order(D: Digraph, col: Colouring) -> list[int]:
    check = verify_colouring(D, col)
    if not check.valid:
        raise ContractError(f"colouring has a monochromatic cycle in colour {check.colour}", check.cycle)
    order: list[int] = []
    for members in col.classes().values():
        sub, relabel = induced_subdigraph(D, members)
        back = {i: v for v, i in relabel.items()}
        order.extend(back[i] for i in topological_order(sub).order)
    return order


@dataclass(frozen=True)
class DipolarCertificate:
    S: frozenset
    s_plus: frozenset  # in-neighbourhood inside S
    s_minus: frozenset  # out-neighbourhood inside S


class DipolarViolation(NamedTuple):
    vertex: int


def is_dipolar(D: Digraph, S: Iterable[int]) -> DipolarCertificate | DipolarViolation:
    S = frozenset(S)
    mask = to_mask(S)
    s_plus, s_minus = set(), set()
    for x in sorted(S):
        ins = not (D.in_mask[x] & ~mask)
        outs = not (D.out_mask[x] & ~mask)
        if not ins and not outs:
            return DipolarViolation(x)
        if ins:
            s_plus.add(x)
        if outs:
            s_minus.add(x)
    return DipolarCertificate(S, frozenset(s_plus), frozenset(s_minus))


LayerOracle = Callable[[Digraph], "tuple[Iterable[int], Colouring]"]


def peel(D: Digraph, layer_oracle: LayerOracle, c: int) -> Colouring:
    """Colour D with at most 2c colours by repeatedly removing dipolar sets.

    ``layer_oracle`` receives the remaining induced subdigraph (relabelled
    onto 0..n'-1) and returns a nonempty dipolar set S with a colouring of
    ``D'[S]`` using colours below ``c``.  Vertices of S whose in-neighbours all
    lie in S keep their colour; the rest of S is shifted up by ``c``.
    """
    assignment: dict[int, int] = {}
    current = D
    to_orig = list(range(D.n))
    layer = 0
    while current.n:
        S, layer_col = layer_oracle(current)
        S = frozenset(S)
        if not S:
            raise ContractError(f"layer {layer}: oracle returned an empty set")
        cert = is_dipolar(current, S)
        if isinstance(cert, DipolarViolation):
            raise ContractError(f"layer {layer}: set is not dipolar at vertex {cert.vertex}", cert)
        if set(layer_col.assignment) != S:
            raise ContractError(f"layer {layer}: colouring does not cover exactly the set")
        if any(not 0 <= x < c for x in layer_col.assignment.values()):
            raise ContractError(f"layer {layer}: colour outside palette 0..{c - 1}")
        check = find_monochromatic_cycle(current, layer_col.assignment)
        if not check.valid:
            raise ContractError(f"layer {layer}: monochromatic cycle in colour {check.colour}", check.cycle)
        for x in S:
            shift = 0 if x in cert.s_plus else c
            assignment[to_orig[x]] = layer_col.assignment[x] + shift
        rest = [v for v in range(current.n) if v not in S]
        current, _ = induced_subdigraph(current, rest)
        to_orig = [to_orig[v] for v in rest]
        layer += 1
    return Colouring(assignment)
