"""Bounded dicolouring of triangle-free digraphs without an induced P6.

Each layer takes a shortest odd directed cycle C, forms
``S = C + N_1(C) + N_2(C) + N_3(C)``, splits S into nine parts and colours
each part on its own palette.  :func:`peel` then doubles the layer palette
into a colouring of the whole digraph.  The inner mode handles digraphs that
additionally exclude an induced C32 and is used recursively on the part of S
lying two steps from C in both directions.

Every structural fact the construction relies on is checked as it is used.
A failed check raises :class:`InvariantViolation`; :func:`colour_class_member`
turns that into a forbidden-subdigraph witness or, failing that, an
:class:`InternalError`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .digraph import Digraph, induced_subdigraph, iter_bits, level_sets, lowest_bit, reverse, to_mask
from .errors import ContractError, InternalError
from .kernels import (
    Colouring,
    DipolarViolation,
    _backward_levels,
    find_monochromatic_cycle,
    is_dipolar,
    peel,
    two_colour_no_odd,
)
from .witness import (
    ForbiddenWitness,
    OddCycle,
    find_digon,
    find_induced_c32,
    find_induced_p6,
    find_triangle,
    min_odd_cycle,
)

log = logging.getLogger(__name__)

OUTER = "outer"
INNER = "inner"

PART_NAMES = ("cycle_part", "out1", "in1", "core1", "out2", "in2", "core2", "out3", "in3")


@dataclass(frozen=True)
class BudgetTable:
    cycle_part: int = 3
    out1: int = 4
    in1: int = 4
    core1: int = 30
    out2: int = 2
    in2: int = 2
    core2_outer: int = 154
    core2_inner: int = 30
    out3: int = 1
    in3: int = 1
    # commonly quoted figure for the inner class, below 2 * 77 = 154
    stated_core2_outer: int = 144

    def part_budget(self, name: str, mode: str) -> int:
        if name == "core2":
            return self.core2_outer if mode == OUTER else self.core2_inner
        return getattr(self, name)

    def layer(self, mode: str) -> int:
        return sum(self.part_budget(p, mode) for p in PART_NAMES)

    def final(self, mode: str) -> int:
        return 2 * self.layer(mode)

    def stated_layer(self) -> int:
        return self.layer(OUTER) - self.core2_outer + self.stated_core2_outer

    def stated_final(self, mode: str) -> int:
        return self.stated_core2_outer if mode == INNER else 2 * self.stated_layer()


BUDGETS = BudgetTable()


class InvariantViolation(Exception):
    """A structural fact that holds on in-class inputs failed on this input."""

    def __init__(self, check: str, message: str, **context):
        super().__init__(f"{check}: {message}")
        self.check = check
        self.context = context


@dataclass(frozen=True)
class SPartition:
    cycle_part: frozenset
    out1: frozenset
    in1: frozenset
    core1: frozenset
    out2: frozenset
    in2: frozenset
    core2: frozenset
    out3: frozenset
    in3: frozenset

    def parts(self) -> list[tuple[str, frozenset]]:
        return [(name, getattr(self, name)) for name in PART_NAMES]

    @property
    def S(self) -> frozenset:
        return frozenset().union(*(p for _, p in self.parts()))


@dataclass(frozen=True)
class CoreLabels:
    """Labels used to colour ``N_l^+(C) & N_l^-(C)``.

    ``cover_tag[v] = (i, sign)`` when v lies in the level-l out (``+``) or in
    (``-``) set of the cycle vertex with 1-based index i <= 6.  The rest of the
    target gets ``out_index``/``in_index``: the smallest cycle index reachable
    from v (resp. reaching v) by a path of exactly l arcs; for l = 2 the middle
    vertices of those paths are ``p_plus``/``p_minus``.
    """

    ell: int
    target: frozenset
    cover_tag: dict
    out_index: dict
    in_index: dict
    p_plus: dict
    p_minus: dict

    @property
    def residual(self) -> frozenset:
        return frozenset(self.out_index)


@dataclass
class LayerRecord:
    mode: str
    n: int
    cycle_length: int | None
    part_sizes: dict = field(default_factory=dict)
    part_colours: dict = field(default_factory=dict)
    colours: int = 0


@dataclass
class PipelineStats:
    layers: list = field(default_factory=list)
    escalations: int = 0
    escalation_checks: list = field(default_factory=list)
    dipolar_checks: int = 0

    def max_layer_colours(self, mode: str) -> int:
        return max((r.colours for r in self.layers if r.mode == mode), default=0)

    def max_part_colours(self, name: str, mode: str) -> int:
        return max((r.part_colours.get(name, 0) for r in self.layers if r.mode == mode), default=0)


def _is_stable(D: Digraph, mask: int) -> bool:
    return not any(D.out_mask[v] & mask for v in iter_bits(mask))


def build_s(D: Digraph, C: OddCycle) -> SPartition:
    ls = level_sets(D, C.vertices, 3)
    p, m = ls.plus_levels, ls.minus_levels
    return SPartition(
        cycle_part=frozenset(C.vertices),
        out1=p[1] - m[1],
        in1=m[1] - p[1],
        core1=p[1] & m[1],
        out2=p[2] - m[2],
        in2=m[2] - p[2],
        core2=p[2] & m[2],
        out3=p[3],
        in3=m[3] - p[3],
    )


def _sub_two_colouring(D: Digraph, members, check: str) -> Colouring:
    """two_colour_no_odd on D[members], mapped back; odd cycles escalate."""
    if not members:
        return Colouring({})
    sub, relabel = induced_subdigraph(D, members)
    back = {i: v for v, i in relabel.items()}
    res = two_colour_no_odd(sub)
    if isinstance(res, OddCycle):
        raise InvariantViolation(check, "odd directed cycle where none can exist",
                                 cycle=tuple(back[v] for v in res.vertices))
    return res.relabel(back)


def colour_cycle_part(D: Digraph, C: OddCycle) -> Colouring:
    first, rest = C.vertices[0], C.vertices[1:]
    sub, relabel = induced_subdigraph(D, rest)
    back = {i: v for v, i in relabel.items()}
    res = two_colour_no_odd(sub)
    if isinstance(res, OddCycle):
        shorter = tuple(back[v] for v in res.vertices)
        raise InternalError("cycle was not a shortest odd cycle", {"cycle": C.vertices, "shorter": shorter})
    assignment = dict(res.relabel(back).assignment)
    assignment[first] = 2
    return Colouring(assignment)


def _reversed_cycle(C: OddCycle) -> OddCycle:
    vs = C.vertices
    return OddCycle((vs[0],) + tuple(reversed(vs[1:])), C.minimal)


def colour_one_sided_first(D: Digraph, C: OddCycle, side: str = "out",
                           partition: SPartition | None = None) -> Colouring:
    """Colour the vertices with arcs from C but none into C (side ``out``).

    Out-neighbours of x_1 take colour 0, remaining out-neighbours of x_2 take
    colour 1, the rest has no odd directed cycle and takes colours 2 and 3.
    Side ``in`` is the same construction on the reversed digraph.
    """
    if side not in ("out", "in"):
        raise ValueError(f"side must be 'out' or 'in', not {side!r}")
    partition = partition or build_s(D, C)
    part = partition.out1 if side == "out" else partition.in1
    if not part:
        return Colouring({})
    if side == "out":
        G, cyc = D, C
    else:
        G, cyc = reverse(D), _reversed_cycle(C)
    part_mask = to_mask(part)
    s1 = G.out_mask[cyc.vertices[0]] & part_mask
    s2 = G.out_mask[cyc.vertices[1]] & part_mask & ~s1
    for mask, label in ((s1, "x_1"), (s2, "x_2")):
        if not _is_stable(G, mask):
            raise InvariantViolation("one-sided-first", f"out-neighbourhood of {label} is not stable")
    rest = part_mask & ~s1 & ~s2
    assignment = {v: 0 for v in iter_bits(s1)}
    assignment.update({v: 1 for v in iter_bits(s2)})
    tail = _sub_two_colouring(G, list(iter_bits(rest)), "one-sided-first")
    assignment.update(tail.shifted(2).assignment)
    return Colouring(assignment)


def colour_one_sided_second(D: Digraph, C: OddCycle, side: str = "out",
                            partition: SPartition | None = None) -> Colouring:
    partition = partition or build_s(D, C)
    if side not in ("out", "in"):
        raise ValueError(f"side must be 'out' or 'in', not {side!r}")
    part = partition.out2 if side == "out" else partition.in2
    return _sub_two_colouring(D, sorted(part), "one-sided-second")


def core_labels(D: Digraph, C: OddCycle, ell: int,
                   partition: SPartition | None = None) -> CoreLabels:
    if ell not in (1, 2):
        raise ValueError("ell must be 1 or 2")
    partition = partition or build_s(D, C)
    target = partition.core1 if ell == 1 else partition.core2
    cyc = C.vertices

    # both level-ell sets of every cycle vertex must be stable
    near = {}
    for idx, x in enumerate(cyc, start=1):
        ls = level_sets(D, (x,), ell)
        plus_mask = to_mask(ls.plus_levels[ell])
        minus_mask = to_mask(ls.minus_levels[ell])
        for mask, sign in ((plus_mask, "+"), (minus_mask, "-")):
            if not _is_stable(D, mask):
                raise InvariantViolation("core-labels",
                                         f"level-{ell} {sign} set of cycle vertex {x} is not stable",
                                         vertex=x, ell=ell)
        if idx <= 6:
            near[idx] = (plus_mask, minus_mask)

    cover_tag, out_index, in_index, p_plus, p_minus = {}, {}, {}, {}, {}
    for v in sorted(target):
        tag = None
        for idx in sorted(near):
            plus_mask, minus_mask = near[idx]
            if plus_mask >> v & 1:
                tag = (idx, "+")
            elif minus_mask >> v & 1:
                tag = (idx, "-")
            if tag:
                break
        if tag:
            cover_tag[v] = tag
            continue
        for idx, x in enumerate(cyc, start=1):
            if ell == 1:
                hit = D.has_arc(v, x)
            else:
                mids = D.out_mask[v] & D.in_mask[x]
                hit = bool(mids)
            if hit:
                out_index[v] = idx
                if ell == 2:
                    p_plus[v] = lowest_bit(mids)
                break
        for idx, x in enumerate(cyc, start=1):
            if ell == 1:
                hit = D.has_arc(x, v)
            else:
                mids = D.out_mask[x] & D.in_mask[v]
                hit = bool(mids)
            if hit:
                in_index[v] = idx
                if ell == 2:
                    p_minus[v] = lowest_bit(mids)
                break
        if v not in out_index or v not in in_index:
            raise InvariantViolation("core-labels", f"vertex {v} has no length-{ell} path to or from the cycle",
                                     vertex=v)
    return CoreLabels(ell, frozenset(target), cover_tag, out_index, in_index, p_plus, p_minus)


def colour_core(D: Digraph, C: OddCycle, ell: int,
                partition: SPartition | None = None) -> Colouring:
    """Colour ``N_l^+(C) & N_l^-(C)`` with at most 30 colours.

    Colours 0..11 cover the vertices in a level-l set of x_1..x_6, one
    palette per (index, sign).  The rest is split by out-index mod 6; within
    each class, vertices with out >= in get two colours from the reversed
    out-index order and those with out < in get one.
    """
    labels = core_labels(D, C, ell, partition)
    assignment = {}
    for v, (idx, sign) in labels.cover_tag.items():
        assignment[v] = 2 * (idx - 1) + (0 if sign == "+" else 1)

    groups: dict[tuple[int, bool], list[int]] = {}
    for v in labels.residual:
        o, i = labels.out_index[v], labels.in_index[v]
        groups.setdefault((o % 6, o >= i), []).append(v)

    def rank(v):
        return (labels.out_index[v], v)

    for (r, ge), members in sorted(groups.items()):
        members.sort(key=rank)
        base = 12 + 3 * r
        if ge:
            f = _backward_levels(D, list(reversed(members)))
            if max(f.values()) > 2:
                raise InvariantViolation("core-labels", f"residual class {r} has a forward path on 3 vertices", ell=ell)
            for v in members:
                assignment[v] = base + f[v] - 1
        else:
            pos = {v: k for k, v in enumerate(members)}
            for u in members:
                for w in D.out[u]:
                    if w in pos and pos[w] < pos[u]:
                        raise InvariantViolation("core-labels", f"backward arc {u}->{w} in residual class {r}", ell=ell)
            for v in members:
                assignment[v] = base + 2
    return Colouring(assignment)


def colour_third(D: Digraph, C: OddCycle, partition: SPartition | None = None) -> Colouring:
    partition = partition or build_s(D, C)
    for name in ("out3", "in3"):
        if not _is_stable(D, to_mask(getattr(partition, name))):
            raise InvariantViolation("third-level", f"{name} contains an arc")
    assignment = {v: 0 for v in partition.out3}
    assignment.update({v: 1 for v in partition.in3})
    return Colouring(assignment)


def _colour_core2_outer(D: Digraph, core2, stats: PipelineStats | None) -> Colouring:
    if not core2:
        return Colouring({})
    sub, relabel = induced_subdigraph(D, core2)
    back = {i: v for v, i in relabel.items()}
    c32 = find_induced_c32(sub)
    if c32 is not None:
        raise InvariantViolation("core2-inner", "induced C32 inside the level-2 core", witness=c32.relabel(back))
    res = colour_class_member(sub, mode=INNER, trust_class=True, stats=stats)
    if isinstance(res, ForbiddenWitness):
        raise InvariantViolation("core2-inner", "inner run on the level-2 core found a witness",
                                 witness=res.relabel(back))
    return res.relabel(back)


def colour_s(D: Digraph, C: OddCycle, mode: str = OUTER,
             partition: SPartition | None = None,
             stats: PipelineStats | None = None) -> Colouring:
    """Colour S part by part on disjoint palettes; at most 201 / 77 colours."""
    if mode not in (OUTER, INNER):
        raise ValueError(f"unknown mode {mode!r}")
    part = partition or build_s(D, C)
    colourers = {
        "cycle_part": lambda: colour_cycle_part(D, C),
        "out1": lambda: colour_one_sided_first(D, C, "out", part),
        "in1": lambda: colour_one_sided_first(D, C, "in", part),
        "core1": lambda: colour_core(D, C, 1, part),
        "out2": lambda: colour_one_sided_second(D, C, "out", part),
        "in2": lambda: colour_one_sided_second(D, C, "in", part),
        "core2": (lambda: _colour_core2_outer(D, part.core2, stats)) if mode == OUTER
        else (lambda: colour_core(D, C, 2, part)),
    }
    third = colour_third(D, C, part)
    colourers["out3"] = lambda: Colouring({v: 0 for v in part.out3})
    colourers["in3"] = lambda: Colouring({v: third.assignment[v] - 1 for v in part.in3})
    record = LayerRecord(mode=mode, n=D.n, cycle_length=len(C))
    assignment: dict[int, int] = {}
    offset = 0
    for name, members in part.parts():
        budget = BUDGETS.part_budget(name, mode)
        col = colourers[name]()
        if set(col.assignment) != set(members):
            raise InternalError(f"{name} colouring does not cover its part", {"part": sorted(members)})
        if col.assignment and (col.max_colour >= budget or min(col.assignment.values()) < 0):
            raise InternalError(f"{name} colouring exceeds its budget of {budget}",
                                {"colours": col.colours_used, "max": col.max_colour})
        overlap = set(col.assignment) & set(assignment)
        if overlap:
            raise InternalError(f"{name} overlaps an earlier part", {"vertices": sorted(overlap)})
        record.part_sizes[name] = len(members)
        record.part_colours[name] = col.colours_used
        assignment.update(col.shifted(offset).assignment)
        offset += budget
    layer = Colouring(assignment)
    record.colours = layer.colours_used
    if stats is not None:
        stats.layers.append(record)
    check = find_monochromatic_cycle(D, layer.assignment)
    if not check.valid:
        raise InternalError("layer colouring has a monochromatic cycle",
                            {"colour": check.colour, "cycle": check.cycle})
    return layer


def _search_witness(D: Digraph, mode: str) -> ForbiddenWitness | None:
    w = find_digon(D) or find_triangle(D) or find_induced_p6(D)
    if w is None and mode == INNER:
        w = find_induced_c32(D)
    return w


def colour_class_member(D: Digraph, mode: str = OUTER, trust_class: bool = False,
                        stats: PipelineStats | None = None) -> Colouring | ForbiddenWitness:
    """Colour D within the class budget, or return why D is outside the class.

    Digons and triangles are always looked for up front; the induced P6 (and,
    in inner mode, C32) searches are skipped when ``trust_class`` is set.  The
    result is verified before it is returned.
    """
    if mode not in (OUTER, INNER):
        raise ValueError(f"unknown mode {mode!r}")
    stats = stats if stats is not None else PipelineStats()
    w = find_digon(D) or find_triangle(D)
    if w is None and not trust_class:
        w = find_induced_p6(D)
        if w is None and mode == INNER:
            w = find_induced_c32(D)
    if w is not None:
        return w

    budget = BUDGETS.layer(mode)

    def oracle(G: Digraph):
        odd = min_odd_cycle(G)
        if odd is None:
            col = two_colour_no_odd(G)
            if isinstance(col, OddCycle):
                raise InternalError("odd cycle missed by the shortest-odd-cycle search", {"cycle": col.vertices})
            stats.layers.append(LayerRecord(mode=mode, n=G.n, cycle_length=None, colours=col.colours_used))
            return range(G.n), col
        part = build_s(G, odd)
        S = part.S
        stats.dipolar_checks += 1
        cert = is_dipolar(G, S)
        if isinstance(cert, DipolarViolation):
            raise InvariantViolation("dipolar-s", f"S is not dipolar at vertex {cert.vertex}", vertex=cert.vertex)
        col = colour_s(G, odd, mode, part, stats)
        if col.colours_used > budget:
            raise InternalError("layer exceeds its budget", {"colours": col.colours_used, "budget": budget})
        return S, col

    try:
        col = peel(D, oracle, budget)
    except InvariantViolation as exc:
        stats.escalations += 1
        stats.escalation_checks.append(exc.check)
        log.info("escalating after %s", exc)
        w = _search_witness(D, mode)
        if w is not None:
            return w
        raise InternalError(f"unexplained failure of {exc}", {"check": exc.check, **exc.context}) from exc
    except ContractError as exc:
        raise InternalError(f"peeling contract failed: {exc}", {"witness": exc.witness}) from exc

    col = col.normalised()
    check = find_monochromatic_cycle(D, col.assignment)
    if not check.valid or len(col.assignment) != D.n:
        raise InternalError("final colouring failed verification", {"cycle": check.cycle, "colour": check.colour})
    if col.colours_used > BUDGETS.final(mode):
        raise InternalError("final colouring exceeds the bound",
                            {"colours": col.colours_used, "bound": BUDGETS.final(mode)})
    return col
