"""Acceptance suites, shared by ``dichroma selftest`` and the pytest suite.

Each suite returns a :class:`CriterionResult`; :func:`run_selftest` runs
them all and renders a tab-delimited report.  Nothing time-dependent goes
into the report, so equal seeds give byte-identical text.
"""

from __future__ import annotations

import hashlib
import io
import os
import random
import tempfile
from dataclasses import dataclass, field

from . import cli
from .digraph import Digraph, level_sets, reverse
from .exact import brute_force_dichromatic, enumerate_digraphs, enumerate_oriented, exact_dichromatic
from .formats import serialize_digraph
from .generators import GenSpec, generate, repair
from .kernels import (
    Colouring,
    colouring_to_order,
    order_to_colouring,
    two_colour_no_odd,
    verify_colouring,
)
from .pipeline import BUDGETS, INNER, OUTER, PART_NAMES, PipelineStats, colour_class_member
from .witness import (
    ForbiddenWitness,
    P4Shape,
    WitnessKind,
    find_triangle,
    p4_certificate,
    min_odd_cycle,
    validate_p4,
    validate_witness,
)

LEVELS = ("quick", "full")

# (full, quick) instance counts per suite
SIZES = {
    "oracle_n": (5, 4),
    "two_colour": (10_000, 400),
    "orders_n": (5, 4),
    "orders_random": (500, 100),
    "p4_cert": (1_000, 150),
    "pipeline": (1_000, 120),
    "witness": (200, 30),
    "levels": (1_000, 150),
}

EXACT_CROSSCHECK_N = 10


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        detail = " ".join(f"{k}={v}" for k, v in self.details.items())
        return f"{self.key}\t{status}\t{self.title}\t{detail}"


def _size(name: str, level: str) -> int:
    full, quick = SIZES[name]
    return full if level == "full" else quick


def check_oracle_equivalence(level: str = "full") -> CriterionResult:
    n = _size("oracle_n", level)
    mismatches = bad_witness = count = 0
    chis = {}
    for family in (enumerate_oriented(n), enumerate_digraphs(3)):
        for D in family:
            count += 1
            res = exact_dichromatic(D)
            brute = brute_force_dichromatic(D)
            chis[res.chi] = chis.get(res.chi, 0) + 1
            if res.chi != brute:
                mismatches += 1
            if not verify_colouring(D, res.witness).valid or res.witness.colours_used != res.chi:
                bad_witness += 1
    expected = 3 ** (n * (n - 1) // 2) + 4 ** 3
    chi_hist = ",".join(f"{k}:{v}" for k, v in sorted(chis.items()))
    return CriterionResult(
        "C1", "exact=brute-force (exhaustive)",
        mismatches == 0 and bad_witness == 0 and count == expected,
        {"oriented_n": n, "digraphs": count, "mismatches": mismatches, "bad_witnesses": bad_witness,
         "chi_hist": chi_hist},
    )


def _density(rng: random.Random, n: int) -> float:
    return min(0.9, rng.choice((1.0, 2.0, 3.0, 4.0)) / max(n - 1, 1))


def check_two_colouring(level: str = "full", seed: int = 0) -> CriterionResult:
    count = _size("two_colour", level)
    rng = random.Random(seed + 32)
    failures = max_colours = 0
    for i in range(count):
        n = rng.randint(1, 40)
        D = generate(GenSpec("no_odd_cycle", n, _density(rng, n), rng.getrandbits(63)))
        res = two_colour_no_odd(D)
        if not isinstance(res, Colouring) or not verify_colouring(D, res).valid or res.colours_used > 2:
            failures += 1
            continue
        max_colours = max(max_colours, res.colours_used)
    return CriterionResult("C2", "two-colouring without odd cycles", failures == 0,
                           {"instances": count, "failures": failures, "max_colours": max_colours})


def longest_backward_path_brute(D: Digraph, order) -> int:
    """Enumerate every path made of backward arcs; return the most vertices."""
    pos = {v: i for i, v in enumerate(order)}
    best = 1 if D.n else 0

    def walk(path):
        nonlocal best
        best = max(best, len(path))
        last = path[-1]
        for w in sorted(D.out[last]):
            if pos[w] < pos[last] and w not in path:
                walk(path + [w])

    for v in range(D.n):
        walk([v])
    return best


def check_backward_orders(level: str = "full", seed: int = 0) -> CriterionResult:
    n_max = _size("orders_n", level)
    mismatch_a = digraphs = 0
    for n in range(1, n_max + 1):
        for D in enumerate_oriented(n):
            digraphs += 1
            res = exact_dichromatic(D)
            order = colouring_to_order(D, res.witness)
            col, k = order_to_colouring(D, order)
            if k != res.chi or not verify_colouring(D, col).valid:
                mismatch_a += 1
    rng = random.Random(seed + 33)
    pairs = _size("orders_random", level)
    mismatch_b = invalid_b = 0
    for _ in range(pairs):
        n = rng.randint(1, 10)
        D = generate(GenSpec("random_oriented", n, rng.random(), rng.getrandbits(63)))
        order = list(range(n))
        rng.shuffle(order)
        col, k = order_to_colouring(D, order)
        if k != longest_backward_path_brute(D, order):
            mismatch_b += 1
        if not verify_colouring(D, col).valid or col.colours_used != k:
            invalid_b += 1
    ok = mismatch_a == 0 and mismatch_b == 0 and invalid_b == 0
    return CriterionResult("C3", "ordering <-> colouring equivalence", ok,
                           {"exhaustive_n": n_max, "digraphs": digraphs, "round_trip_mismatches": mismatch_a,
                            "random_pairs": pairs, "path_mismatches": mismatch_b, "invalid": invalid_b})


def _triangle_free(n: int, p: float, rng: random.Random) -> Digraph:
    D = generate(GenSpec("random_oriented", n, p, rng.getrandbits(63)))
    return repair(n, D.arcs, rng, (find_triangle,))


def check_p4_certificates(level: str = "full", seed: int = 0) -> CriterionResult:
    target = _size("p4_cert", level)
    rng = random.Random(seed + 34)
    failures = wrong_shape = 0
    shapes = {s.value: 0 for s in P4Shape}
    sides = {"into": 0, "from": 0, "both": 0}
    triples = 0
    while triples < target:
        n = rng.randint(5, 24)
        D = _triangle_free(n, rng.uniform(0.15, 0.6), rng)
        C = min_odd_cycle(D)
        if C is None:
            continue
        on = set(C.vertices)
        nbrs = sorted({w for x in C.vertices for w in D.out[x] | D.inn[x]} - on)
        if not nbrs:
            continue
        a = rng.choice(nbrs)
        triples += 1
        into = any(D.has_arc(a, x) for x in on)
        from_ = any(D.has_arc(x, a) for x in on)
        cert = p4_certificate(D, C, a)
        shapes[cert.shape.value] += 1
        if not validate_p4(D, cert):
            failures += 1
        if into and from_:
            sides["both"] += 1
        elif into:
            sides["into"] += 1
            wrong_shape += cert.shape is not P4Shape.OUT_PATH
        else:
            sides["from"] += 1
            wrong_shape += cert.shape is not P4Shape.IN_PATH
    detail = {"triples": triples, "invalid": failures, "wrong_shape": wrong_shape}
    detail.update({f"shape_{k}": v for k, v in shapes.items()})
    detail.update({f"side_{k}": v for k, v in sides.items()})
    return CriterionResult("C4", "P4 certificates around odd cycles", failures == 0 and wrong_shape == 0, detail)


@dataclass
class PipelineRun:
    kind: str
    n: int
    arcs: int
    seed: int
    colours: int
    exact_chi: int | None
    odd_layers: int
    inner_layers: int


def pipeline_corpus(level: str = "full", seed: int = 0):
    """Yield the (kind, n, p, seed) specs of the pipeline corpus."""
    count = _size("pipeline", level)
    rng = random.Random(seed + 13)
    for i in range(count):
        kind = "in_class_p6_trianglefree" if i % 2 == 0 else "odd_cycle_blowup"
        low = 5 if kind == "odd_cycle_blowup" else 1
        n = rng.randint(low, 60) if i % 4 < 2 else rng.randint(low, EXACT_CROSSCHECK_N)
        p = rng.choice((0.05, 0.1, 0.2, 0.3)) if kind == "odd_cycle_blowup" else _density(rng, n)
        yield GenSpec(kind, n, p, rng.getrandbits(63))


def run_pipeline_corpus(level: str = "full", seed: int = 0):
    runs: list[PipelineRun] = []
    stats = PipelineStats()
    failures = []
    for spec in pipeline_corpus(level, seed):
        D = generate(spec)
        before = len(stats.layers)
        res = colour_class_member(D, OUTER, stats=stats)
        layers = stats.layers[before:]
        if isinstance(res, ForbiddenWitness):
            failures.append(("witness", spec))
            continue
        if not verify_colouring(D, res).valid or res.colours_used > BUDGETS.final(OUTER):
            failures.append(("invalid", spec))
        chi = exact_dichromatic(D).chi if D.n <= EXACT_CROSSCHECK_N else None
        if chi is not None and chi > res.colours_used:
            failures.append(("below_exact", spec))
        runs.append(PipelineRun(spec.kind, D.n, len(D.arcs), spec.seed, res.colours_used, chi,
                                sum(1 for r in layers if r.cycle_length is not None),
                                sum(1 for r in layers if r.mode == INNER)))
    return runs, stats, failures


def check_pipeline(runs, failures) -> CriterionResult:
    stated = BUDGETS.stated_final(OUTER)
    within_stated = sum(1 for r in runs if r.colours <= stated)
    checked = [r for r in runs if r.exact_chi is not None]
    return CriterionResult(
        "C5", "class colouring within budget", not failures and len(runs) >= 1,
        {"instances": len(runs), "failures": len(failures),
         "max_colours": max((r.colours for r in runs), default=0),
         "bound": BUDGETS.final(OUTER),
         f"within_{stated}": f"{within_stated}/{len(runs)}",
         "exact_checked": len(checked),
         "exact_equal": sum(1 for r in checked if r.exact_chi == r.colours),
         "with_odd_layers": sum(1 for r in runs if r.odd_layers)},
    )


def check_layer_invariants(stats: PipelineStats) -> CriterionResult:
    over = []
    for name in PART_NAMES:
        for mode in (OUTER, INNER):
            if stats.max_part_colours(name, mode) > BUDGETS.part_budget(name, mode):
                over.append(f"{mode}:{name}")
    inner_max = stats.max_layer_colours(INNER)
    outer_max = stats.max_layer_colours(OUTER)
    odd_layers = [r for r in stats.layers if r.cycle_length is not None]
    nonempty = {name: sum(1 for r in odd_layers if r.part_sizes.get(name)) for name in PART_NAMES}
    ok = (not over and stats.escalations == 0 and inner_max <= BUDGETS.layer(INNER)
          and outer_max <= BUDGETS.layer(OUTER) and stats.dipolar_checks == len(odd_layers))
    detail = {"layers": len(stats.layers), "odd_layers": len(odd_layers),
              "dipolar_checks": stats.dipolar_checks, "escalations": stats.escalations,
              "over_budget": ",".join(over) or "none",
              "outer_layer_max": outer_max, "inner_layer_max": inner_max,
              "inner_layers": sum(1 for r in stats.layers if r.mode == INNER)}
    detail.update({f"nonempty_{k}": v for k, v in nonempty.items()})
    detail.update({f"max_{k}": max(stats.max_part_colours(k, OUTER), stats.max_part_colours(k, INNER))
                   for k in PART_NAMES})
    return CriterionResult("C6", "per-layer structural checks", ok, detail)


def _plant(kind: str, rng: random.Random) -> Digraph:
    n = rng.randint(6, 30)
    base = generate(GenSpec("in_class_p6_trianglefree", n, _density(rng, n), rng.getrandbits(63)))
    arcs = set(base.arcs)
    if kind == "digon":
        u, v = rng.sample(range(n), 2)
        arcs |= {(u, v), (v, u)}
    elif kind == "triangle":
        a, b, c = rng.sample(range(n), 3)
        for x, y in ((a, b), (b, c), (a, c)):
            if (y, x) not in arcs:
                arcs.add((x, y))
    else:
        path = list(range(n, n + 6))
        attach = rng.randrange(n)
        arcs |= {(path[i], path[i + 1]) for i in range(5)}
        arcs.add((attach, path[0]))  # extends the path but keeps the six induced
        n += 6
    return Digraph(n, arcs)


def check_witness_path(level: str = "full", seed: int = 0) -> CriterionResult:
    count = _size("witness", level)
    rng = random.Random(seed + 7)
    kinds = ("digon", "triangle", "p6")
    wrong_exit = invalid = 0
    found = {k.value: 0 for k in WitnessKind}
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "planted.dgr")
        for i in range(count):
            D = _plant(kinds[i % 3], rng)
            with open(path, "w") as fh:
                fh.write(serialize_digraph(D))
            out = io.StringIO()
            code = cli.cli_dispatch(["colour", path], stdout=out, stderr=io.StringIO())
            if code != 1:
                wrong_exit += 1
                continue
            fields = out.getvalue().split("\n")[0].split()
            if fields[0] != "witness":
                invalid += 1
                continue
            w = ForbiddenWitness(WitnessKind(fields[1]), tuple(int(x) - 1 for x in fields[2:]))
            found[w.kind.value] += 1
            if not validate_witness(D, w):
                invalid += 1
    detail = {"digraphs": count, "wrong_exit": wrong_exit, "invalid_witnesses": invalid}
    detail.update({f"found_{k}": v for k, v in found.items()})
    return CriterionResult("C7", "out-of-class inputs yield witnesses", wrong_exit == 0 and invalid == 0, detail)


def level_sets_reference(D: Digraph, X, depth: int):
    """Second implementation straight from the arc list, for cross-checking."""
    arcs = sorted(D.arcs)
    plus, minus = [set(X)], [set(X)]
    lower = set(X)
    for _ in range(depth):
        p = {v for u, v in arcs if u in plus[-1]} - lower
        m = {u for u, v in arcs if v in minus[-1]} - lower
        plus.append(p)
        minus.append(m)
        lower |= p | m
    return plus, minus


def level_set_violations(D: Digraph, X, depth: int) -> list[str]:
    ls = level_sets(D, X, depth)
    problems = []
    ref_plus, ref_minus = level_sets_reference(D, X, depth)
    if [set(s) for s in ls.plus_levels] != ref_plus or [set(s) for s in ls.minus_levels] != ref_minus:
        problems.append("reference")
    base = set(ls.base)
    for k in range(2, depth + 1):
        for v in ls.levels[k]:
            if (D.out[v] | D.inn[v]) & base:
                problems.append("item2")
    for k in range(1, depth + 1):
        upto = ls.union_upto(k)
        for v in ls.levels[k - 1]:
            if not (D.out[v] <= upto or D.inn[v] <= upto):
                problems.append("item3")
    for k in range(depth + 1):
        for v in ls.plus_levels[k]:
            p = ls.plus_paths[v]
            if (len(p) != k + 1 or p[-1] != v or any(p[i] not in ls.plus_levels[i] for i in range(k + 1))
                    or any(not D.has_arc(p[i], p[i + 1]) for i in range(k))):
                problems.append("item4+")
        for v in ls.minus_levels[k]:
            p = ls.minus_paths[v]
            if (len(p) != k + 1 or p[0] != v or any(p[k - i] not in ls.minus_levels[i] for i in range(k + 1))
                    or any(not D.has_arc(p[i], p[i + 1]) for i in range(k))):
                problems.append("item4-")
    rev = level_sets(reverse(D), X, depth)
    if rev.plus_levels != ls.minus_levels or rev.minus_levels != ls.plus_levels:
        problems.append("reverse")
    return problems


def check_level_sets(level: str = "full", seed: int = 0) -> CriterionResult:
    count = _size("levels", level)
    rng = random.Random(seed + 41)
    bad = {}
    for _ in range(count):
        n = rng.randint(1, 25)
        D = generate(GenSpec("random_oriented", n, _density(rng, n), rng.getrandbits(63)))
        X = rng.sample(range(n), rng.randint(1, min(3, n)))
        for problem in set(level_set_violations(D, X, rng.randint(0, 5))):
            bad[problem] = bad.get(problem, 0) + 1
    detail = {"pairs": count, "violations": sum(bad.values())}
    detail.update({f"bad_{k}": v for k, v in sorted(bad.items())})
    return CriterionResult("C8", "level-set semantics", not bad, detail)


@dataclass
class SelftestReport:
    level: str
    seed: int
    results: list
    runs: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def body(self) -> str:
        lines = [f"# dichroma selftest level={self.level} seed={self.seed}",
                 "criterion\tstatus\tcheck\tdetails"]
        lines.extend(r.line() for r in self.results)
        return "\n".join(lines) + "\n"

    def render(self) -> str:
        body = self.body()
        digest = hashlib.sha256(body.encode()).hexdigest()[:16]
        n_pass = sum(r.passed for r in self.results)
        status = "PASS" if self.passed else "FAIL"
        return body + f"summary\t{status}\t{n_pass}/{len(self.results)} criteria\tdigest={digest}\n"


def run_selftest(level: str = "full", seed: int = 0, progress=None) -> SelftestReport:
    """Run criteria 1-8.  Criterion 9 compares two reports; see the CLI."""
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")

    def step(name):
        if progress:
            progress(name)

    results = []
    step("C1")
    results.append(check_oracle_equivalence(level))
    step("C2")
    results.append(check_two_colouring(level, seed))
    step("C3")
    results.append(check_backward_orders(level, seed))
    step("C4")
    results.append(check_p4_certificates(level, seed))
    step("C5")
    runs, stats, failures = run_pipeline_corpus(level, seed)
    results.append(check_pipeline(runs, failures))
    results.append(check_layer_invariants(stats))
    step("C7")
    results.append(check_witness_path(level, seed))
    step("C8")
    results.append(check_level_sets(level, seed))
    return SelftestReport(level, seed, results, runs)


def check_determinism(first: SelftestReport, second: SelftestReport) -> CriterionResult:
    a, b = first.body(), second.body()
    return CriterionResult("C9", "repeated selftest is byte-identical", a == b,
                           {"level": first.level, "bytes": len(a),
                            "digest": hashlib.sha256(a.encode()).hexdigest()[:16]})
