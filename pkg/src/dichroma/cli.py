"""Command-line entry point.

Exit codes: 0 success, 1 witness found / verification failed, 2 usage or
parse error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import ColourBoundExceeded, DigraphError, InternalError, ParseError
from .exact import exact_dichromatic
from .formats import parse_colouring, parse_digraph, serialize_colouring, serialize_digraph
from .generators import KINDS, GenSpec, generate
from .kernels import verify_colouring
from .pipeline import BUDGETS, INNER, OUTER, colour_class_member
from .witness import (
    ForbiddenWitness,
    find_digon,
    find_induced_c32,
    find_induced_p6,
    find_triangle,
    min_odd_cycle,
)

EXIT_OK, EXIT_WITNESS, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

PATTERNS = {
    "digon": find_digon,
    "triangle": find_triangle,
    "p6": find_induced_p6,
    "c32": find_induced_c32,
    "oddcycle": min_odd_cycle,
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors to a chosen stream."""

    def __init__(self, *args, err=None, **kwargs):
        super().__init__(*args, **kwargs)
        self._err = err

    def error(self, message):
        self.print_usage(self._err or sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser(err=None) -> argparse.ArgumentParser:
    parser = _Parser(prog="dichroma", description="Dicolouring of digraphs.", err=err)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("colour", help="colour a digraph within the class bound", err=err)
    p.add_argument("file")
    p.add_argument("--inner", action="store_true", help="also exclude induced C32 (bound 154)")
    p.add_argument("--trust-class", action="store_true", help="skip the induced P6/C32 searches")
    p.add_argument("--out", help="write the colouring to this file")

    p = sub.add_parser("verify", help="check a colouring file against a digraph", err=err)
    p.add_argument("digraph")
    p.add_argument("colouring")

    p = sub.add_parser("detect", help="look for a pattern", err=err)
    p.add_argument("file")
    p.add_argument("--pattern", required=True, choices=sorted(PATTERNS))

    p = sub.add_parser("exact", help="exact dichromatic number", err=err)
    p.add_argument("file")
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--out", help="write an optimal colouring to this file")

    p = sub.add_parser("gen", help="generate a digraph", err=err)
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=None, help="default: $DICHROMA_SEED or 0")
    p.add_argument("--out")

    p = sub.add_parser("selftest", help="run the acceptance suites", err=err)
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=int, default=1, help="run N times and compare reports")
    p.add_argument("--report", help="also write the report to this file")
    p.add_argument("--figures", help="directory for figures and the per-run table")
    return parser


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _ids(vertices) -> str:
    return " ".join(str(v + 1) for v in vertices)


def _cmd_colour(args, out):
    D = parse_digraph(_read(args.file))
    mode = INNER if args.inner else OUTER
    res = colour_class_member(D, mode, trust_class=args.trust_class)
    if isinstance(res, ForbiddenWitness):
        print(f"witness {res.kind.value} {_ids(res.vertices)}", file=out)
        return EXIT_WITNESS
    check = verify_colouring(D, res)
    if not check.valid:
        raise InternalError("produced colouring failed verification", {"cycle": check.cycle})
    k = res.colours_used
    bound, stated = BUDGETS.final(mode), BUDGETS.stated_final(mode)
    yes = {True: "yes", False: "no"}
    print(f"colours={k}", file=out)
    print(f"mode={mode}", file=out)
    print(f"implemented_bound={bound} held={yes[k <= bound]}", file=out)
    print(f"stated_bound={stated} held={yes[k <= stated]}", file=out)
    if args.out:
        _write(args.out, serialize_colouring(res, D.n))
    return EXIT_OK


def _cmd_verify(args, out):
    D = parse_digraph(_read(args.digraph))
    col = parse_colouring(_read(args.colouring), D.n)
    check = verify_colouring(D, col)
    if check.valid:
        print(f"valid colours={col.colours_used}", file=out)
        return EXIT_OK
    print(f"invalid colour={check.colour} cycle {_ids(check.cycle)}", file=out)
    return EXIT_WITNESS


def _cmd_detect(args, out):
    D = parse_digraph(_read(args.file))
    found = PATTERNS[args.pattern](D)
    if found is None:
        print("absent", file=out)
        return EXIT_OK
    print(f"{args.pattern} {_ids(found.vertices)}", file=out)
    return EXIT_WITNESS


def _cmd_exact(args, out):
    D = parse_digraph(_read(args.file))
    try:
        res = exact_dichromatic(D, args.kmax)
    except ColourBoundExceeded as exc:
        print(f"chi>{exc.k_max}", file=out)
        return EXIT_WITNESS
    print(f"chi={res.chi}", file=out)
    print(f"nodes={res.nodes_explored}", file=out)
    if args.out:
        _write(args.out, serialize_colouring(res.witness, D.n))
    return EXIT_OK


def _cmd_gen(args, out):
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("DICHROMA_SEED", "0"))
    D = generate(GenSpec(args.kind, args.n, args.p, seed))
    text = serialize_digraph(D)
    if args.out:
        _write(args.out, text)
    else:
        out.write(text)
    return EXIT_OK


def _cmd_selftest(args, out):
    from .selftest import check_determinism, run_selftest

    reports = [run_selftest(args.level, args.seed) for _ in range(max(1, args.repeat))]
    text = reports[0].render()
    if len(reports) > 1:
        extra = [check_determinism(reports[0], r) for r in reports[1:]]
        same = all(e.passed for e in extra)
        text += extra[-1].line() if same else next(e for e in extra if not e.passed).line()
        text += "\n"
    out.write(text)
    if args.report:
        _write(args.report, text)
    if args.figures:
        from .plotting import render_selftest_figures

        render_selftest_figures(reports[0], args.figures)
    ok = all(r.passed for r in reports) and len({r.body() for r in reports}) == 1
    return EXIT_OK if ok else EXIT_WITNESS


COMMANDS = {
    "colour": _cmd_colour,
    "verify": _cmd_verify,
    "detect": _cmd_detect,
    "exact": _cmd_exact,
    "gen": _cmd_gen,
    "selftest": _cmd_selftest,
}


def cli_dispatch(argv, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = build_parser(err).parse_args(argv)
    except _UsageError as exc:
        print(f"dichroma: error: {exc}", file=err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except (ParseError, DigraphError, ValueError, OSError) as exc:
        print(f"dichroma: error: {exc}", file=err)
        return EXIT_USAGE
    except InternalError as exc:
        print(f"dichroma: internal error: {exc}", file=err)
        print(json.dumps(exc.context, default=repr, sort_keys=True, indent=2), file=err)
        return EXIT_INTERNAL


def main(argv=None) -> int:
    return cli_dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
