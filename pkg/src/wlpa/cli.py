"""Command-line front end.

Subcommands: validate, check-lpa, transform [--verify], eval, basis,
growth, zero-dim, witness.  Exit codes: 0 success, 1 input or usage
error, 3 semantic negative (Condition (LPA) violated, or no witness in
the satisfied case).  Output is deterministic for fixed input and flags;
``--format machine`` emits a single JSON document on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .algebra import Algebra, AlgebraError, BudgetExceededError, SpecialEdgeChoice, validate_choice
from .exprs import ExpressionError, parse_element
from .fields import FieldError, field_from_name
from .graphs import (
    GraphError,
    WeightedGraph,
    graph_to_records,
    parse_weighted_graph,
    serialize_graph,
    serialize_weighted_graph,
    vertex_weight,
)
from .lpa import LpaSatisfiedError, check_lpa, witness_nodpath
from .unweighting import (
    LpaViolatedError,
    ReservedIdError,
    family_maps,
    to_unweighted,
    verify_families,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NEGATIVE = 3


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="wlpa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="graph file, or - for stdin")
        p.add_argument("--format", choices=("text", "machine"), default="text")
        p.add_argument("--field", default="rational", help="rational or mod:<prime>")
        p.add_argument(
            "--special",
            default=None,
            help="comma-separated vertex=edge overrides for the special edges",
        )

    common(sub.add_parser("validate", help="parse and validate a graph file"))
    common(sub.add_parser("check-lpa", help="decide Condition (LPA)"))
    p = sub.add_parser("transform", help="compile to an unweighted graph")
    common(p)
    p.add_argument("--verify", action="store_true", help="verify the generator families")
    p = sub.add_parser("eval", help="normalize an element expression")
    common(p)
    p.add_argument("expression")
    p = sub.add_parser("basis", help="enumerate nod-words up to a length")
    common(p)
    p.add_argument("max_len", type=int)
    p.add_argument("--source", default=None)
    p.add_argument("--range", dest="range_", default=None)
    p.add_argument("--budget", type=int, default=10**7)
    p = sub.add_parser("growth", help="table of nod-word counts by length")
    common(p)
    p.add_argument("max_len", type=int)
    p = sub.add_parser("zero-dim", help="table of degree-zero nod-word counts")
    common(p)
    p.add_argument("max_len", type=int)
    common(sub.add_parser("witness", help="nod-word witnessing an (LPA) failure"))
    return parser


def _read_graph(path: str, stdin) -> WeightedGraph:
    if path == "-":
        text = stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise _UsageError(f"cannot read {path}: {exc}") from exc
    return parse_weighted_graph(text)


def _parse_special(g: WeightedGraph, spec: Optional[str]) -> Optional[SpecialEdgeChoice]:
    if spec is None:
        return None
    overrides = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        vertex, sep, edge = part.partition("=")
        if not sep:
            raise _UsageError(f"bad --special entry {part!r}; expected vertex=edge")
        overrides[vertex] = edge
    pairs = []
    for v in g.vertices:
        if g.is_sink(v):
            if v in overrides:
                raise _UsageError(f"--special names sink vertex {v!r}")
            continue
        if v in overrides:
            eid = overrides.pop(v)
            record = g.edge(eid)
            if record.source != v or record.weight != vertex_weight(g, v):
                raise _UsageError(
                    f"--special {v}={eid} does not pick a maximal-weight edge at {v}"
                )
            pairs.append((v, eid))
        else:
            wv = vertex_weight(g, v)
            pairs.append((v, next(e.id for e in g.out_edges(v) if e.weight == wv)))
    if overrides:
        unknown = ", ".join(sorted(overrides))
        raise _UsageError(f"--special names unknown vertices: {unknown}")
    return SpecialEdgeChoice(tuple(pairs))


def _emit(args, stdout, payload: dict, text: str) -> None:
    if args.format == "machine":
        print(json.dumps(payload), file=stdout)
    else:
        print(text, file=stdout, end="" if text.endswith("\n") else "\n")


def run(argv, stdin=None, stdout=None, stderr=None) -> int:
    """Execute one CLI invocation; returns the exit code."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        field = field_from_name(args.field)
        graph = _read_graph(args.input, stdin)
        choice = _parse_special(graph, args.special)

        if args.command == "validate":
            payload = {"command": "validate", "ok": True, "graph": graph_to_records(graph)}
            _emit(args, stdout, payload,
                  f"ok: {len(graph.vertices)} vertices, {len(graph.edges)} edges")
            return EXIT_OK

        if args.command == "check-lpa":
            report = check_lpa(graph)
            payload = {"command": "check-lpa", **report.to_records()}
            _emit(args, stdout, payload, report.describe())
            return EXIT_OK if report.satisfied else EXIT_NEGATIVE

        if args.command == "transform":
            try:
                stage2, trace = to_unweighted(graph)
            except LpaViolatedError as exc:
                payload = {"command": "transform", **exc.report.to_records()}
                _emit(args, stdout, payload, exc.report.describe())
                return EXIT_NEGATIVE
            verification = None
            if args.verify:
                fwd, bwd = family_maps(graph, stage2, trace, field=field)
                verification = verify_families(graph, stage2, fwd, bwd)
            payload = {
                "command": "transform",
                "satisfied": True,
                "stage1": graph_to_records(trace.stage1_graph),
                "stage2": graph_to_records(trace.stage2_graph),
                "trace": trace.to_records(),
                "verify": verification.to_records() if verification else None,
            }
            lines = ["# stage 1"]
            lines.append("# Z: " + " ".join(trace.Z))
            lines.append("# gv: " + " ".join(f"{v}={e}" for v, e in trace.gv_map))
            lines.append(serialize_weighted_graph(trace.stage1_graph).rstrip("\n"))
            lines.append("# stage 2")
            lines.append(serialize_graph(trace.stage2_graph).rstrip("\n"))
            if verification is not None:
                lines.append("# verify: " + ("ok" if verification.ok else "FAILED"))
                for key, value in sorted(verification.counts.items()):
                    lines.append(f"# {key}: {value}")
            _emit(args, stdout, payload, "\n".join(lines))
            if verification is not None and not verification.ok:
                print("family verification failed", file=stderr)
                return EXIT_INPUT
            return EXIT_OK

        algebra = Algebra(graph, choice, field)

        if args.command == "eval":
            element = parse_element(algebra, args.expression)
            payload = {
                "command": "eval",
                "field": field.name,
                "terms": element.to_records(),
            }
            _emit(args, stdout, payload, element.render())
            return EXIT_OK

        if args.command == "basis":
            try:
                words = algebra.enumerate_nodwords(
                    args.max_len,
                    source=args.source,
                    range_=args.range_,
                    budget=args.budget,
                )
            except BudgetExceededError as exc:
                print(str(exc), file=stderr)
                return EXIT_INPUT
            payload = {
                "command": "basis",
                "max_len": args.max_len,
                "words": [[g.token() for g in w] for w in words],
            }
            _emit(args, stdout, payload,
                  "\n".join(algebra.render_word(w) for w in words) or "(none)")
            return EXIT_OK

        if args.command == "growth":
            table = [(n, algebra.growth(n)) for n in range(args.max_len + 1)]
            payload = {"command": "growth", "table": [[n, c] for n, c in table]}
            _emit(args, stdout, payload,
                  "\n".join(f"{n}\t{c}" for n, c in table))
            return EXIT_OK

        if args.command == "zero-dim":
            table = [(n, algebra.zero_component_count(n)) for n in range(args.max_len + 1)]
            payload = {"command": "zero-dim", "table": [[n, c] for n, c in table]}
            _emit(args, stdout, payload,
                  "\n".join(f"{n}\t{c}" for n, c in table))
            return EXIT_OK

        if args.command == "witness":
            try:
                word = witness_nodpath(graph, choice)
            except LpaSatisfiedError:
                payload = {"command": "witness", "satisfied": True, "word": None}
                _emit(args, stdout, payload, "satisfied: no witness exists")
                return EXIT_NEGATIVE
            payload = {
                "command": "witness",
                "satisfied": False,
                "word": [g.token() for g in word],
            }
            _emit(args, stdout, payload, algebra.render_word(word))
            return EXIT_OK

        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except (GraphError, AlgebraError, ExpressionError, FieldError,
            ReservedIdError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
