"""Decide Condition (LPA) for weighted graphs and build failure witnesses.

A weighted graph satisfies Condition (LPA) when

* LPA1: every vertex emits at most one weighted edge,
* LPA2: every vertex in T(r(E1w)) emits at most one edge,
* LPA3: weighted edges that are not in line have disjoint range trees,
* LPA4: a cycle based inside T(r(e)) for weighted e contains e,

where E1w is the set of weighted edges and T the reachability tree.  When
the condition fails, :func:`witness_nodpath` produces a nod-word whose
first letter is ``e.2`` and whose last letter is ``e.2*`` for a weighted
edge ``e``; no such nod-word exists when the condition holds.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .algebra import Algebra, Generator, SpecialEdgeChoice, Word
from .graphs import (
    GraphPath,
    WeightedGraph,
    cycles_through,
    in_line,
    reaches,
    tree,
    validate_path,
    vertex_weight,
    weighted_edges,
)


class LpaSatisfiedError(ValueError):
    """Raised when a witness is requested for a graph satisfying (LPA)."""


class WitnessSearchError(RuntimeError):
    """The bounded witness search failed; this indicates an internal bug."""


@dataclass(frozen=True)
class LpaViolation:
    """One violated condition together with replayable witness data.

    Field usage by kind:

    * LPA1: ``vertex`` emits the two weighted ``edges``.
    * LPA2: ``vertex`` lies in T(r(``weighted_edge``)) via ``path`` and
      emits the two ``edges``.
    * LPA3: the two weighted ``edges`` are not in line but ``vertex`` lies
      in both range trees.
    * LPA4: ``cycle`` is based at the end of ``path`` from
      r(``weighted_edge``) and does not contain the weighted edge.
    """

    kind: str
    vertex: Optional[str] = None
    edges: tuple[str, ...] = ()
    weighted_edge: Optional[str] = None
    path: Optional[GraphPath] = None
    cycle: Optional[GraphPath] = None

    def to_record(self) -> dict:
        record: dict = {"kind": self.kind}
        if self.weighted_edge is not None:
            record["weighted_edge"] = self.weighted_edge
        if self.path is not None:
            record["path"] = list(self.path.edges)
        if self.vertex is not None:
            record["vertex"] = self.vertex
        if self.edges:
            record["edges"] = list(self.edges)
        if self.cycle is not None:
            record["cycle"] = list(self.cycle.edges)
        return record

    def describe(self) -> str:
        if self.kind == "LPA1":
            return (
                f"LPA1: vertex {self.vertex} emits weighted edges "
                f"{self.edges[0]} and {self.edges[1]}"
            )
        if self.kind == "LPA2":
            via = " ".join(self.path.edges) if self.path.edges else "(empty path)"
            return (
                f"LPA2: vertex {self.vertex}, reached from r({self.weighted_edge}) "
                f"via {via}, emits edges {self.edges[0]} and {self.edges[1]}"
            )
        if self.kind == "LPA3":
            return (
                f"LPA3: weighted edges {self.edges[0]} and {self.edges[1]} are "
                f"not in line but both range trees contain {self.vertex}"
            )
        via = " ".join(self.path.edges) if self.path.edges else "(empty path)"
        return (
            f"LPA4: cycle {' '.join(self.cycle.edges)} based in "
            f"T(r({self.weighted_edge})) via {via} avoids {self.weighted_edge}"
        )


@dataclass(frozen=True)
class LpaReport:
    satisfied: bool
    violations: tuple[LpaViolation, ...] = field(default=())

    def to_records(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "violations": [v.to_record() for v in self.violations],
        }

    def describe(self) -> str:
        if self.satisfied:
            return "satisfied"
        return "\n".join(v.describe() for v in self.violations)


def _shortest_path(g: WeightedGraph, start: str, goal: str) -> Optional[GraphPath]:
    """Breadth-first edge-id path from start to goal; None if unreachable."""
    if start == goal:
        return GraphPath.at(start)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        v, acc = queue.popleft()
        for e in g.out_edges(v):
            if e.range == goal:
                return GraphPath.of(acc + (e.id,))
            if e.range not in seen:
                seen.add(e.range)
                queue.append((e.range, acc + (e.id,)))
    return None


def check_lpa(g: WeightedGraph) -> LpaReport:
    """Evaluate the four conditions and report every violation found.

    Violations are emitted per condition in graph scan order; one witness
    is reported for each offending site.  All witnesses replay against the
    raw graph primitives (see :func:`violation_holds`).
    """
    violations: list[LpaViolation] = []
    heavy = weighted_edges(g)

    for v in g.vertices:
        emitted = [e.id for e in g.out_edges(v) if e.weight > 1]
        if len(emitted) > 1:
            violations.append(
                LpaViolation(kind="LPA1", vertex=v, edges=(emitted[0], emitted[1]))
            )

    zone = tree(g, [e.range for e in heavy])
    for v in zone:
        out = g.out_edges(v)
        if len(out) > 1:
            witness_edge = next(
                e for e in heavy if v in tree(g, [e.range])
            )
            path = _shortest_path(g, witness_edge.range, v)
            violations.append(
                LpaViolation(
                    kind="LPA2",
                    weighted_edge=witness_edge.id,
                    path=path,
                    vertex=v,
                    edges=(out[0].id, out[1].id),
                )
            )

    for i, e in enumerate(heavy):
        for f in heavy[i + 1:]:
            if in_line(g, e, f):
                continue
            common = [
                v for v in tree(g, [e.range]) if v in set(tree(g, [f.range]))
            ]
            if common:
                violations.append(
                    LpaViolation(
                        kind="LPA3", edges=(e.id, f.id), vertex=common[0]
                    )
                )

    for e in heavy:
        for v in tree(g, [e.range]):
            for cycle in cycles_through(g, v):
                if e.id not in cycle.edges:
                    violations.append(
                        LpaViolation(
                            kind="LPA4",
                            weighted_edge=e.id,
                            path=_shortest_path(g, e.range, v),
                            cycle=cycle,
                        )
                    )

    return LpaReport(satisfied=not violations, violations=tuple(violations))


def violation_holds(g: WeightedGraph, violation: LpaViolation) -> bool:
    """Replay a witness from raw graph primitives."""
    try:
        if violation.kind == "LPA1":
            a, b = (g.edge(x) for x in violation.edges)
            return (
                a.id != b.id
                and a.weight > 1
                and b.weight > 1
                and a.source == violation.vertex
                and b.source == violation.vertex
            )
        if violation.kind == "LPA2":
            e = g.edge(violation.weighted_edge)
            validate_path(g, violation.path)
            a, b = (g.edge(x) for x in violation.edges)
            return (
                e.weight > 1
                and violation.path.source(g) == e.range
                and violation.path.range(g) == violation.vertex
                and a.id != b.id
                and a.source == violation.vertex
                and b.source == violation.vertex
            )
        if violation.kind == "LPA3":
            e, f = (g.edge(x) for x in violation.edges)
            return (
                e.weight > 1
                and f.weight > 1
                and not in_line(g, e, f)
                and reaches(g, e.range, violation.vertex)
                and reaches(g, f.range, violation.vertex)
            )
        if violation.kind == "LPA4":
            e = g.edge(violation.weighted_edge)
            validate_path(g, violation.path)
            cycle = violation.cycle
            validate_path(g, cycle)
            base = violation.path.range(g)
            records = [g.edge(x) for x in cycle.edges]
            sources = [rec.source for rec in records]
            return (
                e.weight > 1
                and violation.path.source(g) == e.range
                and len(cycle.edges) > 0
                and records[0].source == base
                and records[-1].range == base
                and len(set(sources)) == len(sources)
                and e.id not in cycle.edges
            )
    except ValueError:
        return False
    return False


def _keylemma_word_from_cycle(g: WeightedGraph, violation: LpaViolation) -> Word:
    """Build the witness nod-word from an LPA4 violation.

    The stored path may share vertices with the cycle; it is trimmed at the
    first cycle vertex and the cycle is rotated there, which makes the path
    edge-disjoint from the cycle.
    """
    e = g.edge(violation.weighted_edge)
    cycle_records = [g.edge(x) for x in violation.cycle.edges]
    cycle_sources = [rec.source for rec in cycle_records]

    path_vertices = [e.range]
    for eid in violation.path.edges:
        path_vertices.append(g.edge(eid).range)
    cut = next(
        i for i, v in enumerate(path_vertices) if v in set(cycle_sources)
    )
    trimmed = violation.path.edges[:cut]
    base = path_vertices[cut]
    rot = cycle_sources.index(base)
    rotated = cycle_records[rot:] + cycle_records[:rot]

    letters = [Generator.edge(e.id, 2)]
    letters += [Generator.edge(x, 1) for x in trimmed]
    letters += [Generator.edge(rec.id, 1) for rec in rotated]
    letters += [Generator.star(x, 1) for x in reversed(trimmed)]
    letters.append(Generator.star(e.id, 2))
    return tuple(letters)


def search_shape_word(g: WeightedGraph, choice: Optional[SpecialEdgeChoice] = None,
                      bound: Optional[int] = None) -> Optional[Word]:
    """Breadth-first search for a nod-word e.2 ... e.2* over a weighted e.

    Words are explored in increasing length up to ``bound`` (default
    2*|vertices|*max weight + 2).  Extension legality only depends on the
    last letter, so the frontier is deduplicated per letter; any automaton
    path lifts back to a valid nod-word.  Returns the first witness found,
    scanning weighted edges in graph order, or None.
    """
    heavy = weighted_edges(g)
    if not heavy:
        return None
    algebra = Algebra(g, choice)
    if bound is None:
        max_weight = max(e.weight for e in g.edges)
        bound = 2 * len(g.vertices) * max_weight + 2
    letters = algebra.nonvertex_generators()

    for e in heavy:
        start = Generator.edge(e.id, 2)
        last = Generator.star(e.id, 2)
        if algebra.pair_is_normal(start, last):
            return (start, last)
        # parent links for path reconstruction, keyed by letter
        parent: dict[Generator, Optional[Generator]] = {start: None}
        queue = deque([start])
        depth = {start: 1}
        found = None
        while queue and found is None:
            cur = queue.popleft()
            if depth[cur] + 1 >= bound:
                continue
            for nxt in letters:
                if nxt in parent or not algebra.pair_is_normal(cur, nxt):
                    continue
                parent[nxt] = cur
                depth[nxt] = depth[cur] + 1
                if algebra.pair_is_normal(nxt, last):
                    found = nxt
                    break
                queue.append(nxt)
        if found is not None:
            chain = [last]
            walk: Optional[Generator] = found
            while walk is not None:
                chain.append(walk)
                walk = parent[walk]
            return tuple(reversed(chain))
    return None


def witness_nodpath(g: WeightedGraph, choice: Optional[SpecialEdgeChoice] = None) -> Word:
    """A nod-word e.2 ... e.2* certifying that Condition (LPA) fails.

    LPA4 violations are turned into words directly from the witness path
    and cycle; for the remaining kinds a breadth-first search over
    nod-words of the required shape is run with the hard length bound
    2*|vertices|*max weight + 2.  The returned word is re-checked with the
    nod-word predicate before being handed out.
    """
    report = check_lpa(g)
    if report.satisfied:
        raise LpaSatisfiedError("graph satisfies Condition (LPA); no witness exists")

    algebra = Algebra(g, choice)
    word: Optional[Word] = None
    for violation in report.violations:
        if violation.kind == "LPA4":
            word = _keylemma_word_from_cycle(g, violation)
            break
    if word is None:
        word = search_shape_word(g, choice)
        if word is None:
            raise WitnessSearchError(
                "no witness found within the search bound; this contradicts "
                "the failure of Condition (LPA) and indicates a bug"
            )
    if not algebra.is_nodword(word):
        raise WitnessSearchError("constructed witness is not a nod-word")
    return word
