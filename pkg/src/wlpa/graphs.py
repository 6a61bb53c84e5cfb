"""Finite directed graphs with positive integer edge weights.

Data model and graph primitives shared by the whole package: the line-based
text format with its parser and serializer, machine-readable records,
reachability, trees, the in-line relation on edges, and enumeration of
cycles through a vertex.

All types are immutable after construction and safe to share; every
operation here is a pure function.  Vertices and edges keep the order of
the input file, and every set-valued result is emitted in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
import re
from typing import Iterable, Optional, Sequence, Union

_ID_RE = re.compile(r"[A-Za-z0-9_^()]+\Z")


class GraphError(ValueError):
    """Base class for graph construction and lookup errors."""


class GraphSyntaxError(GraphError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DuplicateIdError(GraphError):
    pass


class DanglingEndpointError(GraphError):
    pass


class BadWeightError(GraphError):
    pass


class UnknownVertexError(GraphError):
    pass


class UnknownEdgeError(GraphError):
    pass


@dataclass(frozen=True)
class EdgeRecord:
    """A directed edge with a positive integer weight."""

    id: str
    source: str
    range: str
    weight: int = 1


class WeightedGraph:
    """A finite directed graph together with a weight >= 1 per edge.

    Edges of weight 1 are called unweighted, edges of weight > 1 weighted.
    """

    def __init__(self, vertices: Iterable[str], edges: Iterable[EdgeRecord]):
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.edges: tuple[EdgeRecord, ...] = tuple(edges)
        ids: set[str] = set()
        for v in self.vertices:
            if not _ID_RE.match(v):
                raise GraphError(f"bad vertex id {v!r}")
            if v in ids:
                raise DuplicateIdError(f"duplicate id {v!r}")
            ids.add(v)
        self._vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self._edge_by_id: dict[str, EdgeRecord] = {}
        self._out: dict[str, list[EdgeRecord]] = {v: [] for v in self.vertices}
        self._in: dict[str, list[EdgeRecord]] = {v: [] for v in self.vertices}
        for e in self.edges:
            if not _ID_RE.match(e.id):
                raise GraphError(f"bad edge id {e.id!r}")
            if e.id in ids:
                raise DuplicateIdError(f"duplicate id {e.id!r}")
            ids.add(e.id)
            if e.source not in self._vertex_index:
                raise DanglingEndpointError(
                    f"edge {e.id!r}: unknown source {e.source!r}"
                )
            if e.range not in self._vertex_index:
                raise DanglingEndpointError(
                    f"edge {e.id!r}: unknown range {e.range!r}"
                )
            if not isinstance(e.weight, int) or e.weight < 1:
                raise BadWeightError(f"edge {e.id!r}: weight {e.weight!r} < 1")
            self._edge_by_id[e.id] = e
            self._out[e.source].append(e)
            self._in[e.range].append(e)

    # -- lookups -------------------------------------------------------

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_index

    def vertex_position(self, v: str) -> int:
        self._require_vertex(v)
        return self._vertex_index[v]

    def edge(self, edge_id: str) -> EdgeRecord:
        try:
            return self._edge_by_id[edge_id]
        except KeyError:
            raise UnknownEdgeError(f"unknown edge {edge_id!r}") from None

    def out_edges(self, v: str) -> tuple[EdgeRecord, ...]:
        self._require_vertex(v)
        return tuple(self._out[v])

    def in_edges(self, v: str) -> tuple[EdgeRecord, ...]:
        self._require_vertex(v)
        return tuple(self._in[v])

    def is_sink(self, v: str) -> bool:
        self._require_vertex(v)
        return not self._out[v]

    def _require_vertex(self, v: str) -> None:
        if v not in self._vertex_index:
            raise UnknownVertexError(f"unknown vertex {v!r}")

    # -- equality ------------------------------------------------------

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and other.vertices == self.vertices
            and other.edges == self.edges
        )

    def __hash__(self):
        return hash((type(self).__name__, self.vertices, self.edges))

    def __repr__(self):
        return (
            f"{type(self).__name__}({len(self.vertices)} vertices, "
            f"{len(self.edges)} edges)"
        )


class Graph(WeightedGraph):
    """An unweighted directed graph: every edge weight is fixed at 1."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[EdgeRecord]):
        super().__init__(vertices, edges)
        for e in self.edges:
            if e.weight != 1:
                raise BadWeightError(f"edge {e.id!r}: weight must be 1")

    def to_weighted(self) -> WeightedGraph:
        return WeightedGraph(self.vertices, self.edges)


@dataclass(frozen=True)
class GraphPath:
    """A path: either a single base vertex (length 0) or an edge sequence."""

    vertex: Optional[str] = None
    edges: tuple[str, ...] = ()

    def __post_init__(self):
        if (self.vertex is None) == (not self.edges):
            raise GraphError("path is either a base vertex or a nonempty edge list")

    @classmethod
    def at(cls, vertex: str) -> "GraphPath":
        return cls(vertex=vertex)

    @classmethod
    def of(cls, edge_ids: Sequence[str]) -> "GraphPath":
        return cls(edges=tuple(edge_ids))

    def __len__(self) -> int:
        return len(self.edges)

    def source(self, g: WeightedGraph) -> str:
        if self.vertex is not None:
            return self.vertex
        return g.edge(self.edges[0]).source

    def range(self, g: WeightedGraph) -> str:
        if self.vertex is not None:
            return self.vertex
        return g.edge(self.edges[-1]).range


def validate_path(g: WeightedGraph, p: GraphPath) -> None:
    """Raise unless consecutive edges of ``p`` compose inside ``g``."""
    if p.vertex is not None:
        g._require_vertex(p.vertex)
        return
    records = [g.edge(eid) for eid in p.edges]
    for a, b in zip(records, records[1:]):
        if a.range != b.source:
            raise GraphError(f"edges {a.id!r} and {b.id!r} do not compose")


EdgeLike = Union[str, EdgeRecord]


def _edge_record(g: WeightedGraph, e: EdgeLike) -> EdgeRecord:
    if isinstance(e, EdgeRecord):
        return g.edge(e.id)
    return g.edge(e)


# -- parsing and serialization ----------------------------------------------


def _parse_lines(text: str, expect_weight_one: bool):
    vertices: list[str] = []
    edges: list[EdgeRecord] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()

        def column(token: str) -> int:
            return raw.find(token) + 1

        if parts[0] == "vertex":
            if len(parts) != 2:
                raise GraphSyntaxError(lineno, 1, "expected: vertex <id>")
            vid = parts[1]
            if not _ID_RE.match(vid):
                raise GraphSyntaxError(lineno, column(vid), f"bad id {vid!r}")
            vertices.append(vid)
        elif parts[0] == "edge":
            if len(parts) not in (4, 5):
                raise GraphSyntaxError(
                    lineno, 1, "expected: edge <id> <source> <range> [<weight>]"
                )
            eid, src, rng = parts[1], parts[2], parts[3]
            for token in (eid, src, rng):
                if not _ID_RE.match(token):
                    raise GraphSyntaxError(lineno, column(token), f"bad id {token!r}")
            if len(parts) == 5:
                try:
                    weight = int(parts[4])
                except ValueError:
                    raise GraphSyntaxError(
                        lineno, column(parts[4]), f"bad weight {parts[4]!r}"
                    ) from None
            else:
                weight = 1
            if expect_weight_one and weight != 1:
                raise BadWeightError(
                    f"line {lineno}: edge {eid!r} has weight {weight} in an "
                    "unweighted graph"
                )
            edges.append(EdgeRecord(eid, src, rng, weight))
        else:
            raise GraphSyntaxError(
                lineno, column(parts[0]), f"unknown directive {parts[0]!r}"
            )
    return vertices, edges


def parse_weighted_graph(text: str) -> WeightedGraph:
    """Parse the line-based graph format.

    Blank lines and lines starting with ``#`` are ignored.  Edge weights
    default to 1 when the weight column is omitted.
    """
    vertices, edges = _parse_lines(text, expect_weight_one=False)
    return WeightedGraph(vertices, edges)


def parse_graph(text: str) -> Graph:
    """Parse an unweighted graph; any explicit weight must be 1."""
    vertices, edges = _parse_lines(text, expect_weight_one=True)
    return Graph(vertices, edges)


def serialize_weighted_graph(g: WeightedGraph) -> str:
    lines = [f"vertex {v}" for v in g.vertices]
    lines += [f"edge {e.id} {e.source} {e.range} {e.weight}" for e in g.edges]
    return "\n".join(lines) + "\n"


def serialize_graph(g: Graph) -> str:
    lines = [f"vertex {v}" for v in g.vertices]
    lines += [f"edge {e.id} {e.source} {e.range}" for e in g.edges]
    return "\n".join(lines) + "\n"


def graph_to_records(g: WeightedGraph) -> dict:
    """Machine-readable form mirroring the text format fields."""
    return {
        "vertices": list(g.vertices),
        "edges": [
            {"id": e.id, "source": e.source, "range": e.range, "weight": e.weight}
            for e in g.edges
        ],
    }


def weighted_graph_from_records(records: dict) -> WeightedGraph:
    return WeightedGraph(
        records["vertices"],
        [
            EdgeRecord(e["id"], e["source"], e["range"], int(e.get("weight", 1)))
            for e in records["edges"]
        ],
    )


# -- graph-theoretic primitives ----------------------------------------------


def vertex_weight(g: WeightedGraph, v: str) -> int:
    """Maximum weight among the edges emitted by ``v``; 0 for a sink."""
    out = g.out_edges(v)
    return max((e.weight for e in out), default=0)


def weighted_edges(g: WeightedGraph) -> tuple[EdgeRecord, ...]:
    """The edges of weight > 1, in graph order."""
    return tuple(e for e in g.edges if e.weight > 1)


def reaches(g: WeightedGraph, u: str, v: str) -> bool:
    """True iff a path (possibly of length 0) leads from ``u`` to ``v``."""
    g._require_vertex(u)
    g._require_vertex(v)
    if u == v:
        return True
    seen = {u}
    frontier = [u]
    while frontier:
        nxt = []
        for w in frontier:
            for e in g.out_edges(w):
                if e.range == v:
                    return True
                if e.range not in seen:
                    seen.add(e.range)
                    nxt.append(e.range)
        frontier = nxt
    return False


def tree(g: WeightedGraph, roots: Iterable[str]) -> tuple[str, ...]:
    """All vertices reachable from ``roots`` (including the roots).

    The result is emitted in graph order.
    """
    seen: set[str] = set()
    frontier = []
    for v in roots:
        g._require_vertex(v)
        if v not in seen:
            seen.add(v)
            frontier.append(v)
    while frontier:
        nxt = []
        for w in frontier:
            for e in g.out_edges(w):
                if e.range not in seen:
                    seen.add(e.range)
                    nxt.append(e.range)
        frontier = nxt
    return tuple(v for v in g.vertices if v in seen)


def in_line(g: WeightedGraph, e: EdgeLike, f: EdgeLike) -> bool:
    """True iff e = f, or r(e) reaches s(f), or r(f) reaches s(e)."""
    er = _edge_record(g, e)
    fr = _edge_record(g, f)
    if er.id == fr.id:
        return True
    return reaches(g, er.range, fr.source) or reaches(g, fr.range, er.source)


def cycles_through(g: WeightedGraph, v: str) -> list[GraphPath]:
    """All cycles based at ``v``: closed paths with pairwise distinct sources.

    Cycles are returned in depth-first order with edges explored in graph
    order, so the output is deterministic.  A cycle equal to another up to
    rotation but based elsewhere is a different object and is not returned
    here.
    """
    g._require_vertex(v)
    out: list[GraphPath] = []
    stack: list[str] = []

    def walk(current: str, seen: set[str]):
        for e in g.out_edges(current):
            if e.range == v:
                out.append(GraphPath.of(stack + [e.id]))
            elif e.range not in seen:
                stack.append(e.id)
                seen.add(e.range)
                walk(e.range, seen)
                seen.discard(e.range)
                stack.pop()

    walk(v, {v})
    return out
