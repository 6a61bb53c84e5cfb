"""Compile weighted graphs satisfying Condition (LPA) to unweighted graphs.

The compilation runs in two stages.  Stage 1 reverses every edge emitted
inside Z = T(r(E1w)) into weight-1 strands, after which the ranges of the
weighted edges are sinks and no vertex emits or receives two distinct
weighted edges.  Stage 2 splits each weighted-edge range into one vertex
copy per strand and rewires: unweighted edges into those ranges fan out
over the copies, the first strand of a weighted edge keeps its direction
and the higher strands are reversed.  Constructed names append ``^(i)`` to
the original token, with an extra pair of parentheses when the token
already carries a superscript.

Both stages come with explicit generator correspondences between the two
algebras (:func:`family_maps`), and :func:`verify_families` checks the
defining relations and the round trips mechanically.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    Algebra,
    AlgebraElement,
    Generator,
    apply_generator_map,
    evaluate_relation,
    relation_instances,
)
from .fields import RATIONALS
from .graphs import EdgeRecord, Graph, WeightedGraph, tree, weighted_edges
from .lpa import LpaReport, check_lpa


class LpaViolatedError(ValueError):
    def __init__(self, report: LpaReport):
        super().__init__("graph violates Condition (LPA):\n" + report.describe())
        self.report = report


class PreconditionViolatedError(ValueError):
    def __init__(self, clause: str):
        super().__init__(f"precondition violated: {clause}")
        self.clause = clause


class ReservedIdError(ValueError):
    pass


class TraceMismatchError(ValueError):
    pass


def strand_name(base: str, i: int) -> str:
    """The name of the i-th constructed strand of ``base``.

    Bases that already carry a superscript are parenthesized first, so
    repeated construction stays collision-free: ``h -> h^(1) -> (h^(1))^(2)``.
    """
    if "^(" in base:
        return f"({base})^({i})"
    return f"{base}^({i})"


def _reject_reserved_ids(g: WeightedGraph) -> None:
    for v in g.vertices:
        if "^(" in v:
            raise ReservedIdError(f"input vertex id {v!r} uses the reserved '^(' marker")
    for e in g.edges:
        if "^(" in e.id:
            raise ReservedIdError(f"input edge id {e.id!r} uses the reserved '^(' marker")


@dataclass(frozen=True)
class TransformTrace:
    """Intermediate data of the two-stage compilation."""

    stage1_graph: WeightedGraph
    stage2_graph: Graph
    Z: tuple[str, ...]
    gv_map: tuple[tuple[str, str], ...]  # (range vertex, its weighted edge)

    @property
    def gv(self) -> dict[str, str]:
        return dict(self.gv_map)

    def to_records(self) -> dict:
        return {
            "Z": list(self.Z),
            "gv": {v: e for v, e in self.gv_map},
        }


def make_ranges_sinks(g: WeightedGraph) -> WeightedGraph:
    """Stage 1: reverse all edges emitted inside Z into weight-1 strands.

    Every edge e with source in Z is replaced by edges e^(1) .. e^(w(e))
    from r(e) to s(e) of weight 1; other edges are copied unchanged.  The
    stage-1 postconditions are re-verified at runtime; their failure would
    indicate a bug, not bad input.
    """
    report = check_lpa(g)
    if not report.satisfied:
        raise LpaViolatedError(report)
    _reject_reserved_ids(g)
    zone = set(tree(g, [e.range for e in weighted_edges(g)]))
    out_edges: list[EdgeRecord] = []
    for e in g.edges:
        if e.source in zone:
            for i in range(1, e.weight + 1):
                out_edges.append(EdgeRecord(strand_name(e.id, i), e.range, e.source, 1))
        else:
            out_edges.append(e)
    result = WeightedGraph(g.vertices, out_edges)

    for e in weighted_edges(result):
        if not result.is_sink(e.range):
            raise RuntimeError(
                f"stage-1 postcondition failed: r({e.id}) is not a sink"
            )
    for v in result.vertices:
        if sum(1 for e in result.out_edges(v) if e.weight > 1) > 1:
            raise RuntimeError(
                f"stage-1 postcondition failed: {v} emits two weighted edges"
            )
        if sum(1 for e in result.in_edges(v) if e.weight > 1) > 1:
            raise RuntimeError(
                f"stage-1 postcondition failed: {v} receives two weighted edges"
            )
    return result


def _sunk_preconditions(g: WeightedGraph) -> dict[str, str]:
    """Check the stage-2 preconditions; return the range -> weighted edge map."""
    gv: dict[str, str] = {}
    for v in g.vertices:
        emitted = [e for e in g.out_edges(v) if e.weight > 1]
        if len(emitted) > 1:
            raise PreconditionViolatedError(
                f"vertex {v!r} emits two distinct weighted edges "
                f"({emitted[0].id!r}, {emitted[1].id!r})"
            )
        received = [e for e in g.in_edges(v) if e.weight > 1]
        if len(received) > 1:
            raise PreconditionViolatedError(
                f"vertex {v!r} receives two distinct weighted edges "
                f"({received[0].id!r}, {received[1].id!r})"
            )
        if received:
            gv[v] = received[0].id
    for e in weighted_edges(g):
        if not g.is_sink(e.range):
            raise PreconditionViolatedError(
                f"range {e.range!r} of weighted edge {e.id!r} is not a sink"
            )
    return gv


def unweight_sunk(g: WeightedGraph) -> Graph:
    """Stage 2: split weighted-edge ranges into strand copies and rewire.

    Requires that the ranges of the weighted edges are sinks and that no
    vertex emits or receives two distinct weighted edges.  Vertices in
    r(E1w) are replaced in place by copies v^(1) .. v^(w(g^v)); each edge
    produces its fan (B), first strand (C), reversed higher strands (D) or
    an unchanged copy (A).
    """
    gv = _sunk_preconditions(g)
    vertices_out: list[str] = []
    for v in g.vertices:
        if v in gv:
            w = g.edge(gv[v]).weight
            vertices_out.extend(strand_name(v, i) for i in range(1, w + 1))
        else:
            vertices_out.append(v)
    edges_out: list[EdgeRecord] = []
    for e in g.edges:
        if e.weight > 1:
            edges_out.append(
                EdgeRecord(strand_name(e.id, 1), e.source, strand_name(e.range, 1))
            )
            for i in range(2, e.weight + 1):
                edges_out.append(
                    EdgeRecord(strand_name(e.id, i), strand_name(e.range, i), e.source)
                )
        elif e.range in gv:
            w = g.edge(gv[e.range]).weight
            for i in range(1, w + 1):
                edges_out.append(
                    EdgeRecord(strand_name(e.id, i), e.source, strand_name(e.range, i))
                )
        else:
            edges_out.append(EdgeRecord(e.id, e.source, e.range))
    return Graph(vertices_out, edges_out)


def to_unweighted(g: WeightedGraph) -> tuple[Graph, TransformTrace]:
    """Full compilation of an LPA-satisfying weighted graph.

    Returns the unweighted graph together with the trace (stage graphs, Z
    and the g^v map of the stage-1 output).
    """
    report = check_lpa(g)
    if not report.satisfied:
        raise LpaViolatedError(report)
    _reject_reserved_ids(g)
    stage1 = make_ranges_sinks(g)
    stage2 = unweight_sunk(stage1)
    zone = tree(g, [e.range for e in weighted_edges(g)])
    gv_pairs = tuple((e.range, e.id) for e in weighted_edges(stage1))
    trace = TransformTrace(stage1, stage2, zone, gv_pairs)
    return stage2, trace


@dataclass(frozen=True)
class FamilyMap:
    """Generator-by-generator assignment between the two algebras."""

    direction: str  # "forward" | "backward"
    assignments: dict[Generator, AlgebraElement]


def family_maps(g: WeightedGraph, g_tilde: Graph, trace: TransformTrace,
                field=RATIONALS) -> tuple[FamilyMap, FamilyMap]:
    """The mutually inverse generator assignments of the compilation.

    The forward map sends the generators of the algebra of ``g`` to
    elements of the algebra of ``g_tilde``; the backward map goes the
    other way.  Both are composed from the stage-1 letter relabeling and
    the stage-2 case tables, with every image in normal form.
    """
    if trace.stage2_graph != g_tilde:
        raise TraceMismatchError("trace does not describe the given unweighted graph")
    if make_ranges_sinks(g) != trace.stage1_graph:
        raise TraceMismatchError("trace stage-1 graph does not match the input graph")
    h = trace.stage1_graph
    gv = {e.range: e.id for e in weighted_edges(h)}
    if gv != trace.gv:
        raise TraceMismatchError("trace g^v map does not match the stage-1 graph")

    src_algebra = Algebra(g, field=field)
    tgt_algebra = Algebra(g_tilde.to_weighted(), field=field)
    zone = set(trace.Z)

    V, E, S = Generator.vertex, Generator.edge, Generator.star

    def alpha(v: str) -> AlgebraElement:
        if v in gv:
            w = h.edge(gv[v]).weight
            return tgt_algebra.element(
                [(1, (V(strand_name(v, i)),)) for i in range(1, w + 1)]
            )
        return tgt_algebra.vertex(v)

    def beta(e: EdgeRecord, i: int) -> AlgebraElement:
        if e.weight > 1:
            if i == 1:
                return tgt_algebra.edge(strand_name(e.id, 1), 1)
            return tgt_algebra.star(strand_name(e.id, i), 1)
        if e.range in gv:
            w = h.edge(gv[e.range]).weight
            return tgt_algebra.element(
                [(1, (E(strand_name(e.id, j), 1),)) for j in range(1, w + 1)]
            )
        return tgt_algebra.edge(e.id, 1)

    def image_of_stage1_letter(gen: Generator) -> AlgebraElement:
        if gen.kind == "vertex":
            return alpha(gen.name)
        record = h.edge(gen.name)
        value = beta(record, gen.index)
        return value if gen.kind == "edge" else value.involute()

    def psi(gen: Generator) -> Generator:
        # stage-1 relabeling on single letters
        if gen.kind == "vertex":
            return gen
        if g.edge(gen.name).source in zone:
            nm = strand_name(gen.name, gen.index)
            return S(nm, 1) if gen.kind == "edge" else E(nm, 1)
        return gen

    forward: dict[Generator, AlgebraElement] = {}
    for v in g.vertices:
        forward[V(v)] = alpha(v)
    for e in g.edges:
        for i in range(1, e.weight + 1):
            forward[E(e.id, i)] = image_of_stage1_letter(psi(E(e.id, i)))
            forward[S(e.id, i)] = image_of_stage1_letter(psi(S(e.id, i)))

    # stage-1 relabeling, inverted, on the letters of the stage-1 algebra
    psi_inv: dict[Generator, Generator] = {}
    for v in h.vertices:
        psi_inv[V(v)] = V(v)
    for e in g.edges:
        if e.source in zone:
            for i in range(1, e.weight + 1):
                nm = strand_name(e.id, i)
                psi_inv[E(nm, 1)] = S(e.id, i)
                psi_inv[S(nm, 1)] = E(e.id, i)
        else:
            for i in range(1, e.weight + 1):
                psi_inv[E(e.id, i)] = E(e.id, i)
                psi_inv[S(e.id, i)] = S(e.id, i)

    def pull_back(word: tuple[Generator, ...]) -> AlgebraElement:
        return src_algebra.normalize([(1, tuple(psi_inv[x] for x in word))])

    # stage-2 classes of the unweighted graph's vertices and edges
    vertex_class: dict[str, tuple[str, str, int]] = {}
    for v in h.vertices:
        if v in gv:
            w = h.edge(gv[v]).weight
            for i in range(1, w + 1):
                vertex_class[strand_name(v, i)] = ("N", v, i)
        else:
            vertex_class[v] = ("M", v, 0)
    edge_class: dict[str, tuple[str, str, int]] = {}
    for e in h.edges:
        if e.weight > 1:
            edge_class[strand_name(e.id, 1)] = ("C", e.id, 1)
            for i in range(2, e.weight + 1):
                edge_class[strand_name(e.id, i)] = ("D", e.id, i)
        elif e.range in gv:
            w = h.edge(gv[e.range]).weight
            for i in range(1, w + 1):
                edge_class[strand_name(e.id, i)] = ("B", e.id, i)
        else:
            edge_class[e.id] = ("A", e.id, 1)

    backward: dict[Generator, AlgebraElement] = {}
    for vt in g_tilde.vertices:
        cls, v, i = vertex_class[vt]
        if cls == "M":
            word: tuple[Generator, ...] = (V(v),)
        else:
            word = (S(gv[v], i), E(gv[v], i))
        backward[V(vt)] = pull_back(word)
    for et in g_tilde.edges:
        cls, eid, i = edge_class[et.id]
        if cls in ("A", "C"):
            word = (E(eid, 1),)
        elif cls == "B":
            gedge = gv[h.edge(eid).range]
            word = (E(eid, 1), S(gedge, i), E(gedge, i))
        else:  # D
            word = (S(eid, i),)
        image = pull_back(word)
        backward[E(et.id, 1)] = image
        backward[S(et.id, 1)] = image.involute()

    return FamilyMap("forward", forward), FamilyMap("backward", backward)


@dataclass(frozen=True)
class FamilyVerification:
    ok: bool
    counts: dict
    failures: tuple[str, ...]

    def __bool__(self):
        return self.ok

    def to_records(self) -> dict:
        return {
            "ok": self.ok,
            "counts": dict(self.counts),
            "failures": list(self.failures),
        }


def verify_families(g: WeightedGraph, g_tilde: Graph, fwd: FamilyMap,
                    bwd: FamilyMap) -> FamilyVerification:
    """Mechanically verify that the two family maps are mutually inverse.

    Checks that the forward images satisfy every defining relation of the
    algebra of ``g`` inside the algebra of ``g_tilde``, that the backward
    images satisfy the relations of ``g_tilde`` inside the algebra of
    ``g``, and that both round trips fix every generator.  Checking the
    round trips on generators suffices because the generators generate.
    """
    fwd_values = list(fwd.assignments.values())
    bwd_values = list(bwd.assignments.values())
    tgt_algebra = fwd_values[0].algebra if fwd_values else Algebra(g_tilde.to_weighted())
    src_algebra = bwd_values[0].algebra if bwd_values else Algebra(g)

    failures: list[str] = []
    counts = {
        "forward_relations": 0,
        "backward_relations": 0,
        "roundtrip_source": 0,
        "roundtrip_target": 0,
    }

    for label, terms in relation_instances(g):
        counts["forward_relations"] += 1
        if not evaluate_relation(terms, fwd.assignments, tgt_algebra).is_zero():
            failures.append(f"forward {label}")
    for label, terms in relation_instances(g_tilde.to_weighted()):
        counts["backward_relations"] += 1
        if not evaluate_relation(terms, bwd.assignments, src_algebra).is_zero():
            failures.append(f"backward {label}")

    for gen, image in fwd.assignments.items():
        counts["roundtrip_source"] += 1
        back = apply_generator_map(image, bwd.assignments, src_algebra)
        if back != src_algebra.word((gen,)):
            failures.append(f"roundtrip source {gen.token()}")
    for gen, image in bwd.assignments.items():
        counts["roundtrip_target"] += 1
        forth = apply_generator_map(image, fwd.assignments, tgt_algebra)
        if forth != tgt_algebra.word((gen,)):
            failures.append(f"roundtrip target {gen.token()}")

    return FamilyVerification(
        ok=not failures, counts=counts, failures=tuple(failures)
    )
