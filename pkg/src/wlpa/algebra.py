"""Exact arithmetic in weighted Leavitt path algebras via nod-word normal forms.

An :class:`Algebra` fixes a weighted graph, a choice of special edges and a
scalar field.  The generators are the vertices ``v``, the edge strands
``e_i`` and their stars ``e_i^*`` (``1 <= i <= w(e)``), with the source and
range conventions ``s(e_i) = s(e)``, ``r(e_i) = r(e)``, ``s(e_i^*) = r(e)``,
``r(e_i^*) = s(e)`` and ``s(v) = r(v) = v``.

Elements are kept as finitely supported combinations of nod-words: d-paths
(words whose consecutive letters compose) containing no forbidden length-2
factor.  The forbidden factors are ``e^v_i (e^v_j)^*`` for the special edge
``e^v`` of a vertex and ``e_1^* f_1`` for arbitrary edges.  Normalization
rewrites with the defining relations oriented so that exactly these factors
are eliminated:

* ``u v -> 0`` or ``u`` and vertex letters are absorbed or annihilate,
* non-composable adjacent letters give 0,
* ``e_1^* f_1 -> d_ef r(e) - sum_{i >= 2} e_i^* f_i``   (same-source e, f),
* ``s_i s_j^* -> d_ij v - sum_{g != s} g_i g_j^*``       (s special at v),

where strand indices beyond an edge's weight are dropped.  Each step
strictly decreases (word length, number of index-1 star letters, number of
special factors) lexicographically, so rewriting terminates; confluence is
exercised by the two-strategy tests rather than assumed silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .fields import RATIONALS, ModInt, PrimeField, Rationals
from .graphs import UnknownVertexError, WeightedGraph, vertex_weight, weighted_edges


class AlgebraError(ValueError):
    pass


class UnknownGeneratorError(AlgebraError):
    pass


class MixedContextError(AlgebraError):
    pass


class BudgetExceededError(AlgebraError):
    def __init__(self, budget: int):
        super().__init__(f"enumeration exceeded the budget of {budget} words")
        self.budget = budget


class _Sentinel:
    def __init__(self, name: str):
        self._name = name

    def __repr__(self):
        return self._name


NOT_HOMOGENEOUS = _Sentinel("NOT_HOMOGENEOUS")
ZERO_ELEMENT = _Sentinel("ZERO_ELEMENT")


@dataclass(frozen=True)
class Generator:
    """A single letter: a vertex, an edge strand or a starred edge strand."""

    kind: str  # "vertex" | "edge" | "star"
    name: str
    index: int = 0

    @classmethod
    def vertex(cls, v: str) -> "Generator":
        return cls("vertex", v)

    @classmethod
    def edge(cls, e: str, i: int) -> "Generator":
        return cls("edge", e, i)

    @classmethod
    def star(cls, e: str, i: int) -> "Generator":
        return cls("star", e, i)

    def token(self) -> str:
        if self.kind == "vertex":
            return self.name
        star = "*" if self.kind == "star" else ""
        return f"{self.name}.{self.index}{star}"

    def __repr__(self):
        return f"Generator({self.token()!r})"


Word = tuple[Generator, ...]


@dataclass(frozen=True)
class SpecialEdgeChoice:
    """A fixed special edge per non-sink vertex, of maximal weight there."""

    pairs: tuple[tuple[str, str], ...]

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.pairs)

    def edge_for(self, v: str) -> str:
        for vertex, edge in self.pairs:
            if vertex == v:
                return edge
        raise UnknownVertexError(f"no special edge fixed for {v!r}")


def default_special_edges(g: WeightedGraph) -> SpecialEdgeChoice:
    """For each non-sink vertex the first emitted edge of maximal weight."""
    pairs = []
    for v in g.vertices:
        out = g.out_edges(v)
        if not out:
            continue
        wv = vertex_weight(g, v)
        chosen = next(e for e in out if e.weight == wv)
        pairs.append((v, chosen.id))
    return SpecialEdgeChoice(tuple(pairs))


def validate_choice(g: WeightedGraph, choice: SpecialEdgeChoice) -> None:
    mapping = choice.mapping
    for v in g.vertices:
        if g.is_sink(v):
            if v in mapping:
                raise AlgebraError(f"special edge fixed for sink {v!r}")
            continue
        if v not in mapping:
            raise AlgebraError(f"no special edge fixed for non-sink {v!r}")
        e = g.edge(mapping[v])
        if e.source != v:
            raise AlgebraError(f"special edge {e.id!r} is not emitted by {v!r}")
        if e.weight != vertex_weight(g, v):
            raise AlgebraError(
                f"special edge {e.id!r} has weight {e.weight}, "
                f"not the maximal weight {vertex_weight(g, v)} at {v!r}"
            )


_ZERO = object()  # pair annihilates
_NORMAL = object()  # word is already normal


class Algebra:
    """The weighted Leavitt path algebra of a graph over an exact field.

    The engine state (letter tables and oriented rewrite rules) is built
    once and never mutated, so instances may be shared across threads.
    """

    def __init__(self, graph: WeightedGraph, choice: Optional[SpecialEdgeChoice] = None,
                 field=RATIONALS):
        self.graph = graph
        self.choice = choice if choice is not None else default_special_edges(graph)
        validate_choice(graph, self.choice)
        self.field = field

        # Letter tables.  Canonical order: vertices in graph order, then per
        # edge in graph order the strands e_1..e_w followed by e_1^*..e_w^*.
        gens: list[Generator] = [Generator.vertex(v) for v in graph.vertices]
        src: list[str] = list(graph.vertices)
        rng: list[str] = list(graph.vertices)
        for e in graph.edges:
            for i in range(1, e.weight + 1):
                gens.append(Generator.edge(e.id, i))
                src.append(e.source)
                rng.append(e.range)
            for i in range(1, e.weight + 1):
                gens.append(Generator.star(e.id, i))
                src.append(e.range)
                rng.append(e.source)
        self._gens = tuple(gens)
        self._src = tuple(src)
        self._rng = tuple(rng)
        self._id_of = {g: i for i, g in enumerate(gens)}
        self._nv = len(graph.vertices)
        self._vertex_id = {v: i for i, v in enumerate(graph.vertices)}
        self._nonvertex_ids = tuple(range(self._nv, len(gens)))

        self._edge_strand_id = {}
        self._star_strand_id = {}
        for i in range(self._nv, len(gens)):
            g = gens[i]
            key = (g.name, g.index)
            if g.kind == "edge":
                self._edge_strand_id[key] = i
            else:
                self._star_strand_id[key] = i

        self._star_of = list(range(len(gens)))
        for (name, idx), i in self._edge_strand_id.items():
            j = self._star_strand_id[(name, idx)]
            self._star_of[i] = j
            self._star_of[j] = i

        self.grading_length = max((e.weight for e in graph.edges), default=0)
        self._letter_degree: list[Optional[tuple[int, int]]] = []
        for i, g in enumerate(gens):
            if g.kind == "vertex":
                self._letter_degree.append(None)
            else:
                self._letter_degree.append((g.index - 1, 1 if g.kind == "edge" else -1))

        self._special_of_vertex = {
            v: e for v, e in self.choice.pairs
        }
        self._build_pair_table()

        # Nod-word automaton: allowed successors per non-vertex letter.
        self._succ = {
            a: tuple(
                b for b in self._nonvertex_ids if (a, b) not in self._pair
            )
            for a in self._nonvertex_ids
        }
        self._memo_left: dict[tuple[int, ...], dict] = {}
        self._memo_right: dict[tuple[int, ...], dict] = {}

    # -- rule table ----------------------------------------------------

    def _build_pair_table(self):
        g = self.graph
        pair: dict[tuple[int, int], object] = {}
        nletters = len(self._gens)
        wv = {v: vertex_weight(g, v) for v in g.vertices}

        def vert(v: str) -> int:
            return self._vertex_id[v]

        for a in range(nletters):
            ga = self._gens[a]
            for b in range(nletters):
                gb = self._gens[b]
                if ga.kind == "vertex" and gb.kind == "vertex":
                    pair[(a, b)] = [(1, (a,))] if a == b else _ZERO
                elif ga.kind == "vertex":
                    pair[(a, b)] = [(1, (b,))] if self._src[b] == ga.name else _ZERO
                elif gb.kind == "vertex":
                    pair[(a, b)] = [(1, (a,))] if self._rng[a] == gb.name else _ZERO
                elif self._rng[a] != self._src[b]:
                    pair[(a, b)] = _ZERO
                elif ga.kind == "star" and ga.index == 1 and gb.kind == "edge" and gb.index == 1:
                    # e_1^* f_1 with s(e) = s(f) = v
                    v = self._rng[a]
                    we = g.edge(ga.name).weight
                    wf = g.edge(gb.name).weight
                    terms: list[tuple[int, tuple[int, ...]]] = []
                    if ga.name == gb.name:
                        terms.append((1, (vert(g.edge(ga.name).range),)))
                    for i in range(2, wv[v] + 1):
                        if i <= we and i <= wf:
                            terms.append(
                                (-1, (
                                    self._star_strand_id[(ga.name, i)],
                                    self._edge_strand_id[(gb.name, i)],
                                ))
                            )
                    pair[(a, b)] = terms
                elif (
                    ga.kind == "edge"
                    and gb.kind == "star"
                    and ga.name == gb.name
                    and self._special_of_vertex.get(self._src[a]) == ga.name
                ):
                    # e^v_i (e^v_j)^* at v = s(e^v)
                    v = self._src[a]
                    i, j = ga.index, gb.index
                    terms = []
                    if i == j:
                        terms.append((1, (vert(v),)))
                    for other in g.out_edges(v):
                        if other.id == ga.name or other.weight < max(i, j):
                            continue
                        terms.append(
                            (-1, (
                                self._edge_strand_id[(other.id, i)],
                                self._star_strand_id[(other.id, j)],
                            ))
                        )
                    pair[(a, b)] = terms
                # otherwise the pair is normal: no table entry
        self._pair = pair

    # -- word plumbing ---------------------------------------------------

    def _intern_letter(self, gen: Generator) -> int:
        try:
            return self._id_of[gen]
        except KeyError:
            raise UnknownGeneratorError(f"unknown generator {gen.token()!r}") from None

    def _intern_word(self, word: Iterable[Generator]) -> tuple[int, ...]:
        ids = tuple(self._intern_letter(g) for g in word)
        if not ids:
            raise AlgebraError("words must be nonempty")
        return ids

    def _genword(self, ids: tuple[int, ...]) -> Word:
        return tuple(self._gens[i] for i in ids)

    def _word_length(self, ids: tuple[int, ...]) -> int:
        # Single vertex letters are length-0 paths.
        if len(ids) == 1 and ids[0] < self._nv:
            return 0
        return len(ids)

    def render_word(self, word: Word) -> str:
        return " ".join(g.token() for g in word)

    # -- normalization ---------------------------------------------------

    def _find_redex(self, w: tuple[int, ...], right: bool):
        pair = self._pair
        if right:
            positions = range(len(w) - 2, -1, -1)
        else:
            positions = range(len(w) - 1)
        for i in positions:
            act = pair.get((w[i], w[i + 1]))
            if act is not None:
                return i, act
        return None

    def _nf_word(self, w0: tuple[int, ...], right: bool = False) -> dict:
        """Normal form of a single word as {word: integer coefficient}.

        Rule coefficients are integers, so word normal forms live over the
        integers and are scaled into the active field at the element
        boundary.  Computed iteratively with full memoization.
        """
        memo = self._memo_right if right else self._memo_left
        hit = memo.get(w0)
        if hit is not None:
            return hit

        def new_frame(word):
            found = self._find_redex(word, right)
            if found is None:
                return [word, _NORMAL, None, 0]
            i, act = found
            if act is _ZERO:
                return [word, [], {}, 0]
            exps = [(coeff, word[:i] + repl + word[i + 2:]) for coeff, repl in act]
            return [word, exps, {}, 0]

        stack = [new_frame(w0)]
        while stack:
            frame = stack[-1]
            word, exps, acc, idx = frame
            if exps is _NORMAL:
                memo[word] = {word: 1}
                stack.pop()
                continue
            if idx < len(exps):
                coeff, child = exps[idx]
                sub = memo.get(child)
                if sub is None:
                    stack.append(new_frame(child))
                    continue
                for w2, c in sub.items():
                    nc = acc.get(w2, 0) + coeff * c
                    if nc:
                        acc[w2] = nc
                    elif w2 in acc:
                        del acc[w2]
                frame[3] = idx + 1
                continue
            memo[word] = acc
            stack.pop()
        return memo[w0]

    def _scalar(self, x):
        if isinstance(x, bool):
            raise AlgebraError("boolean is not a scalar")
        if isinstance(x, int):
            return self.field.from_int(x)
        if isinstance(x, str):
            return self.field.parse(x)
        if isinstance(self.field, Rationals):
            from fractions import Fraction

            if isinstance(x, Fraction):
                return x
        if isinstance(self.field, PrimeField) and isinstance(x, ModInt):
            if x.modulus != self.field.p:
                raise MixedContextError("scalar from a different prime field")
            return x
        raise AlgebraError(f"cannot coerce {x!r} into {self.field.name}")

    def normalize(self, terms, strategy: str = "left") -> "AlgebraElement":
        """Normal form of a formal scalar combination of words.

        ``terms`` is an iterable of ``(scalar, word)`` pairs where a word is
        a nonempty tuple of :class:`Generator`.  ``strategy`` selects the
        redex scanned first ("left" or "right"); the results must agree.
        """
        if strategy not in ("left", "right"):
            raise AlgebraError(f"unknown strategy {strategy!r}")
        right = strategy == "right"
        out: dict[tuple[int, ...], object] = {}
        for scalar, word in terms:
            c = self._scalar(scalar)
            if not c:
                continue
            ids = self._intern_word(word)
            for w2, k in self._nf_word(ids, right).items():
                coeff = c * self.field.from_int(k)
                prev = out.get(w2)
                total = coeff if prev is None else prev + coeff
                if total:
                    out[w2] = total
                elif w2 in out:
                    del out[w2]
        return AlgebraElement(self, out)

    # -- element constructors -------------------------------------------

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def element(self, terms) -> "AlgebraElement":
        return self.normalize(terms)

    def word(self, word: Iterable[Generator], coeff=1) -> "AlgebraElement":
        return self.normalize([(coeff, tuple(word))])

    def vertex(self, v: str) -> "AlgebraElement":
        return self.word((Generator.vertex(v),))

    def edge(self, e: str, i: int) -> "AlgebraElement":
        return self.word((Generator.edge(e, i),))

    def star(self, e: str, i: int) -> "AlgebraElement":
        return self.word((Generator.star(e, i),))

    # -- nod-word predicates and enumeration ------------------------------

    def is_nodword(self, word: Iterable[Generator]) -> bool:
        """True iff the word is a d-path with no forbidden length-2 factor."""
        ids = self._intern_word(word)
        if len(ids) == 1:
            return True
        pair = self._pair
        for a, b in zip(ids, ids[1:]):
            if (a, b) in pair:
                return False
        return True

    def nonvertex_generators(self) -> tuple[Generator, ...]:
        return tuple(self._gens[i] for i in self._nonvertex_ids)

    def generator_endpoints(self, gen: Generator) -> tuple[str, str]:
        i = self._intern_letter(gen)
        return self._src[i], self._rng[i]

    def pair_is_normal(self, a: Generator, b: Generator) -> bool:
        return (self._intern_letter(a), self._intern_letter(b)) not in self._pair

    def word_degree(self, word: Iterable[Generator]):
        ids = self._intern_word(word)
        return self._ids_degree(ids)

    def _ids_degree(self, ids: tuple[int, ...]) -> tuple[int, ...]:
        deg = [0] * self.grading_length
        for i in ids:
            d = self._letter_degree[i]
            if d is not None:
                deg[d[0]] += d[1]
        return tuple(deg)

    def enumerate_nodwords(self, max_len: int, source: Optional[str] = None,
                           range_: Optional[str] = None,
                           degree: Optional[tuple[int, ...]] = None,
                           budget: Optional[int] = None) -> list[Word]:
        """All nod-words of length <= max_len in length-then-lex order.

        Single vertex letters count as length 0.  The optional filters keep
        only words with the given source vertex, range vertex and degree.
        ``budget`` caps the number of words explored and raises
        :class:`BudgetExceededError` when exceeded.
        """
        if max_len < 0:
            raise AlgebraError("max_len must be >= 0")
        explored = 0

        def spend(n: int):
            nonlocal explored
            explored += n
            if budget is not None and explored > budget:
                raise BudgetExceededError(budget)

        out: list[Word] = []

        def keep(ids: tuple[int, ...]) -> bool:
            if source is not None and self._src[ids[0]] != source:
                return False
            if range_ is not None and self._rng[ids[-1]] != range_:
                return False
            if degree is not None and self._ids_degree(ids) != tuple(degree):
                return False
            return True

        for v in range(self._nv):
            spend(1)
            if keep((v,)):
                out.append(self._genword((v,)))
        layer = [(i,) for i in self._nonvertex_ids]
        spend(len(layer))
        length = 1
        while length <= max_len and layer:
            for ids in layer:
                if keep(ids):
                    out.append(self._genword(ids))
            if length == max_len:
                break
            nxt = []
            for ids in layer:
                for b in self._succ[ids[-1]]:
                    nxt.append(ids + (b,))
            spend(len(nxt))
            layer = nxt
            length += 1
        return out

    def growth(self, n: int) -> int:
        """Number of nod-words of length <= n.

        This is the dimension of the span of products of at most ``n``
        generators.  Counted by dynamic programming on the last letter, so
        exponentially growing graphs are handled without materializing an
        exponential frontier.
        """
        if n < 0:
            raise AlgebraError("n must be >= 0")
        total = self._nv
        counts = {i: 1 for i in self._nonvertex_ids}
        for _ in range(1, n + 1):
            total += sum(counts.values())
            nxt: dict[int, int] = {}
            for a, c in counts.items():
                for b in self._succ[a]:
                    nxt[b] = nxt.get(b, 0) + c
            counts = nxt
        return total

    def zero_component_count(self, max_len: int) -> int:
        """Number of nod-words of length <= max_len with degree zero."""
        if max_len < 0:
            raise AlgebraError("max_len must be >= 0")
        zero = (0,) * self.grading_length
        total = self._nv  # vertices have degree zero and length zero
        states: dict[tuple[int, tuple[int, ...]], int] = {}
        for i in self._nonvertex_ids:
            pos, sign = self._letter_degree[i]
            deg = list(zero)
            deg[pos] += sign
            states[(i, tuple(deg))] = states.get((i, tuple(deg)), 0) + 1
        for length in range(1, max_len + 1):
            total += sum(c for (i, deg), c in states.items() if deg == zero)
            if length == max_len:
                break
            remaining = max_len - length
            nxt: dict[tuple[int, tuple[int, ...]], int] = {}
            for (a, deg), c in states.items():
                for b in self._succ[a]:
                    pos, sign = self._letter_degree[b]
                    deg2 = list(deg)
                    deg2[pos] += sign
                    if sum(abs(d) for d in deg2) > remaining:
                        continue
                    key = (b, tuple(deg2))
                    nxt[key] = nxt.get(key, 0) + c
            states = nxt
        return total

    def __repr__(self):
        return (
            f"Algebra({self.graph!r}, field={self.field.name})"
        )


class AlgebraElement:
    """A finitely supported combination of nod-words over a fixed algebra."""

    __slots__ = ("_algebra", "_support")

    def __init__(self, algebra: Algebra, support: dict):
        self._algebra = algebra
        self._support = support

    @property
    def algebra(self) -> Algebra:
        return self._algebra

    def is_zero(self) -> bool:
        return not self._support

    def __bool__(self):
        return bool(self._support)

    def _check_context(self, other: "AlgebraElement") -> None:
        if self._algebra is not other._algebra:
            raise MixedContextError("elements belong to different algebras")

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self._algebra is other._algebra and self._support == other._support

    def __add__(self, other):
        self._check_context(other)
        out = dict(self._support)
        for w, c in other._support.items():
            prev = out.get(w)
            total = c if prev is None else prev + c
            if total:
                out[w] = total
            elif w in out:
                del out[w]
        return AlgebraElement(self._algebra, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return AlgebraElement(self._algebra, {w: -c for w, c in self._support.items()})

    def scaled(self, scalar) -> "AlgebraElement":
        c = self._algebra._scalar(scalar)
        if not c:
            return self._algebra.zero()
        return AlgebraElement(
            self._algebra, {w: c * k for w, k in self._support.items()}
        )

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check_context(other)
            alg = self._algebra
            out: dict[tuple[int, ...], object] = {}
            from_int = alg.field.from_int
            for wa, ca in self._support.items():
                for wb, cb in other._support.items():
                    c = ca * cb
                    for w2, k in alg._nf_word(wa + wb).items():
                        coeff = c * from_int(k)
                        prev = out.get(w2)
                        total = coeff if prev is None else prev + coeff
                        if total:
                            out[w2] = total
                        elif w2 in out:
                            del out[w2]
            return AlgebraElement(alg, out)
        return self.scaled(other)

    def __rmul__(self, other):
        # scalar * element
        return self.scaled(other)

    # -- structure maps --------------------------------------------------

    def involute(self) -> "AlgebraElement":
        """Reverse words and swap e_i with e_i^*; scalars are fixed."""
        alg = self._algebra
        star = alg._star_of
        out = {
            tuple(star[i] for i in reversed(w)): c
            for w, c in self._support.items()
        }
        return AlgebraElement(alg, out)

    def degree(self):
        """Common degree of the support words, or a sentinel.

        Returns ``ZERO_ELEMENT`` for the zero element and
        ``NOT_HOMOGENEOUS`` when support words have different degrees.
        """
        if not self._support:
            return ZERO_ELEMENT
        degrees = {self._algebra._ids_degree(w) for w in self._support}
        if len(degrees) > 1:
            return NOT_HOMOGENEOUS
        return degrees.pop()

    def is_idempotent(self) -> bool:
        return (self * self) == self

    def min_support_length(self):
        if not self._support:
            return ZERO_ELEMENT
        return min(self._algebra._word_length(w) for w in self._support)

    # -- inspection -------------------------------------------------------

    def _ordered_items(self):
        alg = self._algebra
        return sorted(
            self._support.items(), key=lambda kv: (alg._word_length(kv[0]), kv[0])
        )

    def terms(self) -> list[tuple[object, Word]]:
        """(coefficient, word) pairs in length-then-lex order."""
        alg = self._algebra
        return [(c, alg._genword(w)) for w, c in self._ordered_items()]

    def support_words(self) -> list[Word]:
        return [w for _, w in self.terms()]

    def render(self) -> str:
        if not self._support:
            return "0"
        alg = self._algebra
        pieces = []
        for w, c in self._ordered_items():
            text = alg.field.render(c)
            negative = text.startswith("-")
            magnitude = text[1:] if negative else text
            word_text = alg.render_word(alg._genword(w))
            term = word_text if magnitude == "1" else f"{magnitude} {word_text}"
            pieces.append((negative, term))
        first_neg, first_term = pieces[0]
        parts = [("-" if first_neg else "") + first_term]
        for negative, term in pieces[1:]:
            parts.append(("- " if negative else "+ ") + term)
        return " ".join(parts)

    def to_records(self) -> list[dict]:
        alg = self._algebra
        return [
            {
                "coeff": alg.field.render(c),
                "word": [g.token() for g in alg._genword(w)],
            }
            for w, c in self._ordered_items()
        ]

    def __repr__(self):
        return f"<{self.render()}>"


# -- defining relations -------------------------------------------------------


def relation_instances(g: WeightedGraph):
    """Yield every instance of the defining relations as formal terms.

    Each item is ``(label, terms)`` with ``terms`` a list of
    ``(integer coefficient, [Generator, ...])``; the instance holds in the
    algebra iff the sum of the terms is zero.  Strand indices beyond an
    edge's weight are dropped, matching the convention that those strands
    are zero.
    """
    V = Generator.vertex
    E = Generator.edge
    S = Generator.star

    for u in g.vertices:
        for v in g.vertices:
            terms = [(1, [V(u), V(v)])]
            if u == v:
                terms.append((-1, [V(u)]))
            yield (f"(i) {u} {v}", terms)

    for e in g.edges:
        for i in range(1, e.weight + 1):
            yield (
                f"(ii) source {e.id}.{i}",
                [(1, [V(e.source), E(e.id, i)]), (-1, [E(e.id, i)])],
            )
            yield (
                f"(ii) range {e.id}.{i}",
                [(1, [E(e.id, i), V(e.range)]), (-1, [E(e.id, i)])],
            )
            yield (
                f"(ii) star-range {e.id}.{i}",
                [(1, [V(e.range), S(e.id, i)]), (-1, [S(e.id, i)])],
            )
            yield (
                f"(ii) star-source {e.id}.{i}",
                [(1, [S(e.id, i), V(e.source)]), (-1, [S(e.id, i)])],
            )

    for v in g.vertices:
        out = g.out_edges(v)
        if not out:
            continue
        wv = vertex_weight(g, v)
        for e in out:
            for f in out:
                terms = [
                    (1, [S(e.id, i), E(f.id, i)])
                    for i in range(1, wv + 1)
                    if i <= e.weight and i <= f.weight
                ]
                if e.id == f.id:
                    terms.append((-1, [V(e.range)]))
                yield (f"(iii) {v} {e.id} {f.id}", terms)
        for i in range(1, wv + 1):
            for j in range(1, wv + 1):
                terms = [
                    (1, [E(e.id, i), S(e.id, j)])
                    for e in out
                    if e.weight >= max(i, j)
                ]
                if i == j:
                    terms.append((-1, [V(v)]))
                yield (f"(iv) {v} {i} {j}", terms)


def apply_generator_map(element: AlgebraElement,
                        mapping: dict[Generator, AlgebraElement],
                        target: Algebra) -> AlgebraElement:
    """Image of ``element`` under a map fixed on generators.

    Each letter of each support word is replaced by its image in ``target``
    and the images are multiplied in order.
    """
    if element.algebra.field != target.field:
        raise MixedContextError("source and target algebras use different fields")
    out = target.zero()
    for coeff, word in element.terms():
        img: Optional[AlgebraElement] = None
        for gen in word:
            try:
                factor = mapping[gen]
            except KeyError:
                raise UnknownGeneratorError(
                    f"no image fixed for generator {gen.token()!r}"
                ) from None
            img = factor if img is None else img * factor
        assert img is not None
        out = out + img.scaled(coeff)
    return out


def evaluate_relation(terms, mapping: dict[Generator, AlgebraElement],
                      target: Algebra) -> AlgebraElement:
    """Value of a relation instance under a generator assignment."""
    acc = target.zero()
    for coeff, gens in terms:
        img: Optional[AlgebraElement] = None
        for gen in gens:
            try:
                factor = mapping[gen]
            except KeyError:
                raise UnknownGeneratorError(
                    f"no image fixed for generator {gen.token()!r}"
                ) from None
            img = factor if img is None else img * factor
        assert img is not None
        acc = acc + img.scaled(coeff)
    return acc


def identity_map(algebra: Algebra) -> dict[Generator, AlgebraElement]:
    """Each generator mapped to itself, as elements of ``algebra``."""
    out = {}
    for gen in algebra.nonvertex_generators():
        out[gen] = algebra.word((gen,))
    for v in algebra.graph.vertices:
        gen = Generator.vertex(v)
        out[gen] = algebra.word((gen,))
    return out
