from fractions import Fraction
from pathlib import Path
from random import Random

import pytest

from wlpa import (
    NOT_HOMOGENEOUS,
    ZERO_ELEMENT,
    Algebra,
    AlgebraError,
    Generator,
    MixedContextError,
    PrimeField,
    SpecialEdgeChoice,
    UnknownGeneratorError,
    default_special_edges,
    evaluate_relation,
    identity_map,
    parse_weighted_graph,
    relation_instances,
    validate_choice,
)

from graphgen import random_lpa_satisfying_graph, random_weighted_graph
from oracles import (
    classical_unweighted_count,
    engine_span_dimension_gf2,
    truncated_quotient_dimension,
)

FIXTURES = Path(__file__).parent / "fixtures"

E = Generator.edge
S = Generator.star
V = Generator.vertex


def fixture_graph(name):
    return parse_weighted_graph((FIXTURES / name).read_text())


def loop1():
    return parse_weighted_graph("vertex v\nedge a v v 1")


def random_words(rng, algebra, count, max_len):
    letters = list(algebra.nonvertex_generators())
    letters += [V(v) for v in algebra.graph.vertices]
    words = []
    for _ in range(count):
        n = rng.randint(1, max_len)
        words.append(tuple(rng.choice(letters) for _ in range(n)))
    return words


# -- special edges ---------------------------------------------------------


def test_default_special_edges():
    assert default_special_edges(loop1()).mapping == {"v": "a"}
    assert default_special_edges(fixture_graph("e2loops.wg")).mapping == {"v": "b"}
    # ties break to the first edge in graph order
    assert default_special_edges(fixture_graph("l23.wg")).mapping == {"v": "e1"}


def test_choice_validation():
    g = fixture_graph("e2loops.wg")
    with pytest.raises(AlgebraError):
        validate_choice(g, SpecialEdgeChoice((("v", "a"),)))  # not maximal
    with pytest.raises(AlgebraError):
        validate_choice(g, SpecialEdgeChoice(()))  # not total


# -- nod-word predicate ------------------------------------------------------


def test_is_nodword():
    g = fixture_graph("e2loops.wg")
    algebra = Algebra(g)
    assert algebra.is_nodword((V("v"),))
    assert algebra.is_nodword((E("b", 2), E("a", 1), S("b", 2)))
    assert not algebra.is_nodword((S("a", 1), E("a", 1)))  # e1* f1 factor
    assert not algebra.is_nodword((E("b", 1), S("b", 2)))  # special factor
    assert not algebra.is_nodword((V("v"), E("a", 1)))  # not a d-path
    with pytest.raises(UnknownGeneratorError):
        algebra.is_nodword((E("zz", 1),))
    with pytest.raises(UnknownGeneratorError):
        algebra.is_nodword((E("a", 2),))  # strand out of range


# -- normalization -----------------------------------------------------------


def test_vertex_products():
    g = parse_weighted_graph("vertex u\nvertex v\nedge a u v 1")
    algebra = Algebra(g)
    assert algebra.normalize([(1, (V("u"), V("v")))]).is_zero()
    assert algebra.normalize([(1, (V("u"), V("u")))]) == algebra.vertex("u")


def test_loop_relations():
    algebra = Algebra(loop1())
    assert algebra.normalize([(1, (S("a", 1), E("a", 1)))]) == algebra.vertex("v")
    assert algebra.normalize([(1, (E("a", 1), S("a", 1)))]) == algebra.vertex("v")


def test_weighted_special_pair_expansion():
    algebra = Algebra(fixture_graph("l23.wg"))
    got = algebra.normalize([(1, (E("e1", 1), S("e1", 2)))])
    expected = algebra.normalize(
        [(-1, (E("e2", 1), S("e2", 2))), (-1, (E("e3", 1), S("e3", 2)))]
    )
    assert got == expected
    assert got.render() == "-e2.1 e2.2* - e3.1 e3.2*"


def test_local_units():
    algebra = Algebra(fixture_graph("e2loops.wg"))
    x = algebra.word((E("b", 2), E("a", 1)))
    assert algebra.vertex("v") * x == x
    assert x * algebra.vertex("v") == x


def test_multiply_examples():
    algebra = Algebra(loop1())
    a1 = algebra.edge("a", 1)
    assert (a1 * a1).support_words() == [(E("a", 1), E("a", 1))]

    two = Algebra(fixture_graph("e2loops.wg"))
    left = two.word((E("b", 2), E("a", 1)))
    right = two.star("b", 2)
    assert (left * right).support_words() == [(E("b", 2), E("a", 1), S("b", 2))]


def test_normalize_is_idempotent_and_strategy_free():
    rng = Random(52001)
    checked = 0
    for _ in range(40):
        g = random_weighted_graph(rng, max_vertices=4, max_edges=5, max_weight=3)
        if not g.vertices:
            continue
        algebra = Algebra(g)
        for word in random_words(rng, algebra, 25, 6):
            left = algebra.normalize([(1, word)])
            right = algebra.normalize([(1, word)], strategy="right")
            assert left == right
            renorm = algebra.normalize(
                [(c, w) for c, w in left.terms()]
            )
            assert renorm == left
            checked += 1
    assert checked >= 900


def test_relation_soundness_random_graphs():
    rng = Random(52002)
    for _ in range(30):
        g = random_weighted_graph(rng, max_vertices=4, max_edges=5, max_weight=3)
        if not g.vertices:
            continue
        algebra = Algebra(g)
        mapping = identity_map(algebra)
        for label, terms in relation_instances(g):
            value = evaluate_relation(terms, mapping, algebra)
            assert value.is_zero(), (label, value)


def test_ring_axioms_on_random_basis_words():
    rng = Random(52003)
    checked = 0
    while checked < 120:
        g = random_weighted_graph(rng, max_vertices=4, max_edges=5, max_weight=3)
        if not g.vertices or not g.edges:
            continue
        algebra = Algebra(g)
        words = algebra.enumerate_nodwords(3)
        if len(words) < 3:
            continue
        for _ in range(6):
            a, b, c = (algebra.word(rng.choice(words)) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert (a + b) * c == a * c + b * c
            checked += 1


def test_scalar_arithmetic():
    algebra = Algebra(loop1())
    a = algebra.edge("a", 1)
    v = algebra.vertex("v")
    combo = a.scaled(Fraction(3, 2)) - v
    assert combo == algebra.element([(Fraction(3, 2), (E("a", 1),)), (-1, (V("v"),))])
    assert (combo - combo).is_zero()
    assert 2 * a == a + a


def test_mixed_context_rejected():
    a = Algebra(loop1())
    b = Algebra(loop1())
    with pytest.raises(MixedContextError):
        a.vertex("v") + b.vertex("v")


# -- involution ----------------------------------------------------------


def test_involution_examples():
    algebra = Algebra(fixture_graph("e2loops.wg"))
    v = algebra.vertex("v")
    assert v.involute() == v
    aa = algebra.word((E("a", 1), E("a", 1)))
    assert aa.involute().support_words() == [(S("a", 1), S("a", 1))]
    p = algebra.word((E("b", 2), E("a", 1), S("b", 2)))
    assert p.involute().support_words() == [(E("b", 2), S("a", 1), S("b", 2))]


def test_involution_properties():
    rng = Random(52004)
    for _ in range(20):
        g = random_weighted_graph(rng, max_vertices=4, max_edges=5, max_weight=3)
        if not g.vertices:
            continue
        algebra = Algebra(g)
        words = random_words(rng, algebra, 8, 4)
        for w1, w2 in zip(words, words[1:]):
            a = algebra.normalize([(1, w1)])
            b = algebra.normalize([(1, w2)])
            assert a.involute().involute() == a
            assert (a * b).involute() == b.involute() * a.involute()


# -- grading ---------------------------------------------------------------


def test_degree_examples():
    algebra = Algebra(fixture_graph("e2loops.wg"))
    assert algebra.vertex("v").degree() == (0, 0)
    p = algebra.word((E("b", 2), E("a", 1), S("b", 2)))
    assert p.degree() == (1, 0)
    mixed = algebra.vertex("v") + algebra.edge("a", 1)
    assert mixed.degree() is NOT_HOMOGENEOUS
    assert algebra.zero().degree() is ZERO_ELEMENT


def test_degree_additivity():
    rng = Random(52005)
    for _ in range(20):
        g = random_weighted_graph(rng, max_vertices=4, max_edges=5, max_weight=3)
        if not g.vertices or not g.edges:
            continue
        algebra = Algebra(g)
        words = algebra.enumerate_nodwords(3)
        for _ in range(10):
            a = algebra.word(rng.choice(words))
            b = algebra.word(rng.choice(words))
            prod = a * b
            if prod.is_zero() or prod.degree() is NOT_HOMOGENEOUS:
                continue
            assert prod.degree() == tuple(
                x + y for x, y in zip(a.degree(), b.degree())
            )


# -- enumeration, growth, degree-zero counting --------------------------------


def test_enumerate_examples():
    lonely = Algebra(parse_weighted_graph("vertex v"))
    assert lonely.enumerate_nodwords(5) == [(V("v"),)]

    algebra = Algebra(loop1())
    assert algebra.enumerate_nodwords(2) == [
        (V("v"),),
        (E("a", 1),),
        (S("a", 1),),
        (E("a", 1), E("a", 1)),
        (S("a", 1), S("a", 1)),
    ]

    two = Algebra(fixture_graph("e2loops.wg"))
    assert two.enumerate_nodwords(1) == [
        (V("v"),),
        (E("a", 1),),
        (S("a", 1),),
        (E("b", 1),),
        (E("b", 2),),
        (S("b", 1),),
        (S("b", 2),),
    ]


def test_enumerate_filters():
    g = fixture_graph("g6.wg")
    algebra = Algebra(g)
    for word in algebra.enumerate_nodwords(3, source="v"):
        src, _ = algebra.generator_endpoints(word[0]) if word[0].kind != "vertex" else ("v", "v")
        assert src == "v"
    zero_deg = algebra.enumerate_nodwords(4, degree=(0, 0))
    assert (V("t"),) in zero_deg
    for word in zero_deg:
        assert algebra.word_degree(word) == (0, 0)


def test_enumerate_matches_growth_dp():
    rng = Random(52006)
    for _ in range(15):
        g = random_weighted_graph(rng, max_vertices=4, max_edges=4, max_weight=3)
        if not g.vertices:
            continue
        algebra = Algebra(g)
        for n in range(4):
            assert len(algebra.enumerate_nodwords(n)) == algebra.growth(n)


def test_growth_examples():
    lonely = Algebra(parse_weighted_graph("vertex v"))
    assert [lonely.growth(n) for n in range(6)] == [1] * 6

    algebra = Algebra(loop1())
    assert algebra.growth(3) == 7
    assert [algebra.growth(n) for n in range(8)] == [2 * n + 1 for n in range(8)]

    two = Algebra(fixture_graph("e2loops.wg"))
    for k in range(1, 5):
        assert two.growth(3 * k) >= 2 ** k


def test_zero_component_count():
    algebra = Algebra(loop1())
    assert algebra.zero_component_count(4) == 1

    two = Algebra(fixture_graph("e2loops.wg"))
    assert two.zero_component_count(6) >= 2

    lonely = Algebra(parse_weighted_graph("vertex v"))
    assert lonely.zero_component_count(9) == 1


def test_zero_component_matches_enumeration():
    rng = Random(52007)
    for _ in range(10):
        g = random_weighted_graph(rng, max_vertices=3, max_edges=4, max_weight=2)
        if not g.vertices:
            continue
        algebra = Algebra(g)
        zero = (0,) * algebra.grading_length
        for n in range(5):
            direct = [
                w for w in algebra.enumerate_nodwords(n)
                if algebra.word_degree(w) == zero
            ]
            assert algebra.zero_component_count(n) == len(direct)


# -- idempotents and support length --------------------------------------


def test_idempotents():
    algebra = Algebra(fixture_graph("e2loops.wg"))
    assert algebra.vertex("v").is_idempotent()
    assert algebra.zero().is_idempotent()
    p = algebra.word((E("b", 2), E("a", 1), S("b", 2)))
    assert not p.is_idempotent()
    pp = p * p.involute()
    for k in range(1, 4):
        power = pp
        for _ in range(k - 1):
            power = power * pp
        assert not power.is_idempotent()


def test_min_support_length():
    algebra = Algebra(fixture_graph("e2loops.wg"))
    assert algebra.vertex("v").min_support_length() == 0
    p = algebra.word((E("b", 2), E("a", 1), S("b", 2)))
    assert p.min_support_length() == 3
    assert algebra.zero().min_support_length() is ZERO_ELEMENT
    generators = [algebra.vertex("v")] + [
        algebra.word((gen,)) for gen in algebra.nonvertex_generators()
    ]
    for x in generators:
        sandwich = p * x * p
        assert sandwich.min_support_length() >= 6


# -- special-edge choice independence ------------------------------------


def test_choice_independence_of_equality():
    g = fixture_graph("l23.wg")
    choices = [
        SpecialEdgeChoice((("v", e),)) for e in ("e1", "e2", "e3")
    ]
    rng = Random(52008)
    algebras = [Algebra(g, c) for c in choices]
    for _ in range(40):
        word = tuple(
            rng.choice(algebras[0].nonvertex_generators()) for _ in range(rng.randint(1, 5))
        )
        images = [a.normalize([(1, word)]) for a in algebras]
        # equality of two normal forms, decided under the third choice
        for i, j, k in ((0, 1, 2), (1, 2, 0), (0, 2, 1)):
            diff = [(c, w) for c, w in images[i].terms()]
            diff += [(-c, w) for c, w in images[j].terms()]
            assert algebras[k].normalize(diff).is_zero()


# -- prime fields ------------------------------------------------------------


def test_prime_field_normalization():
    g = fixture_graph("l23.wg")
    algebra = Algebra(g, field=PrimeField(2))
    # over GF(2) the sign of the special-pair expansion disappears
    got = algebra.normalize([(1, (E("e1", 1), S("e1", 2)))])
    expected = algebra.normalize(
        [(1, (E("e2", 1), S("e2", 2))), (1, (E("e3", 1), S("e3", 2)))]
    )
    assert got == expected
    assert not algebra.vertex("v").scaled(2)


def test_unknown_generators_rejected():
    algebra = Algebra(loop1())
    with pytest.raises(UnknownGeneratorError):
        algebra.normalize([(1, (E("b", 1),))])
    with pytest.raises(UnknownGeneratorError):
        algebra.normalize([(1, (S("a", 2),))])
    with pytest.raises(AlgebraError):
        algebra.normalize([(1, ())])


# -- unweighted degeneration and the dimension oracle -------------------------


def test_degeneration_matches_classical_count():
    rng = Random(52009)
    for _ in range(25):
        g = random_weighted_graph(rng, max_vertices=5, max_edges=8, max_weight=1)
        if not g.vertices:
            continue
        algebra = Algebra(g)
        expected = classical_unweighted_count(g, algebra.choice, 4)
        assert algebra.growth(4) == expected


def test_dimension_oracle_small_graphs():
    for text in (
        "vertex v",
        "vertex v\nedge a v v 1",
        "vertex v\nedge a v v 2",
        "vertex u\nvertex v\nedge a u v 2\nedge b v u 1",
    ):
        g = parse_weighted_graph(text)
        for max_len in range(1, 4):
            assert truncated_quotient_dimension(g, max_len) == \
                engine_span_dimension_gf2(g, max_len)
