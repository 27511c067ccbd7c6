"""Rational expressions, bounded enumeration, automata, exact membership."""
import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from freerat.automata import (
    Acceptor,
    acceptor_to_json,
    automaton_to_expr,
    complement_reduced,
    determinize,
    difference,
    enumerate_accepted,
    equivalent,
    expr_to_automaton,
    intersect,
    intersect_positive,
    is_empty,
    member,
    positive_universe,
    reduced_acceptor,
    reduced_universe,
    saturate,
    shortest_accepted,
)
from freerat.ratexpr import (
    EMPTY,
    EPSILON,
    Finite,
    Product,
    RatExpr,
    Star,
    Summand,
    Union,
    complexity,
    conjugate_expr,
    enumerate_bounded,
    finite,
    format_ratexpr,
    hom_image,
    leaf_words,
    parse_ratexpr,
    standard_form,
)
from freerat.words import IDENTITY, Word, generator, parse_word

x1 = generator(1)
x2 = generator(2)


# -- oracle: naive enumeration without the prefix-join machinery -----------


def naive_enumerate(expr: RatExpr, max_len: int, slack: int) -> set:
    """Plain-loop denotation enumeration, kept deliberately independent of
    the production implementation.  Both sides of the comparison get the
    same working cap so they explore the same unrolling horizon."""
    cap = max_len + slack

    def go(e: RatExpr) -> set:
        if isinstance(e, Finite):
            return {w for w in e.elements if len(w) <= cap}
        if isinstance(e, Union):
            return go(e.left) | go(e.right)
        if isinstance(e, Product):
            return {
                p
                for u in go(e.left)
                for v in go(e.right)
                if len(p := u * v) <= cap
            }
        if isinstance(e, Star):
            base = go(e.inner) - {IDENTITY}
            seen = {IDENTITY}
            frontier = {IDENTITY}
            while frontier:
                grown = {
                    p
                    for u in frontier
                    for v in base
                    if len(p := u * v) <= cap
                }
                frontier = grown - seen
                seen |= grown
            return seen
        raise TypeError(e)

    return {w for w in go(expr) if len(w) <= max_len}


# -- random expression pool -------------------------------------------------

_LEAF_POOL = [
    parse_word(t)
    for t in ["x1", "x2", "x1^-1", "x2^-1", "x1 x2", "x2 x1^-1", "x1^2", "1"]
]


def random_expr(rng: random.Random, depth: int) -> RatExpr:
    if depth == 0 or rng.random() < 0.3:
        k = rng.randint(1, 2)
        return Finite(rng.sample(_LEAF_POOL, k))
    kind = rng.choice(["union", "prod", "star"])
    if kind == "union":
        return Union(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if kind == "prod":
        return Product(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    return Star(random_expr(rng, depth - 1))


# depth <= 2 keeps nested-star languages desk-sized
EXPR_SAMPLES = [random_expr(random.Random(1000 + i), 2) for i in range(30)]
# single-word leaves admit deeper structure without language blowup
EXPR_DEEP = [
    Star(Product(Star(finite("x1 x2")), finite("x2^-1"))),
    Product(Star(finite("x1^2")), Union(finite("x2"), Star(finite("x2 x1")))),
    Star(Union(finite("x1 x2"), finite("x2^-1 x1"))),
]


# -- complexity -------------------------------------------------------------


def test_complexity_frozen_examples():
    assert complexity(finite("x1")) == 0
    assert complexity(Star(finite("x1"))) == 1
    assert complexity(Product(Star(finite("x1")), Star(finite("x2")))) == 2


def test_complexity_structural():
    e = Union(Star(finite("x1")), finite("x2"))
    assert complexity(e) == 2
    assert complexity(Star(e)) == 3
    assert complexity(EMPTY) == 0 and complexity(EPSILON) == 0


# -- bounded enumeration ----------------------------------------------------


def test_enumerate_frozen_examples():
    assert enumerate_bounded(Star(finite("x1")), 3) == {
        IDENTITY,
        x1,
        x1**2,
        x1**3,
    }
    assert enumerate_bounded(Product(finite("x1"), finite("x1^-1")), 5) == {IDENTITY}
    got = enumerate_bounded(Union(finite("x2"), Star(finite("x1 x2"))), 4)
    assert got == {x2, IDENTITY, x1 * x2, x1 * x2 * x1 * x2}


def test_enumerate_cancelling_product():
    # both factors overshoot the cap before cancelling back under it
    e = Product(finite("x1 x2 x1"), finite("x1^-1 x2^-1 x1"))
    assert enumerate_bounded(e, 2) == {x1 * x1}


def test_enumerate_matches_naive_oracle():
    for expr in EXPR_SAMPLES + EXPR_DEEP:
        assert enumerate_bounded(expr, 4, slack=4) == naive_enumerate(
            expr, 4, slack=4
        ), format_ratexpr(expr)


def test_enumerate_star_identity_always_present():
    for expr in EXPR_SAMPLES[:10]:
        assert IDENTITY in enumerate_bounded(Star(expr), 0, slack=4)


# -- conjugation and homomorphic images ------------------------------------


def test_conjugate_frozen_examples():
    c = conjugate_expr(finite("x1"), x2)
    assert isinstance(c, Finite) and c.elements == {x2.inv() * x1 * x2}
    assert complexity(c) == 0
    s = conjugate_expr(Star(finite("x1")), x2)
    assert isinstance(s, Star) and complexity(s) == 1


def test_conjugate_preserves_complexity_and_denotation():
    g = x2
    for expr in EXPR_SAMPLES[:12]:
        conj = conjugate_expr(expr, g)
        assert complexity(conj) == complexity(expr)
        inner = enumerate_bounded(expr, 3, slack=4)
        outer = enumerate_bounded(conj, 3 + 2 * len(g), slack=4)
        assert {g.inv() * w * g for w in inner} <= outer


def test_hom_image_frozen_examples():
    e = Finite([parse_word("x1 x3 x2")])
    img = hom_image(e, [x1, x2, IDENTITY])
    assert isinstance(img, Finite) and img.elements == {x1 * x2}
    e2 = Union(finite("x1"), Star(finite("x2")))
    assert hom_image(e2, [x1, x2]) == e2


def test_hom_image_commutes_with_enumeration():
    from freerat.words import substitute

    images = [x1, x1 * x2]
    for expr in EXPR_SAMPLES[:10]:
        img = hom_image(expr, images)
        assert complexity(img) <= complexity(expr)
        for w in sorted(enumerate_bounded(expr, 3, slack=4))[:8]:
            assert member(img, substitute(w, images))


# -- standard form ----------------------------------------------------------


def test_standard_form_frozen_shapes():
    e_star = Star(finite("x1 x2"))
    sf = standard_form(e_star)
    assert len(sf.summands) == 1
    (s,) = sf.summands
    assert s.coefficients == (IDENTITY, IDENTITY)
    assert s.stars == (finite("x1 x2"),)

    prod = Product(Finite([x1, x2]), e_star)
    sf2 = standard_form(prod)
    assert len(sf2.summands) == 2
    assert {s.coefficients[0] for s in sf2.summands} == {x1, x2}
    for s in sf2.summands:
        assert s.stars == (finite("x1 x2"),)
        assert s.coefficients[1] == IDENTITY

    crossed = standard_form(
        Product(Union(finite("x1"), finite("x2")), Union(finite("x1"), finite("x2")))
    )
    assert len(crossed.summands) == 4
    assert {s.coefficients[0] for s in crossed.summands} == {
        x1 * x1,
        x1 * x2,
        x2 * x1,
        x2 * x2,
    }


def test_standard_form_preserves_denotation():
    for expr in EXPR_SAMPLES[:15] + EXPR_DEEP:
        sf = standard_form(expr)
        assert enumerate_bounded(sf.as_expr(), 4, slack=4) == enumerate_bounded(
            expr, 4, slack=4
        )


def test_summand_shape_validation():
    with pytest.raises(ValueError):
        Summand((IDENTITY,), (finite("x1"),))


# -- expression <-> automaton ----------------------------------------------


def test_expr_automaton_roundtrip_frozen():
    aut = expr_to_automaton(finite("x1"))
    assert aut.n_states == 2 and len(aut.transitions) == 1

    back = automaton_to_expr(expr_to_automaton(Star(finite("x1"))))
    assert enumerate_bounded(back, 4) == enumerate_bounded(Star(finite("x1")), 4)


def test_expr_automaton_roundtrip_random():
    # exact language comparison via saturated acceptors, so the check is
    # independent of enumeration horizons
    for expr in EXPR_SAMPLES[:12] + EXPR_DEEP:
        back = automaton_to_expr(expr_to_automaton(expr))
        assert equivalent(reduced_acceptor(back), reduced_acceptor(expr)), (
            format_ratexpr(expr)
        )


# -- saturation and membership ---------------------------------------------


def strings(acc: Acceptor, max_len: int) -> set:
    return set(enumerate_accepted(acc, max_len))


def test_saturate_frozen_examples():
    cancel = saturate(expr_to_automaton(Product(finite("x1"), finite("x1^-1"))))
    assert strings(cancel, 4) == {()}

    loop = saturate(expr_to_automaton(Star(finite("x1 x2"))))
    assert strings(loop, 6) == {(), (1, 2), (1, 2, 1, 2), (1, 2, 1, 2, 1, 2)}


def test_saturate_accepts_only_reduced_strings():
    for expr in EXPR_SAMPLES[:15]:
        acc = saturate(expr_to_automaton(expr))
        for s in strings(acc, 5):
            w = Word(s)
            assert w.letters == s  # already reduced


def test_member_frozen_examples():
    assert member(Star(finite("x1 x2")), IDENTITY)
    assert member(Star(finite("x1")), IDENTITY)
    assert not member(Star(finite("x1")), x2)


def test_member_matches_enumeration_oracle():
    rng = random.Random(7)
    probes = [
        Word(tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, 4))))
        for _ in range(30)
    ]
    for expr in EXPR_SAMPLES[:20]:
        denoted = enumerate_bounded(expr, 4, slack=8)
        for w in sorted(denoted)[:8]:
            assert member(expr, w), (format_ratexpr(expr), w)
        for w in probes:
            if len(w) <= 4:
                assert member(expr, w) == (w in denoted), (format_ratexpr(expr), w)


# -- Boolean operations -----------------------------------------------------


def test_intersection_with_complement_is_empty():
    for expr in EXPR_SAMPLES[:10]:
        acc = reduced_acceptor(expr)
        assert is_empty(intersect(acc, complement_reduced(acc)))


def test_complement_within_reduced_strings():
    acc = reduced_acceptor(Star(finite("x1")))
    comp = complement_reduced(acc)
    assert not comp.accepts((1,))
    assert comp.accepts((2,))
    assert comp.accepts((1, 2))
    assert not comp.accepts(())  # identity is x1^0
    # complements stay inside the reduced universe
    assert not comp.accepts((1, -1))


def test_de_morgan_extensionally():
    a = reduced_acceptor(Star(finite("x1")))
    b = reduced_acceptor(Union(finite("x1"), finite("x2")))
    lhs = complement_reduced(intersect(a, b))
    for s in strings(reduced_universe(a.alphabet), 4):
        assert lhs.accepts(s) == (not (a.accepts(s) and b.accepts(s)))


def test_difference_and_equivalence():
    star_x1 = reduced_acceptor(Star(finite("x1")))
    sub = reduced_acceptor(Union(EPSILON, finite("x1")))
    diff = difference(star_x1, sub)
    assert strings(diff, 3) == {(1, 1), (1, 1, 1)}
    assert not equivalent(star_x1, sub)
    assert equivalent(
        reduced_acceptor(Star(finite("x1 x1^-1"))), reduced_acceptor(EPSILON)
    )
    assert shortest_accepted(difference(star_x1, star_x1)) is None


def test_positive_universe_intersection():
    acc = intersect(reduced_acceptor(Star(finite("x1"))), positive_universe(2))
    assert strings(acc, 3) == {(), (1,), (1, 1), (1, 1, 1)}


# -- positive intersection over F2 -----------------------------------------


def test_intersect_positive_frozen_examples():
    got = intersect_positive(Finite([x1, x1.inv()]))
    assert strings(got, 3) == {(1,)}

    only_identity = intersect_positive(Star(finite("x1 x2^-1")))
    assert strings(only_identity, 4) == {()}

    everything = intersect_positive(Star(Finite([x1, x2])))
    found = strings(everything, 4)
    assert found == {
        s for n in range(5) for s in itertools.product((1, 2), repeat=n)
    }


def test_intersect_positive_rejects_higher_rank():
    with pytest.raises(ValueError):
        intersect_positive(finite("x3"))


# -- acceptor JSON export ---------------------------------------------------


def test_acceptor_json_shape():
    blob = acceptor_to_json(reduced_acceptor(finite("x1")))
    assert set(blob) == {"alphabet", "states", "initial", "terminals", "transitions"}
    assert blob == acceptor_to_json(reduced_acceptor(finite("x1")))


# -- s-expression text form -------------------------------------------------


def test_parse_format_frozen():
    e = parse_ratexpr("(union (fin x2) (star (fin (x1 x2))))")
    assert e == Union(finite("x2"), Star(finite("x1 x2")))
    assert parse_ratexpr(format_ratexpr(e)) == e
    assert parse_ratexpr("(fin)") == EMPTY
    assert parse_ratexpr("(fin 1)") == EPSILON


def test_parse_errors():
    for bad in ["(fin x1", "(star)", "(union (fin x1))", "(mystery (fin x1))", "x1"]:
        with pytest.raises(ValueError):
            parse_ratexpr(bad)


def test_format_roundtrip_random():
    for expr in EXPR_SAMPLES:
        assert parse_ratexpr(format_ratexpr(expr)) == expr


# -- hypothesis properties --------------------------------------------------

word_strategy = st.builds(
    Word,
    st.lists(st.sampled_from([1, -1, 2, -2]), max_size=2).map(tuple),
)


@st.composite
def expr_strategy(draw, depth=2):
    if depth == 0:
        words = draw(st.lists(word_strategy, min_size=1, max_size=2))
        return Finite(words)
    kind = draw(st.sampled_from(["fin", "union", "prod", "star"]))
    if kind == "fin":
        words = draw(st.lists(word_strategy, min_size=1, max_size=2))
        return Finite(words)
    if kind == "union":
        return Union(draw(expr_strategy(depth=depth - 1)), draw(expr_strategy(depth=depth - 1)))
    if kind == "prod":
        return Product(draw(expr_strategy(depth=depth - 1)), draw(expr_strategy(depth=depth - 1)))
    return Star(draw(expr_strategy(depth=depth - 1)))


@settings(max_examples=25, deadline=None)
@given(expr_strategy())
def test_enumeration_monotone_in_cap(expr):
    small = enumerate_bounded(expr, 3, slack=4)
    large = enumerate_bounded(expr, 5, slack=4)
    assert small <= large
    assert all(len(w) <= 3 for w in small)


@settings(max_examples=25, deadline=None)
@given(expr_strategy(), word_strategy)
def test_member_agrees_with_oracle_property(expr, w):
    if len(w) <= 3:
        assert member(expr, w) == (w in enumerate_bounded(expr, 3, slack=8))
