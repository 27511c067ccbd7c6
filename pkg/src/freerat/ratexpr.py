"""Rational-set expressions over a free group.

A :class:`RatExpr` is a tree of Finite / Union / Product / Star nodes with a
cached structural complexity: 0 for Finite leaves, otherwise one more than
the largest child complexity.  Denotations are explored exactly at desk
scale by :func:`enumerate_bounded`, which unrolls stars with a working
length bound slightly above the requested cap so that products whose
factors overshoot and cancel back down are still found.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from freerat.words import IDENTITY, Word, format_word, parse_word, substitute


class RatExpr:
    """Base class; nodes are immutable and hashable."""

    complexity: int

    def __mul__(self, other: "RatExpr") -> "RatExpr":
        return Product(self, other)

    def __or__(self, other: "RatExpr") -> "RatExpr":
        return Union(self, other)

    def star(self) -> "RatExpr":
        return Star(self)

    def __repr__(self) -> str:
        return f"RatExpr({format_ratexpr(self)!r})"


@dataclass(frozen=True, repr=False)
class Finite(RatExpr):
    elements: frozenset[Word]
    complexity: int = field(init=False, default=0, compare=False)

    def __init__(self, elements: Iterable[Word] = ()):
        object.__setattr__(self, "elements", frozenset(elements))
        object.__setattr__(self, "complexity", 0)

    def sorted_elements(self) -> list[Word]:
        return sorted(self.elements)


@dataclass(frozen=True, repr=False)
class Union(RatExpr):
    left: RatExpr
    right: RatExpr
    complexity: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "complexity", 1 + max(self.left.complexity, self.right.complexity)
        )


@dataclass(frozen=True, repr=False)
class Product(RatExpr):
    left: RatExpr
    right: RatExpr
    complexity: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "complexity", 1 + max(self.left.complexity, self.right.complexity)
        )


@dataclass(frozen=True, repr=False)
class Star(RatExpr):
    inner: RatExpr
    complexity: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "complexity", 1 + self.inner.complexity)


EMPTY = Finite()
EPSILON = Finite([IDENTITY])


def complexity(expr: RatExpr) -> int:
    return expr.complexity


def finite(*words: str | Word) -> Finite:
    """Convenience leaf constructor accepting words or word-grammar text."""
    return Finite(w if isinstance(w, Word) else parse_word(w) for w in words)


def leaf_words(expr: RatExpr) -> set[Word]:
    """All words appearing in Finite leaves."""
    if isinstance(expr, Finite):
        return set(expr.elements)
    if isinstance(expr, (Union, Product)):
        return leaf_words(expr.left) | leaf_words(expr.right)
    if isinstance(expr, Star):
        return leaf_words(expr.inner)
    raise TypeError(f"not a RatExpr: {expr!r}")


def max_rank(expr: RatExpr) -> int:
    return max((w.max_generator() for w in leaf_words(expr)), default=0)


# -- bounded enumeration ---------------------------------------------------


def _product_join(left: set[Word], right: set[Word], cap: int) -> set[Word]:
    """{u·v : |u·v| <= cap}, joined via an index on right prefixes so that
    only pairs capable of cancelling down under the cap are multiplied."""
    by_prefix: dict[tuple[int, tuple[int, ...]], list[Word]] = {}
    for v in right:
        for k in range(len(v) + 1):
            by_prefix.setdefault((k, v.letters[:k]), []).append(v)
    for bucket in by_prefix.values():
        bucket.sort(key=len)
    out: set[Word] = set()
    for u in left:
        n = len(u)
        for k in range(n + 1):
            suffix_inv = tuple(-a for a in reversed(u.letters[n - k :]))
            bucket = by_prefix.get((k, suffix_inv))
            if bucket is None:
                continue
            for v in bucket:
                if n + len(v) - 2 * k > cap:
                    break  # sorted by length; no later v fits
                prod = u * v
                if len(prod) <= cap:
                    out.add(prod)
    return out


def enumerate_bounded(expr: RatExpr, max_len: int, slack: Optional[int] = None) -> set[Word]:
    """All denoted elements of reduced length <= max_len.

    Stars are unrolled breadth-first keeping partial products up to
    ``max_len + slack`` letters; the slack absorbs factor pairs that
    overshoot the cap before cancelling back under it.  A product can
    shrink by at most the shorter factor's length, so for leaf words of
    length L a slack of 2L covers every single-step overshoot; the default
    uses that bound.
    """
    if slack is None:
        max_leaf = max((len(w) for w in leaf_words(expr)), default=0)
        slack = 2 * max_leaf + 2
    work_cap = max_len + slack
    result = _enumerate(expr, work_cap)
    return {w for w in result if len(w) <= max_len}


def _enumerate(expr: RatExpr, cap: int) -> set[Word]:
    if isinstance(expr, Finite):
        return {w for w in expr.elements if len(w) <= cap}
    if isinstance(expr, Union):
        return _enumerate(expr.left, cap) | _enumerate(expr.right, cap)
    if isinstance(expr, Product):
        return _product_join(_enumerate(expr.left, cap), _enumerate(expr.right, cap), cap)
    if isinstance(expr, Star):
        base = _enumerate(expr.inner, cap)
        base.discard(IDENTITY)
        seen: set[Word] = {IDENTITY}
        frontier: set[Word] = {IDENTITY}
        while frontier:
            grown = _product_join(frontier, base, cap)
            frontier = grown - seen
            seen |= frontier
        return seen
    raise TypeError(f"not a RatExpr: {expr!r}")


# -- structure-preserving transforms ---------------------------------------


def conjugate_expr(expr: RatExpr, g: Word) -> RatExpr:
    """An expression for g⁻¹·L·g with the same structural complexity,
    obtained by conjugating every Finite leaf elementwise."""
    out = _map_leaves(expr, lambda w: g.inv() * w * g)
    assert out.complexity == expr.complexity
    return out


def hom_image(expr: RatExpr, images: Sequence[Word]) -> RatExpr:
    """Image under the homomorphism sending generator i to images[i-1]."""
    out = _map_leaves(expr, lambda w: substitute(w, images))
    assert out.complexity <= expr.complexity
    return out


def _map_leaves(expr: RatExpr, f: Callable[[Word], Word]) -> RatExpr:
    if isinstance(expr, Finite):
        return Finite(f(w) for w in expr.elements)
    if isinstance(expr, Union):
        return Union(_map_leaves(expr.left, f), _map_leaves(expr.right, f))
    if isinstance(expr, Product):
        return Product(_map_leaves(expr.left, f), _map_leaves(expr.right, f))
    if isinstance(expr, Star):
        return Star(_map_leaves(expr.inner, f))
    raise TypeError(f"not a RatExpr: {expr!r}")


# -- standard form ---------------------------------------------------------


@dataclass(frozen=True)
class Summand:
    """One alternating product a₁E₁*a₂…a_tE_t*a_{t+1}."""

    coefficients: tuple[Word, ...]  # length = len(stars) + 1
    stars: tuple[RatExpr, ...]

    def __post_init__(self):
        if len(self.coefficients) != len(self.stars) + 1:
            raise ValueError("need one more coefficient than starred factors")

    def as_expr(self) -> RatExpr:
        expr: RatExpr = Finite([self.coefficients[0]])
        for star_base, coeff in zip(self.stars, self.coefficients[1:]):
            expr = Product(expr, Product(Star(star_base), Finite([coeff])))
        return expr


@dataclass(frozen=True)
class StandardForm:
    summands: tuple[Summand, ...]

    def as_expr(self) -> RatExpr:
        if not self.summands:
            return EMPTY
        expr = self.summands[0].as_expr()
        for s in self.summands[1:]:
            expr = Union(expr, s.as_expr())
        return expr


def standard_form(expr: RatExpr) -> StandardForm:
    """Distribute unions out of products and split Finite leaves, leaving
    star bases untouched."""
    return StandardForm(tuple(_summands(expr)))


def _summands(expr: RatExpr) -> list[Summand]:
    if isinstance(expr, Finite):
        return [Summand((g,), ()) for g in sorted(expr.elements)]
    if isinstance(expr, Union):
        return _summands(expr.left) + _summands(expr.right)
    if isinstance(expr, Product):
        out = []
        for a in _summands(expr.left):
            for b in _summands(expr.right):
                glued = a.coefficients[:-1] + (a.coefficients[-1] * b.coefficients[0],)
                out.append(Summand(glued + b.coefficients[1:], a.stars + b.stars))
        return out
    if isinstance(expr, Star):
        return [Summand((IDENTITY, IDENTITY), (expr.inner,))]
    raise TypeError(f"not a RatExpr: {expr!r}")


# -- s-expression text form ------------------------------------------------


def parse_ratexpr(text: str) -> RatExpr:
    """Parse `(fin ...)`, `(union e1 e2)`, `(prod e1 e2)`, `(star e)`.

    Inside `fin`, an element is a single word atom or a parenthesized atom
    sequence: `(fin x1 (x2 x1^-1))` denotes {x₁, x₂x₁⁻¹}.  Errors carry the
    1-based token position.
    """
    raw = text.replace("(", " ( ").replace(")", " ) ").split()
    tokens = [(i, t) for i, t in enumerate(raw, start=1)]
    expr, rest = _parse_node(tokens)
    if rest:
        pos, tok = rest[0]
        raise ValueError(f"trailing tokens at position {pos}: {tok!r}")
    return expr


_Tokens = list[tuple[int, str]]


def _parse_node(tokens: _Tokens) -> tuple[RatExpr, _Tokens]:
    if not tokens:
        raise ValueError("unexpected end of expression")
    pos, tok = tokens[0]
    if tok != "(":
        raise ValueError(f"expected '(' at position {pos}, got {tok!r}")
    if len(tokens) < 2:
        raise ValueError(f"missing operator after '(' at position {pos}")
    head_pos, head = tokens[1]
    rest = tokens[2:]
    if head == "fin":
        words = []
        while rest and rest[0][1] != ")":
            if rest[0][1] == "(":
                close = next((i for i, (_, t) in enumerate(rest) if t == ")"), None)
                if close is None:
                    raise ValueError(f"missing ')' after position {rest[0][0]}")
                words.append(parse_word(" ".join(t for _, t in rest[1:close])))
                rest = rest[close + 1 :]
            else:
                words.append(parse_word(rest[0][1]))
                rest = rest[1:]
        if not rest:
            raise ValueError(f"missing ')' for fin at position {head_pos}")
        return Finite(words), rest[1:]
    if head in ("union", "prod"):
        left, rest = _parse_node(rest)
        right, rest = _parse_node(rest)
        if not rest or rest[0][1] != ")":
            raise ValueError(
                f"({head} ...) at position {head_pos} takes exactly two sub-expressions"
            )
        cls = Union if head == "union" else Product
        return cls(left, right), rest[1:]
    if head == "star":
        inner, rest = _parse_node(rest)
        if not rest or rest[0][1] != ")":
            raise ValueError(
                f"(star ...) at position {head_pos} takes exactly one sub-expression"
            )
        return Star(inner), rest[1:]
    raise ValueError(f"unknown operator at position {head_pos}: {head!r}")


def format_ratexpr(expr: RatExpr) -> str:
    if isinstance(expr, Finite):
        parts = []
        for w in expr.sorted_elements():
            text = format_word(w)
            parts.append(f"({text})" if " " in text else text)
        return f"(fin {' '.join(parts)})" if parts else "(fin)"
    if isinstance(expr, Union):
        return f"(union {format_ratexpr(expr.left)} {format_ratexpr(expr.right)})"
    if isinstance(expr, Product):
        return f"(prod {format_ratexpr(expr.left)} {format_ratexpr(expr.right)})"
    if isinstance(expr, Star):
        return f"(star {format_ratexpr(expr.inner)})"
    raise TypeError(f"not a RatExpr: {expr!r}")
