"""Verbal subsets of free groups and free products.

For a word ``w`` in variables ``x_1 … x_n``, the verbal subset of a group
``G`` is the set of values ``w(g_1, …, g_n)`` over all substitutions
``g_i ∈ G``.  This module enumerates values inside bounded balls, decides
membership where an exact criterion exists (single-power words via root
extraction, plus the abelianization obstruction), measures verbal-subgroup
length, computes the abelianized image, and classifies finitely generated
positive sub-semigroups by the shape of their supports.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iter_product
from typing import Iterable, Optional, Sequence

from freerat.freeprod import (
    FPElement,
    FreeProduct,
    Syllable,
    cyclic_form,
    fp_substitute,
    support,
    to_f2,
)
from freerat.gaps import FamilyReport, unbounded_family
from freerat.signs import is_positive, standard_sign
from freerat.words import (
    IDENTITY,
    Word,
    exponent_gcd,
    exponent_profile,
    root_extract,
    substitute,
)

_EVAL_BUDGET = 2_000_000
_LENGTH_BUDGET = 500_000


@dataclass(frozen=True)
class VerbalQuery:
    """A word with the substitution and product bounds used to explore it.

    ``substitution_cap`` bounds the letter length (syllable length and
    exponent magnitude, for free-product groups) of each substituted image;
    ``product_cap`` bounds the number of factors in verbal-subgroup products.
    ``group`` selects where values live: ``None`` means the free group F₂
    itself, a :class:`FreeProduct` means values are computed there.
    """

    w: Word
    substitution_cap: int
    product_cap: int = 2
    group: Optional[FreeProduct] = None

    def __post_init__(self):
        if not self.w.letters:
            raise ValueError("verbal queries need a nonidentity word")
        if self.substitution_cap < 0 or self.product_cap < 0:
            raise ValueError("caps must be nonnegative")

    @property
    def n_vars(self) -> int:
        return self.w.max_generator()


@lru_cache(maxsize=64)
def free_ball(cap: int, rank: int = 2) -> tuple[Word, ...]:
    """All reduced words of letter length <= cap, shortest first."""
    out = [IDENTITY]
    layer = [IDENTITY]
    for _ in range(cap):
        nxt = []
        for u in layer:
            last = u.letters[-1] if u.letters else 0
            for a in range(1, rank + 1):
                for s in (a, -a):
                    if s != -last:
                        nxt.append(Word(u.letters + (s,)))
        out.extend(nxt)
        layer = nxt
    return tuple(out)


def _fp_ball(group: FreeProduct, cap: int) -> tuple[FPElement, ...]:
    """Normal forms of syllable length <= cap.

    Exponents on infinite-cyclic factors are capped at ``cap`` in magnitude
    (finite factors contribute every nonzero residue), so this is a finite
    slice of the group rather than a metric ball.
    """
    exps = {}
    for fid, factor in group.factors.items():
        if factor.modulus is None:
            exps[fid] = [e for k in range(1, cap + 1) for e in (k, -k)]
        else:
            exps[fid] = list(range(1, factor.modulus))
    out = [group.identity]
    layer = [group.identity]
    for _ in range(cap):
        nxt = []
        for u in layer:
            last = u.syllables[-1][0] if u.syllables else None
            for fid in sorted(group.factors):
                if fid == last:
                    continue
                for e in exps[fid]:
                    nxt.append(group.element(u.syllables + ((fid, e),)))
        out.extend(nxt)
        layer = nxt
    return tuple(out)


def enumerate_values(query: VerbalQuery):
    """The set of values w(g₁, …, gₙ) with every image in the capped ball.

    Monotone in ``substitution_cap``.  Raises when the number of
    substitution tuples exceeds the evaluation budget.
    """
    w = query.w
    n = query.n_vars
    if query.group is None:
        ball: Sequence = free_ball(query.substitution_cap, 2)
    else:
        ball = _fp_ball(query.group, query.substitution_cap)
    if len(ball) ** n > _EVAL_BUDGET:
        raise ValueError(
            f"{len(ball)}^{n} substitution tuples exceed the evaluation budget"
        )
    if query.group is None:
        return frozenset(substitute(w, images) for images in iter_product(ball, repeat=n))
    return frozenset(fp_substitute(w, images) for images in iter_product(ball, repeat=n))


def _single_power(w: Word) -> Optional[tuple[int, int]]:
    """(variable index, signed exponent) when w is x_i^s, else None."""
    letters = set(w.letters)
    if len(letters) != 1:
        return None
    a = w.letters[0]
    return abs(a), len(w.letters) * (1 if a > 0 else -1)


@dataclass(frozen=True)
class Membership:
    """Three-valued membership verdict for g in w[F₂].

    ``verdict`` is "yes", "no" or "unknown"; "no" is only ever produced by
    an exact criterion (root extraction for single-power words, or the
    abelianization obstruction).  For "yes", ``witness`` holds images with
    ``substitute(w, witness) == g``.
    """

    verdict: str
    witness: Optional[tuple[Word, ...]]
    reason: str


def certify_nonvalue(w: Word, g: Word) -> Optional[dict]:
    """An exact proof that g is not a value of w, or None.

    Single-power words are decided completely by root extraction.  For the
    rest, the abelianized value set is e·ℤ² (e = exponent gcd), so an
    exponent profile outside that lattice is a proof; nothing else is.
    """
    sp = _single_power(w)
    if sp is not None:
        _, s = sp
        if root_extract(g, abs(s)) is None:
            return {"method": "power-root", "degree": abs(s)}
        return None
    e = exponent_gcd(w)
    profile = exponent_profile(g, 2)
    if e == 0:
        if any(profile):
            return {"method": "abelianization", "profile": list(profile), "modulus": 0}
        return None
    if any(c % e for c in profile):
        return {"method": "abelianization", "profile": list(profile), "modulus": e}
    return None


def is_value(query: VerbalQuery, g: Word) -> Membership:
    """Decide g ∈ w[F₂] within the query's bounds.

    Exact "yes" for single-power words (root extraction) and for any g
    found by the bounded substitution search; exact "no" only from
    :func:`certify_nonvalue`; otherwise "unknown".
    """
    if query.group is not None:
        raise ValueError("membership analysis is defined for free-group queries")
    w = query.w
    n = query.n_vars
    sp = _single_power(w)
    if sp is not None:
        i, s = sp
        root = root_extract(g, abs(s))
        if root is None:
            return Membership("no", None, "power-root")
        image = root if s > 0 else root.inv()
        witness = tuple(image if j == i else IDENTITY for j in range(1, n + 1))
        assert substitute(w, witness) == g
        return Membership("yes", witness, "power-root")
    cert = certify_nonvalue(w, g)
    if cert is not None:
        return Membership("no", None, cert["method"])
    ball = free_ball(query.substitution_cap, 2)
    if len(ball) ** n > _LENGTH_BUDGET:
        raise ValueError(
            f"{len(ball)}^{n} substitution tuples exceed the search budget"
        )
    for images in iter_product(ball, repeat=n):
        if substitute(w, images) == g:
            return Membership("yes", images, "search")
    return Membership("unknown", None, "search-exhausted")


def w_length(query: VerbalQuery, g: Word) -> Optional[int]:
    """Length of g as a product of values of w and their inverses.

    The identity has length 0.  Generators are the values inside the
    substitution ball, so for other elements the result is the exact length
    relative to that capped generating set (single-power words are special
    cased exactly at length 1 via root extraction).  None means g was not
    reached within ``product_cap`` factors.
    """
    if query.group is not None:
        raise ValueError("length analysis is defined for free-group queries")
    if g == IDENTITY:
        return 0
    sp = _single_power(query.w)
    if sp is not None and root_extract(g, abs(sp[1])) is not None:
        return 1
    values = enumerate_values(query)
    gens = sorted(values | {v.inv() for v in values})
    dist = {IDENTITY: 0}
    frontier = [IDENTITY]
    for d in range(1, query.product_cap + 1):
        nxt = []
        for u in frontier:
            for v in gens:
                h = u * v
                if h not in dist:
                    dist[h] = d
                    nxt.append(h)
        if g in dist:
            return dist[g]
        if len(dist) > _LENGTH_BUDGET:
            raise ValueError("verbal length search exceeded the budget")
        frontier = nxt
    return None


@dataclass(frozen=True)
class AbelianizedVerbal:
    """Image of the verbal subgroup in ℤ^rank: the lattice e·ℤ^rank.

    ``index`` is e^rank for e >= 1 and None (infinite) for e = 0.
    """

    exponent: int
    rank: int
    index: Optional[int]


def abelianized_verbal(w: Word, rank: int = 2) -> AbelianizedVerbal:
    if rank < w.max_generator():
        raise ValueError("rank below the number of variables in w")
    e = exponent_gcd(w)
    return AbelianizedVerbal(e, rank, e**rank if e else None)


# -- support dichotomy for positive sub-semigroups --------------------------


@dataclass(frozen=True)
class SingleAxisCase:
    """Every bounded product is a power of one factor generator."""

    axis: str
    probe_depth: int


@dataclass(frozen=True)
class CommonSupportCase:
    """All bounded products share one cyclic support; K is its closure
    under splitting end syllables into positive parts."""

    syllables: frozenset[Syllable]
    probe_depth: int


@dataclass(frozen=True)
class RefutedCase:
    """An explicit element of p·E*·q that is provably not a value of w.

    ``exact`` is True when the certificate is a root-extraction or
    abelianization proof; otherwise the gap-growth evidence is heuristic.
    """

    witness: FPElement
    family: FamilyReport
    certificate: dict
    exact: bool


def _divisor_closure(group: FreeProduct, syllables: Iterable[Syllable]) -> frozenset[Syllable]:
    """Close a syllable set under splitting (f, s) into positive (f, i)·(f, j)."""
    out = set(syllables)
    work = list(out)
    while work:
        fid, s = work.pop()
        factor = group.factors[fid]
        if factor.modulus is None:
            parts = range(1, s)
        else:
            parts = (i for i in range(1, factor.modulus) if (s - i) % factor.modulus)
        for i in parts:
            j = s - i if factor.modulus is None else (s - i) % factor.modulus
            for part in ((fid, i), (fid, j)):
                if part not in out:
                    out.add(part)
                    work.append(part)
    return frozenset(out)


def _bounded_products(elements: Sequence[FPElement], depth: int) -> set[FPElement]:
    group = elements[0].group
    out: set[FPElement] = set()
    layer = {group.identity}
    for _ in range(depth):
        layer = {u * g for u in layer for g in elements}
        out |= layer
        if len(out) > 100_000:
            raise ValueError("product probe exceeded the budget")
    out.discard(group.identity)
    return out


def support_dichotomy_check(
    E: Iterable[FPElement],
    p: FPElement,
    q: FPElement,
    w: Word,
    budget: int = 3,
):
    """Classify the positive sandwich p·E*·q against the values of w.

    Products of up to ``budget`` factors of E are enumerated and inspected:
    all single syllables on one axis gives :class:`SingleAxisCase`; all
    cyclic cores of length >= 2 with one common support gives
    :class:`CommonSupportCase` (consistency holds up to the probe depth
    only — neither case asserts containment in w[F₂]).  Anything else
    yields a growing-gap family inside p·E*·q and a :class:`RefutedCase`
    carrying a member that is provably not a value when an exact
    certificate exists.
    """
    elements = sorted({g for g in E if g.syllables})
    if not elements:
        raise ValueError("need at least one nonidentity generator")
    group = elements[0].group
    sign = standard_sign(group)
    for g in (*elements, p, q):
        if not is_positive(g, sign):
            raise ValueError(f"dichotomy needs positive inputs, got {g!r}")
    if exponent_gcd(w) < 2:
        raise ValueError("dichotomy targets words with exponent gcd >= 2")
    if budget < 2:
        raise ValueError("probe depth must be at least 2")

    probe = _bounded_products(elements, budget)
    if all(len(u) == 1 for u in probe):
        axes = {u.syllables[0][0] for u in probe}
        if len(axes) == 1:
            return SingleAxisCase(axes.pop(), budget)
    cores = {u: cyclic_form(u) for u in probe}
    supports = {support(core) for core in cores.values()}
    if all(len(core) >= 2 for core in cores.values()) and len(supports) == 1:
        common = supports.pop()
        return CommonSupportCase(_divisor_closure(group, common), budget)

    return _refute_dichotomy(probe, p, q, w, budget)


def _refute_dichotomy(
    probe: set[FPElement], p: FPElement, q: FPElement, w: Word, budget: int
) -> RefutedCase:
    e = exponent_gcd(w)
    for v in sorted(u for u in probe if len(cyclic_form(u)) >= 2):
        for u in sorted(probe):
            if support(cyclic_form(u)) - support(cyclic_form(v)):
                family = unbounded_family(p, u, v, q, n_max=max(4, budget), e=e)
                return _certified_member(family, w)
    raise RuntimeError("no refuting pair found; raise the probe budget")


def _certified_member(family: FamilyReport, w: Word) -> RefutedCase:
    if family.members[0].group.is_free():
        for member in family.members:
            cert = certify_nonvalue(w, to_f2(member))
            if cert is not None:
                return RefutedCase(member, family, cert, exact=True)
    peak = max(range(len(family.members)), key=lambda i: family.gammas[i])
    cert = {
        "method": "gap-growth",
        "gammas": list(family.gammas),
        "gap_base": list(family.b),
    }
    return RefutedCase(family.members[peak], family, cert, exact=False)
