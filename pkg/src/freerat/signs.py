"""Sign functions on free products, the constructive product split, and
rewriting rational expressions so that every leaf is positive.

A sign model assigns each cyclic factor a positivity rule: the infinite
cyclic factor is positive on nonnegative exponents; a finite cyclic factor
carries a configured submonoid of residues.  An element of the free
product is positive when every syllable of its normal form is.

``split_product`` realizes, for finite sets with S·T positive, the
construction producing a single element u with S·u⁻¹ and u·T positive.
``positivize`` / ``positivize_total`` rewrite a rational expression over
F₂ (viewed as ℤ∗ℤ) into one denoting the same set whose Finite leaves
contain only positive words, recursing on structural complexity and
verifying every claimed inclusion exactly on saturated acceptors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from freerat.automata import (
    difference,
    enumerate_accepted,
    is_empty,
    positive_universe,
    reduced_acceptor,
    shortest_accepted,
)
from freerat.freeprod import (
    FPElement,
    FreeProduct,
    FREE_ZZ,
    format_fp,
    from_f2,
    reversal,
    to_f2,
)
from freerat.ratexpr import (
    EMPTY,
    Finite,
    Product,
    RatExpr,
    Star,
    Union,
    conjugate_expr,
    enumerate_bounded,
)
from freerat.words import IDENTITY, Word, format_word


class NotPositiveError(ValueError):
    """A set required to be positive has a negative member."""

    def __init__(self, message: str, witness):
        super().__init__(f"{message}: {witness!r}")
        self.witness = witness


# -- sign models -----------------------------------------------------------


@dataclass(frozen=True)
class SignModel:
    """Per-factor positivity over a two-factor free product.

    ``positive_sets`` maps a factor id to None for the infinite cyclic
    rule (exponent >= 0) or, for a finite cyclic factor, to the set of
    positive residues, which must contain 0 and be closed under addition
    modulo the factor order.
    """

    group: FreeProduct
    positive_sets: tuple[tuple[str, Optional[frozenset[int]]], ...]

    def __post_init__(self):
        rules = dict(self.positive_sets)
        for fid, factor in self.group.factors.items():
            rule = rules.get(fid)
            if factor.modulus is None:
                if rule is not None:
                    raise ValueError(f"factor {fid!r} is infinite cyclic; rule must be None")
            else:
                if rule is None:
                    raise ValueError(f"factor {fid!r} needs an explicit positive set")
                if 0 not in rule:
                    raise ValueError(f"positive set of {fid!r} must contain the identity")
                m = factor.modulus
                for x in rule:
                    for y in rule:
                        if (x + y) % m not in rule:
                            raise ValueError(
                                f"positive set of {fid!r} is not closed under product"
                            )

    def rule(self, factor_id: str) -> Optional[frozenset[int]]:
        return dict(self.positive_sets)[factor_id]

    def factor_positive(self, factor_id: str, exponent: int) -> bool:
        """Positivity of a single factor element (exponent 0 = identity)."""
        factor = self.group.factors[factor_id]
        if factor.modulus is None:
            return exponent >= 0
        return factor.canon(exponent) in self.rule(factor_id)


def standard_sign(group: FreeProduct) -> SignModel:
    """Nonnegative exponents on ℤ factors; everything positive on finite
    cyclic factors (the only rule valid for every finite cyclic group)."""
    rules = []
    for fid, factor in group.factors.items():
        if factor.modulus is None:
            rules.append((fid, None))
        else:
            rules.append((fid, frozenset(range(factor.modulus))))
    return SignModel(group, tuple(rules))


STANDARD_F2_SIGN = standard_sign(FREE_ZZ)


def is_positive(u: FPElement, sign: SignModel) -> bool:
    if u.group != sign.group:
        raise ValueError("element does not belong to the sign model's group")
    return all(sign.factor_positive(fid, exp) for fid, exp in u.syllables)


def first_negative_index(u: FPElement, sign: SignModel) -> int:
    """1-based index of the first negative syllable; 0 when positive."""
    for idx, (fid, exp) in enumerate(u.syllables, start=1):
        if not sign.factor_positive(fid, exp):
            return idx
    return 0


def last_negative_index(u: FPElement, sign: SignModel) -> int:
    """1-based index of the last negative syllable; 0 when positive."""
    out = 0
    for idx, (fid, exp) in enumerate(u.syllables, start=1):
        if not sign.factor_positive(fid, exp):
            out = idx
    return out


# -- the constructive split ------------------------------------------------


@dataclass(frozen=True)
class SplitTrace:
    """Audit record of one split: S·u⁻¹ and u·T are positive."""

    i0: int
    j0: int
    c: FPElement
    b0: FPElement
    u: FPElement
    case: str  # both-positive | case-1 | case-2 | mirrored


def _split_factor_element(
    sign: SignModel, factor_id: str, s_exps: list[int], t_exps: list[int]
) -> int:
    """An exponent β with s−β and β+t positive in the factor for all
    constraints; raises if the factor rule admits none."""
    factor = sign.group.factors[factor_id]
    if factor.modulus is None:
        lo = max((-t for t in t_exps), default=None)
        hi = min(s_exps, default=None)
        if hi is not None and lo is not None and lo > hi:
            raise RuntimeError("no splitting exponent exists for the ℤ factor")
        if hi is not None:
            return hi
        if lo is not None:
            return lo
        return 0
    rule = sign.rule(factor_id)
    m = factor.modulus
    for r in range(m):
        if all((s - r) % m in rule for s in s_exps) and all(
            (r + t) % m in rule for t in t_exps
        ):
            return r
    raise RuntimeError("the finite factor's sign rule admits no splitting element")


def split_product(
    S: Iterable[FPElement], T: Iterable[FPElement], sign: SignModel
) -> SplitTrace:
    """Given finite nonempty S, T with every product s·t positive, produce
    u with S·u⁻¹ and u·T positive, following the cancellation analysis of
    the common prefix c before the deepest surviving negative syllable."""
    S, T = frozenset(S), frozenset(T)
    if not S or not T:
        raise ValueError("split_product needs non-empty S and T")
    group = sign.group
    for s in sorted(S):
        for t in sorted(T):
            if not is_positive(s * t, sign):
                raise NotPositiveError(
                    "S·T has a non-positive product", (s, t)
                )

    i_vals = [
        len(u) - first_negative_index(u, sign) + 1
        for u in S
        if not is_positive(u, sign)
    ]
    j_vals = [last_negative_index(v, sign) for v in T if not is_positive(v, sign)]
    i0 = max(i_vals, default=0)
    j0 = max(j_vals, default=0)

    if i0 == 0 and j0 == 0:
        return SplitTrace(0, 0, group.identity, group.identity, group.identity, "both-positive")

    if i0 > j0:
        inner = split_product(
            [reversal(t) for t in T], [reversal(s) for s in S], sign
        )
        u = reversal(inner.u).inv()
        trace = SplitTrace(i0, j0, inner.c, inner.b0, u, "mirrored")
        _verify_split(S, T, trace, sign)
        return trace

    pivot = min(
        v for v in T if not is_positive(v, sign) and last_negative_index(v, sign) == j0
    )
    c = group.element(pivot.syllables[: j0 - 1])
    factor_id = pivot.syllables[j0 - 1][0]
    c_inv = c.inv()

    s_exps = []
    for u_ in sorted(S):
        tail = u_ * c
        if tail and tail.syllables[-1][0] == factor_id:
            s_exps.append(tail.syllables[-1][1])
        else:
            s_exps.append(0)  # u⁻¹'s leading factor element survives bare
    t_exps = []
    for v in sorted(T):
        head = c_inv * v
        if head and head.syllables[0][0] == factor_id:
            t_exps.append(head.syllables[0][1])
        else:
            t_exps.append(0)

    beta = _split_factor_element(sign, factor_id, s_exps, t_exps)
    b0 = group.syllable(factor_id, beta)
    u = b0 * c_inv
    trace = SplitTrace(i0, j0, c, b0, u, "case-1" if i0 == j0 else "case-2")
    _verify_split(S, T, trace, sign)
    return trace


def _verify_split(S, T, trace: SplitTrace, sign: SignModel) -> None:
    u_inv = trace.u.inv()
    for s in S:
        if not is_positive(s * u_inv, sign):
            raise RuntimeError(
                f"split contract failed: {format_fp(s)}·u⁻¹ is not positive"
            )
    for t in T:
        if not is_positive(trace.u * t, sign):
            raise RuntimeError(
                f"split contract failed: u·{format_fp(t)} is not positive"
            )


# -- exact positivity of rational subsets of F2 ----------------------------


def positive_witness(expr: RatExpr) -> Optional[Word]:
    """A shortest non-positive member of the denoted set, or None."""
    bad = difference(reduced_acceptor(expr), positive_universe(2))
    s = shortest_accepted(bad)
    return None if s is None else Word(s)


def _sandwich(left: Word, expr: RatExpr, right: Word) -> RatExpr:
    out: RatExpr = expr
    if right != IDENTITY:
        out = Product(out, Finite([right]))
    if left != IDENTITY:
        out = Product(Finite([left]), out)
    return out


# -- positivization --------------------------------------------------------


@dataclass
class Positivized:
    expr: RatExpr
    trace: dict


_ENUM_STEPS = (6, 10, 14)
_WINDOW_STEPS = 3


def positivize(
    expr: RatExpr,
    left: Word = IDENTITY,
    right: Word = IDENTITY,
    *,
    depth_cap: int = 48,
) -> Positivized:
    """An expression with positive leaves denoting left·L·right.

    Requires left·L·right to be a positive subset; checked exactly and a
    shortest negative member reported otherwise."""
    witness = positive_witness(_sandwich(left, expr, right))
    if witness is not None:
        raise NotPositiveError("the sandwiched set is not positive", witness)
    out, trace = _positivize(expr, left, right, depth_cap)
    return Positivized(out, trace)


def positivize_total(expr: RatExpr, *, depth_cap: int = 48) -> Positivized:
    """An expression with positive leaves for a set already positive."""
    return positivize(expr, IDENTITY, IDENTITY, depth_cap=depth_cap)


def _positivize(expr: RatExpr, left: Word, right: Word, depth: int):
    if depth <= 0:
        raise RuntimeError("positivization recursion exceeded the depth cap")

    if isinstance(expr, Finite):
        elements = sorted(left * g * right for g in expr.elements)
        for g in elements:
            if not g.is_positive():
                raise NotPositiveError("finite leaf is not positive", g)
        return Finite(elements), {
            "case": "finite",
            "elements": [format_word(g) for g in elements],
        }

    if isinstance(expr, Union):
        e1, t1 = _positivize(expr.left, left, right, depth - 1)
        e2, t2 = _positivize(expr.right, left, right, depth - 1)
        return Union(e1, e2), {"case": "union", "children": [t1, t2]}

    if isinstance(expr, Product):
        return _positivize_product(expr.left, expr.right, left, right, depth)

    if isinstance(expr, Star):
        return _positivize_star(expr.inner, left, right, depth)

    raise TypeError(f"not a RatExpr: {expr!r}")


def _positivize_product(l1: RatExpr, l2: RatExpr, left: Word, right: Word, depth: int):
    if is_empty(reduced_acceptor(l1)) or is_empty(reduced_acceptor(l2)):
        return EMPTY, {"case": "empty-product"}
    last_error: Optional[Exception] = None
    for cap in _ENUM_STEPS:
        s_words = enumerate_bounded(_sandwich(left, l1, IDENTITY), cap)
        t_words = enumerate_bounded(_sandwich(IDENTITY, l2, right), cap)
        if not s_words or not t_words:
            continue
        try:
            split = split_product(
                [from_f2(w) for w in s_words],
                [from_f2(w) for w in t_words],
                STANDARD_F2_SIGN,
            )
        except (RuntimeError, NotPositiveError) as err:
            last_error = err
            continue
        mid = to_f2(split.u)
        if positive_witness(_sandwich(left, l1, mid.inv())) is not None:
            continue
        if positive_witness(_sandwich(mid, l2, right)) is not None:
            continue
        e1, t1 = _positivize(l1, left, mid.inv(), depth - 1)
        e2, t2 = _positivize(l2, mid, right, depth - 1)
        return Product(e1, e2), {
            "case": "product",
            "middle": format_word(mid),
            "split_case": split.case,
            "sample_cap": cap,
            "children": [t1, t2],
        }
    raise RuntimeError(
        f"no middle element found for the product split ({last_error})"
    )


def _positivize_star(l1: RatExpr, left: Word, right: Word, depth: int):
    w = left * right
    l2 = conjugate_expr(l1, right)
    witness = positive_witness(l2)

    if witness is None:
        inner, t_in = _positivize(l2, IDENTITY, IDENTITY, depth - 1)
        starred = Star(inner)
        if w == IDENTITY:
            return starred, {"case": "star-positive", "child": t_in}
        return Product(Finite([w]), starred), {
            "case": "star-positive",
            "front": format_word(w),
            "child": t_in,
        }

    acc = reduced_acceptor(l2)
    bad = difference(acc, positive_universe(2))
    window = min(2 * acc.n_states, 12)
    last_error: Optional[Exception] = None
    for _ in range(_WINDOW_STEPS):
        try:
            return _star_conjugate(l2, w, bad, window, acc.n_states, depth)
        except _RetryWindow as err:
            last_error = err
            window += 4
    raise RuntimeError(
        f"no conforming deepest negative member within the search window ({last_error})"
    )


class _RetryWindow(Exception):
    pass


def _star_conjugate(l2, w: Word, bad, window: int, n_states: int, depth: int):
    group = FREE_ZZ
    best = None  # (index, FPElement, Word)
    for s in enumerate_accepted(bad, window):
        cand = Word(s)
        fp = from_f2(cand)
        idx = last_negative_index(fp, STANDARD_F2_SIGN)
        if best is None or idx > best[0]:
            best = (idx, fp, cand)
    if best is None:
        raise _RetryWindow("no negative member found in the window")
    i, lf, l_word = best
    factor_id, beta = lf.syllables[i - 1]
    # the positive suffix shared by every member: (l₁…l_{i−1})⁻¹
    sigma = group.element((f, -k) for f, k in reversed(lf.syllables[: i - 1]))
    if not is_positive(sigma, STANDARD_F2_SIGN):
        raise _RetryWindow("shared suffix of the candidate is not positive")
    b0 = group.syllable(factor_id, -beta)
    r = b0 * sigma
    r_word = to_f2(r)
    w_front = w * r_word.inv()
    if not w_front.is_positive():
        raise _RetryWindow("front coefficient w·r⁻¹ is not positive")
    l3 = conjugate_expr(l2, r_word.inv())  # denotes r·L₂·r⁻¹
    if positive_witness(l3) is not None:
        raise _RetryWindow("conjugated star base is not positive")
    inner, t_in = _positivize(l3, IDENTITY, IDENTITY, depth - 1)
    out = Product(Star(inner), Finite([r_word]))
    if w_front != IDENTITY:
        out = Product(Finite([w_front]), out)
    return out, {
        "case": "star-conjugated",
        "window": window,
        "acceptor_states": n_states,
        "deepest_negative": format_word(l_word),
        "negative_index": i,
        "b0_exponent": -beta,
        "conjugator": format_word(r_word),
        "front": format_word(w_front),
        "child": t_in,
    }
