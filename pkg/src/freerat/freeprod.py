"""Free products G = A ∗ B of two cyclic groups (ℤ or ℤ/m).

Elements are kept in alternating-syllable normal form: a sequence of
(factor_id, exponent) pairs with adjacent pairs from different factors and
no identity exponents.  Equality of normal forms is equality in the group.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from freerat.words import Word

Syllable = tuple[str, int]  # (factor_id, exponent), factor_id in {"a", "b"}


@dataclass(frozen=True)
class FactorModel:
    """One cyclic factor: ℤ when modulus is None, else ℤ/modulus."""

    factor_id: str
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.factor_id not in ("a", "b"):
            raise ValueError("factor_id must be 'a' or 'b'")
        if self.modulus is not None and self.modulus < 2:
            raise ValueError("finite cyclic factor needs modulus >= 2")

    def canon(self, exponent: int) -> int:
        """Canonical exponent: 0 means the factor identity."""
        return exponent if self.modulus is None else exponent % self.modulus


class FreeProduct:
    """The group A ∗ B; acts as the factory for its elements."""

    def __init__(self, a: Optional[int] = None, b: Optional[int] = None):
        self.factors = {"a": FactorModel("a", a), "b": FactorModel("b", b)}

    @property
    def moduli(self) -> tuple[Optional[int], Optional[int]]:
        return (self.factors["a"].modulus, self.factors["b"].modulus)

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeProduct) and self.moduli == other.moduli

    def __hash__(self) -> int:
        return hash(("FreeProduct", self.moduli))

    def __repr__(self) -> str:
        def name(m):
            return "Z" if m is None else f"Z/{m}"

        return f"FreeProduct({name(self.moduli[0])} * {name(self.moduli[1])})"

    def element(self, syllables: Iterable[Syllable] = ()) -> "FPElement":
        return FPElement(self, syllables)

    @property
    def identity(self) -> "FPElement":
        return FPElement(self, ())

    def syllable(self, factor_id: str, exponent: int) -> "FPElement":
        return FPElement(self, ((factor_id, exponent),))

    def is_free(self) -> bool:
        return self.moduli == (None, None)


class FPElement:
    """A free-product element in normal form.  Immutable and hashable."""

    __slots__ = ("group", "syllables")

    def __init__(self, group: FreeProduct, syllables: Iterable[Syllable] = ()):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "syllables", _normalize(group, syllables))

    def __setattr__(self, name, value):
        raise AttributeError("FPElement is immutable")

    def __mul__(self, other: "FPElement") -> "FPElement":
        if not isinstance(other, FPElement):
            return NotImplemented
        if self.group != other.group:
            raise ValueError("elements of different free products")
        return FPElement(self.group, self.syllables + other.syllables)

    def inv(self) -> "FPElement":
        return FPElement(
            self.group, tuple((f, -k) for f, k in reversed(self.syllables))
        )

    __invert__ = inv

    def __pow__(self, n: int) -> "FPElement":
        if n < 0:
            return self.inv() ** (-n)
        result = self.group.identity
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __len__(self) -> int:
        return len(self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __iter__(self) -> Iterator[Syllable]:
        return iter(self.syllables)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FPElement)
            and self.group == other.group
            and self.syllables == other.syllables
        )

    def __hash__(self) -> int:
        return hash(("FPElement", self.group.moduli, self.syllables))

    def __lt__(self, other: "FPElement") -> bool:
        return (len(self.syllables), self.syllables) < (
            len(other.syllables),
            other.syllables,
        )

    def __repr__(self) -> str:
        return f"FPElement({format_fp(self)!r})"


def _normalize(group: FreeProduct, syllables: Iterable[Syllable]) -> tuple[Syllable, ...]:
    out: list[Syllable] = []
    for f, k in syllables:
        model = group.factors.get(f)
        if model is None:
            raise ValueError(f"unknown factor id {f!r}")
        k = model.canon(k)
        if k == 0:
            continue
        if out and out[-1][0] == f:
            merged = model.canon(out[-1][1] + k)
            out.pop()
            if merged != 0:
                out.append((f, merged))
        else:
            out.append((f, k))
    return tuple(out)


def syllable_length(u: FPElement) -> int:
    return len(u.syllables)


def support(u: FPElement) -> frozenset[Syllable]:
    """The set of distinct syllables in the normal form."""
    return frozenset(u.syllables)


def syllable_inverse(group: FreeProduct, s: Syllable) -> Syllable:
    f, k = s
    inv = group.factors[f].canon(-k)
    if inv == 0:
        raise ValueError("syllable inverse is the factor identity")
    return (f, inv)


@dataclass(frozen=True)
class CoreDecomposition:
    """u = r_t⁻¹…r₁⁻¹ · core · r₁…r_t with the core not conjugation-peelable."""

    conjugator_syllables: tuple[Syllable, ...]  # (r₁, …, r_t), innermost first
    core: FPElement

    def reassemble(self) -> FPElement:
        g = self.core.group
        conj = g.element(self.conjugator_syllables)
        return conj.inv() * self.core * conj


def core_decompose(u: FPElement) -> CoreDecomposition:
    """Greedy peeling of mutually inverse outer syllables into the conjugator."""
    if not u:
        raise ValueError("identity has no core decomposition")
    group = u.group
    syl = list(u.syllables)
    peeled: list[Syllable] = []
    while len(syl) >= 2 and syl[0][0] == syl[-1][0] and group.factors[syl[0][0]].canon(syl[0][1] + syl[-1][1]) == 0:
        peeled.append(syl[-1])
        syl = syl[1:-1]
    decomp = CoreDecomposition(tuple(reversed(peeled)), group.element(syl))
    assert decomp.reassemble() == u
    return decomp


def cyclic_form(u: FPElement) -> FPElement:
    """The cyclically reduced form of the core, with same-factor ends merged
    into a single closing syllable."""
    if not u:
        raise ValueError("identity has no cyclic form")
    core = core_decompose(u).core
    syl = core.syllables
    if len(syl) <= 1 or syl[0][0] != syl[-1][0]:
        return core
    f = syl[0][0]
    merged = core.group.factors[f].canon(syl[-1][1] + syl[0][1])
    assert merged != 0  # guaranteed: the core's ends do not cancel
    return core.group.element(syl[1:-1] + ((f, merged),))


def cyclic_equal(u: FPElement, v: FPElement) -> bool:
    """Equality of cyclic forms as cyclic words (up to rotation)."""
    cu, cv = cyclic_form(u), cyclic_form(v)
    if len(cu) != len(cv):
        return False
    n = len(cu)
    return any(cu.syllables[r:] + cu.syllables[:r] == cv.syllables for r in range(max(n, 1)))


def reversal(u: FPElement) -> FPElement:
    """Reverse the syllable order (an anti-automorphism keeping each syllable)."""
    return FPElement(u.group, tuple(reversed(u.syllables)))


# -- the F₂ ≅ ℤ∗ℤ identification ------------------------------------------

FREE_ZZ = FreeProduct()


def from_f2(w: Word, group: FreeProduct = FREE_ZZ) -> FPElement:
    """x₁ᵏ ↦ (a,k), x₂ᵏ ↦ (b,k); requires both factors infinite cyclic."""
    if not group.is_free():
        raise ValueError("from_f2 needs both factors infinite cyclic")
    syllables = []
    for letter in w.letters:
        i = abs(letter)
        if i > 2:
            raise ValueError("from_f2 is defined on two-generator words")
        syllables.append(("a" if i == 1 else "b", 1 if letter > 0 else -1))
    return group.element(syllables)


def to_f2(u: FPElement) -> Word:
    if not u.group.is_free():
        raise ValueError("to_f2 needs both factors infinite cyclic")
    letters: list[int] = []
    for f, k in u.syllables:
        i = 1 if f == "a" else 2
        letters.extend([i if k > 0 else -i] * abs(k))
    return Word(letters)


def fp_substitute(w: Word, images: Sequence[FPElement]) -> FPElement:
    """The value w(g₁, …, gₙ): generator i maps to images[i-1]."""
    if not images:
        raise ValueError("fp_substitute needs at least one image")
    group = images[0].group
    out = group.identity
    for letter in w.letters:
        i = abs(letter)
        if i > len(images):
            raise ValueError(f"word uses generator {i} but only {len(images)} images given")
        g = images[i - 1]
        out = out * (g if letter > 0 else g.inv())
    return out


# -- text form ------------------------------------------------------------

_FP_ATOM = re.compile(r"^([ab])(?:\^(-?\d+))?$")


def parse_fp(text: str, group: FreeProduct = FREE_ZZ) -> FPElement:
    """Parse the ``a^<k>`` / ``b^<k>`` grammar; ``1`` is the identity."""
    syllables: list[Syllable] = []
    for pos, token in enumerate(text.split(), start=1):
        if token == "1":
            continue
        m = _FP_ATOM.match(token)
        if not m:
            raise ValueError(f"bad free-product atom at position {pos}: {token!r}")
        k = int(m.group(2)) if m.group(2) is not None else 1
        syllables.append((m.group(1), k))
    return group.element(syllables)


def format_fp(u: FPElement) -> str:
    if not u:
        return "1"
    return " ".join(f if k == 1 else f"{f}^{k}" for f, k in u.syllables)
