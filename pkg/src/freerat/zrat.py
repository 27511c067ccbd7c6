"""Rational subsets of (ℤ, +): finite unions of arithmetic progressions.

Progressions are pairs (base, period): the singleton {base} when period is
0, {base, base+period, base+2·period, …} otherwise (periods may be
negative, running downward — the star of a mixed-sign set is a subgroup,
which no finite union of upward progressions can denote).

Internally a set is kept in an eventually periodic normal form — an exact
window [lo, hi] plus residue patterns mod M above and below it — which is
canonical, so structural equality is semantic equality, and which makes
union, intersection, complement, sumset and star exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

_STAR_CAP = 10**6  # guard for the star stabilization bound


@dataclass(frozen=True)
class ZRatSet:
    period: int  # M >= 1
    lo: int
    hi: int  # hi = lo - 1 encodes an empty window at boundary lo
    window: frozenset[int]  # members within [lo, hi]
    up: frozenset[int]  # residues mod M active for x > hi
    down: frozenset[int]  # residues mod M active for x < lo

    # -- construction ------------------------------------------------------

    @staticmethod
    def empty() -> "ZRatSet":
        return ZRatSet(1, 0, -1, frozenset(), frozenset(), frozenset())

    @staticmethod
    def from_progressions(progs: Iterable[tuple[int, int]]) -> "ZRatSet":
        progs = list(progs)
        if not progs:
            return ZRatSet.empty()
        nonzero = [abs(p) for _, p in progs if p]
        m = math.lcm(*nonzero) if nonzero else 1
        bases = [b for b, _ in progs]
        lo, hi = min(bases), max(bases)

        def covered(x: int) -> bool:
            for b, p in progs:
                if p == 0:
                    if x == b:
                        return True
                elif p > 0:
                    if x >= b and (x - b) % p == 0:
                        return True
                else:
                    if x <= b and (b - x) % (-p) == 0:
                        return True
            return False

        window = frozenset(x for x in range(lo, hi + 1) if covered(x))
        up = frozenset(r for b, p in progs if p > 0 for r in range(b % p, m, p))
        down = frozenset(r for b, p in progs if p < 0 for r in range(b % (-p), m, -p))
        return _canonical(m, lo, hi, window, up, down)

    @staticmethod
    def of(*values: int) -> "ZRatSet":
        return ZRatSet.from_progressions((v, 0) for v in values)

    # -- queries -----------------------------------------------------------

    def __contains__(self, x: int) -> bool:
        if x > self.hi:
            return (x % self.period) in self.up
        if x < self.lo:
            return (x % self.period) in self.down
        return x in self.window

    def is_empty(self) -> bool:
        return not (self.window or self.up or self.down)

    def is_finite(self) -> bool:
        return not (self.up or self.down)

    def sample(self, a: int, b: int) -> set[int]:
        """Members within [a, b] — the brute-force view used by tests."""
        return {x for x in range(a, b + 1) if x in self}

    def progressions(self) -> tuple[tuple[int, int], ...]:
        """A non-redundant progression presentation of the set."""
        out: list[tuple[int, int]] = []
        for r in sorted(self.up):
            base = self.hi + 1 + ((r - self.hi - 1) % self.period)
            out.append((base, self.period))
        for r in sorted(self.down):
            base = self.lo - 1 - ((self.lo - 1 - r) % self.period)
            out.append((base, -self.period))
        for x in sorted(self.window):
            out.append((x, 0))
        return tuple(out)

    def __iter__(self) -> Iterator[int]:
        raise TypeError("ZRatSet may be infinite; use sample(a, b)")

    def __repr__(self) -> str:
        parts = [
            (f"{{{b}}}" if p == 0 else f"({b}, {p:+d})")
            for b, p in self.progressions()
        ]
        return "ZRatSet(" + (" | ".join(parts) if parts else "empty") + ")"

    # -- Boolean operations ------------------------------------------------

    def union(self, other: "ZRatSet") -> "ZRatSet":
        return _pointwise(self, other, lambda a, b: a or b)

    def intersect(self, other: "ZRatSet") -> "ZRatSet":
        return _pointwise(self, other, lambda a, b: a and b)

    def complement(self) -> "ZRatSet":
        m, lo, hi = self.period, self.lo, self.hi
        all_res = frozenset(range(m))
        window = frozenset(x for x in range(lo, hi + 1) if x not in self.window)
        return _canonical(m, lo, hi, window, all_res - self.up, all_res - self.down)

    def difference(self, other: "ZRatSet") -> "ZRatSet":
        return self.intersect(other.complement())

    # -- additive operations -----------------------------------------------

    def sumset(self, other: "ZRatSet") -> "ZRatSet":
        if self.is_empty() or other.is_empty():
            return ZRatSet.empty()
        progs: list[tuple[int, int]] = []
        for a, s in self.progressions():
            for b, t in other.progressions():
                progs.extend(_sum_progressions(a, s, b, t))
        return ZRatSet.from_progressions(progs)

    def star(self) -> "ZRatSet":
        """The submonoid of ℤ generated by the set."""
        if self.is_empty():
            return ZRatSet.of(0)
        has_pos = bool(self.up) or any(x > 0 for x in self.window)
        has_neg = bool(self.down) or any(x < 0 for x in self.window)
        d = self._content_gcd()
        if d == 0:
            return ZRatSet.of(0)  # the set is {0}
        if has_pos and has_neg:
            # a submonoid with both signs is the subgroup dℤ
            return ZRatSet.from_progressions([(0, d), (0, -d)])
        if has_neg:
            return _negate(_star_nonneg(_negate(self)))
        return _star_nonneg(self)

    def _content_gcd(self) -> int:
        g = 0
        for x in self.window:
            g = math.gcd(g, x)
        for r in self.up | self.down:
            g = math.gcd(g, r, self.period)
        return g


def _negate(s: ZRatSet) -> ZRatSet:
    return ZRatSet.from_progressions([(-b, -p) for b, p in s.progressions()])


def _star_nonneg(s: ZRatSet) -> ZRatSet:
    # Monoid generated by a set of nonnegative integers, via a reachability
    # sieve up to a bound past which membership is d-periodic.
    d = s._content_gcd()
    head = max(s.hi + 2 * s.period, 1)
    gens = sorted(s.sample(1, head))
    if not gens:
        return ZRatSet.of(0)
    g1 = gens[0]
    bound = head + (g1 * (head + 2)) // d + 2 * g1 + 128
    if bound > _STAR_CAP:
        raise ValueError("star stabilization bound exceeds the desk-scale cap")
    members = _monoid_sieve(sorted(s.sample(1, bound)), bound, d)
    tail_start = next(
        x for x in members if all(y in members for y in range(x, bound + 1, d))
    )
    progs = [(x, 0) for x in members if x < tail_start]
    progs.append((tail_start, d))
    return ZRatSet.from_progressions(progs)


def _monoid_sieve(gens: list[int], bound: int, step_gcd: int) -> set[int]:
    # Bitset fixpoint: bit x set iff x is a sum of generators (0 included).
    reach = 1
    mask = (1 << (bound + 1)) - 1
    changed = True
    while changed:
        changed = False
        for g in gens:
            grown = (reach | (reach << g)) & mask
            if grown != reach:
                reach = grown
                changed = True
    return {x for x in range(bound + 1) if (reach >> x) & 1}


def _sum_progressions(a: int, s: int, b: int, t: int) -> list[tuple[int, int]]:
    base = a + b
    if s == 0 and t == 0:
        return [(base, 0)]
    if s == 0:
        return [(base, t)]
    if t == 0:
        return [(base, s)]
    if (s > 0) != (t > 0):
        g = math.gcd(s, t)
        return [(base, g), (base, -g)]  # full coset of gℤ
    sign = 1 if s > 0 else -1
    s, t = abs(s), abs(t)
    g = math.gcd(s, t)
    bound = s * t + s + t
    members = _monoid_sieve([s, t], bound, g)
    tail_start = next(
        x for x in members if all(y in members for y in range(x, bound + 1, g))
    )
    progs = [(base + sign * x, 0) for x in members if x < tail_start]
    progs.append((base + sign * tail_start, sign * g))
    return progs


# -- normal form helpers ---------------------------------------------------


def _pointwise(a: ZRatSet, b: ZRatSet, op: Callable[[bool, bool], bool]) -> ZRatSet:
    m = math.lcm(a.period, b.period)
    lo = min(a.lo, b.lo)
    hi = max(a.hi, b.hi, lo - 1)
    window = frozenset(x for x in range(lo, hi + 1) if op(x in a, x in b))
    up = frozenset(
        r for r in range(m) if op((r % a.period) in a.up, (r % b.period) in b.up)
    )
    down = frozenset(
        r for r in range(m) if op((r % a.period) in a.down, (r % b.period) in b.down)
    )
    return _canonical(m, lo, hi, window, up, down)


def _canonical(
    m: int,
    lo: int,
    hi: int,
    window: frozenset[int],
    up: frozenset[int],
    down: frozenset[int],
) -> ZRatSet:
    """Reduce a raw representation to the unique normal form.

    The period is minimized by divisor testing, then the window edges are
    chosen semantically: hi* is the greatest x whose membership differs
    from the upward residue pattern, lo* the least x differing from the
    downward pattern.  Both are intrinsic to the set, so two equal sets
    always produce identical normal forms.
    """
    for d in sorted(_divisors(m)):
        if _mod_consistent(up, m, d) and _mod_consistent(down, m, d):
            up = frozenset(r % d for r in up)
            down = frozenset(r % d for r in down)
            m = d
            break

    def member(x: int) -> bool:
        if x > hi:
            return (x % m) in up
        if x < lo:
            return (x % m) in down
        return x in window

    hi_star = next(
        (x for x in range(hi, lo - m - 1, -1) if member(x) != ((x % m) in up)),
        None,
    )
    lo_star = next(
        (x for x in range(lo, hi + m + 2) if member(x) != ((x % m) in down)),
        None,
    )
    if hi_star is None and lo_star is None:
        new_lo, new_hi = 0, -1
    elif hi_star is None:
        new_lo, new_hi = lo_star, lo_star - 1
    elif lo_star is None:
        new_lo, new_hi = hi_star + 1, hi_star
    else:
        new_hi = hi_star
        new_lo = min(lo_star, hi_star + 1)
    win = frozenset(x for x in range(new_lo, new_hi + 1) if member(x))
    return ZRatSet(m, new_lo, new_hi, win, up, down)


def _mod_consistent(residues: frozenset[int], m: int, d: int) -> bool:
    # residues mod m describe the same set as their projection mod d
    projected = {r % d for r in residues}
    return all((r in residues) == ((r % d) in projected) for r in range(m))


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]
