"""Exhaustive oracle: max γ_{b,2} over all squares of bounded syllable length.

Every square is h² for h = P⁻¹·c·P with c the core of h.  In the normal
form of h the segments are adjacent, so the conjugator either is empty or
attaches to a core of odd syllable length, and h² = P⁻¹·c²·P.  Enumerating
cores and conjugators as alternating syllable strings therefore covers
every square shape; exponents are drawn from ±1, ±2 because any exponent
of magnitude ≥ 2 interacts with gap counting for b = (b, ±1) exactly like
±2 (it is never equal to b or b⁻¹, and junction sums of interest — zero,
±1, other — are all realized within ±2).
"""
import itertools

from freerat.freeprod import FREE_ZZ
from freerat.gaps import gap_profile

_EXPS = (-2, -1, 1, 2)


def _alt_strings(max_len):
    out = [()]
    for s0 in (0, 1):
        layer = [()]
        for k in range(max_len):
            fid = "ab"[(s0 + k) % 2]
            layer = [s + ((fid, e),) for s in layer for e in _EXPS]
            out.extend(layer)
    return out


def exhaustive_square_gamma_max(max_square_syllables=12, b=("b", 1), e=2):
    g = FREE_ZZ
    best = 0
    seen = set()

    def consider(h):
        nonlocal best
        sq = h * h
        if len(sq) == 0 or len(sq) > max_square_syllables:
            return
        if sq.syllables in seen:
            return
        seen.add(sq.syllables)
        best = max(best, gap_profile(sq, b).gamma(e))

    for c_syl in _alt_strings(max_square_syllables // 2):
        if c_syl:
            consider(g.element(c_syl))

    k = 1
    while 2 * k - 1 <= max_square_syllables - 2:
        t_max = (max_square_syllables - (2 * k - 1)) // 2
        for s0 in (0, 1):
            core_factors = ["ab"[(s0 + i) % 2] for i in range(k)]
            conj_first = "b" if core_factors[-1] == "a" else "a"
            cs0 = 0 if conj_first == "a" else 1
            for core_exps in itertools.product(_EXPS, repeat=k):
                core = tuple(zip(core_factors, core_exps))
                if k >= 3 and core[0][0] == core[-1][0] and core[0][1] + core[-1][1] == 0:
                    continue
                core_el = g.element(core)
                for t in range(1, t_max + 1):
                    conj_factors = ["ab"[(cs0 + i) % 2] for i in range(t)]
                    for conj_exps in itertools.product(_EXPS, repeat=t):
                        conj = g.element(tuple(zip(conj_factors, conj_exps)))
                        consider(conj.inv() * core_el * conj)
        k += 2
    return best
