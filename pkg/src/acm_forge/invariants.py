"""Hilbert series and polynomials, and Chern degrees from Betti data.

For a sheaf E on a hypersurface X of degree d in P^4 whose section module
has the S-resolution with signed twists (e_i, c_i), the pushforward has
Chern character  sum_i e_i exp(-c_i H).  With the power sums
P_k = sum_i e_i c_i^k, Grothendieck-Riemann-Roch for X -> P^4 (normal bundle
O_X(d)) inverts to

    rank      = -P_1 / d
    deg c_1   = P_2 / 2 + rank d^2 / 2                 (= c_1 . h^2)
    deg c_2   = a^2 d / 2 - a d^2 / 2 + rank d^3 / 6 + P_3 / 6,
                with a = deg c_1 / d                   (= c_2 . h)

These are locked against  deg c_2 = d sum_{i<j} a_i a_j  for split bundles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .field import StructuralError
from .groebner import InvariantViolation
from .ideals import Ideal
from .resolution import BettiTable, PresentedModule, minimal_resolution


def _minimalize_monomials(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return tuple(sorted(out))


def _poly_sub(a: dict, b: dict, shift: int = 0) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k + shift] = out.get(k + shift, 0) - v
    return {k: v for k, v in out.items() if v}


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=100000)
def monomial_numerator(gens: tuple) -> tuple:
    """K-polynomial of S/(gens) for a monomial ideal, as sorted (exp, coeff) pairs.

    Recursion: N(I) = N(I') - t^deg(m) N(I' : m) with m the last generator.
    """
    gens = _minimalize_monomials(gens)
    if not gens:
        return ((0, 1),)
    if any(sum(g) == 0 for g in gens):
        return ()
    supports = [frozenset(i for i, a in enumerate(g) if a) for g in gens]
    if all(not (s & t) for k, s in enumerate(supports) for t in supports[k + 1:]):
        out = {0: 1}
        for g in gens:
            out = _poly_mul(out, {0: 1, sum(g): -1})
        return tuple(sorted(out.items()))
    m = gens[-1]
    rest = gens[:-1]
    quot = tuple(tuple(max(a - b, 0) for a, b in zip(g, m)) for g in rest)
    n1 = dict(monomial_numerator(rest))
    n2 = dict(monomial_numerator(quot))
    return tuple(sorted(_poly_sub(n1, n2, sum(m)).items()))


@dataclass
class HilbertData:
    """Hilbert series numerator(t) / (1 - t)^nvars and derived data."""

    numerator: dict
    nvars: int
    reduced_numerator: dict = field(default_factory=dict)
    krull_dim: int = 0
    degree: int = 0
    polynomial: list = field(default_factory=list)
    regularity_index: int = 0

    @property
    def projective_dim(self) -> int:
        return self.krull_dim - 1

    def function(self, nu: int) -> int:
        """dim_k of the degree-nu piece, from the series."""
        n = self.nvars - 1
        return sum(c * comb(nu - k + n, n) for k, c in self.numerator.items() if nu - k >= 0)

    def poly_value(self, nu: int) -> Fraction:
        return sum((c * Fraction(nu) ** i for i, c in enumerate(self.polynomial)), Fraction(0))

    def polynomial_str(self, var: str = "t") -> str:
        terms = []
        for i in range(len(self.polynomial) - 1, -1, -1):
            c = self.polynomial[i]
            if not c:
                continue
            mon = "" if i == 0 else var if i == 1 else f"{var}^{i}"
            cs = str(c)
            if mon:
                cs = "" if c == 1 else "-" if c == -1 else f"{c}*" if c.denominator == 1 else f"({c})*"
            terms.append(cs + mon)
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    def to_json(self) -> dict:
        return {
            "numerator": {str(k): v for k, v in sorted(self.numerator.items())},
            "nvars": self.nvars,
            "krull_dim": self.krull_dim,
            "degree": self.degree,
            "hilbert_polynomial": [str(c) for c in self.polynomial],
        }


def _divide_one_minus_t(num: dict):
    """Divide by (1 - t) if possible: returns quotient or None."""
    if not num:
        return None
    if sum(num.values()) != 0:
        return None
    lo, hi = min(num), max(num)
    out, acc = {}, 0
    for k in range(lo, hi):
        acc += num.get(k, 0)
        if acc:
            out[k] = acc
    return out


def hilbert_from_numerator(num: dict, nvars: int) -> HilbertData:
    q = dict(num)
    s = 0
    while q and s < nvars:
        nxt = _divide_one_minus_t(q)
        if nxt is None:
            break
        q, s = nxt, s + 1
    D = nvars - s if q else -1
    deg = sum(q.values()) if q else 0
    poly: list[Fraction] = []
    if D > 0:
        acc = [Fraction(0)] * D
        for k, c in q.items():
            # C(nu - k + D - 1, D - 1) as a polynomial in nu
            b = [Fraction(1)]
            for i in range(1, D):
                shift = i - k
                b = [Fraction(0)] + b
                for j in range(len(b) - 1):
                    b[j] += shift * b[j + 1]
                b = [x / i for x in b]
            for j, x in enumerate(b):
                acc[j] += c * x
        while acc and acc[-1] == 0:
            acc.pop()
        poly = acc
    reg = (max(q) - D + 1) if q else 0
    return HilbertData(dict(num), nvars, q, D, deg, poly, reg)


def hilbert(subject) -> HilbertData:
    """Hilbert data of S/I (for an Ideal) or of a presented module over S or S_X."""
    if isinstance(subject, Ideal):
        subject = PresentedModule.quotient(subject.ring, subject.gens)
    M = subject.as_s_module()
    n = M.ring.nvars
    leads = M.relation_gb().lead_monomials()
    num: dict = {}
    for i, c in enumerate(M.generators.twists):
        for k, v in monomial_numerator(tuple(sorted(leads[i]))):
            num[k + c] = num.get(k + c, 0) + v
    num = {k: v for k, v in num.items() if v}
    return hilbert_from_numerator(num, n)


@dataclass
class ChernData:
    rank: int
    deg_c1: int
    deg_c2: int
    d: int

    @property
    def c2_divisible(self) -> bool:
        return self.deg_c2 % self.d == 0

    def to_json(self) -> dict:
        return {"rank": self.rank, "deg_c1": self.deg_c1, "deg_c2": self.deg_c2, "d": self.d,
                "d_divides_deg_c2": self.c2_divisible}


def chern_from_signed_twists(signed: Sequence[tuple[int, int]], d: int) -> ChernData:
    P = [sum(Fraction(e) * c ** k for e, c in signed) for k in range(4)]
    if P[0] != 0:
        raise StructuralError("not a sheaf on X: the resolution has nonzero rank on P^4")
    r = -P[1] / d
    deg_c1 = P[2] / 2 + r * d * d / 2
    a = deg_c1 / d
    deg_c2 = a * a * d / 2 - a * d * d / 2 + r * d ** 3 / 6 + P[3] / 6
    for name, v in (("rank", r), ("deg c1", deg_c1), ("deg c2", deg_c2)):
        if v.denominator != 1:
            raise InvariantViolation(f"{name} = {v} is not an integer")
    return ChernData(int(r), int(deg_c1), int(deg_c2), d)


def chern_degrees(betti: BettiTable, d: int, nvars: int = 5) -> ChernData:
    """(rank, deg c1, deg c2) of a sheaf on X in P^4 from its S-Betti table."""
    if nvars != 5:
        raise StructuralError("Chern degrees are implemented for hypersurfaces in P^4 only")
    if betti.ring_tag != "S" or betti.truncated:
        raise StructuralError("Chern degrees need a finite resolution over S")
    return chern_from_signed_twists(betti.signed_twists(), d)


def split_chern(twists: Sequence[int], d: int) -> ChernData:
    """Oracle for O_X(a_1) + ... + O_X(a_r)."""
    e2 = sum(twists[i] * twists[j] for i in range(len(twists)) for j in range(i + 1, len(twists)))
    return ChernData(len(twists), d * sum(twists), d * e2, d)


def split_betti(twists: Sequence[int], d: int) -> BettiTable:
    """Betti table over S of the section module of O_X(a_1) + ... (twist -a_i)."""
    e: dict = {}
    for a in twists:
        e[(0, -a)] = e.get((0, -a), 0) + 1
        e[(1, d - a)] = e.get((1, d - a), 0) + 1
    return BettiTable(e, "S")


@dataclass
class DivisibilityReport:
    deg_Y: int
    deg_c2: int
    d: int

    @property
    def res_Y_mod_d(self) -> int:
        return self.deg_Y % self.d

    @property
    def res_c2_mod_d(self) -> int:
        return self.deg_c2 % self.d

    @property
    def equivalent(self) -> bool:
        return (self.res_Y_mod_d == 0) == (self.res_c2_mod_d == 0)

    def to_json(self) -> dict:
        return {"deg_Y": self.deg_Y, "deg_c2": self.deg_c2, "d": self.d,
                "res_Y_mod_d": self.res_Y_mod_d, "res_c2_mod_d": self.res_c2_mod_d,
                "equivalent": self.equivalent}


def divisibility_report(Y: Ideal, E: PresentedModule, d: int | None = None,
                        free_twists: Sequence[int] | None = None,
                        shift: int | None = None) -> DivisibilityReport:
    """deg Y against deg c2(E) modulo d.

    With ``free_twists`` (the b_i of 0 -> E -> sum O_X(b_i) -> I_Y(shift) -> 0)
    the exact value  deg Y = d (e_2(b) - (sum b - shift) shift) - deg c2(E)
    is checked too; the shift defaults to sum b - c1(E).
    """
    ring = E.ring
    if d is None:
        d = ring.degree_of_relation
    hd = hilbert(Y)
    if hd.krull_dim != 2:
        raise StructuralError(f"Y is not a curve in P^4 (Krull dimension {hd.krull_dim})")
    res = minimal_resolution(E, over="S")
    cd = chern_degrees(res.betti, d, ring.nvars)
    rep = DivisibilityReport(hd.degree, cd.deg_c2, d)
    if not rep.equivalent:
        raise InvariantViolation(
            f"d | deg Y ({rep.deg_Y}) and d | deg c2 ({rep.deg_c2}) disagree for d = {d}")
    if free_twists is not None:
        b = list(free_twists)
        if shift is None:
            shift = sum(b) - cd.deg_c1 // d
        e2 = sum(b[i] * b[j] for i in range(len(b)) for j in range(i + 1, len(b)))
        expected = d * (e2 - (sum(b) - shift) * shift) - cd.deg_c2
        if expected != hd.degree:
            raise InvariantViolation(f"deg Y = {hd.degree} but the Chern computation predicts {expected}")
    return rep
