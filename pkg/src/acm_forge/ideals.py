"""Homogeneous ideals of S: intersection, colon, saturation and dimension."""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, Sequence

from .field import StructuralError
from .groebner import (GroebnerBasis, ModuleOrder, buchberger, module_gb, poly_from_vec,
                       normal_form, syzygy_vectors, vec_from_poly)
from .matrix import GradedFreeModule
from .poly import GradedRing, Poly


class Ideal:
    """Homogeneous ideal of the ambient ring S, with a cached reduced GB.

    Equality is equality of reduced Gröbner bases.
    """

    def __init__(self, ring: GradedRing, gens: Iterable[Poly]):
        self.ring = ring.base
        gens = [g for g in gens if not g.is_zero()]
        for g in gens:
            if g.ring != self.ring:
                raise StructuralError("generator from a different ring")
            if not g.is_homogeneous():
                raise StructuralError(f"generator {g} is not homogeneous")
        self.gens = gens

    @cached_property
    def gb(self) -> GroebnerBasis:
        return buchberger(self.gens, self.ring)

    def basis(self) -> list[Poly]:
        return self.gb.polys()

    def contains(self, p: Poly) -> bool:
        if p.is_zero():
            return True
        return self.gb.contains_vec(vec_from_poly(p))

    def is_unit(self) -> bool:
        return self.gb.is_unit()

    def __add__(self, other) -> "Ideal":
        extra = other.gens if isinstance(other, Ideal) else list(other)
        return Ideal(self.ring, self.gens + extra)

    def minimal_gens(self) -> list[Poly]:
        from .groebner import minimal_generators
        F = GradedFreeModule(self.ring, [0])
        return [poly_from_vec(v, self.ring) for v in minimal_generators(
            [vec_from_poly(g) for g in self.gens], F)]

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.gb == other.gb

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens)})"


def _ideal(I) -> Ideal:
    return I if isinstance(I, Ideal) else Ideal(I[0].ring, I)


def ideal_meet(I, J) -> Ideal:
    """I ∩ J by eliminating a tag variable t from  t*I + (1 - t)*J.

    t gets weight 0, so the generators stay homogeneous in x; the elimination
    order compares the exponent of t first.
    """
    I, J = _ideal(I), _ideal(J)
    ring = I.ring
    if not I.gens or not J.gens:
        return Ideal(ring, [])
    n = ring.nvars
    p = ring.field.p
    gens = []
    for g in I.gens:
        gens.append({((1,) + e, 0): c for e, c in g.terms.items()})
    for g in J.gens:
        v = {}
        for e, c in g.terms.items():
            v[((0,) + e, 0)] = c
            v[((1,) + e, 0)] = (-c) % p if p else -c
        gens.append(v)
    tagged = GradedRing(("_t",) + ring.names, ring.field)
    order = ModuleOrder([0], "elim")
    gb = module_gb(gens, GradedFreeModule(tagged, [0]), order)
    out = []
    for g in gb.elements:
        if all(e[0] == 0 for (e, _) in g):
            out.append(Poly(ring, {e[1:]: c for (e, _), c in g.items()}))
    assert all(len(e) == n for q in out for e in q.terms)
    return Ideal(ring, out)


def ideal_meet_syzygy(I, J) -> Ideal:
    """I ∩ J from the syzygies of (i_1..i_a, j_1..j_b): cross-check route."""
    I, J = _ideal(I), _ideal(J)
    ring = I.ring
    if not I.gens or not J.gens:
        return Ideal(ring, [])
    gens = [vec_from_poly(g) for g in I.gens + J.gens]
    syz, _ = syzygy_vectors(gens, GradedFreeModule(ring, [0]))
    a = len(I.gens)
    out = []
    for s in syz:
        acc = ring.zero()
        for (e, k), c in s.items():
            if k < a:
                acc = acc + I.gens[k].mul_monomial(e, c)
        if not acc.is_zero():
            out.append(acc)
    return Ideal(ring, out)


def colon_poly(I, g: Poly) -> Ideal:
    """I : g, read off the first coordinates of the syzygies of (g, I)."""
    I = _ideal(I)
    ring = I.ring
    if g.is_zero():
        return Ideal(ring, [ring.one()])
    if not I.gens:
        return Ideal(ring, [])
    gens = [vec_from_poly(g)] + [vec_from_poly(h) for h in I.gens]
    syz, _ = syzygy_vectors(gens, GradedFreeModule(ring, [0]))
    out = []
    for s in syz:
        coeff = Poly(ring, {e: c for (e, k), c in s.items() if k == 0})
        if not coeff.is_zero():
            out.append(coeff)
    return Ideal(ring, out)


def colon(I, J) -> Ideal:
    """I : J = ∩_g (I : g) over the generators g of J."""
    I, J = _ideal(I), _ideal(J)
    result = None
    for g in J.gens:
        c = colon_poly(I, g)
        result = c if result is None else ideal_meet(result, c)
    return result if result is not None else Ideal(I.ring, [I.ring.one()])


def saturate(I, J, max_steps: int = 64) -> Ideal:
    """I : J^∞ by iterated colon, stopping when the reduced GB repeats.

    Shortcut: a variable x in J with no grevlex lead term of I involving it
    (with x ordered last) is a nonzerodivisor mod I, so I is already saturated.
    """
    I, J = _ideal(I), _ideal(J)
    current = I
    for _ in range(max_steps):
        if _has_regular_variable(current, J):
            return current
        nxt = colon(current, J)
        if nxt == current:
            return current
        current = nxt
    raise RuntimeError("saturation did not stabilise")


def _swap_last(p: Poly, i: int) -> Poly:
    def sw(e):
        e = list(e)
        e[i], e[-1] = e[-1], e[i]
        return tuple(e)
    return p.ring.poly({sw(e): c for e, c in p.terms.items()})


def _has_regular_variable(I: Ideal, J: Ideal) -> bool:
    """Some variable of J is a nonzerodivisor mod I (grevlex leads with it last)."""
    ring = I.ring
    if ring.is_quotient or ring.nvars == 0 or ring.order.name != "grevlex":
        return False
    n = ring.nvars
    for i in reversed(range(n)):
        if not J.contains(ring.gens[i]):
            continue
        gb = I.gb if i == n - 1 else Ideal(ring, [_swap_last(g, i) for g in I.gens]).gb
        if not any(e[-1] for e in gb.lead_monomials().get(0, [])):
            return True
    return False


def in_saturation(I, g: Poly, J, max_power: int | None = None) -> bool | None:
    """True if some j^N g lies in I for every generator j of J (so g is in
    I : J^∞); None if the search up to ``max_power`` is inconclusive."""
    I, J = _ideal(I), _ideal(J)
    gb = I.gb
    if max_power is None:
        max_power = 2 * max((sum(e) for e in gb.lead_monomials().get(0, [(0,)])), default=0) + 4
    h0 = normal_form(g, gb)
    if h0.is_zero():
        return True
    for j in J.gens:
        h = h0
        for _ in range(max_power):
            h = normal_form(h * j, gb)
            if h.is_zero():
                break
        else:
            return None
    return True


def same_saturation(I, K, J) -> bool:
    """I : J^∞ == K for an ideal K already saturated with respect to J."""
    I, K = _ideal(I), _ideal(K)
    if not all(K.contains(g) for g in I.gens):
        return False
    for g in K.basis():
        verdict = in_saturation(I, g, J)
        if verdict is None:
            return saturate(I, J) == K
    return True


def irrelevant_ideal(ring: GradedRing) -> Ideal:
    return Ideal(ring, ring.base.gens)


def _krull_from_leads(leads: Sequence[tuple], n: int) -> int:
    if any(sum(e) == 0 for e in leads):
        return -1
    supports = [frozenset(i for i, a in enumerate(e) if a) for e in leads]
    for size in range(n, -1, -1):
        for U in itertools.combinations(range(n), size):
            Us = set(U)
            if all(not s <= Us for s in supports):
                return size
    return 0


def dimension(I) -> int:
    """Krull dimension of S/I from the lead-term ideal; -1 for the unit ideal.

    The projective dimension of the subscheme is one less (and -1 means empty).
    """
    I = _ideal(I) if not isinstance(I, Ideal) else I
    if not I.gens:
        return I.ring.nvars
    leads = [e for (e, _) in I.gb.leads]
    return _krull_from_leads(leads, I.ring.nvars)


def projective_dimension(I) -> int:
    return max(dimension(I) - 1, -1)


def codimension(I) -> int:
    I = _ideal(I)
    d = dimension(I)
    return I.ring.nvars - d if d >= 0 else I.ring.nvars + 1


def jacobian_ideal(f: Poly) -> Ideal:
    ring = f.ring
    parts = []
    for i in range(ring.nvars):
        terms = {}
        for e, c in f.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
                v = ring.field(c * e[i])
                if v:
                    terms[e2] = v
        parts.append(Poly(ring, terms))
    return Ideal(ring, parts)


def is_smooth_hypersurface(f: Poly) -> bool:
    """Jacobian criterion: the partials have no common projective zero.

    Valid when the characteristic does not divide deg f (Euler's relation).
    """
    p = f.ring.field.p
    if p and f.degree() % p == 0:
        raise StructuralError("Jacobian criterion needs char not dividing the degree")
    return dimension(jacobian_ideal(f)) <= 0
