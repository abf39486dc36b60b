"""Gröbner bases for graded submodules of free modules over S and S_X.

Module elements ("vectors") are dicts ``{(exponent, position): coeff}``.  An
ideal is the rank-one case (every position 0).  Submodules over S_X = S/(f)
are handled by adjoining ``f * e_i`` for every basis vector of the ambient
free module and running the computation over S.
"""

from __future__ import annotations

import heapq
import itertools
from operator import add
from typing import Sequence

from .field import StructuralError
from .matrix import GradedFreeModule, GradedMatrix
from .poly import GradedRing, Poly, TermOrder, grevlex_key, lex_key

Vec = dict


class InvariantViolation(RuntimeError):
    """An internal consistency check failed (a bug, never a user error)."""


# ---------------------------------------------------------------------------
# orders on module terms


class ModuleOrder:
    """Order on terms ``x^a e_i`` of a graded free module.

    kind ``"top"`` compares degree, then the monomial, then position (e_0 is
    largest); ``"pot"`` compares position first; ``"schreyer"`` compares
    ``x^a * lead(g_i)`` in a base order and breaks ties by position;
    ``"elim"`` eliminates variable 0 (weight 0 in the grading) before
    anything else.
    """

    def __init__(self, twists: Sequence[int], kind: str = "top", mono: TermOrder | str = "grevlex",
                 schreyer: tuple["ModuleOrder", Sequence[tuple]] | None = None):
        self.twists = tuple(twists)
        self.kind = kind
        mono = mono if isinstance(mono, TermOrder) else TermOrder(mono)
        self.mono = mono
        self.graded = mono.name == "grevlex"
        self._memo: dict = {}
        if kind == "schreyer":
            if schreyer is None:
                raise StructuralError("schreyer order needs a base order and lead terms")
            self.base_order, leads = schreyer
            self.leads = [tuple(t) for t in leads]
            self.key = self._key_schreyer
        elif kind in ("top", "pot", "elim"):
            self.key = {"top": self._key_top, "pot": self._key_pot, "elim": self._key_elim}[kind]
        else:
            raise StructuralError(f"unknown module order {kind!r}")

    def degree(self, term) -> int:
        e, i = term
        if self.kind == "elim":
            return sum(e) - e[0] + self.twists[i]
        return sum(e) + self.twists[i]

    def _key_top(self, term):
        k = self._memo.get(term)
        if k is None:
            e, i = term
            if self.graded:
                k = (sum(e) + self.twists[i], tuple(-x for x in reversed(e)), -i)
            else:
                k = (e, -i)
            self._memo[term] = k
        return k

    def _key_pot(self, term):
        k = self._memo.get(term)
        if k is None:
            e, i = term
            if self.graded:
                k = (-i, sum(e) + self.twists[i], tuple(-x for x in reversed(e)))
            else:
                k = (-i, e)
            self._memo[term] = k
        return k

    def _key_elim(self, term):
        k = self._memo.get(term)
        if k is None:
            e, i = term
            rest = e[1:]
            k = (e[0], sum(rest) + self.twists[i], tuple(-x for x in reversed(rest)), -i)
            self._memo[term] = k
        return k

    def _key_schreyer(self, term):
        k = self._memo.get(term)
        if k is None:
            e, i = term
            le, lp = self.leads[i]
            k = (self.base_order.key((tuple(map(add, e, le)), lp)), -i)
            self._memo[term] = k
        return k

    def compare(self, s, t) -> int:
        a, b = self.key(s), self.key(t)
        return (a > b) - (a < b)


def default_order(twists: Sequence[int], ring: GradedRing) -> ModuleOrder:
    return ModuleOrder(twists, "top", ring.order)


# ---------------------------------------------------------------------------
# conversions


def vec_from_column(col: Sequence[Poly]) -> Vec:
    v = {}
    for i, p in enumerate(col):
        for e, c in p.terms.items():
            v[(e, i)] = c
    return v


def vec_from_poly(p: Poly) -> Vec:
    return {(e, 0): c for e, c in p.terms.items()}


def column_from_vec(v: Vec, rank: int, ring: GradedRing) -> list[Poly]:
    cols = [dict() for _ in range(rank)]
    for (e, i), c in v.items():
        cols[i][e] = c
    base = ring.base
    return [Poly(base, t) for t in cols]


def poly_from_vec(v: Vec, ring: GradedRing) -> Poly:
    return Poly(ring.base, {e: c for (e, i), c in v.items()})


def vec_degree(v: Vec, twists: Sequence[int]) -> int:
    e, i = next(iter(v))
    return sum(e) + twists[i]


def vec_is_homogeneous(v: Vec, twists: Sequence[int]) -> bool:
    return len({sum(e) + twists[i] for (e, i) in v}) <= 1


def _axpy(h: Vec, c, shift, g: Vec, p: int) -> None:
    """h += c * x^shift * g, in place."""
    if p:
        for (e, i), gc in g.items():
            k = (tuple(map(add, e, shift)), i)
            v = (h.get(k, 0) + c * gc) % p
            if v:
                h[k] = v
            else:
                h.pop(k, None)
    else:
        for (e, i), gc in g.items():
            k = (tuple(map(add, e, shift)), i)
            v = h.get(k, 0) + c * gc
            if v:
                h[k] = v
            else:
                h.pop(k, None)


def _scale(g: Vec, c, p: int) -> Vec:
    if p:
        return {t: v * c % p for t, v in g.items()}
    return {t: v * c for t, v in g.items()}


# ---------------------------------------------------------------------------
# the engine


class _Engine:
    def __init__(self, field, order: ModuleOrder, nvars: int, track: bool, use_criteria: bool,
                 rank_one: bool):
        self.field = field
        self.p = field.p
        self.order = order
        self.nvars = nvars
        self.track = track
        self.use_criteria = use_criteria
        self.rank_one = rank_one
        self.basis: list[Vec] = []
        self.leads: list[tuple] = []
        self.reps: list[Vec] = []
        self.by_pos: dict[int, list[int]] = {}
        self.syzygies: list[Vec] = []
        self.pairs_done: set = set()

    def inv(self, c):
        return self.field.inv(c)

    def find_divisor(self, term):
        e, i = term
        for gi in self.by_pos.get(i, ()):
            ge = self.leads[gi][0]
            if all(a <= b for a, b in zip(ge, e)):
                return gi
        return None

    def reduce(self, h: Vec, rep: Vec | None, full: bool, skip: int | None = None):
        """Reduce ``h`` against the basis; returns (remainder, rep)."""
        key = self.order.key
        p = self.p
        rem: Vec = {}
        neg = (lambda c: (-c) % p) if p else (lambda c: -c)
        while h:
            t = max(h, key=key)
            gi = self.find_divisor(t)
            if gi is not None and gi == skip:
                gi = self._find_other(t, skip)
            if gi is None:
                if not full:
                    break
                rem[t] = h.pop(t)
                continue
            c = neg(h[t])
            shift = tuple(a - b for a, b in zip(t[0], self.leads[gi][0]))
            _axpy(h, c, shift, self.basis[gi], p)
            if rep is not None:
                _axpy(rep, c, shift, self.reps[gi], p)
        if full:
            rem.update(h)
            return rem, rep
        return h, rep

    def _find_other(self, term, skip):
        e, i = term
        for gi in self.by_pos.get(i, ()):
            if gi == skip:
                continue
            ge = self.leads[gi][0]
            if all(a <= b for a, b in zip(ge, e)):
                return gi
        return None

    def spoly(self, i: int, j: int):
        (ei, pi), (ej, _) = self.leads[i], self.leads[j]
        lcm = tuple(a if a > b else b for a, b in zip(ei, ej))
        si = tuple(a - b for a, b in zip(lcm, ei))
        sj = tuple(a - b for a, b in zip(lcm, ej))
        p = self.p
        minus_one = p - 1 if p else -1
        h: Vec = {}
        _axpy(h, 1, si, self.basis[i], p)
        _axpy(h, minus_one, sj, self.basis[j], p)
        rep = None
        if self.track:
            rep = {}
            _axpy(rep, 1, si, self.reps[i], p)
            _axpy(rep, minus_one, sj, self.reps[j], p)
        return h, rep

    def add(self, h: Vec, rep: Vec | None) -> int:
        t = max(h, key=self.order.key)
        c = self.inv(h[t])
        if c != 1:
            h = _scale(h, c, self.p)
            if rep is not None:
                rep = _scale(rep, c, self.p)
        idx = len(self.basis)
        self.basis.append(h)
        self.leads.append(t)
        self.reps.append(rep)
        self.by_pos.setdefault(t[1], []).append(idx)
        return idx

    def pair_degree(self, i: int, j: int) -> int:
        (ei, pi), (ej, _) = self.leads[i], self.leads[j]
        lcm = tuple(a if a > b else b for a, b in zip(ei, ej))
        return self.order.degree((lcm, pi))

    def chain_skip(self, i: int, j: int) -> bool:
        (ei, pos), (ej, _) = self.leads[i], self.leads[j]
        if self.rank_one and all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            return True
        lcm = tuple(a if a > b else b for a, b in zip(ei, ej))
        for k in self.by_pos.get(pos, ()):
            if k == i or k == j:
                continue
            ek = self.leads[k][0]
            if all(a <= b for a, b in zip(ek, lcm)):
                if (min(i, k), max(i, k)) in self.pairs_done and (min(j, k), max(j, k)) in self.pairs_done:
                    return True
        return False


def _run(engine: _Engine, inputs: Sequence[Vec], prefix: int):
    """Degree-by-degree Buchberger.  Returns indices of inputs that were
    minimal (not in the span of lower degree data and earlier inputs)."""
    order = engine.order
    heap: list = []
    seq = itertools.count()
    n = engine.nvars
    one = (0,) * n
    for k, v in enumerate(inputs):
        if not v:
            if engine.track:
                engine.syzygies.append({(one, k): 1})
            continue
        d = order.degree(next(iter(v)))
        heapq.heappush(heap, (d, 1 if k < prefix else 2, next(seq), ("in", k)))
    minimal = []
    while heap:
        d, cat, _, item = heapq.heappop(heap)
        if item[0] == "pair":
            i, j = item[1], item[2]
            if engine.use_criteria and engine.chain_skip(i, j):
                engine.pairs_done.add((i, j))
                continue
            h, rep = engine.spoly(i, j)
            engine.pairs_done.add((i, j))
        else:
            k = item[1]
            h = dict(inputs[k])
            rep = {(one, k): 1} if engine.track else None
        h, rep = engine.reduce(h, rep, full=False)
        if not h:
            if engine.track and rep:
                engine.syzygies.append(rep)
            continue
        if item[0] == "in":
            minimal.append(item[1])
        idx = engine.add(h, rep)
        pos = engine.leads[idx][1]
        for j in engine.by_pos[pos]:
            if j != idx:
                heapq.heappush(heap, (engine.pair_degree(j, idx), 0, next(seq), ("pair", j, idx)))
    return minimal


def _interreduce(engine: _Engine):
    """Reduced basis: drop non-minimal leads, tail-reduce, sort by lead."""
    key = engine.order.key
    idx = sorted(range(len(engine.basis)), key=lambda i: key(engine.leads[i]))
    kept = []
    for i in idx:
        e, pos = engine.leads[i]
        if any(engine.leads[j][1] == pos and all(a <= b for a, b in zip(engine.leads[j][0], e)) for j in kept):
            continue
        kept.append(i)
    red = _Engine(engine.field, engine.order, engine.nvars, engine.track, False, engine.rank_one)
    for i in kept:
        red.basis.append(engine.basis[i])
        red.leads.append(engine.leads[i])
        red.reps.append(engine.reps[i])
        red.by_pos.setdefault(engine.leads[i][1], []).append(len(red.basis) - 1)
    out, reps = [], []
    for k in range(len(red.basis)):
        g = dict(red.basis[k])
        lt = red.leads[k]
        lc = g.pop(lt)
        rep = dict(red.reps[k]) if engine.track else None
        tail, rep = red.reduce(g, rep, full=True, skip=k)
        tail[lt] = lc
        out.append(tail)
        reps.append(rep)
    # tails reduced against the unreduced siblings are still fully reduced:
    # sibling leads are unchanged and only lead terms are used for division.
    return out, [red.leads[k] for k in range(len(out))], reps


class GroebnerBasis:
    """Reduced Gröbner basis of a graded submodule of a free module over S.

    ``ambient.ring`` may be a quotient S_X; the basis is then that of the
    preimage submodule (generators plus ``f * e_i``) in the ambient S-module.
    """

    def __init__(self, ambient: GradedFreeModule, order: ModuleOrder, generators: list[Vec],
                 elements: list[Vec], leads: list[tuple], reps, syzygy_vectors, minimal_inputs,
                 n_user: int):
        self.ambient = ambient
        self.ring = ambient.ring
        self.order = order
        self.generators = generators
        self.elements = elements
        self.leads = leads
        self.reps = reps
        self.syzygy_vectors = syzygy_vectors
        self.minimal_inputs = minimal_inputs
        self.n_user = n_user
        self.reduced = True
        self._engine = None

    @property
    def tracked(self) -> bool:
        return self.syzygy_vectors is not None

    def engine(self) -> _Engine:
        if self._engine is None:
            eng = _Engine(self.ring.field, self.order, self.ring.nvars, self.tracked, False,
                          self.ambient.rank == 1)
            for g, t, r in zip(self.elements, self.leads, self.reps or [None] * len(self.elements)):
                eng.basis.append(g)
                eng.leads.append(t)
                eng.reps.append(r)
                eng.by_pos.setdefault(t[1], []).append(len(eng.basis) - 1)
            self._engine = eng
        return self._engine

    def __len__(self):
        return len(self.elements)

    def is_unit(self) -> bool:
        """True if the submodule is the whole ambient module."""
        zero = (0,) * self.ring.nvars
        return {i for (e, i) in self.leads if e == zero} == set(range(self.ambient.rank))

    def normal_form_vec(self, v: Vec) -> Vec:
        return self.engine().reduce(dict(v), None, full=True)[0]

    def lift_vec(self, v: Vec):
        """Coefficients expressing ``v`` in the generators, or None if v is not in the submodule."""
        if not self.tracked:
            raise StructuralError("lifting needs a basis computed with track=True")
        p = self.ring.field.p
        h, rep = self.engine().reduce(dict(v), {}, full=True)
        if h:
            return None
        return _scale(rep, p - 1 if p else -1, p) if rep else {}

    def contains_vec(self, v: Vec) -> bool:
        return not self.normal_form_vec(v)

    def lead_monomials(self) -> dict[int, list[tuple]]:
        out: dict[int, list[tuple]] = {i: [] for i in range(self.ambient.rank)}
        for e, i in self.leads:
            out[i].append(e)
        return out

    def polys(self) -> list[Poly]:
        return [poly_from_vec(g, self.ring) for g in self.elements]

    def columns(self) -> list[list[Poly]]:
        return [column_from_vec(g, self.ambient.rank, self.ring) for g in self.elements]

    def check_criterion(self) -> bool:
        """Re-verify that every S-pair reduces to zero."""
        eng = self.engine()
        n = len(eng.basis)
        for i in range(n):
            for j in range(i + 1, n):
                if eng.leads[i][1] != eng.leads[j][1]:
                    continue
                h, _ = eng.spoly(i, j)
                saved = eng.track
                eng.track = False
                r, _ = eng.reduce(h, None, full=True)
                eng.track = saved
                if r:
                    return False
        return True

    def _canonical(self):
        return sorted((sorted(g.items()) for g in self.elements))

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis) and self.ambient.twists == other.ambient.twists
                and self._canonical() == other._canonical())

    def __repr__(self):
        return f"GroebnerBasis({len(self.elements)} elements in {self.ambient!r})"


def relation_vectors(ambient: GradedFreeModule) -> list[Vec]:
    """``f * e_i`` for a free module over S_X (empty over S)."""
    f = ambient.ring.relation
    if f is None:
        return []
    return [{(e, i): c for e, c in f.terms.items()} for i in range(ambient.rank)]


def module_gb(gens: Sequence[Vec], ambient: GradedFreeModule, order: ModuleOrder | None = None,
              track: bool = False, verify: bool = False) -> GroebnerBasis:
    """Gröbner basis of the submodule generated by ``gens``.

    Over S_X the relation vectors are placed before the user generators, so
    ``minimal_inputs`` (indices into ``gens``) name the user generators that
    are minimal modulo f and lower-degree data.  With ``track`` the basis
    carries representations in terms of [user gens, relation vectors] and
    the syzygies of that list.
    """
    ring = ambient.ring
    if order is None:
        order = default_order(ambient.twists, ring)
    for v in gens:
        if v and len({order.degree(t) for t in v}) > 1:
            raise StructuralError("generators must be homogeneous")
    rel = relation_vectors(ambient)
    user = [dict(v) for v in gens]
    inputs = rel + user
    engine = _Engine(ring.field, order, ring.nvars, track, not track, ambient.rank == 1)
    minimal = _run(engine, inputs, prefix=len(rel))
    elements, leads, reps = _interreduce(engine)
    nrel = len(rel)
    n_user = len(user)
    # representations are reindexed so that user generators come first
    perm = {k: k - nrel if k >= nrel else n_user + k for k in range(len(inputs))}
    if track:
        reps = [_reindex(r, perm) for r in reps]
        syz = [_reindex(s, perm) for s in engine.syzygies]
    else:
        reps, syz = None, None
    gb = GroebnerBasis(ambient, order, user, elements, leads, reps, syz,
                       [k - nrel for k in minimal if k >= nrel], n_user)
    if verify and not gb.check_criterion():
        raise InvariantViolation("Buchberger criterion fails on computed basis")
    return gb


def _reindex(v: Vec, perm: dict) -> Vec:
    return {(e, perm[i]): c for (e, i), c in v.items()}


def buchberger(gens: Sequence, ambient: GradedFreeModule | GradedRing | None = None,
               order: ModuleOrder | TermOrder | str | None = None, track: bool = False,
               verify: bool = False) -> GroebnerBasis:
    """Reduced Gröbner basis of homogeneous polynomials or module columns.

    ``gens`` is a list of :class:`Poly` (an ideal) or of columns (lists of
    polys).  ``ambient`` defaults to the rank-one module over the polys' ring.
    """
    gens = list(gens)
    if ambient is None or isinstance(ambient, GradedRing):
        if not gens and ambient is None:
            raise StructuralError("cannot infer the ring of an empty generator list")
        ring = ambient if isinstance(ambient, GradedRing) else (
            gens[0].ring if isinstance(gens[0], Poly) else gens[0][0].ring)
        rank = 1 if not gens or isinstance(gens[0], Poly) else len(gens[0])
        ambient = GradedFreeModule(ring, [0] * rank)
    vecs = [vec_from_poly(g) if isinstance(g, Poly) else vec_from_column(g) for g in gens]
    if isinstance(order, (TermOrder, str)):
        order = ModuleOrder(ambient.twists, "top", order)
    return module_gb(vecs, ambient, order, track=track, verify=verify)


def normal_form(v, B: GroebnerBasis):
    """Remainder of ``v`` (a Poly or a column) on division by ``B``."""
    if isinstance(v, Poly):
        return poly_from_vec(B.normal_form_vec(vec_from_poly(v)), B.ring)
    return column_from_vec(B.normal_form_vec(vec_from_column(v)), B.ambient.rank, B.ring)


def minimal_generators(gens: Sequence[Vec], ambient: GradedFreeModule) -> list[Vec]:
    """A minimal homogeneous generating subset (modulo f over S_X), in input order."""
    if not gens:
        return []
    gb = module_gb(gens, ambient)
    f = ambient.ring.relation
    chosen = [gens[k] for k in sorted(gb.minimal_inputs)]
    if f is not None:
        chosen = [reduce_vec_mod(v, f) for v in chosen]
    return chosen


def reduce_vec_mod(v: Vec, f: Poly) -> Vec:
    """Entrywise remainder modulo the principal ideal (f)."""
    nvars = f.ring.nvars
    eng = _Engine(f.ring.field, ModuleOrder([0], "top", f.ring.order), nvars, False, False, True)
    lt = f.lead()
    g = {(e, 0): c for e, c in f.terms.items()}
    c = f.ring.field.inv(lt[1])
    eng.add(_scale(g, c, f.ring.field.p), None)
    comps: dict[int, Vec] = {}
    for (e, i), c in v.items():
        comps.setdefault(i, {})[(e, 0)] = c
    out = {}
    for i, comp in comps.items():
        r, _ = eng.reduce(comp, None, full=True)
        for (e, _), c in r.items():
            out[(e, i)] = c
    return out


def syzygy_vectors(gens: Sequence[Vec], ambient: GradedFreeModule) -> tuple[list[Vec], list[int]]:
    """Minimal generators of the syzygies of ``gens`` (over ambient.ring).

    Returns the syzygy vectors, as elements of the free module with one basis
    vector per generator (twist = generator degree), and those twists.
    """
    if any(not v for v in gens):
        raise StructuralError("syzygies of a zero generator are not supported")
    twists = [vec_degree(v, ambient.twists) for v in gens]
    gb = module_gb(gens, ambient, track=True)
    return _syzygies_from_gb(gb, twists)


def _syzygies_from_gb(gb: GroebnerBasis, twists) -> tuple[list[Vec], list[int]]:
    k = gb.n_user
    ring = gb.ring
    src = GradedFreeModule(ring, twists)
    projected = []
    for s in gb.syzygy_vectors:
        v = {t: c for t, c in s.items() if t[1] < k}
        if v:
            projected.append(v)
    syz = minimal_generators(projected, src)
    key = default_order(twists, ring).key
    syz.sort(key=lambda v: (vec_degree(v, twists), key(max(v, key=key))))
    return syz, twists


def syzygy_module(B: GroebnerBasis) -> GradedMatrix:
    """Matrix whose columns minimally generate the syzygies of B's original
    generators (not of the basis elements)."""
    if not B.tracked:
        B = module_gb(B.generators, B.ambient, B.order, track=True)
    if any(not v for v in B.generators):
        raise StructuralError("syzygies of a zero generator are not supported")
    twists = [vec_degree(v, B.ambient.twists) for v in B.generators]
    syz, twists = _syzygies_from_gb(B, twists)
    src_twists = [vec_degree(v, twists) for v in syz]
    F = GradedFreeModule(B.ring, twists)
    cols = [column_from_vec(v, len(twists), B.ring) for v in syz]
    entries = [[cols[j][i] for j in range(len(cols))] for i in range(len(twists))]
    return GradedMatrix(F, GradedFreeModule(B.ring, src_twists), entries)


# ---------------------------------------------------------------------------
# single-polynomial division


def poly_divmod(p: Poly, divisors: Sequence[Poly]):
    """Multivariate division in the ring order: ``p = sum q_i d_i + r``."""
    ring = p.ring
    F = ring.field
    key = ring.order.key
    leads = [d.lead() for d in divisors]
    invs = [F.inv(c) for _, c in leads]
    qs = [dict() for _ in divisors]
    h = dict(p.terms)
    r = {}
    P = F.p
    while h:
        e = max(h, key=key)
        c = h[e]
        for k, (le, _) in enumerate(leads):
            if all(a <= b for a, b in zip(le, e)):
                shift = tuple(a - b for a, b in zip(e, le))
                q = F(c * invs[k])
                qs[k][shift] = F(qs[k].get(shift, 0) + q)
                for de, dc in divisors[k].terms.items():
                    t = tuple(map(add, de, shift))
                    v = h.get(t, 0) - q * dc
                    v = v % P if P else v
                    if v:
                        h[t] = v
                    else:
                        h.pop(t, None)
                break
        else:
            r[e] = h.pop(e)
    base = ring.base
    return [Poly(base, {e: c for e, c in q.items() if c}) for q in qs], Poly(base, r)


def exact_divide(a: Poly, b: Poly) -> Poly:
    (q,), r = poly_divmod(a, [b])
    if not r.is_zero():
        raise InvariantViolation("inexact polynomial division")
    return q
