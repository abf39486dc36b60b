"""Generators of ACM subvarieties and bundles on a hypersurface X in P^4.

* two planes meeting in a point, cut with X and saturated (``voisin_build``)
* syzygy modules of linear spaces contained in X (``linear_space_bundle``)
* degeneracy loci of general maps G -> sum O_X(m_i) (``kleiman_locus``)

A non-split bundle attached to Y rules out Y = X ∩ S for a codimension-2
subvariety S of P^4 and rules out a split conormal sequence; nothing
stronger is ever claimed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .field import Field, StructuralError
from .groebner import (InvariantViolation, minimal_generators, poly_from_vec, syzygy_vectors, vec_degree,
                       vec_from_poly)
from .ideals import (Ideal, dimension, ideal_meet, irrelevant_ideal, is_smooth_hypersurface,
                     same_saturation, saturate)
from .matrix import GradedFreeModule, GradedMatrix, matrix_determinant
from .mcm import (AcmCertificate, PreconditionError, SplitReport, _module_on_x, acm_certify,
                  split_detect)
from .poly import GradedRing, Poly, monomials_of_degree
from .resolution import PresentedModule, _matrix_from_vecs, minimal_resolution


class RetryBoundExceeded(RuntimeError):
    """A randomized construction failed on every allowed attempt."""


NEGATIVE_Q2 = "Y = X ∩ S impossible"
NEGATIVE_Q3 = "conormal sequence cannot split"
NO_OBSTRUCTION = "no obstruction found"


@dataclass
class QuestionCertificate:
    subject: str
    split: dict
    q2: str
    q3: str
    provenance: list[str]
    caveat: str = ""

    def to_json(self) -> dict:
        return {"subject": self.subject, "bundle": self.split, "q2": self.q2, "q3": self.q3,
                "provenance": list(self.provenance), "caveat": self.caveat}


def question_certificate(subject: str, report: SplitReport, caveat: str = "") -> QuestionCertificate:
    """Verdicts are negative only when the attached bundle is non-split."""
    if report.is_split:
        return QuestionCertificate(subject, report.to_json(), NO_OBSTRUCTION, NO_OBSTRUCTION,
                                   ["split_detect: the bundle is a sum of line bundles"], caveat)
    prov = [
        f"split_detect: reduced core of size {report.core_size} survives, bundle is not split",
        "a split conormal sequence would force the bundle to be a sum of line bundles",
        "no pure codimension-2 subvariety of P^4 restricts to Y unless the bundle splits",
    ]
    return QuestionCertificate(subject, report.to_json(), NEGATIVE_Q2, NEGATIVE_Q3, prov, caveat)


def _random_form(ring: GradedRing, degree: int, rng: random.Random, skip=()) -> Poly:
    terms = {}
    for m in monomials_of_degree(ring.nvars, degree):
        if m in skip:
            continue
        c = ring.field.random_element(rng)
        if c:
            terms[m] = c
    return ring.poly(terms)


def _syzygy_generators(ring: GradedRing, gens: Sequence[Poly]) -> PresentedModule:
    """The first syzygy module of ``gens`` as a presented module over ``ring``."""
    amb = GradedFreeModule(ring, [0])
    syz, twists = syzygy_vectors([vec_from_poly(g) for g in gens], amb)
    F = GradedFreeModule(ring, [g.degree() for g in gens])
    return PresentedModule.image(_matrix_from_vecs(F, syz))


def bundle_of_ideal(I_y: Ideal, X: GradedRing) -> tuple[PresentedModule, list[Poly]]:
    """G in 0 -> G -> sum O_X(-deg g_i) -> I_Y/X -> 0 for minimal generators g_i of I_Y/X."""
    S = X.base
    f = X.relation
    if not I_y.contains(f):
        raise PreconditionError("Y is not contained in X")
    amb = GradedFreeModule(S, [0])
    vecs = minimal_generators([vec_from_poly(f)] + [vec_from_poly(g) for g in I_y.basis()], amb)
    polys = [poly_from_vec(v, S) for v in vecs]
    if not polys or polys[0] != f:
        raise InvariantViolation("f is not a minimal generator of I_Y")
    polys = polys[1:]
    if not polys:
        raise PreconditionError("Y is all of X")
    return _syzygy_generators(X, polys), polys


# ---------------------------------------------------------------------------
# two planes through a point


@dataclass
class VoisinConfig:
    d: int
    f: Poly
    X: GradedRing
    point: tuple
    planes: tuple[Ideal, Ideal]
    I_sigma: Ideal
    I_z: Ideal
    I_y: Ideal
    y_generators: list[Poly]
    G: PresentedModule
    smooth: bool
    attempts: int
    acm: AcmCertificate
    seed: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def y_generator_degrees(self) -> list[int]:
        return sorted(g.degree() for g in self.y_generators)

    def to_json(self) -> dict:
        from .poly import format_poly
        return {
            "d": self.d, "seed": self.seed, "attempts": self.attempts, "smooth": self.smooth,
            "f": format_poly(self.f), "point": list(self.point),
            "I_sigma": [format_poly(g) for g in self.I_sigma.basis()],
            "I_Y": [format_poly(g) for g in self.I_y.basis()],
            "Y_generator_degrees": self.y_generator_degrees,
            "G_generator_twists": list(self.G.generators.twists),
            "acm": self.acm.to_json(), "notes": list(self.notes),
        }


def _through_point(f: Poly, point: Sequence[int]) -> bool:
    F = f.ring.field
    return F(f.evaluate([F(a) for a in point])) == 0


def voisin_build(d: int, f: Poly | None = None, seed: int = 0, retries: int = 5,
                 field: Field | None = None) -> VoisinConfig:
    """Y = saturation of (P1 ∪ P2) ∩ X at the point P1 ∩ P2, and its syzygy bundle G."""
    if d < 2:
        raise PreconditionError("degree must be at least 2")
    if f is not None:
        S = f.ring
        if S.nvars != 5:
            raise PreconditionError("the construction lives in P^4")
    else:
        S = GradedRing(["x0", "x1", "x2", "x3", "x4"], field or Field())
    x = S.gens
    point = (0, 0, 0, 0, 1)
    P1 = Ideal(S, [x[0], x[1]])
    P2 = Ideal(S, [x[2], x[3]])
    if dimension(P1 + P2) != 1:
        raise InvariantViolation("the planes do not meet in a single point")
    notes: list[str] = []
    attempts = 0
    if f is None:
        rng = random.Random(seed)
        apex = (0, 0, 0, 0, d)
        for attempts in range(1, retries + 2):
            cand = _random_form(S, d, rng, skip=(apex,))
            if not cand.is_zero() and is_smooth_hypersurface(cand):
                f = cand
                break
        else:
            raise RetryBoundExceeded(
                f"no smooth degree-{d} hypersurface through the point in {retries + 1} samples")
        smooth = True
    else:
        if f.degree() != d or not f.is_homogeneous():
            raise PreconditionError(f"f must be homogeneous of degree {d}")
        if not _through_point(f, point):
            raise PreconditionError("X does not pass through the point [0:0:0:0:1]")
        smooth = is_smooth_hypersurface(f)
        if not smooth:
            notes.append("X is singular: certificates for bundles assume a smooth X")
    X = S.quotient(f)
    I_sigma = ideal_meet(P1, P2)
    I_z = I_sigma + Ideal(S, [f])
    I_y = saturate(I_z, Ideal(S, x[:4]))
    G, polys = bundle_of_ideal(I_y, X)
    degs = sorted(p.degree() for p in polys)
    expected = sorted([2] * 4 + [d])
    if degs != expected:
        notes.append(f"I_Y/X generator degrees {degs} differ from 4 x deg 2 + 1 x deg {d}")
    acm = acm_certify(I_y, X, seed=seed)
    return VoisinConfig(d, f, X, point, (P1, P2), I_sigma, I_z, I_y, polys, G, smooth,
                        max(attempts, 1), acm, seed, notes)


# ---------------------------------------------------------------------------
# linear spaces in X


@dataclass
class LinearSpaceBundle:
    module: PresentedModule
    r: int
    stage: int
    acm: AcmCertificate
    split: SplitReport

    def to_json(self) -> dict:
        return {"r": self.r, "syzygy_stage": self.stage,
                "generator_twists": list(self.module.generators.twists),
                "acm": self.acm.to_json(), "split": self.split.to_json()}


def linear_space_bundle(X: GradedRing, L: Sequence[Poly] | str = "empty",
                        seed: int = 0) -> LinearSpaceBundle:
    """The syzygy module of I(L) over S_X at the first stage where it is MCM.

    S_X/I(L) has depth dim X + 1 - r, so the j-th syzygy module has depth
    min(dim X + 2 - r + j, dim X + 1); it first becomes MCM at j = r - 1.
    """
    if not X.is_quotient:
        raise PreconditionError("linear_space_bundle needs a hypersurface ring")
    S = X.base
    if isinstance(L, str):
        if L != "empty":
            raise PreconditionError(f"unknown linear space {L!r}")
        forms = list(S.gens)
    else:
        forms = [S.poly(p.terms) if p.ring != S else p for p in L]
        if any(p.is_zero() or p.degree() != 1 or not p.is_homogeneous() for p in forms):
            raise PreconditionError("a linear space is given by nonzero linear forms")
    I = Ideal(S, forms)
    forms = I.minimal_gens()
    if not I.contains(X.relation):
        raise PreconditionError("L is not contained in X")
    r = len(forms) - 1
    if r < 2:
        raise PreconditionError(f"L has codimension {r} in X; a kernel needs codimension at least 2")
    res = minimal_resolution(PresentedModule.from_ideal(X, forms), over="S_X", max_length=r)
    if len(res.differentials) < r:
        raise InvariantViolation("resolution of I(L) over S_X ended early")
    M = PresentedModule(X, res.differentials[r - 2].source, res.differentials[r - 1])
    acm = acm_certify(M, seed=seed)
    split = split_detect(M)
    return LinearSpaceBundle(M, r, r - 1, acm, split)


# ---------------------------------------------------------------------------
# degeneracy loci of general maps


def dual_generators(G: PresentedModule) -> list[tuple[dict[int, Poly], int]]:
    """Generators h of Hom(G, S_X(*)) as (entries by generator index, shift s).

    h maps generator j to h[j] of degree s + t_j, i.e. h : G -> S_X(s).
    """
    X = G.ring
    t = G.generators.twists
    R = G.relations
    amb = GradedFreeModule(X, [-u for u in R.source.twists])
    rows = {}
    for j in range(len(t)):
        v = {}
        for r in range(R.shape[1]):
            e = R.entries[j][r]
            if not e.is_zero():
                for m, c in e.terms.items():
                    v[(m, r)] = c
        rows[j] = v
    out: list[tuple[dict[int, Poly], int]] = []
    live = [j for j in range(len(t)) if rows[j]]
    for j in range(len(t)):
        if not rows[j]:
            out.append(({j: X.base.one()}, -t[j]))
    if live:
        syz, tw = syzygy_vectors([rows[j] for j in live], amb)
        for w in syz:
            s = vec_degree(w, tw)
            h: dict[int, dict] = {}
            for (m, pos), c in w.items():
                h.setdefault(live[pos], {})[m] = c
            out.append(({j: X.base.poly(terms) for j, terms in h.items()}, s))
    return out


@dataclass
class KleimanResult:
    ideal: Ideal
    twists: list[int]
    attempts: int
    matrix: GradedMatrix
    acm: AcmCertificate
    certificate: QuestionCertificate
    degree: int
    determinantal: Ideal | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        from .poly import format_poly
        return {
            "twists": list(self.twists), "attempts": self.attempts, "degree": self.degree,
            "I_Y": [format_poly(g) for g in self.ideal.basis()],
            "acm": self.acm.to_json(), "certificate": self.certificate.to_json(),
            "determinantal_S": ([format_poly(g) for g in self.determinantal.basis()]
                                if self.determinantal is not None else None),
            "notes": list(self.notes),
        }


def _minors_ideal(A: GradedMatrix, k: int, extra: Sequence[Poly]) -> Ideal:
    n, m = A.shape
    gens = list(extra)
    for rows in itertools.combinations(range(n), k):
        for cols in itertools.combinations(range(m), k):
            p = matrix_determinant(A.submatrix(rows, cols))
            if not p.is_zero():
                gens.append(p)
    return Ideal(A.ring.base, gens)


def _general_map(X: GradedRing, dual, ngens: int, twists: Sequence[int], rng: random.Random):
    base = X.base
    rows = []
    for m in twists:
        row = [base.zero()] * ngens
        for h, s in dual:
            if m - s < 0:
                continue
            p = _random_form(base, m - s, rng)
            for j, e in h.items():
                row[j] = row[j] + (p * e)
        rows.append([X.reduce_mod_relation(e) for e in row])
    return rows


def kleiman_locus(G: PresentedModule, twists: Sequence[int] | None = None, seed: int = 0,
                  retries: int = 5, X: GradedRing | None = None,
                  cross_check: bool = True) -> KleimanResult:
    """Y from a general map G -> sum S_X(m_i) with rank(G) + 1 summands.

    The ideal is read off a generator w of C* = ker(A^T) for C = coker(A):
    the evaluation C -> C** = S_X(a) sends e_i to w_i.
    """
    G = _module_on_x(G, X)
    X = G.ring
    S = X.base
    f = X.relation
    acm = acm_certify(G, seed=seed)
    if not acm.acm or not acm.locally_free:
        raise PreconditionError("G must be an ACM bundle (MCM and locally free)")
    split = split_detect(G)
    k = split.mf.rank + 1
    t = list(G.generators.twists)
    if twists is None:
        twists = [max(t) + 1] * k
    twists = list(twists)
    if len(twists) != k:
        raise PreconditionError(f"need rank(G) + 1 = {k} twists, got {len(twists)}")
    dual = dual_generators(G)
    notes: list[str] = []
    irr = irrelevant_ideal(S)
    for attempt in range(retries + 1):
        m = [a + attempt for a in twists]
        rng = random.Random(seed * 1_000_003 + attempt)
        rows = _general_map(X, dual, len(t), m, rng)
        target = GradedFreeModule(S, [-a for a in m])
        A = GradedMatrix(target, GradedFreeModule(S, t), rows)
        vecs = [{(e, j): c for j, p in enumerate(row) for e, c in p.terms.items()} for row in rows]
        if any(not v for v in vecs):
            notes.append(f"twists {m}: a row of the map vanishes")
            continue
        syz, _ = syzygy_vectors(vecs, GradedFreeModule(X, [-a for a in t]))
        if len(syz) != 1:
            notes.append(f"twists {m}: dual of the cokernel is not cyclic ({len(syz)} generators)")
            continue
        w = syz[0]
        entries: dict[int, dict] = {}
        for (e, pos), c in w.items():
            entries.setdefault(pos, {})[e] = c
        J = Ideal(S, [S.poly(v) for v in entries.values()] + [f])
        I_y = saturate(J, irr)
        if dimension(I_y) != S.nvars - 3:
            notes.append(f"twists {m}: locus has Krull dimension {dimension(I_y)}")
            continue
        if cross_check:
            if not same_saturation(_minors_ideal(A, k - 1, [f]), I_y, irr):
                raise InvariantViolation("double-dual image and Fitting ideal disagree")
        cert = acm_certify(I_y, X, seed=seed)
        from .invariants import hilbert
        deg = hilbert(I_y).degree
        det = None
        if split.is_split:
            det = _minors_ideal(A, k - 1, [])
            if not same_saturation(det + Ideal(S, [f]), I_y, irr):
                raise InvariantViolation("Y differs from X ∩ S for the lifted determinantal S")
        qc = question_certificate("Y", split, S.field.caveat())
        return KleimanResult(I_y, m, attempt + 1, A, cert, qc, deg, det, notes)
    raise RetryBoundExceeded(f"no codimension-2 locus after {retries + 1} attempts: " + "; ".join(notes))
