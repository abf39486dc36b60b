"""Presented graded modules, minimal free resolutions and Betti tables."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .field import StructuralError
from .groebner import (GroebnerBasis, InvariantViolation, column_from_vec, minimal_generators,
                       module_gb, reduce_vec_mod, syzygy_vectors, vec_degree, vec_from_column)
from .matrix import GradedFreeModule, GradedMatrix
from .poly import GradedRing, Poly


def _matrix_from_vecs(target: GradedFreeModule, vecs: Sequence[dict]) -> GradedMatrix:
    ring = target.ring
    cols = [column_from_vec(v, target.rank, ring) for v in vecs]
    src = GradedFreeModule(ring, [vec_degree(v, target.twists) for v in vecs])
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(target.rank)]
    return GradedMatrix(target, src, rows)


class PresentedModule:
    """coker(relations: F1 -> F0) over ``ring`` (S, or S_X = S/(f)).

    Entries are polynomials of the ambient ring; over S_X they are read
    modulo f.  ``generators`` is F0.
    """

    def __init__(self, ring: GradedRing, generators: GradedFreeModule | Sequence[int],
                 relations: GradedMatrix | None = None):
        if not isinstance(generators, GradedFreeModule):
            generators = GradedFreeModule(ring, generators)
        if generators.ring != ring:
            generators = GradedFreeModule(ring, generators.twists)
        if relations is None:
            relations = GradedMatrix(generators, GradedFreeModule(ring, []))
        if relations.target.twists != generators.twists:
            raise StructuralError("relation matrix target must be the generator module")
        if relations.ring != ring:
            relations = relations.with_ring(ring)
        self.ring = ring
        self.generators = generators
        self.relations = relations
        self._gb = None

    # constructors
    @classmethod
    def free(cls, ring: GradedRing, twists: Sequence[int]) -> "PresentedModule":
        return cls(ring, twists)

    @classmethod
    def cokernel(cls, A: GradedMatrix) -> "PresentedModule":
        return cls(A.ring, A.target, A)

    @classmethod
    def quotient(cls, ring: GradedRing, gens: Sequence[Poly]) -> "PresentedModule":
        """The cyclic module ring/(gens)."""
        F0 = GradedFreeModule(ring, [0])
        gens = [g for g in gens if not g.is_zero()]
        A = GradedMatrix(F0, GradedFreeModule(ring, [g.degree() for g in gens]), [list(gens)])
        return cls(ring, F0, A)

    @classmethod
    def image(cls, A: GradedMatrix) -> "PresentedModule":
        """The submodule of ``A.target`` generated by the columns of A."""
        ring = A.ring
        vecs = [vec_from_column(c) for c in A.columns()]
        gens = minimal_generators([v for v in vecs if v], A.target)
        if not gens:
            return cls(ring, [])
        syz, twists = syzygy_vectors(gens, A.target)
        F0 = GradedFreeModule(ring, twists)
        return cls(ring, F0, _matrix_from_vecs(F0, syz))

    @classmethod
    def from_ideal(cls, ring: GradedRing, gens: Sequence[Poly]) -> "PresentedModule":
        """An ideal of ``ring`` viewed as a module (generators = minimal generators)."""
        F = GradedFreeModule(ring, [0])
        A = GradedMatrix(F, GradedFreeModule(ring, [g.degree() for g in gens if g]), [[g for g in gens if g]])
        return cls.image(A)

    # structure
    @property
    def rank_of_cover(self) -> int:
        return self.generators.rank

    def is_zero(self) -> bool:
        return self.generators.rank == 0 or self.relation_gb().is_unit()

    def relation_vectors(self) -> list[dict]:
        return [v for v in (vec_from_column(c) for c in self.relations.columns()) if v]

    def relation_gb(self) -> GroebnerBasis:
        """GB of the relation submodule of F0 (including f*F0 over S_X)."""
        if self._gb is None:
            self._gb = module_gb(self.relation_vectors(), self.generators)
        return self._gb

    def as_s_module(self) -> "PresentedModule":
        """The same module viewed over the ambient ring: relations | f * Id."""
        if not self.ring.is_quotient:
            return self
        base = self.ring.base
        f = self.ring.relation
        F0 = GradedFreeModule(base, self.generators.twists)
        n = F0.rank
        src = list(self.relations.source.twists) + [c + f.degree() for c in F0.twists]
        rows = []
        for i in range(n):
            rows.append(list(self.relations.entries[i]) + [f if k == i else base.zero() for k in range(n)])
        return PresentedModule(base, F0, GradedMatrix(F0, GradedFreeModule(base, src), rows))

    def over(self, ring: GradedRing) -> "PresentedModule":
        """Base change S -> S_X (entries reduced mod f)."""
        rel = self.relations.with_ring(ring).reduce_mod(ring.relation)
        return PresentedModule(ring, GradedFreeModule(ring, self.generators.twists), rel)

    def __add__(self, other: "PresentedModule") -> "PresentedModule":
        if other.ring != self.ring:
            raise StructuralError("direct sum over different rings")
        F0 = self.generators + other.generators
        a, b = self.relations, other.relations
        base = self.ring.base
        src = GradedFreeModule(self.ring, a.source.twists + b.source.twists)
        rows = [list(r) + [base.zero()] * b.shape[1] for r in a.entries]
        rows += [[base.zero()] * a.shape[1] + list(r) for r in b.entries]
        return PresentedModule(self.ring, F0, GradedMatrix(F0, src, rows))

    def shift(self, k: int) -> "PresentedModule":
        """M(-k): every twist grows by ``k``."""
        return PresentedModule(self.ring, self.generators.shift(k), self.relations.shift(k))

    def __repr__(self):
        return (f"PresentedModule({self.generators.rank} generators, "
                f"{self.relations.shape[1]} relations over {self.ring!r})")


def _find_unit(R: GradedMatrix):
    for i, row in enumerate(R.entries):
        for k, e in enumerate(row):
            if e and e.is_constant():
                return i, k
    return None


def _prune_relations(M: PresentedModule) -> PresentedModule:
    vecs = minimal_generators(M.relation_vectors(), M.generators)
    return PresentedModule(M.ring, M.generators, _matrix_from_vecs(M.generators, vecs))


def minimalize(M: PresentedModule) -> PresentedModule:
    """Cancel generator/relation pairs joined by unit entries, to a fixpoint.

    Redundant relations are pruned first; pivots are taken smallest row
    index first.  The result presents an isomorphic module with no nonzero
    constant in its relation matrix.
    """
    F = M.ring.field
    f = M.ring.relation
    while True:
        M = _prune_relations(M)
        hit = _find_unit(M.relations)
        if hit is None:
            return M
        i, k = hit
        R = M.relations
        u_inv = F.inv(R.entries[i][k].constant_value())
        col_k = R.column(k)
        rows = [list(r) for r in R.entries]
        for l in range(R.shape[1]):
            if l == k or rows[i][l].is_zero():
                continue
            q = rows[i][l].scale(u_inv)
            for r in range(R.shape[0]):
                if col_k[r]:
                    rows[r][l] = rows[r][l] - q * col_k[r]
        keep_r = [r for r in range(R.shape[0]) if r != i]
        keep_c = [c for c in range(R.shape[1]) if c != k]
        F0 = GradedFreeModule(M.ring, [M.generators.twists[r] for r in keep_r])
        F1 = GradedFreeModule(M.ring, [R.source.twists[c] for c in keep_c])
        entries = [[rows[r][c] for c in keep_c] for r in keep_r]
        A = GradedMatrix(F0, F1, entries)
        if f is not None:
            A = A.reduce_mod(f)
        M = PresentedModule(M.ring, F0, A)


@dataclass
class BettiTable:
    """Ranks beta[i, j] of S(-j) in homological position i."""

    entries: dict = field(default_factory=dict)
    ring_tag: str = "S"
    truncated: bool = False
    periodic_from: int | None = None

    @classmethod
    def from_modules(cls, modules: Sequence[GradedFreeModule], ring_tag="S", truncated=False,
                     periodic_from=None) -> "BettiTable":
        entries = {}
        for i, F in enumerate(modules):
            for j, b in Counter(F.twists).items():
                entries[(i, j)] = b
        return cls(entries, ring_tag, truncated, periodic_from)

    @property
    def length(self) -> int:
        return max((i for i, _ in self.entries), default=-1)

    def rank(self, i: int) -> int:
        return sum(b for (k, _), b in self.entries.items() if k == i)

    def twists(self, i: int) -> list[int]:
        out = []
        for (k, j), b in sorted(self.entries.items()):
            if k == i:
                out += [j] * b
        return out

    def signed_twists(self) -> list[tuple[int, int]]:
        """(sign, twist) for every free summand, sign = (-1)^i."""
        out = []
        for (i, j), b in sorted(self.entries.items()):
            out += [(-1 if i % 2 else 1, j)] * b
        return out

    def euler_numerator(self) -> dict[int, int]:
        """sum_i (-1)^i sum_j beta_ij t^j as {exponent: coefficient}."""
        num: dict[int, int] = {}
        for s, j in self.signed_twists():
            num[j] = num.get(j, 0) + s
        return {k: v for k, v in num.items() if v}

    def __add__(self, other: "BettiTable") -> "BettiTable":
        e = dict(self.entries)
        for k, v in other.entries.items():
            e[k] = e.get(k, 0) + v
        return BettiTable(e, self.ring_tag, self.truncated or other.truncated)

    def __eq__(self, other):
        if not isinstance(other, BettiTable):
            return NotImplemented
        if self.truncated or other.truncated:
            cut = min(self.length, other.length)
            a = {k: v for k, v in self.entries.items() if k[0] <= cut}
            b = {k: v for k, v in other.entries.items() if k[0] <= cut}
            return a == b
        return self.entries == other.entries

    def to_text(self) -> str:
        """Macaulay-style grid: rows are j - i, columns homological degree."""
        if not self.entries:
            return "total:\n"
        L = self.length
        rows = sorted({j - i for (i, j) in self.entries})
        cells = [[str(i) for i in range(L + 1)], [str(self.rank(i)) for i in range(L + 1)]]
        labels = ["", "total:"]
        for r in rows:
            labels.append(f"{r}:")
            cells.append([str(self.entries.get((i, i + r), 0)) if self.entries.get((i, i + r)) else "."
                          for i in range(L + 1)])
        lw = max(len(s) for s in labels)
        widths = [max(len(c[i]) for c in cells) for i in range(L + 1)]
        lines = []
        for lab, row in zip(labels, cells):
            lines.append(lab.rjust(lw) + " " + " ".join(c.rjust(w) for c, w in zip(row, widths)))
        return "\n".join(line.rstrip() for line in lines) + "\n"

    def to_json(self) -> dict:
        return {
            "ring": self.ring_tag,
            "length": self.length,
            "truncated": self.truncated,
            "periodic_from": self.periodic_from,
            "betti": [[i, j, b] for (i, j), b in sorted(self.entries.items())],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "BettiTable":
        if isinstance(data, str):
            data = json.loads(data)
        return cls({(i, j): b for i, j, b in data["betti"]}, data["ring"], data["truncated"],
                   data.get("periodic_from"))


@dataclass
class Resolution:
    modules: list[GradedFreeModule]
    differentials: list[GradedMatrix]
    betti: BettiTable

    @property
    def length(self) -> int:
        return len(self.differentials)


def minimal_resolution(M: PresentedModule, over: str = "S", max_length: int = 4,
                       verify: bool = False) -> Resolution:
    """Minimal graded free resolution, built by iterated syzygies + minimalize.

    Over S the computation runs to its natural end; over S_X it stops after
    ``max_length`` differentials (truncated flag) and records where the
    twists start repeating with period two up to a shift by d.
    """
    if over not in ("S", "S_X"):
        raise StructuralError("resolutions are over 'S' or 'S_X'")
    if over == "S":
        M = M.as_s_module()
    elif not M.ring.is_quotient:
        raise StructuralError("module has no hypersurface relation")
    if max_length < 1:
        raise StructuralError("max_length must be at least 1")
    ring = M.ring
    P = minimalize(M)
    if P.generators.rank == 0:
        return Resolution([], [], BettiTable({}, over))
    modules = [P.generators]
    diffs: list[GradedMatrix] = []
    d = P.relations
    truncated = False
    while d.shape[1] > 0:
        if over == "S_X" and len(diffs) >= max_length:
            truncated = True
            break
        diffs.append(d)
        modules.append(d.source)
        if over == "S" and len(diffs) > ring.nvars:
            raise InvariantViolation("resolution over S longer than the number of variables")
        vecs = [vec_from_column(c) for c in d.columns()]
        syz, _ = syzygy_vectors(vecs, d.target)
        if not syz:
            break
        d = _matrix_from_vecs(d.source, syz)
    periodic_from = None
    if over == "S_X":
        periodic_from = _periodicity(modules, ring.degree_of_relation)
    betti = BettiTable.from_modules(modules, over, truncated, periodic_from)
    res = Resolution(modules, diffs, betti)
    if verify:
        check_resolution(res)
    return res


def _periodicity(modules, d) -> int | None:
    """Smallest i with F_{k+2} = F_k(-d) for every k >= i that can be checked."""
    start = None
    for i in range(len(modules) - 3, 0, -1):
        if sorted(c + d for c in modules[i].twists) == sorted(modules[i + 2].twists):
            start = i
        else:
            break
    return start


def check_resolution(res: Resolution) -> None:
    """d_i ∘ d_{i+1} = 0 (mod f over S_X) and no unit entries."""
    for A in res.differentials:
        for row in A.entries:
            for e in row:
                if e and e.is_constant():
                    raise InvariantViolation("non-minimal differential (unit entry)")
    for A, B in zip(res.differentials, res.differentials[1:]):
        C = (A * B).reduce_mod(A.ring.relation)
        if not C.is_zero():
            raise InvariantViolation("consecutive differentials do not compose to zero")
