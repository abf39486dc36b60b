"""Maximal Cohen-Macaulay modules on a hypersurface X = V(f).

ACM-ness is certified through projective dimension over S (a graded
S_X-module is MCM iff pd_S = 1; a subscheme Y is ACM iff pd_S(S/I_Y) equals
its codimension).  MCM modules are turned into matrix factorizations, whose
unit entries expose free summands.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .field import StructuralError
from .groebner import InvariantViolation, module_gb, vec_from_column
from .ideals import Ideal, dimension, is_smooth_hypersurface
from .matrix import (GradedFreeModule, GradedMatrix, det_scalar, matrix_determinant,
                     matrix_product)
from .poly import GradedRing, Poly, format_poly, monomials_of_degree
from .resolution import BettiTable, PresentedModule, minimal_resolution


class PreconditionError(ValueError):
    """An operation was called on an input outside its domain."""


@dataclass
class AcmCertificate:
    subject: str
    acm: bool
    pd_s: int
    betti: BettiTable
    codim: int | None = None
    locally_free: bool | None = None
    fitting_evidence: str = ""
    caveat: str = ""

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "acm": self.acm,
            "pd_S": self.pd_s,
            "codim": self.codim,
            "locally_free": self.locally_free,
            "fitting_evidence": self.fitting_evidence,
            "betti": self.betti.to_json(),
            "caveat": self.caveat,
        }


def _module_on_x(M: PresentedModule, X: GradedRing | None) -> PresentedModule:
    if M.ring.is_quotient:
        return M
    if X is None or not X.is_quotient:
        raise StructuralError("not a module on X: no hypersurface given")
    gb = M.relation_gb()
    f = X.relation
    for i in range(M.generators.rank):
        v = {(e, i): c for e, c in f.terms.items()}
        if not gb.contains_vec(v):
            raise StructuralError("not a module on X: f does not annihilate it")
    return M.over(X)


def acm_certify(subject, X: GradedRing | None = None, seed: int = 0) -> AcmCertificate:
    """ACM verdict for a module over S_X or for the ideal of a subscheme of X."""
    if isinstance(subject, (Ideal, list, tuple)):
        I = subject if isinstance(subject, Ideal) else Ideal(subject[0].ring, subject)
        if X is None or not X.is_quotient:
            raise StructuralError("an ideal needs the hypersurface ring to certify against")
        f = X.relation
        if not I.contains(f):
            raise StructuralError("not a module on X: f is not in the ideal")
        S = I.ring
        res = minimal_resolution(PresentedModule.quotient(S, I.gens))
        pd = res.length
        dim = dimension(I)
        codim = S.nvars - dim if dim >= 0 else S.nvars
        return AcmCertificate("ideal", pd == codim, pd, res.betti, codim=codim,
                              caveat=S.field.caveat())
    M = _module_on_x(subject, X)
    if M.is_zero():
        raise PreconditionError("the zero module has no ACM certificate")
    res = minimal_resolution(M, over="S")
    pd = res.length
    cert = AcmCertificate("module", pd == 1, pd, res.betti, caveat=M.ring.field.caveat())
    if pd == 1:
        phi = res.differentials[0]
        cert.locally_free, cert.fitting_evidence = _locally_free(phi, M.ring, seed)
    else:
        cert.fitting_evidence = "not evaluated: module is not MCM"
    return cert


def _mix_rows(A: GradedMatrix, rng: random.Random) -> list[list[Poly]]:
    """Random invertible scalar row operations inside blocks of equal twist."""
    F = A.ring.field
    rows = [list(r) for r in A.entries]
    groups: dict[int, list[int]] = {}
    for i, t in enumerate(A.target.twists):
        groups.setdefault(t, []).append(i)
    out = [None] * len(rows)
    for idx in groups.values():
        while True:
            C = [[F.random_element(rng) for _ in idx] for _ in idx]
            if not F.p or det_scalar(C, F.p):
                break
        for a, i in enumerate(idx):
            acc = [A.ring.base.zero()] * A.shape[1]
            for b, k in enumerate(idx):
                if C[a][b]:
                    acc = [x + rows[k][j].scale(C[a][b]) for j, x in enumerate(acc)]
            out[i] = acc
    return out


def _locally_free(phi: GradedMatrix, X: GradedRing, seed: int) -> tuple[bool, str]:
    """Fitting test: the (N-r)-minors of Phi together with f have no common zero.

    For minors of size 3 or more on a smooth X the Auslander-Buchsbaum
    argument is used instead.

    Minors are added in batches; any subset already cutting out the empty set
    certifies the claim.
    """
    N = phi.shape[0]
    d = X.degree_of_relation
    r = (sum(phi.source.twists) - sum(phi.target.twists)) // d
    k = N - r
    if k <= 0:
        return True, f"rank {r} = size {N}: Fitting ideal is the unit ideal"
    if k >= 3 and is_smooth_hypersurface(X.relation):
        return True, ("X is smooth and M is MCM, so every stalk is MCM over a regular "
                      "local ring and hence free")
    rng = random.Random(seed)
    mixed = GradedMatrix(phi.target, phi.source, _mix_rows(phi, rng), check=False)
    mixed = GradedMatrix(mixed.transpose().target, mixed.transpose().source,
                         _mix_rows(mixed.transpose(), rng), check=False).transpose()
    gens = [X.relation]
    count = 0
    batch = 6
    for rows in itertools.combinations(range(N), k):
        for cols in itertools.combinations(range(N), k):
            m = matrix_determinant(mixed.submatrix(rows, cols))
            count += 1
            if not m.is_zero():
                gens.append(m)
            if count % batch == 0 and dimension(Ideal(X.base, gens)) <= 0:
                return True, f"{count} of the {k}x{k} minors of Phi with f define the empty set"
            if count % batch == 0:
                batch *= 2
    if dimension(Ideal(X.base, gens)) <= 0:
        return True, f"all {count} {k}x{k} minors of Phi with f define the empty set"
    return False, f"the {k}x{k} minors of Phi vanish somewhere on X"


# ---------------------------------------------------------------------------
# matrix factorizations


@dataclass
class MatrixFactorization:
    """Square graded matrices with phi*psi = psi*phi = f*Id.

    ``phi``: F1 -> F0 (the minimal S-resolution of the module), ``psi``:
    F0(-d) -> F1.
    """

    f: Poly
    phi: GradedMatrix
    psi: GradedMatrix

    @property
    def d(self) -> int:
        return self.f.degree()

    @property
    def size(self) -> int:
        return self.phi.shape[0]

    @property
    def reduced(self) -> bool:
        return not any(e and e.is_constant() for M in (self.phi, self.psi)
                       for row in M.entries for e in row)

    @property
    def rank(self) -> int:
        """Rank on X of coker(phi): deg det(phi) / d."""
        return (sum(self.phi.source.twists) - sum(self.phi.target.twists)) // self.d

    def verify(self) -> None:
        ring = self.phi.ring.base
        n = self.size
        if self.psi.shape != (n, n) or self.phi.shape != (n, n):
            raise InvariantViolation("matrix factorization is not square")
        fI = [[self.f if i == j else ring.zero() for j in range(n)] for i in range(n)]
        if matrix_product(self.phi.entries, self.psi.entries, ring) != fI:
            raise InvariantViolation("phi * psi != f * Id")
        if matrix_product(self.psi.entries, self.phi.entries, ring) != fI:
            raise InvariantViolation("psi * phi != f * Id")

    def to_json(self) -> dict:
        fmt = lambda M: [[format_poly(e, explicit=True) for e in row] for row in M.entries]
        return {
            "size": self.size,
            "d": self.d,
            "f": format_poly(self.f, explicit=True),
            "phi": fmt(self.phi),
            "psi": fmt(self.psi),
            "phi_target_twists": list(self.phi.target.twists),
            "phi_source_twists": list(self.phi.source.twists),
            "reduced": self.reduced,
        }

    @classmethod
    def from_json(cls, data: dict, ring: GradedRing) -> "MatrixFactorization":
        base = ring.base
        f = base.parse(data["f"])
        t = GradedFreeModule(base, data["phi_target_twists"])
        s = GradedFreeModule(base, data["phi_source_twists"])
        phi = GradedMatrix(t, s, [[base.parse(e) for e in row] for row in data["phi"]])
        psi = GradedMatrix(s, t.shift(f.degree()), [[base.parse(e) for e in row] for row in data["psi"]])
        return cls(f, phi, psi)

    def module(self, X: GradedRing) -> PresentedModule:
        """coker(phi) as a module over S_X."""
        return PresentedModule(X, GradedFreeModule(X, self.phi.target.twists),
                               self.phi.with_ring(X)).over(X)


def mf_extract(M: PresentedModule, X: GradedRing | None = None) -> MatrixFactorization:
    """Matrix factorization of an MCM module: phi from the minimal S-resolution,
    psi by lifting f*Id through phi."""
    M = _module_on_x(M, X)
    f = M.ring.relation
    res = minimal_resolution(M, over="S")
    if res.length != 1:
        raise PreconditionError(f"module is not MCM: pd_S = {res.length}")
    phi = res.differentials[0]
    N, m = phi.shape
    if N != m:
        raise InvariantViolation("minimal S-resolution of an MCM module is not square")
    base = phi.ring.base
    phi = GradedMatrix(GradedFreeModule(base, phi.target.twists),
                       GradedFreeModule(base, phi.source.twists), phi.entries)
    gb = module_gb([vec_from_column(c) for c in phi.columns()], phi.target, track=True)
    psi_rows = [[base.zero() for _ in range(N)] for _ in range(N)]
    for j in range(N):
        target = {(e, j): c for e, c in f.terms.items()}
        coeffs = gb.lift_vec(target)
        if coeffs is None:
            raise InvariantViolation("f * e_j is not in the image of phi")
        for (e, k), c in coeffs.items():
            psi_rows[k][j] = psi_rows[k][j] + base.monomial(e, c)
    psi = GradedMatrix(phi.source, phi.target.shift(f.degree()), psi_rows)
    mf = MatrixFactorization(f, phi, psi)
    mf.verify()
    return mf


def _clear_unit(A: list, B: list, r: int, c: int, F) -> None:
    """Given AB = BA = f*I and a unit A[r][c], clear row r and column c of A.

    Column operations on A are paired with inverse row operations on B and
    vice versa, so both products are preserved.
    """
    n = len(A)
    u_inv = F.inv(A[r][c].constant_value())
    for k in range(n):
        if k == c or A[r][k].is_zero():
            continue
        q = A[r][k].scale(u_inv)
        for i in range(n):
            if A[i][c]:
                A[i][k] = A[i][k] - q * A[i][c]
        for j in range(n):
            if B[k][j]:
                B[c][j] = B[c][j] + q * B[k][j]
    for l in range(n):
        if l == r or A[l][c].is_zero():
            continue
        q = A[l][c].scale(u_inv)
        A[l][c] = A[l][c] - q * A[r][c]
        for i in range(n):
            if B[i][l]:
                B[i][r] = B[i][r] + q * B[i][l]


def _first_unit(M: list):
    for i, row in enumerate(M):
        for j, e in enumerate(row):
            if e and e.is_constant():
                return i, j
    return None


@dataclass
class SplitReport:
    """Free summands split off an MCM module and the remaining reduced core.

    ``line_bundle_twists`` lists a for every summand O_X(a).
    """

    line_bundle_twists: list[int]
    core: MatrixFactorization | None
    mf: MatrixFactorization
    zero_blocks: int = 0

    @property
    def core_size(self) -> int:
        return self.core.size if self.core is not None else 0

    @property
    def is_split(self) -> bool:
        return self.core_size == 0

    def to_json(self) -> dict:
        return {
            "split": self.is_split,
            "line_bundle_twists": sorted(self.line_bundle_twists),
            "core_size": self.core_size,
            "core_rank": self.core.rank if self.core is not None else 0,
            "mf_size": self.mf.size,
        }


def split_detect(M: PresentedModule, X: GradedRing | None = None) -> SplitReport:
    """Strip trivial blocks (units in psi give O_X summands) to a fixpoint."""
    mf = mf_extract(M, X)
    F = mf.phi.ring.field
    phi = [list(r) for r in mf.phi.entries]
    psi = [list(r) for r in mf.psi.entries]
    t0 = list(mf.phi.target.twists)
    t1 = list(mf.phi.source.twists)
    twists, zero_blocks = [], 0
    while phi:
        hit = _first_unit(psi)
        if hit is not None:
            i, j = hit
            _clear_unit(psi, phi, i, j, F)
            twists.append(-t0[j])
        else:
            hit = _first_unit(phi)
            if hit is None:
                break
            j, i = hit
            _clear_unit(phi, psi, j, i, F)
            zero_blocks += 1
        phi = [row[:i] + row[i + 1:] for k, row in enumerate(phi) if k != j]
        psi = [row[:j] + row[j + 1:] for k, row in enumerate(psi) if k != i]
        del t0[j]
        del t1[i]
    core = None
    if phi:
        base = mf.phi.ring.base
        F0 = GradedFreeModule(base, t0)
        F1 = GradedFreeModule(base, t1)
        core = MatrixFactorization(mf.f, GradedMatrix(F0, F1, phi), GradedMatrix(F1, F0.shift(mf.d), psi))
        core.verify()
        if not core.reduced:
            raise InvariantViolation("core still has unit entries")
    return SplitReport(twists, core, mf, zero_blocks)


# ---------------------------------------------------------------------------
# graded pieces


def standard_monomial_count(leads: Sequence[tuple], nvars: int, degree: int) -> int:
    if degree < 0:
        return 0
    count = 0
    for m in monomials_of_degree(nvars, degree):
        if not any(all(a <= b for a, b in zip(l, m)) for l in leads):
            count += 1
    return count


def h0_twist(M: PresentedModule, nu: int) -> int:
    """dim_k of the degree-nu piece of M (h^0 of the twisted sheaf for the
    section module of an ACM bundle), by counting standard monomials."""
    gb = M.relation_gb()
    leads = gb.lead_monomials()
    n = M.ring.nvars
    return sum(standard_monomial_count(leads[i], n, nu - c) for i, c in enumerate(M.generators.twists))
