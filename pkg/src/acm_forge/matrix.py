"""Graded free modules and homogeneous matrices between them.

Twist convention: the free module ⊕ S(-c_i) is stored as the twist list
``[c_i]``, i.e. ``c_i`` is the degree of the i-th basis element.  So O_X(-m)
has twist ``+m`` and O_X(a) has twist ``-a``.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .field import StructuralError
from .poly import GradedRing, Poly


class GradedFreeModule:
    __slots__ = ("ring", "twists")

    def __init__(self, ring: GradedRing, twists: Sequence[int] = ()):
        self.ring = ring
        self.twists = tuple(int(c) for c in twists)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def shift(self, k: int) -> "GradedFreeModule":
        """The module F(-k): every twist increases by ``k``."""
        return GradedFreeModule(self.ring, [c + k for c in self.twists])

    def __add__(self, other: "GradedFreeModule") -> "GradedFreeModule":
        if other.ring != self.ring:
            raise StructuralError("direct sum of modules over different rings")
        return GradedFreeModule(self.ring, self.twists + other.twists)

    def __eq__(self, other):
        return isinstance(other, GradedFreeModule) and other.ring == self.ring and other.twists == self.twists

    def __hash__(self):
        return hash(self.twists)

    def __repr__(self):
        if not self.twists:
            return "0"
        return " + ".join(f"S({-c})" for c in self.twists)


class GradedMatrix:
    """A degree-0 map ``source -> target`` of graded free modules.

    ``entries[i][j]`` is homogeneous of degree ``source.twists[j] -
    target.twists[i]`` (or zero); this is checked on construction.
    """

    __slots__ = ("source", "target", "entries")

    def __init__(self, target: GradedFreeModule, source: GradedFreeModule,
                 entries: Sequence[Sequence[Poly]] | None = None, check: bool = True):
        if target.ring != source.ring:
            raise StructuralError("source and target over different rings")
        self.target = target
        self.source = source
        base = target.ring.base
        if entries is None:
            entries = [[base.zero() for _ in source.twists] for _ in target.twists]
        self.entries = [list(row) for row in entries]
        if check:
            self._check()

    def _check(self):
        if len(self.entries) != self.target.rank or any(len(r) != self.source.rank for r in self.entries):
            raise StructuralError(
                f"entry grid is not {self.target.rank}x{self.source.rank}")
        base = self.target.ring.base
        for i, t in enumerate(self.target.twists):
            for j, s in enumerate(self.source.twists):
                e = self.entries[i][j]
                if e.ring != base:
                    raise StructuralError(f"entry ({i},{j}) lies in a different ring")
                if e.is_zero():
                    continue
                if not e.is_homogeneous() or e.degree() != s - t:
                    raise StructuralError(
                        f"entry ({i},{j}) = {e} must be homogeneous of degree {s - t}")

    @property
    def ring(self) -> GradedRing:
        return self.target.ring

    @property
    def shape(self) -> tuple[int, int]:
        return self.target.rank, self.source.rank

    @classmethod
    def identity(cls, F: GradedFreeModule) -> "GradedMatrix":
        base = F.ring.base
        rows = [[base.one() if i == j else base.zero() for j in range(F.rank)] for i in range(F.rank)]
        return cls(F, F, rows, check=False)

    @classmethod
    def scalar(cls, F: GradedFreeModule, p: Poly) -> "GradedMatrix":
        """``p * Id`` as a map ``F(-deg p) -> F``."""
        base = F.ring.base
        rows = [[p if i == j else base.zero() for j in range(F.rank)] for i in range(F.rank)]
        return cls(F, F.shift(p.degree()), rows)

    def column(self, j: int) -> list[Poly]:
        return [row[j] for row in self.entries]

    def columns(self) -> list[list[Poly]]:
        return [self.column(j) for j in range(self.source.rank)]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def shift(self, k: int) -> "GradedMatrix":
        return GradedMatrix(self.target.shift(k), self.source.shift(k), self.entries, check=False)

    def transpose(self) -> "GradedMatrix":
        """The dual map ``target* -> source*`` (twists negated)."""
        ring = self.ring
        tgt = GradedFreeModule(ring, [-c for c in self.source.twists])
        src = GradedFreeModule(ring, [-c for c in self.target.twists])
        rows = [list(col) for col in self.columns()]
        return GradedMatrix(tgt, src, rows, check=False)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "GradedMatrix":
        tgt = GradedFreeModule(self.ring, [self.target.twists[i] for i in rows])
        src = GradedFreeModule(self.ring, [self.source.twists[j] for j in cols])
        return GradedMatrix(tgt, src, [[self.entries[i][j] for j in cols] for i in rows], check=False)

    def with_ring(self, ring: GradedRing) -> "GradedMatrix":
        return GradedMatrix(GradedFreeModule(ring, self.target.twists),
                            GradedFreeModule(ring, self.source.twists), self.entries, check=False)

    def reduce_mod(self, f: Poly | None) -> "GradedMatrix":
        """Entrywise remainder modulo the principal ideal (f)."""
        if f is None:
            return self
        from .groebner import poly_divmod
        rows = [[poly_divmod(e, [f])[1] if e else e for e in row] for row in self.entries]
        return GradedMatrix(self.target, self.source, rows, check=False)

    def __mul__(self, other: "GradedMatrix") -> "GradedMatrix":
        return matrix_compose(self, other)

    def __eq__(self, other):
        return (isinstance(other, GradedMatrix) and self.target.twists == other.target.twists
                and self.source.twists == other.source.twists and self.entries == other.entries)

    def __repr__(self):
        return f"GradedMatrix({self.target!r} <- {self.source!r}, {self.shape[0]}x{self.shape[1]})"

    def __str__(self):
        return "\n".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.entries)


def matrix_product(A: Sequence[Sequence[Poly]], B: Sequence[Sequence[Poly]], ring: GradedRing) -> list[list[Poly]]:
    """Plain product of entry grids (no grading check)."""
    n = len(B)
    m = len(B[0]) if B else 0
    zero = ring.base.zero()
    out = []
    for row in A:
        if len(row) != n:
            raise StructuralError("inner dimensions differ")
        out_row = []
        for j in range(m):
            acc = zero
            for k in range(n):
                if row[k] and B[k][j]:
                    acc = acc + row[k] * B[k][j]
            out_row.append(acc)
        out.append(out_row)
    return out


def matrix_compose(A: GradedMatrix, B: GradedMatrix) -> GradedMatrix:
    """``A ∘ B``; requires source(A) == target(B) twist for twist."""
    if A.ring.base != B.ring.base:
        raise StructuralError("matrices over different rings")
    if A.source.twists != B.target.twists:
        raise StructuralError(
            f"cannot compose: source twists {A.source.twists} != target twists {B.target.twists}")
    return GradedMatrix(A.target, B.source, matrix_product(A.entries, B.entries, A.ring))


def _det_cofactor(M: list[list[Poly]], ring: GradedRing) -> Poly:
    n = len(M)
    if n == 0:
        return ring.one()
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = ring.zero()
    for j in range(n):
        if M[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det_cofactor(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_cofactor(A: GradedMatrix) -> Poly:
    """Laplace expansion along the first row (exponential; small matrices only)."""
    if A.shape[0] != A.shape[1]:
        raise StructuralError("determinant of a non-square matrix")
    return _det_cofactor(A.entries, A.ring.base)


def _det_bareiss(M: list[list[Poly]], ring: GradedRing) -> Poly:
    from .groebner import exact_divide
    n = len(M)
    M = [list(r) for r in M]
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if M[k][k].is_zero():
            for r in range(k + 1, n):
                if not M[r][k].is_zero():
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return ring.zero()
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * pivot - M[i][k] * M[k][j]
                M[i][j] = exact_divide(num, prev) if k else num
            M[i][k] = ring.zero()
        prev = pivot
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


def matrix_determinant(A: GradedMatrix) -> Poly:
    """Exact determinant over the ambient polynomial ring.

    Cofactor expansion up to 3x3, fraction-free (Bareiss) elimination above.
    """
    if A.shape[0] != A.shape[1]:
        raise StructuralError("determinant of a non-square matrix")
    ring = A.ring.base
    n = A.shape[0]
    if n == 0:
        return ring.one()
    if n <= 3:
        return _det_cofactor(A.entries, ring)
    return _det_bareiss(A.entries, ring)


def det_scalar(rows: list[list[int]], p: int) -> int:
    """Determinant of an integer matrix modulo the prime ``p``."""
    M = [[x % p for x in r] for r in rows]
    n = len(M)
    det = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k]), None)
        if piv is None:
            return 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = -det
        det = det * M[k][k] % p
        inv = pow(M[k][k], -1, p)
        for r in range(k + 1, n):
            if M[r][k]:
                q = M[r][k] * inv % p
                M[r] = [(a - q * b) % p for a, b in zip(M[r], M[k])]
    return det % p


def minors(A: GradedMatrix, k: int):
    """Iterate over all k x k minors (row-major order of index sets)."""
    n, m = A.shape
    for rows in itertools.combinations(range(n), k):
        for cols in itertools.combinations(range(m), k):
            yield matrix_determinant(A.submatrix(rows, cols))
