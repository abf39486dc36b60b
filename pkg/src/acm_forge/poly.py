"""Monomials, term orders, graded polynomial rings and sparse polynomials.

Monomials are exponent tuples of length ``nvars``.  A polynomial stores a dict
``{exponent: coefficient}`` with canonical, nonzero coefficients.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from .field import DEFAULT_PRIME, Field, StructuralError

Exp = tuple


def grevlex_key(e: Exp) -> tuple:
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e: Exp) -> tuple:
    return tuple(e)


class TermOrder:
    """Monomial order given by a sort key; larger key = larger monomial."""

    _KEYS = {"grevlex": grevlex_key, "lex": lex_key}

    def __init__(self, name: str = "grevlex"):
        if name not in self._KEYS:
            raise StructuralError(f"unknown term order {name!r}")
        self.name = name
        self.key = self._KEYS[name]

    def __eq__(self, other):
        return isinstance(other, TermOrder) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"TermOrder({self.name!r})"


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


def mono_mul(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Exp, a: Exp) -> Exp:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Exp, b: Exp) -> Exp:
    return tuple(x if x > y else y for x, y in zip(a, b))


def monomials_of_degree(nvars: int, deg: int):
    """All exponent tuples of total degree ``deg`` (lex-descending)."""
    if deg < 0:
        return
    if nvars == 1:
        yield (deg,)
        return
    for first in range(deg, -1, -1):
        for rest in monomials_of_degree(nvars - 1, deg - first):
            yield (first,) + rest


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class GradedRing:
    """Standard-graded polynomial ring S = k[x0..xn], optionally S_X = S/(f).

    Polynomials always live in the ambient ring :attr:`base`; the quotient
    relation is carried as metadata and applied on demand.
    """

    def __init__(self, names: Sequence[str] | int, field: Field | None = None,
                 relation: "Poly | None" = None, order: TermOrder = GREVLEX):
        if isinstance(names, int):
            names = [f"x{i}" for i in range(names)]
        names = tuple(names)
        if not names or len(set(names)) != len(names):
            raise StructuralError("ring needs distinct variable names")
        self.names = names
        self.nvars = len(names)
        self.field = field if field is not None else Field(DEFAULT_PRIME)
        self.order = order
        self._base = None
        self.relation = None
        if relation is not None:
            if relation.ring != self.base:
                raise StructuralError("relation must be a polynomial of the ambient ring")
            if relation.is_zero() or not relation.is_homogeneous() or relation.degree() < 2:
                raise StructuralError("quotient relation must be nonzero, homogeneous, degree >= 2")
        self.relation = relation

    @property
    def base(self) -> "GradedRing":
        if self.relation is None:
            return self
        if self._base is None:
            self._base = GradedRing(self.names, self.field, order=self.order)
        return self._base

    @property
    def is_quotient(self) -> bool:
        return self.relation is not None

    @property
    def degree_of_relation(self) -> int:
        return self.relation.degree() if self.relation is not None else 0

    def quotient(self, f: "Poly") -> "GradedRing":
        return GradedRing(self.names, self.field, relation=f, order=self.order)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (isinstance(other, GradedRing) and other.names == self.names
                and other.field == self.field and other.order == self.order
                and other.relation == self.relation)

    def __hash__(self):
        return hash((self.names, self.field, self.order))

    def __repr__(self):
        rel = f" / ({self.relation})" if self.relation is not None else ""
        return f"{self.field!r}[{', '.join(self.names)}]{rel}"

    # construction helpers
    def poly(self, terms: dict | None = None) -> "Poly":
        """A polynomial from {exponent: coefficient}; coefficients are canonicalized."""
        F = self.field
        out = {}
        for e, c in (terms or {}).items():
            c = F(c)
            if c:
                out[tuple(e)] = c
        return Poly(self.base, out)

    def zero(self) -> "Poly":
        return Poly(self.base, {})

    def one(self) -> "Poly":
        return self.constant(1)

    def constant(self, c) -> "Poly":
        c = self.field(c)
        return Poly(self.base, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exp: Exp, coeff=1) -> "Poly":
        c = self.field(coeff)
        return Poly(self.base, {tuple(exp): c} if c else {})

    @property
    def gens(self) -> list["Poly"]:
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(self.monomial(tuple(e)))
        return out

    def var(self, name: str) -> "Poly":
        return self.gens[self.names.index(name)]

    def parse(self, text: str, line: int = 1, col0: int = 1) -> "Poly":
        return _PolyParser(self, text, line, col0).parse()

    def reduce_mod_relation(self, p: "Poly") -> "Poly":
        """Remainder of ``p`` on division by f (the normal form in S_X)."""
        if self.relation is None:
            return p
        from .groebner import poly_divmod
        return poly_divmod(p, [self.relation])[1]


class Poly:
    """Immutable sparse polynomial over a :class:`GradedRing`."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: GradedRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # structure
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and sum(next(iter(self.terms))) == 0)

    def constant_value(self):
        return self.terms.get((0,) * self.ring.nvars, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self, order: TermOrder | None = None) -> list:
        key = (order or self.ring.order).key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def lead(self, order: TermOrder | None = None):
        key = (order or self.ring.order).key
        e = max(self.terms, key=key)
        return e, self.terms[e]

    # arithmetic
    def _check(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise StructuralError("polynomials belong to different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        norm = self.ring.field
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = norm(t.get(e, 0) + c)
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Poly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Poly(self.ring, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        p = F.p
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        out = {}
        for e, c in t.items():
            c = c % p if p else F(c)
            if c:
                out[e] = c
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise StructuralError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Poly":
        return self * self.ring.constant(c)

    def mul_monomial(self, exp: Exp, coeff=1) -> "Poly":
        F = self.ring.field
        c0 = F(coeff)
        if not c0:
            return self.ring.zero()
        return Poly(self.ring, {mono_mul(e, exp): F(c * c0) for e, c in self.terms.items()})

    def evaluate(self, point: Sequence):
        F = self.ring.field
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x ** k
            total += v
        return F(total)

    def homogeneous_component(self, deg: int) -> "Poly":
        return Poly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == deg})

    # comparison / display
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def format_poly(p: Poly, explicit: bool = False) -> str:
    """Canonical text: terms in descending ring order.

    With ``explicit`` every coefficient is printed (``1*x0*x4``); otherwise
    unit coefficients are omitted.  Prime-field coefficients are printed as
    their canonical representatives, so no term carries a minus sign.
    """
    if not p.terms:
        return "0"
    names = p.ring.names
    parts = []
    for e, c in p.sorted_terms():
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        neg = isinstance(c, (int, Fraction)) and c < 0
        mag = -c if neg else c
        if not factors:
            body = str(mag)
        elif mag == 1 and not explicit:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        parts.append(("-" if neg else "+", body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _PolyParser:
    def __init__(self, ring: GradedRing, text: str, line: int, col0: int):
        self.ring = ring
        self.text = text
        self.line = line
        self.col0 = col0
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m.group(0).strip() == "":
                break
            kind = "num" if m.group(1) else "name" if m.group(2) else "op"
            self.tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def error(self, msg: str, pos: int | None = None):
        if pos is None:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise ParseError(msg, self.line, self.col0 + pos)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if not self.tokens:
            self.error("empty polynomial")
        p = self.expr()
        if self.i < len(self.tokens):
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term().scale(sign)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> Poly:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                k2, v2, pos = self.take()
                if k2 != "num":
                    self.error("expected integer denominator", pos)
                if int(v2) == 0:
                    self.error("division by zero", pos)
                acc = acc.scale(Fraction(1, int(v2)))
            else:
                return acc

    def factor(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "num":
            base = self.ring.constant(int(val))
        elif kind == "name":
            if val not in self.ring.names:
                self.error(f"unknown variable {val!r}", pos)
            base = self.ring.var(val)
        elif kind == "op" and val == "(":
            base = self.expr()
            k2, v2, p2 = self.take()
            if v2 != ")":
                self.error("expected ')'", p2)
        else:
            self.error("expected a number, variable or '('" if val else "unexpected end of input", pos)
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k2, v2, p2 = self.take()
            if k2 != "num":
                self.error("expected integer exponent", p2)
            base = base ** int(v2)
        return base


def poly_from_coefficients(ring: GradedRing, items: Iterable) -> Poly:
    F = ring.field
    t = {}
    for e, c in items:
        c = F(c)
        if c:
            t[tuple(e)] = F(t.get(tuple(e), 0) + c)
            if not t[tuple(e)]:
                del t[tuple(e)]
    return Poly(ring.base, t)
