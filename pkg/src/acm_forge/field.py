"""Exact coefficient fields: prime fields F_p and the rationals."""

from __future__ import annotations

import random
from fractions import Fraction

DEFAULT_PRIME = 32003


class StructuralError(ValueError):
    """Operands or inputs with incompatible shapes, rings, or gradings."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


class Field:
    """A coefficient field.

    ``Field(p)`` is the prime field F_p; elements are plain ints in ``[0, p)``.
    ``Field(0)`` (or :meth:`rational`) is Q; elements are ints or reduced
    :class:`fractions.Fraction` values.
    """

    __slots__ = ("p",)

    def __init__(self, p: int = DEFAULT_PRIME):
        if p != 0:
            if p == 2 or not _is_prime(p) or p >= 2**31:
                raise StructuralError(f"field characteristic must be an odd prime < 2^31, got {p}")
        self.p = p

    @classmethod
    def rational(cls) -> "Field":
        return cls(0)

    @property
    def is_prime(self) -> bool:
        return self.p != 0

    def __call__(self, x) -> int | Fraction:
        if self.p:
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        return int(x)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        return self(Fraction(1) / a)

    def div(self, a, b):
        return self(a * self.inv(b)) if self.p else self(Fraction(a) / b)

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def random_element(self, rng: random.Random, nonzero: bool = False) -> int:
        """Uniform element; over Q a small integer (used only for genericity)."""
        hi = self.p - 1 if self.p else 1000
        lo = 1 if nonzero else 0
        if not self.p:
            v = rng.randint(-hi, hi)
            while nonzero and v == 0:
                v = rng.randint(-hi, hi)
            return v
        return rng.randint(lo, hi)

    def format(self, a) -> str:
        return str(a)

    def descriptor(self) -> str:
        return f"p={self.p}" if self.p else "q=rational"

    def caveat(self) -> str:
        if self.p:
            return (
                f"computed over F_{self.p}; verdicts transfer to characteristic 0 "
                "only generically (semicontinuity), so they are evidence, not proof"
            )
        return "computed over Q; exact"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    def __repr__(self) -> str:
        return f"GF({self.p})" if self.p else "QQ"
