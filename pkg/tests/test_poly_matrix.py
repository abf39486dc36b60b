from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from acm_forge import Field, GradedFreeModule, GradedMatrix, GradedRing, ParseError, StructuralError
from acm_forge.matrix import det_cofactor, det_scalar, matrix_determinant
from acm_forge.poly import format_poly

P = 32003
R3 = GradedRing(["x", "y", "z"])


@st.composite
def polys(draw, ring=R3, max_deg=3, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(ring.nvars))
        terms[e] = draw(st.integers(-50, 50))
    return ring.poly(terms)


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@given(polys())
def test_format_parse_roundtrip(p):
    assert R3.parse(format_poly(p)) == p


def test_rational_field_roundtrip():
    Q = GradedRing(["a", "b"], Field.rational())
    p = Q.parse("1/2*a^2 - 3/4*a*b + b^2")
    assert p.terms[(2, 0)] == Fraction(1, 2)
    assert Q.parse(format_poly(p)) == p


@pytest.mark.parametrize("text,col", [("x + * y", 5), ("x^", 3), ("x + w", 5), ("(x + y", 7)])
def test_parse_errors_have_columns(text, col):
    with pytest.raises(ParseError) as info:
        R3.parse(text)
    assert info.value.column == col


def test_mixed_rings_rejected():
    other = GradedRing(["x", "y", "z"], Field(101))
    with pytest.raises(StructuralError):
        R3.gens[0] + other.gens[0]


def test_grading_rejected():
    x, y, z = R3.gens
    F = GradedFreeModule(R3, [0])
    with pytest.raises(StructuralError):
        GradedMatrix(F, GradedFreeModule(R3, [2]), [[x]])
    with pytest.raises(StructuralError):
        GradedMatrix(F, GradedFreeModule(R3, [2]), [[x * y + z]])
    GradedMatrix(F, GradedFreeModule(R3, [2]), [[x * y + z ** 2]])


def _sympy_det(entries, ring):
    syms = sympy.symbols(ring.names)
    M = sympy.Matrix([[sympy.sympify(format_poly(e).replace("^", "**"), dict(zip(ring.names, syms)))
                       for e in row] for row in entries])
    return sympy.Poly(M.det(method="berkowitz"), *syms, modulus=P)


@st.composite
def linear_square(draw, n):
    x = R3.gens
    rows = []
    for _ in range(n):
        rows.append([sum((x[k] * draw(st.integers(-3, 3)) for k in range(3)), R3.zero()) for _ in range(n)])
    return rows


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 5).flatmap(linear_square))
def test_determinant_matches_cofactor_and_sympy(rows):
    n = len(rows)
    A = GradedMatrix(GradedFreeModule(R3, [0] * n), GradedFreeModule(R3, [1] * n), rows)
    d = matrix_determinant(A)
    assert d == det_cofactor(A)
    ours = sympy.Poly(sympy.sympify(format_poly(d).replace("^", "**")) if not d.is_zero() else 0,
                      *sympy.symbols(R3.names), modulus=P)
    assert ours == _sympy_det(rows, R3)


@given(st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=4, max_size=4))
def test_scalar_determinant(rows):
    assert det_scalar(rows, P) == int(sympy.Matrix(rows).det()) % P


def test_matrix_product_and_transpose():
    x, y, z = R3.gens
    F0 = GradedFreeModule(R3, [0, 0])
    F1 = GradedFreeModule(R3, [1, 1])
    A = GradedMatrix(F0, F1, [[x, y], [z, x]])
    B = GradedMatrix(F1, GradedFreeModule(R3, [2, 2]), [[y, z], [x, x]])
    C = A * B
    assert C.entries[0][0] == x * y + y * x
    assert C.transpose().transpose().entries == C.entries
    assert list(A.transpose().target.twists) == [-1, -1]
