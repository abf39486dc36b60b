import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from acm_forge import GradedFreeModule, GradedRing, buchberger, module_gb, syzygy_module
from acm_forge.groebner import (column_from_vec, normal_form, poly_divmod, syzygy_vectors,
                                vec_from_column, vec_from_poly)
from acm_forge.poly import format_poly, monomials_of_degree

P = 32003
R4 = GradedRing(["w", "x", "y", "z"])


def _to_sympy(p, ring):
    syms = sympy.symbols(ring.names)
    expr = sympy.sympify(format_poly(p).replace("^", "**"), dict(zip(ring.names, syms)))
    return sympy.Poly(expr, *syms, modulus=P)


def _sympy_gb(polys, ring):
    syms = sympy.symbols(ring.names)
    G = sympy.groebner([_to_sympy(p, ring).as_expr() for p in polys], *syms, order="grevlex",
                       modulus=P)
    return {sympy.Poly(g, *syms, modulus=P).monic() for g in G.exprs}


def random_form(ring, deg, rng, terms=3):
    mons = list(monomials_of_degree(ring.nvars, deg))
    return ring.poly({rng.choice(mons): rng.randrange(1, P) for _ in range(terms)})


def test_twisted_cubic():
    w, x, y, z = R4.gens
    gens = [x * x - w * y, x * y - w * z, y * y - x * z]
    B = buchberger(gens, R4)
    assert len(B.polys()) == 3
    assert normal_form(y ** 3 * w, B) == w * w * z * z
    assert normal_form(x * x * y - w * y * y, B).is_zero()
    syz, _ = syzygy_vectors([vec_from_poly(g) for g in gens], GradedFreeModule(R4, [0]))
    assert len(syz) == 2


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_reduced_gb_matches_sympy(seed):
    rng = random.Random(seed)
    gens = [random_form(R4, rng.choice([2, 3]), rng) for _ in range(3)]
    gens = [g for g in gens if not g.is_zero()]
    ours = {_to_sympy(p, R4).monic() for p in buchberger(gens, R4).polys()}
    assert ours == _sympy_gb(gens, R4)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_spair_criterion_and_membership(seed):
    rng = random.Random(seed)
    gens = [random_form(R4, 2, rng) for _ in range(3)]
    B = buchberger(gens, R4)
    assert B.check_criterion()
    for g in gens:
        assert B.contains_vec(vec_from_poly(g))
    h = gens[0] * R4.gens[1] + gens[1] * R4.gens[2] * R4.gens[3]
    assert B.contains_vec(vec_from_poly(h))


def test_unit_ideal():
    x = R4.gens
    B = buchberger([x[0], x[1] + x[2], R4.one()], R4)
    assert B.is_unit()
    assert [format_poly(p) for p in B.polys()] == ["1"]


def test_koszul_syzygies():
    x = R4.gens
    M = syzygy_module(buchberger(x[:3], R4, track=True))
    assert list(M.source.twists) == [2, 2, 2]
    prod = [[sum((x[k] * M.entries[k][j] for k in range(3)), R4.zero())] for j in range(3)]
    assert all(p[0].is_zero() for p in prod)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_syzygies_are_syzygies(seed):
    rng = random.Random(seed)
    gens = [random_form(R4, rng.choice([1, 2]), rng, terms=2) for _ in range(4)]
    gens = [g for g in gens if not g.is_zero()]
    syz, _ = syzygy_vectors([vec_from_poly(g) for g in gens], GradedFreeModule(R4, [0]))
    for s in syz:
        col = column_from_vec(s, len(gens), R4)
        assert sum((c * g for c, g in zip(col, gens)), R4.zero()).is_zero()


def test_module_gb_over_quotient():
    w, x, y, z = R4.gens
    Q = R4.quotient(w * z - x * y)
    F = GradedFreeModule(Q, [0, 0])
    B = module_gb([vec_from_column([w, x]), vec_from_column([y, z])], F)
    assert B.contains_vec(vec_from_column([w * z - x * y, R4.zero()]))
    assert not B.contains_vec(vec_from_column([w, R4.zero()]))


@pytest.mark.parametrize("kind", ["top", "pot"])
def test_module_orders_agree_on_membership(kind):
    from acm_forge.groebner import ModuleOrder
    w, x, y, z = R4.gens
    F = GradedFreeModule(R4, [0, 1])
    gens = [vec_from_column([x * y, w]), vec_from_column([z * z, y]), vec_from_column([w * x, x])]
    B = module_gb(gens, F, order=ModuleOrder(F.twists, kind))
    target = vec_from_column([x * y * z + w * z * z, w * z + w * y])
    assert B.contains_vec(target)


def test_poly_divmod():
    w, x, y, z = R4.gens
    a = (x + y) * (w - z) + x * x
    q, r = poly_divmod(a, [x + y])
    assert q[0] * (x + y) + r == a
