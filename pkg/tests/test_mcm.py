import json
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acm_forge import Ideal, PresentedModule
from acm_forge.field import StructuralError
from acm_forge.ideals import ideal_meet
from acm_forge.matrix import matrix_determinant
from acm_forge.mcm import (MatrixFactorization, PreconditionError, acm_certify, h0_twist,
                           mf_extract, split_detect)


def _is_scalar_multiple(a, b):
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    (e, c), = [(e, c) for e, c in list(a.terms.items())[:1]]
    k = b.terms.get(e)
    return k is not None and a * b.ring.constant(k) == b * b.ring.constant(c)


def test_free_module_factorization(X, quadric):
    mf = mf_extract(PresentedModule.free(X, [0, 1]))
    assert mf.size == 2 and mf.rank == 2
    assert not mf.reduced
    rep = split_detect(PresentedModule.free(X, [0, 1]))
    assert rep.is_split and sorted(rep.line_bundle_twists) == [-1, 0]


def test_spinor_factorization(spinor, quadric):
    mf = mf_extract(spinor)
    mf.verify()
    assert (mf.size, mf.rank, mf.reduced) == (4, 2, True)
    assert _is_scalar_multiple(matrix_determinant(mf.phi), quadric ** 2)
    assert _is_scalar_multiple(matrix_determinant(mf.psi), quadric ** 2)
    rep = split_detect(spinor)
    assert not rep.is_split and rep.core_size == 4


def test_split_additivity(X, spinor):
    rep = split_detect(spinor + PresentedModule.free(X, [0, 1]))
    assert sorted(rep.line_bundle_twists) == [-1, 0]
    assert rep.core_size == 4 and rep.core.rank == 2


def test_mf_json_round_trip(X, spinor):
    mf = mf_extract(spinor)
    data = json.loads(json.dumps(mf.to_json()))
    back = MatrixFactorization.from_json(data, X)
    back.verify()
    assert back.to_json() == mf.to_json()
    assert h0_twist(back.module(X), 2) == h0_twist(spinor, 2)


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 8))
def test_h0_of_structure_sheaf(X, nu):
    assert h0_twist(PresentedModule.free(X, [0]), nu) == comb(nu + 4, 4) - comb(nu + 2, 4)


def test_certify_spinor(spinor):
    cert = acm_certify(spinor)
    assert cert.acm and cert.pd_s == 1 and cert.locally_free
    assert json.loads(json.dumps(cert.to_json()))["pd_S"] == 1


def test_certify_ideals(S, X):
    x = S.gens
    line = Ideal(S, [x[2], x[3], x[4]])
    assert acm_certify(line, X).acm
    skew = ideal_meet(line, Ideal(S, [x[0], x[1], x[2]]))
    cert = acm_certify(skew, X)
    assert cert.codim == 3 and not cert.acm


def test_preconditions(S, X):
    x = S.gens
    with pytest.raises(PreconditionError):
        mf_extract(PresentedModule.quotient(X, [x[0], x[1]]))
    with pytest.raises(PreconditionError):
        acm_certify(PresentedModule.quotient(X, [S.one()]))
    with pytest.raises(StructuralError):
        acm_certify(PresentedModule.quotient(S, [x[0]]), X)
    with pytest.raises(StructuralError):
        acm_certify(Ideal(S, [x[0]]), X)
