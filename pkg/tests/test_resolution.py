import json
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acm_forge import BettiTable, GradedRing, PresentedModule, minimal_resolution
from acm_forge.groebner import InvariantViolation
from acm_forge.invariants import hilbert, split_betti
from acm_forge.resolution import check_resolution

PLANES_TEXT = "       0 1 2\ntotal: 4 4 1\n    2: 4 4 1\n"
PLANES_JSON = ('{"ring": "S", "length": 2, "truncated": false, "periodic_from": null, '
               '"betti": [[0, 2, 4], [1, 3, 4], [2, 4, 1]]}')


@pytest.fixture(scope="module")
def planes(S):
    x = S.gens
    return PresentedModule.from_ideal(S, [x[0] * x[3], x[0] * x[4], x[1] * x[3], x[1] * x[4]])


def test_koszul(S):
    res = minimal_resolution(PresentedModule.quotient(S, list(S.gens)), verify=True)
    for i in range(6):
        assert res.betti.entries.get((i, i), 0) == comb(5, i)
    assert res.length == 5


def test_two_planes_golden(planes):
    res = minimal_resolution(planes, verify=True)
    assert res.betti.to_text() == PLANES_TEXT
    assert json.dumps(res.betti.to_json()) == PLANES_JSON


def test_json_round_trip(planes):
    b = minimal_resolution(planes).betti
    assert BettiTable.from_json(json.dumps(b.to_json())) == b
    assert BettiTable.from_json(b.to_json()).to_text() == b.to_text()


def test_twisted_cubic():
    R = GradedRing(["w", "x", "y", "z"])
    w, x, y, z = R.gens
    res = minimal_resolution(PresentedModule.quotient(R, [x * x - w * y, x * y - w * z, y * y - x * z]),
                             verify=True)
    assert res.betti.entries == {(0, 0): 1, (1, 2): 3, (2, 3): 2}


def test_check_resolution_rejects_bad_complexes(S):
    from acm_forge.matrix import GradedFreeModule, GradedMatrix
    from acm_forge.resolution import Resolution
    x = S.gens
    F0, F1, F2 = GradedFreeModule(S, [0]), GradedFreeModule(S, [1, 1]), GradedFreeModule(S, [2])
    A = GradedMatrix(F0, F1, [[x[0], x[1]]])
    B = GradedMatrix(F1, F2, [[x[0]], [x[0]]])
    with pytest.raises(InvariantViolation):
        check_resolution(Resolution([F0, F1, F2], [A, B], BettiTable()))
    U = GradedMatrix(F0, GradedFreeModule(S, [0, 1]), [[S.one(), x[0]]])
    with pytest.raises(InvariantViolation):
        check_resolution(Resolution([], [U], BettiTable()))


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3),
       st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_direct_sum_additivity(S, a, b):
    x = S.gens
    Q = S.quotient(x[0] * x[4] + x[1] * x[3] + x[2] ** 2)
    A, B = PresentedModule.free(Q, a), PresentedModule.free(Q, b)
    lhs = minimal_resolution(A + B).betti
    assert lhs == minimal_resolution(A).betti + minimal_resolution(B).betti
    # split_betti takes O_X(a) twists, the negatives of generator degrees
    assert lhs == split_betti([-t for t in a + b], 2)


def test_periodicity_over_hypersurface(X, spinor):
    res = minimal_resolution(spinor, over="S_X", max_length=6, verify=True)
    assert res.betti.truncated
    assert res.betti.periodic_from is not None
    for i in range(1, 5):
        assert sorted(c + 2 for c in res.modules[i].twists) == sorted(res.modules[i + 2].twists)
    assert all(res.betti.rank(i) == 4 for i in range(7))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_euler_identity(S, seed):
    rng = random.Random(seed)
    gens = []
    for _ in range(rng.randint(1, 4)):
        e = [rng.randrange(0, 3) for _ in range(5)]
        e[rng.randrange(5)] += 1
        gens.append(S.poly({tuple(e): 1}))
    M = PresentedModule.quotient(S, gens)
    assert minimal_resolution(M).betti.euler_numerator() == hilbert(M).numerator
