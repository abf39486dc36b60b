import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acm_forge import GradedRing, Ideal, dimension, saturate
from acm_forge import ideals as ideals_mod
from acm_forge.ideals import (codimension, colon, colon_poly, ideal_meet, ideal_meet_syzygy,
                              in_saturation, irrelevant_ideal, is_smooth_hypersurface,
                              same_saturation)
from acm_forge.invariants import hilbert

R = GradedRing(["x", "y", "z", "w"])
x, y, z, w = R.gens


def random_monomial_ideal(rng, ngens):
    gens = []
    for _ in range(ngens):
        e = [rng.randrange(0, 3) for _ in range(4)]
        if sum(e) == 0:
            e[rng.randrange(4)] = 1
        gens.append(R.poly({tuple(e): 1}))
    return Ideal(R, gens)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_meet_routes_agree(seed):
    rng = random.Random(seed)
    I, J = random_monomial_ideal(rng, 3), random_monomial_ideal(rng, 2)
    a, b = ideal_meet(I, J), ideal_meet_syzygy(I, J)
    assert a == b
    for g in a.gens:
        assert I.contains(g) and J.contains(g)


def test_meet_of_coordinate_ideals():
    I = ideal_meet(Ideal(R, [x, y]), Ideal(R, [z, w]))
    assert I == Ideal(R, [x * z, x * w, y * z, y * w])


def test_colon():
    I = Ideal(R, [x * y, x * z])
    assert colon_poly(I, x) == Ideal(R, [y, z])
    assert colon(I, Ideal(R, [y, z])) == Ideal(R, [x])


def test_embedded_component_removed():
    m = Ideal(R, [x, y, z])
    I = ideal_meet(Ideal(R, [x]), Ideal(R, [x * x, y * y, z * z, x * y, x * z, y * z]))
    assert saturate(I, m) == Ideal(R, [x])
    # the embedded point is a real point of P^3, so it survives here
    assert saturate(I, irrelevant_ideal(R)) == I


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_fast_path_matches_colon_loop(seed):
    rng = random.Random(seed)
    I = random_monomial_ideal(rng, 3)
    J = irrelevant_ideal(R)
    fast = saturate(I, J)
    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(ideals_mod, "_has_regular_variable", lambda *_: False)
        slow = saturate(I, J)
    assert fast == slow
    assert saturate(fast, J) == fast
    assert same_saturation(I, fast, J)


def test_in_saturation():
    I = Ideal(R, [x * y, x * z, x * w, x * x])
    m = irrelevant_ideal(R)
    assert in_saturation(I, x, m) is True
    assert same_saturation(I, Ideal(R, [x]), m)
    assert not same_saturation(I, Ideal(R, [y]), m)


def test_saturation_over_quadric(S, quadric):
    v = S.gens
    I = ideal_meet(Ideal(S, [v[0], v[1], quadric]), Ideal(S, [v[3], v[4], quadric]))
    sat = saturate(I, irrelevant_ideal(S))
    assert sat == I
    assert hilbert(sat).polynomial_str() == hilbert(I).polynomial_str()


@pytest.mark.parametrize("gens,expected", [
    (lambda: [x], 3),
    (lambda: [x, y], 2),
    (lambda: [x * y, z * w], 2),
    (lambda: [x * y, y * z, z * x], 2),
    (lambda: [x * x - y * w, x * y - z * w, y * y - x * z], 2),
    (lambda: [x, y, z, w], 0),
    (lambda: [R.one()], -1),
])
def test_dimension(gens, expected):
    I = Ideal(R, gens())
    assert dimension(I) == expected
    if expected >= 0:
        assert hilbert(I).krull_dim == expected
        assert codimension(I) == 4 - expected


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_dimension_matches_hilbert(seed):
    I = random_monomial_ideal(random.Random(seed), 3)
    assert dimension(I) == hilbert(I).krull_dim


def test_smoothness(quadric, S):
    v = S.gens
    assert is_smooth_hypersurface(quadric)
    assert not is_smooth_hypersurface(v[0] * v[1] + v[2] * v[3])
