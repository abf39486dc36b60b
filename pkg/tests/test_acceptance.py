"""Acceptance checks. Each test_criterion_<n>_* feeds the per-criterion
pass/fail summary printed at the end of the run (see conftest)."""

import random
import time

import pytest

from acm_forge import GradedRing, Ideal, PresentedModule, minimal_resolution
from acm_forge.constructions import (NEGATIVE_Q2, NEGATIVE_Q3, NO_OBSTRUCTION, kleiman_locus,
                                     linear_space_bundle)
from acm_forge.ideals import irrelevant_ideal, saturate
from acm_forge.invariants import (chern_degrees, divisibility_report, hilbert, split_betti,
                                  split_chern)
from acm_forge.matrix import det_scalar, matrix_determinant
from acm_forge.mcm import acm_certify, h0_twist, mf_extract, split_detect, standard_monomial_count

P = 32003
KLEIMAN_SEEDS = range(20)


def _proportional(a, b):
    """a = c * b for a nonzero scalar c."""
    if a.is_zero() or b.is_zero():
        return False
    e, c = next(iter(b.terms.items()))
    k = a.terms.get(e)
    return k is not None and a * a.ring.constant(c) == b * a.ring.constant(k)


def _det_law(mf, rng):
    """det phi = c * f^rank; direct for size <= 8, else at random points."""
    if mf.size <= 8:
        return _proportional(matrix_determinant(mf.phi), mf.f ** mf.rank)
    ratios = set()
    for _ in range(3):
        pt = [rng.randrange(P) for _ in range(mf.f.ring.nvars)]
        ev = lambda p: int(p.evaluate(pt)) % P if not p.is_zero() else 0
        fv = ev(mf.f)
        if fv == 0:
            continue
        dv = det_scalar([[ev(e) for e in row] for row in mf.phi.entries], P)
        ratios.add(dv * pow(pow(fv, mf.rank, P), -1, P) % P)
    return len(ratios) == 1 and 0 not in ratios


@pytest.fixture(scope="module")
def euler_pool():
    return []


def _record(pool, M):
    pool.append(M)
    return M


# 1 -------------------------------------------------------------------------

def test_criterion_1_plane_pair_resolution(S, euler_pool):
    x = S.gens
    t = time.perf_counter()
    M = _record(euler_pool, PresentedModule.from_ideal(S, [x[0] * x[2], x[0] * x[3],
                                                           x[1] * x[2], x[1] * x[3]]))
    res = minimal_resolution(M, verify=True)
    assert [sorted(F.twists) for F in res.modules] == [[2] * 4, [3] * 4, [4]]
    assert time.perf_counter() - t < 10


# 2 -------------------------------------------------------------------------

def test_criterion_2_h0_degree2_twist_vanishes(voisin2):
    assert voisin2.smooth
    assert h0_twist(voisin2.G, 2) == 0


@pytest.mark.xfail(strict=True, reason="h0(G(3)) = 8 for d = 2: the quadric generator adds four "
                                       "linear syzygies; see the decisions ledger")
def test_criterion_2_h0_degree3_twist_d2(voisin2):
    assert h0_twist(voisin2.G, 3) == 4


def test_criterion_2_h0_derived_values_d2(voisin2):
    # G is ACM: h0(G(3)) = 5 h0(O_X(1)) - h0(I_Y/X(3)) = 25 - 17
    hy = hilbert(voisin2.I_y)
    assert 5 * 5 - ((35 - 5) - hy.function(3)) == 8
    assert [h0_twist(voisin2.G, n) for n in range(6)] == [0, 0, 0, 8, 32, 80]


def test_criterion_2_d3_golden(voisin3):
    t = time.perf_counter()
    assert [h0_twist(voisin3.G, n) for n in range(6)] == [0, 0, 0, 4, 23, 69]
    assert voisin3.acm.acm
    assert not split_detect(voisin3.G).is_split
    assert time.perf_counter() - t < 60


# 3 -------------------------------------------------------------------------

@pytest.mark.parametrize("d", [2, 3])
def test_criterion_3_acm_and_nonsplit(request, d, euler_pool):
    cfg = request.getfixturevalue(f"voisin{d}")
    t = time.perf_counter()
    cert = acm_certify(cfg.I_y, cfg.X)
    assert cert.acm and cert.pd_s == 3 and cert.codim == 3
    rep = split_detect(cfg.G)
    assert not rep.is_split and rep.core_size == 8
    _record(euler_pool, PresentedModule.quotient(cfg.I_y.ring, cfg.I_y.gens))
    _record(euler_pool, cfg.G)
    assert time.perf_counter() - t < 120


# 4 -------------------------------------------------------------------------

def test_criterion_4_matrix_factorizations(X, spinor, voisin2, voisin3):
    rng = random.Random(4)
    modules = [PresentedModule.free(X, [0, 1, 1]), spinor, voisin2.G, voisin3.G,
               linear_space_bundle(X, [X.base.gens[i] for i in (1, 2, 3, 4)]).module]
    for M in modules:
        mf = mf_extract(M)
        mf.verify()
        assert _det_law(mf, rng)


# 5 -------------------------------------------------------------------------

@pytest.mark.parametrize("which,r", [("point", 3), ("empty", 4)])
def test_criterion_5_linear_spaces(S, X, which, r, euler_pool):
    x = S.gens
    t = time.perf_counter()
    B = linear_space_bundle(X, [x[1], x[2], x[3], x[4]] if which == "point" else "empty")
    assert B.r == r
    assert B.acm.acm and B.acm.locally_free
    assert not B.split.is_split
    _record(euler_pool, B.module)
    assert time.perf_counter() - t < 120


# 6 -------------------------------------------------------------------------

@pytest.fixture(scope="module")
def kleiman_split(X):
    G = PresentedModule.free(X, [1, 1])
    return G, [kleiman_locus(G, twists=[1, 1, 1], seed=s) for s in KLEIMAN_SEEDS]


@pytest.fixture(scope="module")
def kleiman_spinor(spinor):
    return spinor, [kleiman_locus(spinor, twists=[1, 1, 1], seed=s) for s in KLEIMAN_SEEDS]


def test_criterion_6_split_determinantal(S, quadric, kleiman_split):
    G, runs = kleiman_split
    irr = irrelevant_ideal(S)
    for k, res in enumerate(runs):
        assert hilbert(res.ideal).krull_dim == 3 - 1
        assert res.determinantal is not None
        assert res.certificate.q2 == NO_OBSTRUCTION
        if k < 3:
            assert saturate(res.determinantal + Ideal(S, [quadric]), irr) == res.ideal


def test_criterion_6_spinor_negative_certificates(kleiman_spinor):
    _, runs = kleiman_spinor
    for res in runs:
        assert hilbert(res.ideal).krull_dim == 2
        assert res.acm.acm and res.acm.pd_s == 3
        assert (res.certificate.q2, res.certificate.q3) == (NEGATIVE_Q2, NEGATIVE_Q3)


def test_criterion_6_deterministic_per_seed(X, spinor, kleiman_split, kleiman_spinor):
    for (G, runs), seed in ((kleiman_split, 5), (kleiman_spinor, 11)):
        again = kleiman_locus(G, twists=[1, 1, 1], seed=seed)
        assert again.to_json() == runs[seed].to_json()


# 7 -------------------------------------------------------------------------

def _kleiman_report(res, G):
    return divisibility_report(res.ideal, G, free_twists=res.twists)


def test_criterion_7_divisibility(S, X, voisin2, voisin3, kleiman_split, kleiman_spinor,
                                  euler_pool):
    reports = []
    for cfg in (voisin2, voisin3):
        reports.append(divisibility_report(cfg.I_y, cfg.G, free_twists=[-g.degree() for g in
                                                                        cfg.y_generators],
                                           shift=0))
    x = S.gens
    point = linear_space_bundle(X, [x[1], x[2], x[3], x[4]]).module
    empty = linear_space_bundle(X, "empty").module
    for G, tw, cc in ((point, [-2] * 5, True), (empty, [-3] * 9, False)):
        res = kleiman_locus(G, twists=tw, seed=0, retries=0, cross_check=cc)
        reports.append(_kleiman_report(res, G))
        _record(euler_pool, PresentedModule.quotient(S, res.ideal.gens))
    for G, runs in (kleiman_split, kleiman_spinor):
        for res in runs:
            reports.append(_kleiman_report(res, G))
    assert len(reports) == 44
    for rep in reports:
        assert rep.equivalent
        assert (rep.deg_Y + rep.deg_c2) % rep.d == 0


# 8 -------------------------------------------------------------------------

def test_criterion_8_split_chern_oracle():
    rng = random.Random(8)
    for _ in range(50):
        tw = [rng.randint(-5, 5) for _ in range(rng.randint(1, 6))]
        d = rng.randint(1, 6)
        e2 = sum(tw[i] * tw[j] for i in range(len(tw)) for j in range(i + 1, len(tw)))
        cd = chern_degrees(split_betti(tw, d), d)
        assert cd == split_chern(tw, d)
        assert cd.deg_c2 == d * e2


def test_criterion_8_hilbert_brute_force():
    R = GradedRing(["a", "b", "c", "d"])
    rng = random.Random(88)
    for _ in range(20):
        exps = []
        for _ in range(rng.randint(1, 6)):
            e = [rng.randrange(0, 4) for _ in range(4)]
            e[rng.randrange(4)] += 1
            exps.append(tuple(e))
        h = hilbert(Ideal(R, [R.poly({e: 1}) for e in exps]))
        assert [h.function(n) for n in range(11)] == [standard_monomial_count(exps, 4, n)
                                                     for n in range(11)]


def test_criterion_8_euler_identity(S, spinor, kleiman_split, kleiman_spinor, euler_pool):
    pool = list(euler_pool) + [spinor]
    for _, runs in (kleiman_split, kleiman_spinor):
        pool += [PresentedModule.quotient(S, r.ideal.gens) for r in runs]
    assert len(pool) >= 45
    for M in pool:
        res = minimal_resolution(M)
        assert res.betti.euler_numerator() == hilbert(M).numerator
