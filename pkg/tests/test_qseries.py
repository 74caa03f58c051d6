"""Exact series arithmetic: golden coefficients, ring axioms, oracles."""

import random
from fractions import Fraction as F

import pytest

from zetainterp._rat import R
from zetainterp.qseries import CoefficientOutOfRange, FracPowerSeries, QSeriesError
from zetainterp import modforms as mf

ONE = FracPowerSeries.one(2, 12)


def brute_convolution(a_pairs, b_pairs):
    """Independent oracle: dict-based convolution over exact rationals."""
    out = {}
    for ea, ca in a_pairs:
        for eb, cb in b_pairs:
            out[ea + eb] = out.get(ea + eb, F(0)) + F(ca) * F(cb)
    return {e: c for e, c in out.items() if c != 0}


def random_series(rng, denom=2, trunc=14):
    base = rng.randrange(-3, 3)
    coeffs = [F(rng.randrange(-9, 10), rng.randrange(1, 5)) for _ in range(trunc - base)]
    return FracPowerSeries(denom, base, coeffs, trunc)


def test_theta_squared_r2_counts():
    th = mf.theta_series(8)
    t2 = th * th
    # r2 counts at t^0..t^5, from brute-force convolution of the r1 sequence
    r1 = {F(m * m, 2): (1 if m == 0 else 2) for m in range(0, 4)}
    oracle = brute_convolution(r1.items(), r1.items())
    for j in range(6):
        e = F(j, 2)
        assert t2.coeff(e) == oracle.get(e, 0)
    assert [int(t2.coeff(F(j, 2))) for j in range(6)] == [1, 4, 4, 0, 4, 8]


def test_mul_identity_and_monomials():
    rng = random.Random(7)
    for _ in range(20):
        a = random_series(rng)
        one = FracPowerSeries.one(2, a.trunc_order - a.base_exp + 4)
        assert one * a == a
    tneg = FracPowerSeries.monomial(F(-1, 2), 1, denom=2, trunc_order=6)
    tpos = FracPowerSeries.monomial(F(1, 2), 1, denom=2, trunc_order=6)
    assert tneg * tpos == FracPowerSeries.one(2, 5)


def test_invert_geometric_and_roundtrip():
    one_minus_t = FracPowerSeries.from_q_coeffs([(0, 1), (F(1, 2), -1)], 2, 10)
    inv = one_minus_t.invert()
    for j in range(8):
        assert inv.coeff(F(j, 2)) == 1
    th = mf.theta_series(16)
    assert th.invert() * th == FracPowerSeries.one(2, 14)
    # invert(J) leads with t * 1
    J = mf.j_series(10)
    Jinv = J.invert()
    assert Jinv.coeff(F(1, 2)) == 1
    assert Jinv.base_exp == 1


def test_invert_rejects_zero_lead():
    z = FracPowerSeries.zero(2, 5)
    with pytest.raises(QSeriesError):
        z.invert()


def test_pow_rational_binomial_and_r3():
    one_plus_t = FracPowerSeries.from_q_coeffs([(0, 1), (F(1, 2), 1)], 2, 10)
    sq = one_plus_t.pow_rational(F(1, 2))
    assert sq.coeff(0) == 1
    assert sq.coeff(F(1, 2)) == F(1, 2)
    assert sq.coeff(1) == F(-1, 8)
    # theta^3 coefficients are the r3 counts (triple convolution brute force)
    th = mf.theta_series(10)
    t3 = th.pow_rational(3)
    r1 = {F(m * m, 2): (1 if m == 0 else 2) for m in range(0, 4)}
    r2 = brute_convolution(r1.items(), r1.items())
    r3 = brute_convolution(r2.items(), r1.items())
    for j in range(6):
        assert t3.coeff(F(j, 2)) == r3.get(F(j, 2), 0)
    assert [int(t3.coeff(F(j, 2))) for j in range(6)] == [1, 6, 12, 8, 6, 24]
    # sqrt then square is the identity
    half = th.pow_rational(F(1, 2))
    assert half * half == th
    assert th.pow_rational(1) == th


def test_pow_rational_precondition():
    t = FracPowerSeries.monomial(F(1, 2), 1, denom=2, trunc_order=8)
    with pytest.raises(QSeriesError):
        t.pow_rational(F(1, 2))
    # integer powers fine for monomial lead
    assert (t._pow_int(-2)).coeff(-1) == 1


def test_coeff_queries():
    th = mf.theta_series(10)
    assert th.coeff(0) == 1
    assert th.coeff(F(1, 2)) == 2
    th2 = th * th
    assert th2.coeff(F(5, 2)) == 8
    with pytest.raises(CoefficientOutOfRange):
        th.coeff(F(11, 2))


def test_ring_axioms_random():
    rng = random.Random(123)
    for _ in range(200):
        a, b, c = (random_series(rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a


def test_truncation_soundness():
    # recomputing with a higher truncation never changes reported coefficients
    lo = mf.lambda_series(10)
    hi = mf.lambda_series(26)
    for j in range(1, 10):
        assert lo.coeff(F(j, 2)) == hi.coeff(F(j, 2))
    lo_j = mf.j_series(8)
    hi_j = mf.j_series(20)
    for j in range(-1, 8):
        assert lo_j.coeff(F(j, 2)) == hi_j.coeff(F(j, 2))


def test_mixed_denominator_lift():
    th8 = mf.theta_series(12).lift(8)
    assert th8.denom == 8
    assert th8.coeff(F(1, 2)) == 2
    assert th8 * mf.theta_series(12) == mf.theta_series(12) * mf.theta_series(12)


def test_dump_parse_roundtrip():
    th = mf.theta_series(12)
    text = th.dump()
    assert text.splitlines()[0] == "denom=2 base=0 trunc=12"
    back = FracPowerSeries.parse(text)
    assert back == th
    J = mf.j_series(9)
    assert FracPowerSeries.parse(J.dump()) == J
