"""Theta-group forms: exact expansions, cusp expansions, numeric evaluators."""

import cmath
import math
import random
from fractions import Fraction as F

import mpmath as mp
import pytest

from zetainterp.qseries import FracPowerSeries
from zetainterp import modforms as mf


def test_lambda_product_expansion():
    lam = mf.lambda_series(12)
    assert [int(lam.coeff(F(j, 2))) for j in range(1, 6)] == [16, -128, 704, -3072, 11488]


def test_j_hauptmodul_expansion():
    J = mf.j_series(10)
    assert J.coeff(F(-1, 2)) == 1
    assert J.coeff(0) == 24
    assert J.coeff(F(1, 2)) == 276
    assert J.coeff(1) == 2048


def test_jminus_square_identity():
    # Jm^2 = 1 - 64/J exactly, to order 40 in t
    J = mf.j_series(44)
    Jm = mf.jminus_series(44)
    lhs = Jm * Jm + 64 * J.invert()
    assert lhs == FracPowerSeries.one(2, 40)


def test_jminus_branch_via_pow_rational():
    # pow_rational(1 - 64/J, 1/2) with constant term +1 recovers Jm
    J = mf.j_series(20)
    s = (1 - 64 * J.invert()).pow_rational(F(1, 2))
    assert s == mf.jminus_series(18)


def test_theta_eta_quotient_oracle():
    assert mf.theta_eta_quotient(20) == mf.theta_series(20)


def test_cusp1_expansions_match_golden_triples():
    thc = mf.cusp1_series("theta", 8)
    assert [thc.coeff(F(m * m, 8)) for m in (1, 3, 5)] == [1, 1, 1]
    jc = mf.cusp1_series("J", 8) * F(-1, 4096)
    assert [int(jc.coeff(j)) for j in (1, 2, 3)] == [1, 24, 300]
    jmc = mf.cusp1_series("Jminus", 8) * 8
    assert int(jmc.coeff(F(-1, 2))) == 1
    assert int(jmc.coeff(F(1, 2))) == 20
    assert int(jmc.coeff(F(3, 2))) == -62


def test_dimensions():
    assert mf.mf_dim(F(1, 2), -1) == 0
    assert mf.mf_dim(F(1, 2), +1) == 1
    assert mf.mf_dim(2, -1) == 1
    assert mf.mf_dim(2, +1) == 1
    assert mf.nu_minus(F(3, 2)) == 0
    assert mf.nu_plus(F(3, 2)) == 1


def test_mf_basis_cusp_holomorphy_and_low_expansion():
    for k, sign in ((F(1, 2), +1), (2, -1), (2, +1), (F(3, 2), +1)):
        basis = mf.mf_basis(k, sign)
        assert len(basis) == mf.mf_dim(k, sign)
        for f in basis:
            assert f.cusp_vanishing_order() >= 0
            q = f.q_expansion(4)
            assert q.is_zero or q.base_exp >= 0  # O(q^0) at infinity


def test_vanishing_beyond_nu_forces_zero():
    # a holomorphic form with expansion starting at or beyond nu is zero:
    # solve for a combination of the basis with vanishing first nu coefficients
    k, sign = 2, -1
    basis = mf.mf_basis(k, sign)
    v = mf.nu(F(k), sign)
    assert v == 1
    f = basis[0]
    q = f.q_expansion(2)
    # the single basis element starts strictly below q^(nu/2) = q^(1/2)
    assert q.base_exp < v


def test_eval_known_points():
    ev = mf.get_evaluator()
    want = float(mp.pi ** 0.25 / mp.gamma(0.75))
    assert abs(ev.theta(1j) - want) < 1e-14
    assert abs(ev.jj(1j) - 64) < 1e-11
    assert abs(ev.jminus(1j)) < 1e-13
    assert abs(ev.lam(1j) - 0.5) < 1e-13


def test_cross_regime_consistency_on_semicircle():
    ev = mf.get_evaluator()
    # overlap window on the unit semicircle: both charts valid
    # (Im z = sin phi >= 0.35 and Im tau' = cot(phi/2)/2 >= 0.33);
    # for J the comparison needs |J| not too close to its cusp zero, since the
    # bulk series reaches small values only through cancellation
    for phi in (0.5, 0.7, 1.0, 1.3):
        z = cmath.exp(1j * phi)
        tb = ev._bulk(ev._b_theta, z)
        tp = 1 / (1 - z)
        tc = 2 * cmath.sqrt(tp / 1j) * ev._cusp_raw(ev._c_theta, tp)
        assert abs(tb - tc) / abs(tb) < 1e-10
        jb = ev._bulk(ev._b_j, z)
        jcv = ev._cusp_raw(ev._c_j, tp)
        assert abs(jb - jcv) / abs(jb) < 1e-10
        mb = ev._bulk(ev._b_jm, z)
        mc = ev._cusp_raw(ev._c_jm, tp)
        assert abs(mb - mc) / abs(mb) < 1e-10


def test_theta_pow_branch_glue():
    ev = mf.get_evaluator()
    for phi in (0.36, 0.5):
        z = cmath.exp(1j * phi)
        lb = cmath.log(ev._bulk(ev._b_theta, z))
        tp = 1 / (1 - z)
        lc = math.log(2) + 0.5 * cmath.log(tp / 1j) + 2j * math.pi * tp / 8 + cmath.log(
            ev._cusp_raw(ev._c_unit, tp)
        )
        assert abs(lb - lc) < 1e-12


def test_modularity_smoke():
    ev = mf.get_evaluator()
    rng = random.Random(5)
    for _ in range(12):
        z = complex(rng.uniform(-0.9, 0.9), rng.uniform(0.6, 2.2))
        assert abs(ev.jj(z) - ev.jj(-1 / z)) < 1e-10 * max(1.0, abs(ev.jj(z)))
        assert abs(ev.jj(z) - ev.jj(z + 2)) < 1e-10 * max(1.0, abs(ev.jj(z)))
        lhs = (z / 1j) ** (-0.5) * ev.theta(-1 / z)
        assert abs(lhs - ev.theta(z)) < 1e-12


def test_jderiv_identity():
    ev = mf.get_evaluator()
    rng = random.Random(11)
    for _ in range(6):
        z = complex(rng.uniform(-0.8, 0.8), rng.uniform(0.5, 1.6))
        h = 1e-6
        num = (ev.jj(z + h) - ev.jj(z - h)) / (2 * h)
        rhs = -1j * math.pi * ev.theta_pow(z, 4) * ev.jj(z) * ev.jminus(z)
        assert abs(num - rhs) / abs(rhs) < 1e-8


def test_theta4dz_change_of_variable():
    # theta^4(z) dz = (1/pi) w^(-1/2) (64-w)^(-1/2) dw along the left semicircle,
    # i.e. J'(z) = -pi i theta^4 J Jm and Jm = +sqrt(1 - 64/J) continued from i inf;
    # verified numerically at 10 points
    ev = mf.get_evaluator()
    for j in range(10):
        z = complex(-0.65 + 0.05 * j, 1.05 + 0.04 * j)
        w = ev.jj(z)
        h = 1e-6
        dwdz = (ev.jj(z + h) - ev.jj(z - h)) / (2 * h)
        lhs = ev.theta_pow(z, 4)
        rhs = dwdz / (-1j * math.pi * w * ev.jminus(z))
        assert abs(lhs - rhs) / abs(lhs) < 1e-7


def test_precision_loss_signal():
    ev = mf.get_evaluator()
    with pytest.raises(mf.PrecisionLoss):
        ev.theta(0.55 + 0.02j)  # below bulk, outside both cusp horoballs
    with pytest.raises(ValueError):
        ev.theta(0.5 - 0.1j)


def test_mp_evaluator_agrees_with_float():
    evf = mf.get_evaluator()
    evm = mf.get_mp_evaluator(30)
    with mp.workdps(40):
        for z in (0.3 + 0.9j, 0.97 + 0.12j):
            assert abs(complex(evm.jj(z)) - evf.jj(z)) < 1e-11 * max(1.0, abs(evf.jj(z)))
            assert abs(complex(evm.theta(z)) - evf.theta(z)) < 1e-12
