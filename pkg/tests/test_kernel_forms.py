"""Kernel coefficient forms: expansions, matcher oracle, kernel residue."""

import cmath
import math
from fractions import Fraction as F

import pytest

from zetainterp import kernel_forms as kf
from zetainterp import modforms as mf


def test_g0_is_theta_cubed():
    g0 = kf.g_form(0, F(1, 2), -1)
    assert g0.q_expansion(10) == mf.theta_series(12).pow_rational(3).truncate(10)


def test_leading_expansion_exact():
    # q-expansion q^(-n/2) + O(q^(-(nu-1)/2)), rational arithmetic, n <= 30
    for k in (F(1, 2), F(3, 2), F(2)):
        for sign in (+1, -1):
            v = mf.nu(k, sign)
            for n in list(range(v, 8)) + [15, 30]:
                s = kf.g_form(n, k, sign).q_expansion(2)
                assert s.coeff(F(-n, 2)) == 1
                for m in range(v, n):
                    assert s.coeff(F(-m, 2)) == 0


def test_rejects_small_index():
    with pytest.raises(kf.KernelFormError):
        kf.g_form(0, F(1, 2), +1)  # nu_plus(1/2) = 1


def test_matcher_equals_geometric_expansion():
    for k in (F(1, 2), F(3, 2)):
        for sign in (+1, -1):
            v = mf.nu(k, sign)
            for n in range(v, max(v + 1, 6)):
                a = kf.g_form(n, k, sign).rep
                b = kf.g_form_matched(n, k, sign).rep
                assert a.j_poly == b.j_poly
                assert a.jminus_power == b.jminus_power


def test_g_eval_and_cusp_decay():
    assert abs(kf.g_eval(0, F(1, 2), -1, 1j) - mf.get_evaluator().theta(1j) ** 3) < 1e-13
    # magnitude decays monotonically toward the cusp on the semicircle
    for sign in (+1, -1):
        n = mf.nu(F(1, 2), sign) + 1
        vals = []
        for phi in (0.6, 0.35, 0.2, 0.1, 0.05):
            z = cmath.exp(1j * phi)
            vals.append(abs(kf.g_eval(n, F(1, 2), sign, z)))
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-5 * vals[0]
    # deep decay below 1e-12 relative before the chart cutoff
    z = cmath.exp(1j * 0.015)
    assert abs(kf.g_eval(1, F(1, 2), +1, z)) < 1e-12


def test_cusp_vanishing_order_positive():
    for k, sign in ((F(1, 2), +1), (F(1, 2), -1), (F(3, 2), +1), (F(2), -1)):
        v = mf.nu(k, sign)
        g = kf.g_form(v + 2, k, sign)
        assert g.rep.cusp_vanishing_order() > 0


def test_weight_transformation_character():
    # g(-1/z) = -sign (z/i)^(2-k) g(z): weight 2-k with the opposite character
    for k in (F(1, 2), F(3, 2)):
        for sign in (+1, -1):
            n = mf.nu(k, sign) + 1
            g = kf.g_form(n, k, sign)
            for z in (0.21 + 1.1j, -0.4 + 0.8j):
                lhs = g.eval(-1 / z)
                rhs = (-sign) * (z / 1j) ** float(2 - k) * g.eval(z)
                assert abs(lhs - rhs) / abs(rhs) < 1e-8


def test_kernel_residue_at_diagonal():
    # (2 pi i)^-1 contour integral of K(tau, .) around z = tau equals 1/(pi i)
    tau = 0.17 + 1.13j
    for k, sign in ((F(1, 2), +1), (F(1, 2), -1), (F(3, 2), -1)):
        M = 64
        r = 0.08
        acc = 0j
        for j in range(M):
            t = 2 * math.pi * j / M
            z = tau + r * cmath.exp(1j * t)
            acc += kf.kernel_eval(k, sign, tau, z) * r * cmath.exp(1j * t)
        res = acc / M  # (1/2 pi i) * closed integral with dz = i r e^(it) dt
        want = 1 / (math.pi * 1j)
        assert abs(res - want) / abs(want) < 1e-6


def test_kernel_series_assembly_high_tau():
    # sum over finitely many g-terms reproduces the closed kernel when
    # Im tau exceeds the orbit height of z
    tau = 2.6j
    z = 0.2 + 0.95j
    for k, sign in ((F(1, 2), +1), (F(1, 2), -1)):
        v = mf.nu(F(1, 2), sign)
        q_half = cmath.exp(1j * math.pi * tau)
        acc = sum(
            kf.g_eval(n, k, sign, z) * q_half ** n for n in range(v, 26)
        )
        want = kf.kernel_eval(k, sign, tau, z)
        assert abs(acc - want) / abs(want) < 1e-9
