"""Coefficient quadrature: special values, symmetry, Paley-Wiener growth."""

import cmath
import math
from fractions import Fraction as F

import pytest

from zetainterp import alpha as al


def sigma(n):
    if n != int(n) or n < 1:
        return 0
    n = int(n)
    return sum(d for d in range(1, n + 1) if n % d == 0)


def test_special_value_s0_minus():
    eng = al.engine(F(1, 2), -1)
    v, e = eng.alpha(0, 0.0)
    assert abs(v - 1) < 1e-9
    for n in (1, 2, 3, 5, 9):
        v, e = eng.alpha(n, 0.0)
        assert abs(v) < 1e-9


def test_special_value_s0_plus():
    eng = al.engine(F(1, 2), +1)
    for n in range(1, 12):
        v, e = eng.alpha(n, 0.0)
        want = -2.0 if int(math.isqrt(n)) ** 2 == n else 0.0
        assert abs(v - want) < 1e-9


def test_special_value_khalf_plus():
    eng = al.engine(F(1, 2), +1)
    for n in (1, 2, 4, 6):
        v, _ = eng.alpha(n, 0.25)
        assert abs(v) < 1e-9


def test_eisenstein_identity_weight2():
    eng = al.engine(F(2), -1)
    for n in range(1, 9):
        v, _ = eng.alpha(n, 1.0)
        want = 8 * math.pi * (sigma(n) - 5 * sigma(F(n, 2)) + 4 * sigma(F(n, 4)))
        assert abs(v - want) / abs(want) < 1e-9


def test_symmetry_in_s():
    s = 0.31 + 0.57j
    for sign in (+1, -1):
        eng = al.engine(F(1, 2), sign)
        for n in range(eng.nu, eng.nu + 4):
            a_ref, e1 = eng.alpha(n, s)
            a_sym, e2 = eng.alpha(n, 0.5 - s)
            target = -sign * a_ref  # alpha(k-s) = -sign * alpha(s)
            assert abs(a_sym - target) <= 2 * (e1 + e2) + 1e-12


def test_exponential_type_in_im_s():
    # |alpha(sigma + iv)| <= C exp(pi |v| / 2), decaying faster than any
    # polynomial at fixed n: check decay of alpha * exp(-pi|v|/2) in v
    eng = al.engine(F(1, 2), -1)
    n = 2
    vals = []
    for v in (4.0, 8.0, 16.0):
        a, _ = eng.alpha(n, 0.25 + 1j * v)
        vals.append(abs(a) * math.exp(-math.pi * v / 2))
    assert vals[0] < 2.0
    assert vals[1] < vals[0]
    assert vals[2] < vals[1] / 8  # superpolynomial decay


def test_alpha_table_conventions():
    t = al.alpha_table(F(1, 2), +1, 0.3, nmax=4)
    assert t.values[0] == 0  # below nu_plus = 1
    assert t.quad_error < 1e-12
    v, _ = al.engine(F(1, 2), +1).alpha(3, 0.3)
    assert abs(t[3] - v) < 1e-12


def test_achieved_error_reported():
    v, e = al.alpha(1, F(1, 2), -1, 0.37, tol=1e-9)
    assert e < 1e-9
    assert isinstance(v, complex)
