"""Functional-equation recursion pipeline: reduction, corner kit, FFT batches.

The heavy engines are session-cached inside the package, so the expensive
constructions here are shared with the acceptance module.
"""

import cmath
import math
from fractions import Fraction as F

import numpy as np
import pytest

from zetainterp import fastpath as fp
from zetainterp import modforms
from zetainterp.alpha import engine


PHI_S03 = fp.PhiSpec("power", 0.3 + 0j)
PHI_S0 = fp.PhiSpec("power", 0j)


def test_reduction_cocycle_identity():
    # F(tau) = acc + w * F(tau_red): verify with the exactly known F[1/2,-](tau,0) = 1
    rng = np.random.default_rng(3)
    tau = rng.uniform(-1, 1, 40) + 1j * rng.uniform(1e-3, 0.2, 40)
    red, w, acc = fp.reduce_cocycle(tau, 0.5, -1, PHI_S0)
    assert np.all(np.abs(red) >= 1 - 1e-9)
    assert np.all(np.abs(red.real) <= 1 + 1e-9)
    # F == 1 identically, so acc + w * 1 == 1
    assert np.abs(acc + w - 1.0).max() < 1e-10


def test_reduction_against_plus_kernel_theta():
    # F[1/2,+](tau,0) = 1 - theta(tau): reduction must reproduce it near the real line
    ev = modforms.get_evaluator()
    rng = np.random.default_rng(5)
    tau = rng.uniform(-1, 1, 12) + 1j * rng.uniform(0.01, 0.1, 12)
    red, w, acc = fp.reduce_cocycle(tau, 0.5, +1, PHI_S0)
    fred = np.array([1 - ev.theta(complex(t)) for t in red])
    direct = np.array([1 - ev.theta(complex(t)) for t in tau])
    assert np.abs(acc + w * fred - direct).max() < 1e-10


def test_corner_kit_exact_cases():
    kit = fp.CornerKit(F(1, 2), -1, PHI_S0)
    kitp = fp.CornerKit(F(1, 2), +1, PHI_S0)
    ev = modforms.get_evaluator()
    for y in (2.0, 5.0, 12.0):
        tau = complex(-1.0 - 1.0 / (0.31 + 1j * y))
        assert abs(kit.eval(np.array([tau]))[0] - 1.0) < 1e-9
        want = 1 - ev.theta(tau)
        assert abs(kitp.eval(np.array([tau]))[0] - want) < 1e-8
    # deep channel: the reciprocal-coordinate series
    for y in (40.0, 300.0):
        tau = complex(-1.0 - 1.0 / (0.31 + 1j * y))
        assert abs(kit.eval(np.array([tau]))[0] - 1.0) < 1e-10
        assert abs(kitp.eval(np.array([tau]))[0] - 1.0) < 1e-10


def test_corner_kit_matches_fourier_overlap():
    fb = fp.fbase(F(1, 2), -1, PHI_S03)
    pts = np.array([cmath.exp(1j * ph) * 1.0000001 for ph in (0.56, 0.8, 1.1, 1.4)])
    a = fb.eval(pts)      # fourier branch (Im >= 1/2)
    b = fb.kit.eval(pts)  # forced kit
    assert np.abs(a - b).max() < 1e-8


def test_deep_series_consistency():
    fb = fp.fbase(F(1, 2), -1, PHI_S03)
    assert fb.kit.deep_fit_residual() < 1e-7


def test_fft_batch_matches_mp_engine_power():
    vals, env = fp.coefficient_batch(F(1, 2), -1, PHI_S03, 256)
    eng = engine(F(1, 2), -1)
    mpv, mpe = eng.alpha_many(list(range(41)), 0.3)
    worst = max(abs(vals[n] - mpv[n]) for n in range(41))
    assert worst < 1e-8
    assert np.abs(vals[:41].imag).max() < 1e-12  # real s means real coefficients


def test_fft_batch_matches_mp_engine_gauss():
    phi = fp.PhiSpec("gauss", 2.0 + 0j)
    vals, env = fp.coefficient_batch(F(1, 2), -1, phi, 256)
    eng = engine(F(1, 2), -1)
    mpv, mpe = fp._b_small(eng, 2.0, 32)
    worst = max(abs(vals[n] - mpv[n]) for n in range(33))
    assert worst < 1e-8
    # interpolation value: b_4(2) = 1, neighbours vanish
    assert abs(vals[4] - 1) < 1e-6
    assert abs(vals[3]) < 1e-6 and abs(vals[5]) < 1e-6


def test_functional_equation_residual_near_real_line():
    # F(tau) - eps (tau/i)^(-k) F(-1/tau) = psi(tau) for the computed F
    fb = fp.fbase(F(1, 2), -1, PHI_S03)
    rng = np.random.default_rng(11)
    tau = rng.uniform(-0.9, 0.9, 8) + 1j * rng.uniform(0.05, 0.4, 8)
    lhs = fb.eval_full(tau) + np.exp(-0.5 * np.log(tau / 1j)) * fb.eval_full(-1.0 / tau)
    rhs = fp.psi_vec(tau, 0.5, -1, PHI_S03)
    assert np.abs(lhs - rhs).max() < 1e-9


def test_degenerate_weight_guard():
    kit = fp.CornerKit(F(2), -1, PHI_S0)
    with pytest.raises(fp.FastPathError):
        kit._deep_data()
