"""Coefficient forms of the two-variable modular kernels.

For weight k and sign eps the kernel couples a weight-k form in tau with a
weight-(2-k) form in z of the opposite character; its Fourier coefficients in
q_tau^(1/2) are weakly holomorphic forms g[n] of weight 2-k that vanish at the
cusp 1 and have q-expansion q^(-n/2) + O(q^(-(nu-1)/2)).

Two independent constructions are provided:

* the geometric expansion of 1/(J(tau) - J(z)) in powers of J(z)/J(tau),
  which yields all g[n] with n <= N from one exact series ladder;
* a principal-part matcher that solves the (triangular) linear system for the
  unique element of theta^(4-2k) Jm^delta C[J] with the prescribed expansion.

Both produce exact rational J-polynomials and agree coefficientwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._rat import R, R_ZERO
from .qseries import FracPowerSeries
from . import modforms
from .modforms import ModularFormRep, nu, theta_series, j_series, jminus_series


class KernelFormError(ValueError):
    pass


@dataclass(frozen=True)
class KernelCoefficientForm:
    n: int
    k: Fraction
    sign: int
    rep: ModularFormRep

    def q_expansion(self, order: int) -> FracPowerSeries:
        return self.rep.q_expansion(order)

    def eval(self, z: complex) -> complex:
        return self.rep.eval(z)

    def horner_digits(self) -> float:
        """log10 of the largest term of the J-polynomial at |J| = 64.

        The terms cancel down to exp(pi n Im z) at interior points, so this
        measures the precision the evaluation itself consumes.
        """
        lg64 = math.log10(64.0)
        worst = 0.0
        for m, c in self.rep.j_poly:
            num = abs(int(c.numerator))
            if num == 0:
                continue
            mag = math.log10(num) - math.log10(int(c.denominator)) + m * lg64
            worst = max(worst, mag)
        return worst


class GFormTable:
    """All kernel coefficient forms for one (k, sign), grown lazily in n.

    The z-side of the kernel is theta^(4-2k) Jm^delta J^(nu+j) with
    delta = 1 exactly for sign +1; the tau-side ladder A_j has exact rational
    t-coefficients c[n][j] so that g[n] = theta^(4-2k) Jm^delta *
    sum_j c[n][j] J^(nu+j).
    """

    def __init__(self, k, sign: int):
        self.k = Fraction(k)
        self.sign = 1 if sign > 0 else -1
        self.nu = nu(self.k, self.sign)
        self.delta = 1 if self.sign > 0 else 0
        self.weight_z = 2 - self.k
        self._ladder_coeffs = []  # _ladder_coeffs[j][n] = [t^n] A_j
        self._nmax = -1

    def _extend(self, nmax: int):
        if nmax <= self._nmax:
            return
        order = nmax + 2
        k2 = 2 * self.k
        th2k = theta_series(order + 6).pow_rational(k2)
        jj = j_series(order + 6)
        jinv = jj.invert()
        # A_j(tau) = theta^(2k) Jm^(1-delta... ) J^(-nu-j); the Jm factor sits on
        # the tau side exactly when it is absent on the z side (sign -1)
        base = th2k
        if self.delta == 0:
            base = base * jminus_series(order + 6)
        base = base * jinv._pow_int(self.nu) if self.nu else base
        ladder = []
        a = base
        jmax = nmax - self.nu
        for j in range(jmax + 1):
            coeffs = [a.coeff(Fraction(n, 2)) for n in range(nmax + 1)]
            ladder.append(coeffs)
            if j < jmax:
                a = (a * jinv).truncate(min(a.trunc_order, order + 4))
        self._ladder_coeffs = ladder
        self._nmax = nmax

    def g_form(self, n: int) -> KernelCoefficientForm:
        if n < self.nu:
            raise KernelFormError(
                "index n=%d below nu=%d for (k=%s, sign=%+d)" % (n, self.nu, self.k, self.sign)
            )
        self._extend(max(n, 8))
        poly = []
        for j in range(n - self.nu + 1):
            c = self._ladder_coeffs[j][n]
            if c != 0:
                poly.append((self.nu + j, c))
        rep = ModularFormRep(self.weight_z, -self.sign, self.delta, tuple(poly))
        return KernelCoefficientForm(n, self.k, self.sign, rep)


_TABLES = {}


def g_table(k, sign: int) -> GFormTable:
    key = (Fraction(k), 1 if sign > 0 else -1)
    if key not in _TABLES:
        _TABLES[key] = GFormTable(*key)
    return _TABLES[key]


def g_form(n: int, k, sign: int) -> KernelCoefficientForm:
    """Kernel coefficient form by the geometric-expansion construction."""
    return g_table(k, sign).g_form(n)


def g_form_matched(n: int, k, sign: int) -> KernelCoefficientForm:
    """Independent construction by principal-part matching.

    Solves for the unique combination theta^(4-2k) Jm^delta sum_m c_m J^m,
    nu <= m <= n, whose q-expansion is q^(-n/2) + O(q^(-(nu-1)/2)).  The
    system is triangular because J^m leads with t^(-m).
    """
    k = Fraction(k)
    sign = 1 if sign > 0 else -1
    v = nu(k, sign)
    if n < v:
        raise KernelFormError("index n=%d below nu=%d" % (n, v))
    delta = 1 if sign > 0 else 0
    order = 4
    basis = []
    for m in range(v, n + 1):
        rep = ModularFormRep(2 - k, -sign, delta, ((m, R(1)),))
        basis.append(rep.q_expansion(order))
    # match t-coefficients at exponents -n .. -nu (leading 1, rest 0)
    coeffs = [R_ZERO] * (n - v + 1)
    residual = {e: R_ZERO for e in range(-n, -v + 1)}
    residual[-n] = R(1)
    for m in range(n, v - 1, -1):
        i = m - v
        s = basis[i]
        lead = s.coeff(Fraction(-m, 2))
        want = residual[-m]
        c = want / lead
        coeffs[i] = c
        if c != 0:
            for e in range(-n, -v + 1):
                residual[e] -= c * s.coeff(Fraction(e, 2))
    poly = tuple((v + i, c) for i, c in enumerate(coeffs) if c != 0)
    rep = ModularFormRep(2 - k, -sign, delta, poly)
    return KernelCoefficientForm(n, k, sign, rep)


def g_eval(n: int, k, sign: int, z: complex) -> complex:
    """Numeric value of the kernel coefficient form at z in the upper half-plane."""
    return g_form(n, k, sign).eval(z)


def kernel_eval(k, sign: int, tau: complex, z: complex) -> complex:
    """Closed-form two-variable kernel (meromorphic; simple pole at z in the
    orbit of tau with residue 1/(pi i) at z = tau)."""
    k = Fraction(k)
    sign = 1 if sign > 0 else -1
    v = nu(k, sign)
    ev = modforms.get_evaluator()
    Jt, Jz = ev.jj(tau), ev.jj(z)
    out = (
        ev.theta_pow(tau, float(2 * k))
        * ev.theta_pow(z, float(4 - 2 * k))
        * (Jz / Jt) ** v
        * Jt
        / (Jt - Jz)
    )
    out *= ev.jminus(z) if sign > 0 else ev.jminus(tau)
    return out
