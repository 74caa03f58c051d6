"""Modular forms for the theta group.

Exact q-expansions of theta, the lambda invariant, the Hauptmodul
J = 16/(lambda(1-lambda)) and its odd companion Jm = 1 - 2*lambda, their
expansions at the cusp 1, the finite-dimensional spaces of holomorphic forms,
and validated numerical evaluators on the upper half-plane.

Conventions.  theta(tau) = sum_n exp(pi i n^2 tau), so theta = 1 + 2t + 2t^4 + ...
in t = q^(1/2), q = exp(2 pi i tau).  The group is generated by S: tau -> -1/tau
and T^2: tau -> tau + 2, with characters chi_eps fixed by chi(T^2) = 1,
chi(S) = eps.  Fractional powers theta^(2k) always mean the branch that is
real positive high in the upper half-plane (principal branch of the
log-derivative integral from i*infinity).

Numerical evaluation uses two charts that overlap on the unit semicircle:

* bulk:  Im z >= 0.35, direct series in t (ratio <= exp(-1.1));
* cusp:  the horoball Im tau' >= 0.33 at the cusp +1, tau' = 1/(1-z),
  via the exact cusp-1 expansions; the cusp -1 is reached through z -> -conj(z)
  (all forms here have real Fourier coefficients).

Points supported by neither chart raise PrecisionLoss.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from ._rat import R, as_rat
from .qseries import FracPowerSeries, QSeriesError

BULK_MIN_IM = 0.35
CUSP_MIN_IM_TAUP = 0.33


class PrecisionLoss(ArithmeticError):
    """Evaluation point lies outside both validated chart regimes."""

    def __init__(self, msg, achieved=None):
        super().__init__(msg)
        self.achieved = achieved


def _check_uh(z):
    if z.imag <= 0:
        raise ValueError("point must lie in the open upper half-plane: %r" % (z,))


# ----------------------------------------------------------------------
# exact expansions at i*infinity (denominator 2, variable t = q^(1/2))


@lru_cache(maxsize=None)
def theta_series(order: int) -> FracPowerSeries:
    """theta = 1 + 2 sum_{n>=1} t^(n^2) up to O(t^order)."""
    pairs = [(0, 1)]
    n = 1
    while n * n < order:
        pairs.append((Fraction(n * n, 2), 2))
        n += 1
    return FracPowerSeries.from_q_coeffs(pairs, 2, order)


@lru_cache(maxsize=None)
def lambda_series(order: int) -> FracPowerSeries:
    """lambda = 16 t prod_{n>=1} (1+t^(2n))^8 (1+t^(2n-1))^(-8)."""
    s = FracPowerSeries.monomial(Fraction(1, 2), 16, denom=2, trunc_order=order)
    m = 1
    while m < order:
        f = FracPowerSeries.from_q_coeffs([(0, 1), (Fraction(m, 2), 1)], 2, order)
        s = s * f.pow_rational(8 if m % 2 == 0 else -8)
        s = s.truncate(min(s.trunc_order, order))
        m += 1
    return s


@lru_cache(maxsize=None)
def j_series(order: int) -> FracPowerSeries:
    """Hauptmodul J = 16/(lambda(1-lambda)) = t^-1 + 24 + 276 t + ..."""
    lam = lambda_series(order + 2)
    return (16 * (lam * (1 - lam)).invert()).truncate(order)


@lru_cache(maxsize=None)
def jminus_series(order: int) -> FracPowerSeries:
    """Jm = 1 - 2*lambda, the weight-0 form with character -1 at S."""
    return 1 - 2 * lambda_series(order)


@lru_cache(maxsize=None)
def theta_eta_quotient(order: int) -> FracPowerSeries:
    """theta as eta(tau)^5 / (eta(2 tau)^2 eta(tau/2)^2), computed at denom 48.

    Independent construction used as an oracle against theta_series.
    """
    d = 48  # u = q^(1/48); eta(tau/2) needs q^(1/48), eta(tau) q^(1/24)
    order_u = order * (d // 2)

    def eta_factor(scale_num, scale_den, power):
        # prod (1 - q^(scale*n))^power including the q^(scale/24) prefactor
        scale = Fraction(scale_num, scale_den)
        s = FracPowerSeries.one(d, order_u)
        n = 1
        while Fraction(n) * scale * d < order_u:
            f = FracPowerSeries.from_q_coeffs([(0, 1), (n * scale, -1)], d, order_u)
            s = (s * f.pow_rational(power)).truncate(order_u)
            n += 1
        return s.shift(scale * Fraction(power, 24))

    quot = eta_factor(1, 1, 5) * eta_factor(2, 1, -2) * eta_factor(1, 2, -2)
    return quot


# ----------------------------------------------------------------------
# exact expansions at the cusp 1

_CUSP_FORMS = ("theta", "J", "Jminus")


@lru_cache(maxsize=None)
def cusp1_series(form: str, order: int) -> FracPowerSeries:
    """Expansion at the cusp 1 in the variable q' = exp(2 pi i tau'), tau' = 1/(1-z).

    Returned series (z = 1 - 1/tau'):

    * theta:   (1/2) (tau'/i)^(-1/2) theta(z) = q'^(1/8) + q'^(9/8) + ...
    * J:       J(z) = -4096 q' - ...                (even t'-powers, denom 1 ok)
    * Jminus:  Jm(z) = (1/8) q'^(-1/2) + ...        (odd t'-powers)

    Everything follows exactly from the lambda transformation
    lambda(1 - 1/tau) = (lambda - 1)/lambda.
    """
    if form == "theta":
        pairs = []
        m = 1
        while Fraction(m * m, 8) < order:
            pairs.append((Fraction(m * m, 8), 1))
            m += 2
        return FracPowerSeries.from_q_coeffs(pairs, 8, order * 8)
    lam = lambda_series(2 * order + 6)
    if form == "J":
        # J(1 - 1/tau) = 16 lambda^2 / (lambda - 1), a series in q = t^2
        s = 16 * lam * lam * (lam - 1).invert()
    elif form == "Jminus":
        # Jm(1 - 1/tau) = (2 - lambda)/lambda, a series in odd powers of t
        s = (2 - lam) * lam.invert()
    else:
        raise ValueError("unknown cusp form %r (want one of %s)" % (form, (_CUSP_FORMS,)))
    return s.truncate(min(s.trunc_order, 2 * order))


# ----------------------------------------------------------------------
# spaces of holomorphic forms


def nu_minus(k) -> int:
    return math.floor((Fraction(k) + 2) / 4)


def nu_plus(k) -> int:
    return math.floor((Fraction(k) + 4) / 4)


def nu(k, sign: int) -> int:
    return nu_plus(k) if sign > 0 else nu_minus(k)


def mf_dim(k, sign: int) -> int:
    """Dimension of the space of holomorphic weight-k forms with character sign."""
    return nu(k, sign)


@dataclass(frozen=True)
class ModularFormRep:
    """Symbolic form theta^(2k) * Jm^jminus_power * sum_m j_poly[m] J^m.

    weight_k and the J-exponents are exact; j_poly maps integer J-powers to
    exact rationals.  This is the universal carrier for weakly holomorphic
    forms of any real weight with either character.
    """

    weight_k: Fraction
    sign: int
    jminus_power: int
    j_poly: tuple  # tuple of (power: int, coeff: rational)

    def poly_dict(self):
        return dict(self.j_poly)

    def q_expansion(self, order: int) -> FracPowerSeries:
        # positive powers of J = t^-1 + ... eat truncation order; budget for them
        hi = max([m for m, _ in self.j_poly] + [0])
        work = order + hi + 8
        k2 = 2 * Fraction(self.weight_k)
        th = theta_series(work).pow_rational(k2)
        jm = jminus_series(work)
        jj = j_series(work)
        jinv = jj.invert()
        powers = {}

        def jpow(m):
            if m not in powers:
                powers[m] = (jj if m > 0 else jinv)._pow_int(abs(m)) if m else FracPowerSeries.one(2, work)
            return powers[m]

        acc = FracPowerSeries.zero(2, work)
        for m, c in self.j_poly:
            acc = acc + jpow(m) * c
        out = th * acc
        if self.jminus_power:
            out = out * jm
        return out.truncate(min(out.trunc_order, order))

    def cusp_expansion(self, order: int) -> FracPowerSeries:
        """Expansion of (tau'/i)^(-k) f(1 - 1/tau') in powers of q'^(1/8).

        Known to q'^order.  Exponents >= 0 mean the form is holomorphic at the
        cusp 1; the minimal exponent is the cusp order.  Requires 2k integral
        (true for every weight this package constructs).
        """
        k2 = 2 * Fraction(self.weight_k)
        if k2.denominator != 1:
            raise QSeriesError("cusp expansion needs 2k integral (got k=%s)" % self.weight_k)
        m2k = int(k2)
        thc = cusp1_series("theta", order + 8)  # (1/2)(tau'/i)^(-1/2) theta: q8(1 + ...)
        unit = thc.shift(Fraction(-1, 8))       # constant term 1
        # (tau'/i)^(-k) theta^(2k)(1-1/tau') = 2^(2k) q'^(2k/8) unit^(2k)
        th2k = unit._pow_int(m2k).shift(Fraction(m2k, 8)) * (R(2) ** m2k if m2k >= 0 else R(1, 2 ** (-m2k)))
        jc = cusp1_series("J", order + 8)
        jmc = cusp1_series("Jminus", order + 8)
        jcinv = jc.invert()
        acc = None
        for m, c in self.j_poly:
            p = (jc if m > 0 else jcinv)._pow_int(abs(m)) if m else FracPowerSeries.one(2, 4 * (order + 8))
            term = p * c
            acc = term if acc is None else acc + term
        out = th2k * acc.lift(8)
        if self.jminus_power:
            out = out * jmc.lift(8)
        return out.truncate(min(out.trunc_order, order * 8))

    def cusp_vanishing_order(self) -> Fraction:
        s = self.cusp_expansion(6)
        if s.is_zero:
            return Fraction(s.trunc_order, 8)
        return Fraction(s.base_exp, 8)

    def eval(self, z: complex) -> complex:
        ev = get_evaluator()
        return ev.eval_rep(self, z)


def mf_basis(k, sign: int):
    """Echelon basis of the holomorphic weight-k forms with character sign.

    For sign +1 the elements are theta^(2k) J^(1-j), 1 <= j <= nu_plus(k); for
    sign -1 they are theta^(2k) Jm J^(-j), 0 <= j <= nu_minus(k)-1.  Cusp
    holomorphy is certified through the exact cusp expansion.
    """
    k = Fraction(k)
    out = []
    if sign > 0:
        for j in range(1, nu_plus(k) + 1):
            out.append(ModularFormRep(k, +1, 0, ((1 - j, R(1)),)))
    else:
        for j in range(nu_minus(k)):
            out.append(ModularFormRep(k, -1, 1, ((-j, R(1)),)))
    for f in out:
        if f.cusp_vanishing_order() < 0:
            raise ArithmeticError("basis element fails holomorphy at the cusp 1")
    return out


# ----------------------------------------------------------------------
# numerical evaluators


def _floats(series: FracPowerSeries):
    base, denom, cs = series.float_coeffs()
    return base, denom, cs


class Evaluator:
    """Float evaluators for theta, lambda, J, Jm and theta^(2k) on both charts."""

    def __init__(self, order: int = 200):
        self.order = order
        self._b_theta = _floats(theta_series(order))
        self._b_lambda = _floats(lambda_series(order))
        self._b_j = _floats(j_series(order))
        self._b_jm = _floats(jminus_series(order))
        self._c_theta = _floats(cusp1_series("theta", order))
        self._c_j = _floats(cusp1_series("J", order))
        self._c_jm = _floats(cusp1_series("Jminus", order))
        # unit factor G8 with theta-cusp = q8 * G8(q8), q8 = q'^(1/8)
        th = cusp1_series("theta", order)
        self._c_unit = _floats(th.shift(Fraction(-1, 8)))

    # -- chart dispatch helpers

    @staticmethod
    def taup(z: complex) -> complex:
        return 1.0 / (1.0 - z)

    def chart(self, z: complex) -> str:
        _check_uh(z)
        tp = self.taup(z)
        tm = self.taup(-z.conjugate())
        # deep inside a cusp horoball the cusp series is cancellation-free and
        # strictly more accurate than the bulk series, so prefer it there
        if max(tp.imag, tm.imag) >= 1.0:
            return "cusp+" if tp.imag >= tm.imag else "cusp-"
        if z.imag >= BULK_MIN_IM:
            return "bulk"
        if max(tp.imag, tm.imag) >= CUSP_MIN_IM_TAUP:
            return "cusp+" if tp.imag >= tm.imag else "cusp-"
        raise PrecisionLoss(
            "point %r is below the bulk chart (Im >= %.2f) and outside both cusp "
            "horoballs (Im tau' >= %.2f); achieved error cannot be bounded"
            % (z, BULK_MIN_IM, CUSP_MIN_IM_TAUP),
            achieved=math.exp(-2 * math.pi * max(self.taup(z).imag, 1e-12)),
        )

    def _bulk(self, triple, z: complex) -> complex:
        base, denom, cs = triple
        u = cmath.exp(2j * math.pi * z / denom)
        acc = 0j
        for c in reversed(cs):
            acc = acc * u + c
        return acc * cmath.exp(2j * math.pi * z * (base / denom))

    def _cusp_raw(self, triple, tp: complex) -> complex:
        base, denom, cs = triple
        u = cmath.exp(2j * math.pi * tp / denom)
        acc = 0j
        for c in reversed(cs):
            acc = acc * u + c
        return acc * cmath.exp(2j * math.pi * tp * (base / denom))

    # -- public evaluators

    def theta(self, z: complex) -> complex:
        ch = self.chart(z)
        if ch == "bulk":
            return self._bulk(self._b_theta, z)
        if ch == "cusp-":
            return self.theta(-z.conjugate()).conjugate()
        tp = self.taup(z)
        return 2.0 * cmath.sqrt(tp / 1j) * self._cusp_raw(self._c_theta, tp)

    def lam(self, z: complex) -> complex:
        ch = self.chart(z)
        if ch == "bulk":
            return self._bulk(self._b_lambda, z)
        if ch == "cusp-":
            return self.lam(-z.conjugate()).conjugate()
        # lambda = (1 - Jm)/2 through the cusp chart
        return (1.0 - self.jminus(z)) / 2.0

    def jj(self, z: complex) -> complex:
        ch = self.chart(z)
        if ch == "bulk":
            return self._bulk(self._b_j, z)
        if ch == "cusp-":
            return self.jj(-z.conjugate()).conjugate()
        return self._cusp_raw(self._c_j, self.taup(z))

    def jminus(self, z: complex) -> complex:
        ch = self.chart(z)
        if ch == "bulk":
            return self._bulk(self._b_jm, z)
        if ch == "cusp-":
            return self.jminus(-z.conjugate()).conjugate()
        return self._cusp_raw(self._c_jm, self.taup(z))

    def log_theta(self, z: complex) -> complex:
        """Branch of log theta continued from log theta(i inf) = 0.

        In the bulk |theta - 1| < 1 so the principal log is the continued
        branch.  In the cusp chart the branch is fixed by the factorization
        theta = 2 (tau'/i)^(1/2) q8 G8 with G8 -> 1, using principal logs of
        the unit factors; overlap consistency is asserted by the test suite.
        """
        ch = self.chart(z)
        if ch == "bulk":
            return cmath.log(self._bulk(self._b_theta, z))
        if ch == "cusp-":
            return self.log_theta(-z.conjugate()).conjugate()
        tp = self.taup(z)
        g8 = self._cusp_raw(self._c_unit, tp)
        return (
            math.log(2.0)
            + 0.5 * cmath.log(tp / 1j)
            + 2j * math.pi * tp / 8.0
            + cmath.log(g8)
        )

    def theta_pow(self, z: complex, two_k) -> complex:
        """theta^(2k), principal branch (two_k may be any real)."""
        return cmath.exp(float(two_k) * self.log_theta(z))

    def eval_rep(self, rep: ModularFormRep, z: complex) -> complex:
        w = self.jj(z)
        powers = sorted(m for m, _ in rep.j_poly)
        lo, hi = powers[0], powers[-1]
        d = {m: float(Fraction(c.numerator, c.denominator)) for m, c in rep.j_poly}
        acc = 0j
        for m in range(hi, lo - 1, -1):  # Horner over the Laurent span
            acc = acc * w + d.get(m, 0.0)
        val = acc * w ** lo
        out = self.theta_pow(z, float(2 * Fraction(rep.weight_k))) * val
        if rep.jminus_power:
            out *= self.jminus(z)
        return out


class MPEvaluator:
    """mpmath twin of Evaluator at a chosen working precision (decimal digits)."""

    def __init__(self, dps: int):
        self.dps = dps
        # series long enough that the bulk tail at |t| = exp(-1.1) is below 10^-dps
        order = max(80, int(dps * math.log(10) / 1.1) + 20)
        self.order = order
        self._b_theta = theta_series(order)
        self._b_lambda = lambda_series(order)
        self._b_j = j_series(order)
        self._b_jm = jminus_series(order)
        self._c_theta = cusp1_series("theta", order)
        self._c_j = cusp1_series("J", order)
        self._c_jm = cusp1_series("Jminus", order)
        self._c_unit = self._c_theta.shift(Fraction(-1, 8))
        self._mp_cache = {}

    def _mp_coeffs(self, name, series):
        key = (name, mp.mp.dps)
        if key not in self._mp_cache:
            base, denom, _ = series.float_coeffs()
            cs = [mp.mpf(c.numerator) / mp.mpf(c.denominator) for c in series.coeffs]
            self._mp_cache[key] = (series.base_exp, series.denom, cs)
        return self._mp_cache[key]

    @staticmethod
    def taup(z):
        return 1 / (1 - z)

    def chart(self, z):
        if mp.im(z) >= BULK_MIN_IM:
            return "bulk"
        if mp.im(self.taup(z)) >= CUSP_MIN_IM_TAUP:
            return "cusp+"
        if mp.im(self.taup(-mp.conj(z))) >= CUSP_MIN_IM_TAUP:
            return "cusp-"
        raise PrecisionLoss("point outside validated charts: %s" % z)

    def _sum(self, triple, u):
        base, denom, cs = triple
        acc = mp.mpc(0)
        for c in reversed(cs):
            acc = acc * u + c
        return acc * u ** base

    def _bulk_u(self, z, denom):
        return mp.exp(2j * mp.pi * z / denom)

    def _cusp_u(self, z, denom):
        return mp.exp(2j * mp.pi * self.taup(z) / denom)

    def theta(self, z):
        return mp.exp(self.log_theta(z))

    def log_theta(self, z):
        ch = self.chart(z)
        if ch == "bulk":
            val = self._sum(self._mp_coeffs("theta", self._b_theta), self._bulk_u(z, 2))
            return mp.log(val)
        if ch == "cusp-":
            return mp.conj(self.log_theta(-mp.conj(z)))
        tp = self.taup(z)
        g8 = self._sum(self._mp_coeffs("unit", self._c_unit), mp.exp(2j * mp.pi * tp / 8))
        return mp.log(2) + mp.log(tp / 1j) / 2 + 2j * mp.pi * tp / 8 + mp.log(g8)

    def theta_pow(self, z, two_k):
        return mp.exp(mp.mpf(two_k.numerator) / two_k.denominator * self.log_theta(z)) \
            if isinstance(two_k, Fraction) else mp.exp(mp.mpf(two_k) * self.log_theta(z))

    def jj(self, z):
        ch = self.chart(z)
        if ch == "bulk":
            return self._sum(self._mp_coeffs("J", self._b_j), self._bulk_u(z, 2))
        if ch == "cusp-":
            return mp.conj(self.jj(-mp.conj(z)))
        return self._sum(self._mp_coeffs("Jc", self._c_j), self._cusp_u(z, 2))

    def jminus(self, z):
        ch = self.chart(z)
        if ch == "bulk":
            return self._sum(self._mp_coeffs("Jm", self._b_jm), self._bulk_u(z, 2))
        if ch == "cusp-":
            return mp.conj(self.jminus(-mp.conj(z)))
        return self._sum(self._mp_coeffs("Jmc", self._c_jm), self._cusp_u(z, 2))


_EVALUATOR = None
_MP_EVALUATORS = {}


def get_evaluator() -> Evaluator:
    global _EVALUATOR
    if _EVALUATOR is None:
        _EVALUATOR = Evaluator()
    return _EVALUATOR


def get_mp_evaluator(dps: int) -> MPEvaluator:
    key = int(dps)
    if key not in _MP_EVALUATORS:
        _MP_EVALUATORS[key] = MPEvaluator(key)
    return _MP_EVALUATORS[key]


def eval_form(name: str, z: complex, two_k=None) -> complex:
    """Evaluate one of {theta, lambda, J, Jminus, theta_pow} at z."""
    ev = get_evaluator()
    if name == "theta":
        return ev.theta(z)
    if name == "lambda":
        return ev.lam(z)
    if name == "J":
        return ev.jj(z)
    if name == "Jminus":
        return ev.jminus(z)
    if name == "theta_pow":
        return ev.theta_pow(z, two_k)
    raise ValueError("unknown form %r" % name)
