"""Exact Laurent series in a fractional power of the nome.

A series lives in the variable u = q^(1/denom) and is stored as a finite run
of exact rational coefficients starting at u^base_exp.  Coefficients at
u-exponent >= trunc_order are unknown; everything below base_exp is an exact
zero.  Exponents presented at the API boundary are rationals in q-units.

Arithmetic between series with different denominators lifts both to the least
common denominator, so theta-constant work at denominator 8 mixes freely with
the denominator-2 world of t = q^(1/2).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from ._rat import R, R_ONE, R_ZERO, as_rat, num_den


class QSeriesError(ValueError):
    pass


class CoefficientOutOfRange(QSeriesError):
    """Requested exponent is at or beyond the truncation order."""


class FracPowerSeries:
    """Truncated exact Laurent series in u = q^(1/denom)."""

    __slots__ = ("denom", "base_exp", "coeffs", "trunc_order")

    def __init__(self, denom, base_exp, coeffs, trunc_order):
        if denom < 1:
            raise QSeriesError("denom must be a positive integer")
        coeffs = [as_rat(c) for c in coeffs]
        # strip leading zeros so coeffs[0] != 0 unless the series is zero
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            base_exp += 1
        # strip anything at or beyond the truncation order
        if base_exp + len(coeffs) > trunc_order:
            coeffs = coeffs[: max(0, trunc_order - base_exp)]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            base_exp = 0
        self.denom = int(denom)
        self.base_exp = int(base_exp)
        self.coeffs = tuple(coeffs)
        self.trunc_order = int(trunc_order)

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, denom=1, trunc_order=0):
        return cls(denom, 0, (), trunc_order)

    @classmethod
    def one(cls, denom=1, trunc_order=1):
        return cls(denom, 0, (R_ONE,), trunc_order)

    @classmethod
    def monomial(cls, exp_q, coeff=1, denom=None, trunc_order=None):
        """coeff * q^exp_q with exp_q a rational in q-units."""
        exp_q = Fraction(exp_q)
        d = exp_q.denominator if denom is None else denom
        if (exp_q * d).denominator != 1:
            raise QSeriesError("exponent %s not representable at denom %d" % (exp_q, d))
        e = int(exp_q * d)
        if trunc_order is None:
            trunc_order = e + 1
        return cls(d, e, (as_rat(coeff),), trunc_order)

    @classmethod
    def from_q_coeffs(cls, pairs, denom, trunc_order):
        """Series from (exp_q, coeff) pairs with rational q-exponents."""
        idx = {}
        for e, c in pairs:
            e = Fraction(e) * denom
            if e.denominator != 1:
                raise QSeriesError("exponent %s not representable at denom %d" % (e / denom, denom))
            idx[int(e)] = idx.get(int(e), R_ZERO) + as_rat(c)
        if not idx:
            return cls.zero(denom, trunc_order)
        lo = min(idx)
        hi = max(idx)
        coeffs = [idx.get(i, R_ZERO) for i in range(lo, hi + 1)]
        return cls(denom, lo, coeffs, trunc_order)

    # ------------------------------------------------------------------
    # basic queries

    @property
    def is_zero(self):
        return not self.coeffs

    def known_to(self):
        """Largest rational q-exponent e such that all exponents < e are known."""
        return Fraction(self.trunc_order, self.denom)

    def coeff(self, exp_q):
        """Exact coefficient of q^exp_q; raises beyond the truncation order."""
        e = Fraction(exp_q) * self.denom
        if e.denominator != 1:
            return R_ZERO
        i = int(e)
        if i >= self.trunc_order:
            raise CoefficientOutOfRange(
                "coefficient of q^%s is beyond truncation order %s"
                % (Fraction(exp_q), self.known_to())
            )
        if i < self.base_exp or i >= self.base_exp + len(self.coeffs):
            return R_ZERO
        return self.coeffs[i - self.base_exp]

    def coeff_u(self, i):
        """Exact coefficient of u^i (internal units); raises beyond truncation."""
        if i >= self.trunc_order:
            raise CoefficientOutOfRange("u-exponent %d beyond truncation %d" % (i, self.trunc_order))
        if i < self.base_exp or i >= self.base_exp + len(self.coeffs):
            return R_ZERO
        return self.coeffs[i - self.base_exp]

    def nonzero_items(self):
        """Yield (exp_q as Fraction, coeff) for the stored nonzero coefficients."""
        for j, c in enumerate(self.coeffs):
            if c != 0:
                yield Fraction(self.base_exp + j, self.denom), c

    def __eq__(self, other):
        """Equality of the known parts on the common range of validity."""
        if not isinstance(other, FracPowerSeries):
            return NotImplemented
        a, b = _common(self, other)
        t = min(a.trunc_order, b.trunc_order)
        lo = min(a.base_exp, b.base_exp, 0)
        return all(a.coeff_u(i) == b.coeff_u(i) for i in range(lo, t))

    __hash__ = None

    def __repr__(self):
        head = ", ".join(
            "q^%s*%s" % (e, c) for e, c in list(self.nonzero_items())[:4]
        )
        if len(self.coeffs) > 4:
            head += ", ..."
        return "FracPowerSeries(%s | denom=%d, O(q^%s))" % (head, self.denom, self.known_to())

    # ------------------------------------------------------------------
    # denominator lifting

    def lift(self, denom):
        if denom == self.denom:
            return self
        if denom % self.denom:
            raise QSeriesError("cannot lift denom %d to %d" % (self.denom, denom))
        m = denom // self.denom
        coeffs = []
        for c in self.coeffs:
            coeffs.append(c)
            coeffs.extend([R_ZERO] * (m - 1))
        if coeffs:
            coeffs = coeffs[: (len(self.coeffs) - 1) * m + 1]
        return FracPowerSeries(denom, self.base_exp * m, coeffs, self.trunc_order * m)

    # ------------------------------------------------------------------
    # ring operations

    def __neg__(self):
        return FracPowerSeries(self.denom, self.base_exp, [-c for c in self.coeffs], self.trunc_order)

    def __add__(self, other):
        if isinstance(other, FracPowerSeries):
            a, b = _common(self, other)
            t = min(a.trunc_order, b.trunc_order)
            if a.is_zero and b.is_zero:
                return FracPowerSeries.zero(a.denom, t)
            if a.is_zero:
                return FracPowerSeries(b.denom, b.base_exp, b.coeffs, t)
            if b.is_zero:
                return FracPowerSeries(a.denom, a.base_exp, a.coeffs, t)
            lo = min(a.base_exp, b.base_exp)
            hi = min(max(a.base_exp + len(a.coeffs), b.base_exp + len(b.coeffs)), t)
            coeffs = [R_ZERO] * (hi - lo)
            for j, c in enumerate(a.coeffs):
                i = a.base_exp + j
                if i < hi:
                    coeffs[i - lo] += c
            for j, c in enumerate(b.coeffs):
                i = b.base_exp + j
                if i < hi:
                    coeffs[i - lo] += c
            return FracPowerSeries(a.denom, lo, coeffs, t)
        return self + _scalar(other, self.denom, self.trunc_order)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, FracPowerSeries) else -as_rat(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FracPowerSeries):
            a, b = _common(self, other)
            if a.is_zero or b.is_zero:
                # 0 + O(u^Ta) times a series of leading order bb is 0 + O(u^(Ta+bb))
                if a.is_zero and not b.is_zero:
                    t = a.trunc_order + b.base_exp
                elif b.is_zero and not a.is_zero:
                    t = b.trunc_order + a.base_exp
                else:
                    t = a.trunc_order + b.trunc_order
                return FracPowerSeries.zero(a.denom, t)
            t = min(a.trunc_order + b.base_exp, b.trunc_order + a.base_exp)
            n = min(len(a.coeffs) + len(b.coeffs) - 1, t - a.base_exp - b.base_exp)
            coeffs = [R_ZERO] * n
            bc = b.coeffs
            for i, ca in enumerate(a.coeffs):
                if ca == 0 or i >= n:
                    continue
                jmax = min(len(bc), n - i)
                for j in range(jmax):
                    cb = bc[j]
                    if cb != 0:
                        coeffs[i + j] += ca * cb
            return FracPowerSeries(a.denom, a.base_exp + b.base_exp, coeffs, t)
        c = as_rat(other)
        return FracPowerSeries(self.denom, self.base_exp, [c * x for x in self.coeffs], self.trunc_order)

    __rmul__ = __mul__

    def shift(self, exp_q):
        """Multiply by the exact monomial q^exp_q."""
        e = Fraction(exp_q) * self.denom
        if e.denominator != 1:
            raise QSeriesError("shift exponent not representable at denom %d" % self.denom)
        e = int(e)
        return FracPowerSeries(self.denom, self.base_exp + e, self.coeffs, self.trunc_order + e)

    def invert(self):
        """Multiplicative inverse; requires a nonzero leading coefficient."""
        if self.is_zero:
            raise QSeriesError("cannot invert the zero series")
        a0 = self.coeffs[0]
        n = self.trunc_order - self.base_exp  # number of known u-coefficients
        inv0 = R_ONE / a0
        out = [inv0] + [R_ZERO] * (n - 1)
        a = self.coeffs
        for i in range(1, n):
            s = R_ZERO
            for j in range(1, min(i, len(a) - 1) + 1):
                if a[j] != 0:
                    s += a[j] * out[i - j]
            out[i] = -inv0 * s
        # relative order n about the inverted leading monomial
        return FracPowerSeries(self.denom, -self.base_exp, out, -self.base_exp + n)

    def pow_rational(self, r):
        """Raise to an exact rational power.

        Integer exponents work for any series with invertible leading term;
        fractional exponents require base_exp = 0 and leading coefficient 1,
        the formal counterpart of the principal branch.
        """
        if isinstance(r, int) or (isinstance(r, Fraction) and r.denominator == 1):
            return self._pow_int(int(r))
        r = Fraction(r)
        if self.is_zero:
            raise QSeriesError("cannot raise the zero series to a fractional power")
        if self.base_exp != 0 or self.coeffs[0] != 1:
            raise QSeriesError(
                "fractional power needs constant term 1 (got base_exp=%d, lead=%s)"
                % (self.base_exp, self.coeffs[0])
            )
        rr = R(r.numerator, r.denominator)
        n = self.trunc_order
        a = list(self.coeffs) + [R_ZERO] * (n - len(self.coeffs))
        out = [R_ONE] + [R_ZERO] * (n - 1)
        # f = a^r solves a f' = r a' f; coefficient recursion with a_0 = 1
        for i in range(1, n):
            s = R_ZERO
            for j in range(1, i + 1):
                if a[j] != 0:
                    s += ((rr + 1) * j - i) * a[j] * out[i - j]
            out[i] = s / i
        return FracPowerSeries(self.denom, 0, out, n)

    def _pow_int(self, m):
        if m == 0:
            return FracPowerSeries.one(self.denom, self.trunc_order - self.base_exp)
        if m < 0:
            return self.invert()._pow_int(-m)
        result = self
        # binary powering; truncation orders propagate through __mul__
        bits = bin(m)[3:]
        for b in bits:
            result = result * result
            if b == "1":
                result = result * self
        return result

    def truncate(self, trunc_order):
        if trunc_order > self.trunc_order:
            raise QSeriesError("cannot extend truncation order (only reduce)")
        return FracPowerSeries(self.denom, self.base_exp, self.coeffs, trunc_order)

    # ------------------------------------------------------------------
    # conversion & I/O

    def float_coeffs(self):
        """(base_exp, denom, list of float coefficients) for numeric evaluators."""
        return self.base_exp, self.denom, [float(Fraction(c.numerator, c.denominator)) for c in self.coeffs]

    def dump(self):
        """Textual dump: header then one 'exp:num/den' line per nonzero coefficient."""
        lines = ["denom=%d base=%d trunc=%d" % (self.denom, self.base_exp, self.trunc_order)]
        for e, c in self.nonzero_items():
            n, d = num_den(c)
            lines.append("%s:%d/%d" % (e, n, d))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text):
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        head = dict(kv.split("=") for kv in lines[0].split())
        denom = int(head["denom"])
        base = int(head["base"])
        trunc = int(head["trunc"])
        pairs = []
        for ln in lines[1:]:
            e, v = ln.split(":")
            n, d = v.split("/")
            pairs.append((Fraction(e), R(int(n), int(d))))
        s = cls.from_q_coeffs(pairs, denom, trunc)
        if s.is_zero:
            return cls(denom, base, (), trunc)
        return s


def _scalar(c, denom, trunc):
    c = as_rat(c)
    if c == 0:
        return FracPowerSeries.zero(denom, trunc)
    return FracPowerSeries(denom, 0, (c,), trunc)


def _common(a, b):
    if a.denom == b.denom:
        return a, b
    d = a.denom * b.denom // gcd(a.denom, b.denom)
    return a.lift(d), b.lift(d)


def mul(a, b):
    return a * b


def invert(a):
    return a.invert()


def pow_rational(a, r):
    return a.pow_rational(r)


def coeff(a, e):
    return a.coeff(e)
