"""Exact rational scalar backend.

gmpy2.mpq is used when available (much faster than fractions.Fraction for the
dense series convolutions); everything degrades gracefully to Fraction.  All
public series APIs accept either type plus ints, and comparisons between the
two interoperate.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq

    def R(num, den=1):
        return _mpq(num, den)

    RAT_TYPES = (int, Fraction, type(_mpq(1)))
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    def R(num, den=1):
        return Fraction(num, den)

    RAT_TYPES = (int, Fraction)

R_ZERO = R(0)
R_ONE = R(1)


def as_rat(x):
    """Coerce an int / Fraction / mpq / exact string like '3/4' to the backend type."""
    if isinstance(x, str):
        if "/" in x:
            num, den = x.split("/")
            return R(int(num), int(den))
        return R(int(x))
    if isinstance(x, float):
        raise TypeError("refusing to coerce float to exact rational: %r" % (x,))
    return R(x) if not isinstance(x, RAT_TYPES) else (R(x) if isinstance(x, int) else x)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x.numerator, x.denominator)


def num_den(x):
    return int(x.numerator), int(x.denominator)
