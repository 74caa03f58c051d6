"""Modular-integral coefficients by semicircle quadrature.

alpha[n,k,eps](s) is the integral of the kernel coefficient form g[n] against
the power weight along the unit semicircle.  The integrand is of size
exp(pi n Im z) while the result grows only polynomially in n, so the quadrature
is run in adaptive multiprecision: the working precision scales like
1.37*n + 0.69*|Im s| digits.  Node positions, panel weights and the g-form
values at the nodes are cached per precision level, so evaluating a whole
family of s-values (as the Dirichlet-series kernels do) costs one dot product
per coefficient.

The semicircle is parametrized as z = i exp(2 pi i t), t in [-1/4, 1/4]; the
orientation constant is pinned by the normalization F[k,-](tau, 0) = 1.
Panels are split at the bulk/cusp chart boundary and refined dyadically toward
the endpoints until the cusp decay of g[n] falls below the precision floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath as mp
import numpy as np

from .kernel_forms import g_table
from .modforms import get_mp_evaluator, nu

BULK_EDGE = 0.19312  # |t| with Im z = 0.35 on the semicircle
_GL_CACHE = {}


def gauss_legendre(npts: int, dps: int):
    """Gauss-Legendre nodes/weights on [-1, 1] at dps digits (cached)."""
    key = (npts, dps)
    if key in _GL_CACHE:
        return _GL_CACHE[key]
    with mp.workdps(dps + 10):
        xf, wf = np.polynomial.legendre.leggauss(npts)
        xs, ws = [], []
        for x0 in xf:
            x = mp.mpf(float(x0))
            for _ in range(60):
                p0, p1 = mp.mpf(1), x
                d = mp.mpf(0)
                for j in range(2, npts + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                d = npts * (x * p1 - p0) / (x * x - 1)
                dx = p1 / d
                x -= dx
                if abs(dx) < mp.mpf(10) ** (-dps - 5):
                    break
            p0, p1 = mp.mpf(1), x
            for j in range(2, npts + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            d = npts * (x * p1 - p0) / (x * x - 1)
            xs.append(x)
            ws.append(2 / ((1 - x * x) * d * d))
    _GL_CACHE[key] = (xs, ws)
    return _GL_CACHE[key]


def _panels(dps: int, cusp_order: float):
    """Panel edges in t over [-1/4, 1/4].

    The cusp tail is cut where |q'|^cusp_order < 10^-(dps+5); with
    Im tau' = cot(pi u)/2 at distance u = 1/4 - |t| from the endpoint the cut
    is at u ~ 1/(2 pi Y).
    """
    y_cut = (dps + 5) * math.log(10) / (2 * math.pi * max(cusp_order, 0.125))
    u_cut = math.atan(1.0 / (2.0 * y_cut)) / math.pi
    u_edge = 0.25 - BULK_EDGE
    u = u_edge
    levels = []
    while u > 2 * u_cut:
        levels.append(u)
        u /= 2
    side = [0.25 - u for u in levels]  # ascending toward 1/4
    bulk = [-BULK_EDGE + i * (2 * BULK_EDGE) / 6 for i in range(7)]
    left = sorted(-x for x in side) + [-BULK_EDGE]
    right = [BULK_EDGE] + side
    edges = [-(0.25 - u_cut)] + left[:-1] + bulk + right[1:] + [0.25 - u_cut]
    # dedupe while preserving order
    out = [edges[0]]
    for e in edges[1:]:
        if e > out[-1] + 1e-15:
            out.append(e)
    return out


@dataclass
class _NodeSet:
    dps: int
    n_cap: int
    t: list            # mp.mpf parameter values
    z: list            # mp.mpc points on the semicircle
    w_lo: list         # weights of the coarse rule (error estimator)
    w_hi: list         # weights of the fine rule (returned value)
    trunc_bound: float


_NODESETS = {}


def _nodeset(dps: int, cusp_order: float, n_cap: int) -> _NodeSet:
    """Quadrature nodes sized both to the precision (cusp-tail truncation) and
    to the index cap: the integrand of alpha[n] carries the phase of
    q^(-n/2) = exp(pi n e^(2 pi i t)), so each panel needs O(n * width) points."""
    key = (dps, round(cusp_order, 3), n_cap)
    if key in _NODESETS:
        return _NODESETS[key]
    with mp.workdps(dps + 10):
        edges = _panels(dps, cusp_order)
        t, z, w_lo, w_hi = [], [], [], []
        for a, b in zip(edges[:-1], edges[1:]):
            am, bm = mp.mpf(a), mp.mpf(b)
            mid, half = (am + bm) / 2, (bm - am) / 2
            n_base = int(math.ceil(24.0 * n_cap * (b - a))) + 24
            for npts, col in ((n_base, w_lo), (n_base + 16, w_hi)):
                xs, ws = gauss_legendre(npts, dps)
                other = w_hi if col is w_lo else w_lo
                for x, wq in zip(xs, ws):
                    tt = mid + half * x
                    t.append(tt)
                    z.append(1j * mp.exp(2j * mp.pi * tt))
                    col.append(half * wq)
                    other.append(mp.mpf(0))
    ns = _NodeSet(dps, n_cap, t, z, w_lo, w_hi, trunc_bound=10.0 ** (-(dps + 3)))
    _NODESETS[key] = ns
    return ns


class AlphaEngine:
    """Coefficient evaluator for one (k, sign)."""

    def __init__(self, k, sign: int):
        self.k = Fraction(k)
        self.sign = 1 if sign > 0 else -1
        self.table = g_table(self.k, self.sign)
        self.nu = self.table.nu
        # minimal cusp-vanishing order of the g-forms (independent of n)
        self.cusp_order = float((2 - self.k) / 4 - Fraction(self.table.delta, 2) + self.nu)
        self._forms_cache = {}   # dps -> (th, J, Jm) node vectors
        self._g_cache = {}       # (dps, n) -> g-value node vector

    def dps_for(self, n: int, im_s: float = 0.0) -> int:
        """Working precision: the Horner evaluation of g[n] consumes digits up
        to the largest polynomial term at |J| = 64, measured exactly."""
        need = self.table.g_form(max(n, self.nu)).horner_digits() + 0.6822 * abs(im_s) + 30
        return int(math.ceil(need / 32.0) * 32)

    @staticmethod
    def n_bucket(n: int) -> int:
        b = 16
        while b < n:
            b *= 2
        return b

    def _nodes(self, dps: int, n_cap: int) -> _NodeSet:
        return _nodeset(dps, self.cusp_order, n_cap)

    def _form_values(self, dps: int, n_cap: int):
        key = (dps, n_cap)
        if key in self._forms_cache:
            return self._forms_cache[key]
        ns = self._nodes(dps, n_cap)
        ev = get_mp_evaluator(dps + 10)
        with mp.workdps(dps + 10):
            two_k_z = Fraction(4) - 2 * self.k  # weight of g-forms is 2-k
            th = [ev.theta_pow(z, two_k_z) for z in ns.z]
            jj = [ev.jj(z) for z in ns.z]
            jm = [ev.jminus(z) for z in ns.z] if self.table.delta else None
        self._forms_cache[key] = (th, jj, jm)
        return self._forms_cache[key]

    def _g_values(self, n: int, dps: int, n_cap: int):
        key = (dps, n_cap, n)
        if key in self._g_cache:
            return self._g_cache[key]
        th, jj, jm = self._form_values(dps, n_cap)
        rep = self.table.g_form(n).rep
        powers = sorted(m for m, _ in rep.j_poly)
        lo, hi = powers[0], powers[-1]
        cs = {m: c for m, c in rep.j_poly}
        with mp.workdps(dps + 10):
            coeffs = []
            for m in range(hi, lo - 1, -1):
                c = cs.get(m)
                coeffs.append(mp.mpf(0) if c is None else mp.mpf(c.numerator) / mp.mpf(c.denominator))
            vals = []
            for i, w in enumerate(jj):
                acc = mp.mpc(0)
                for c in coeffs:
                    acc = acc * w + c
                acc = acc * w ** lo
                acc = acc * th[i]
                if jm is not None:
                    acc = acc * jm[i]
                vals.append(acc)
        self._g_cache[key] = vals
        return vals

    def alpha(self, n: int, s, tol: Optional[float] = None):
        """(value, achieved absolute error bound) for alpha[n](s)."""
        val, err = self.alpha_many([n], s)
        v, e = val[0], err[0]
        if tol is not None and e > tol:
            # one refinement step: raise the precision level
            dps = self.dps_for(n, abs(complex(s).imag)) + 32
            val, err = self.alpha_many([n], s, dps=dps)
            v, e = val[0], err[0]
        return v, e

    def alpha_many(self, ns, s, dps: Optional[int] = None, keep_mp: bool = False):
        """Vector of alpha[n](s) over an iterable of indices, plus error bounds.

        With keep_mp the values stay mpmath numbers at the working precision
        (used by the high-precision kernel integrals).
        """
        s = complex(s)
        ns_list = [int(n) for n in ns]
        nmax = max([n for n in ns_list if n >= self.nu], default=self.nu)
        level = dps or self.dps_for(nmax, abs(s.imag))
        cap = self.n_bucket(nmax)
        nodes = self._nodes(level, cap)
        with mp.workdps(level + 10):
            sm = mp.mpc(s)
            ws = [mp.exp(-2j * mp.pi * t * (sm - 1)) for t in nodes.t]
            vals, errs = [], []
            for n in ns_list:
                if n < self.nu:
                    vals.append(mp.mpc(0) if keep_mp else 0j)
                    errs.append(0.0)
                    continue
                g = self._g_values(n, level, cap)
                acc_hi = mp.mpc(0)
                acc_lo = mp.mpc(0)
                for gi, wi, whi, wlo in zip(g, ws, nodes.w_hi, nodes.w_lo):
                    p = gi * wi
                    if whi:
                        acc_hi += p * whi
                    else:
                        acc_lo += p * wlo
                # semicircle oriented so that F[k,-](tau,0) = 1, i.e. alpha[0,-](0) = +1
                v_hi = mp.pi * acc_hi
                v_lo = mp.pi * acc_lo
                err = abs(v_hi - v_lo) + nodes.trunc_bound * math.exp(math.pi * abs(s.imag) / 2)
                vals.append(v_hi if keep_mp else complex(v_hi))
                errs.append(float(err))
        return vals, errs


_ENGINES = {}


def engine(k, sign: int) -> AlphaEngine:
    key = (Fraction(k), 1 if sign > 0 else -1)
    if key not in _ENGINES:
        _ENGINES[key] = AlphaEngine(*key)
    return _ENGINES[key]


def alpha(n: int, k, sign: int, s, tol: float = 1e-9):
    """alpha[n,k,sign](s) with an achieved-error bound; (value, error)."""
    return engine(k, sign).alpha(n, s, tol=tol)


@dataclass
class AlphaTable:
    """Cached coefficients for one (k, sign, s), grown lazily in n."""

    k: Fraction
    sign: int
    s: complex
    values: list = field(default_factory=list)
    quad_error: float = 0.0

    def ensure(self, nmax: int):
        if len(self.values) > nmax:
            return self
        eng = engine(self.k, self.sign)
        need = list(range(len(self.values), nmax + 1))
        vals, errs = eng.alpha_many(need, self.s)
        self.values.extend(vals)
        self.quad_error = max([self.quad_error] + errs)
        return self

    def __getitem__(self, n: int) -> complex:
        self.ensure(n)
        return self.values[n]


_TABLES = {}


def alpha_table(k, sign: int, s, nmax: int = 0) -> AlphaTable:
    key = (Fraction(k), 1 if sign > 0 else -1, complex(s))
    if key not in _TABLES:
        _TABLES[key] = AlphaTable(Fraction(k), 1 if sign > 0 else -1, complex(s))
    t = _TABLES[key]
    if nmax:
        t.ensure(nmax)
    return t
