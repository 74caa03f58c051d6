"""Meromorphic Dirichlet-series kernels and the interpolation basis functions.

The Mellin transform of the modular integral,

    A[k,eps](w, s) = int_0^inf (F(it,s) - alpha_0(s)) t^(w-1) dt,

is evaluated everywhere through its symmetrized form: explicit pole terms at
w = s, k-s, 0, k plus an integral over t >= 1 that converges for every w.
The zeta kernels are

    H[-](w,s) = zeta*(s)/2 * A[1/2,-](w/2, s/2) / zeta*(w)
    H[+](w,s) = zeta*(s)/2 * (A[1/2,+](w/2, s/2)/zeta*(w) - alpha[1](s/2))

with Dirichlet coefficients h[n](s) by Moebius inversion.  Basis functions:
U[n](z) = h[n,-](1/2 + iz) (even family; the normalized variant divides by
2 pi n^(1/4) so that its Fourier transform interpolates), and V[rho,j](z) is
minus the weighted residue circle integral of H[-] around the zero -- the sign
makes the interpolation property V[rho,0] = 1 at its own node come out right,
which pins the convention.

Character kernels H_delta(w,s;chi) use A[1/2] for even chi and A[3/2] with
shifted arguments for odd chi.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import analytic
from .alpha import alpha_table, engine
from .analytic import PoleSignal, gamma_r, zeta, zeta_star, zeta_star_prime
from .modforms import nu

T_MAX = 14.0
# Fourier-sum depth for F(it, s) on t >= 1: the tail is |alpha_n| e^(-pi n),
# below 1e-25 already at n = 20 (48 would satisfy the same bound with margin,
# at 4x the per-s table cost).
FOURIER_DEPTH = 20


@dataclass
class KernelContext:
    k: Fraction
    sign: int
    t_max: float = T_MAX
    depth: int = FOURIER_DEPTH
    _gl: tuple = field(default=None, repr=False)

    def __post_init__(self):
        self.k = Fraction(self.k)
        self.sign = 1 if self.sign > 0 else -1
        self.nu = nu(self.k, self.sign)

    def table(self, s) -> np.ndarray:
        t = alpha_table(self.k, self.sign, complex(s), nmax=self.depth)
        return np.array(t.values[: self.depth + 1])


_CONTEXTS = {}


def context(k, sign: int) -> KernelContext:
    key = (Fraction(k), 1 if sign > 0 else -1)
    if key not in _CONTEXTS:
        _CONTEXTS[key] = KernelContext(*key)
    return _CONTEXTS[key]


def _gl_nodes(t_max: float, n_per: int = 40):
    """Gauss-Legendre nodes on [1, t_max] split into geometric panels."""
    edges = [1.0, 2.0, 4.0, 8.0, t_max]
    xs, ws = np.polynomial.legendre.leggauss(n_per)
    t, w = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        t.extend(0.5 * (a + b) + 0.5 * (b - a) * xs)
        w.extend(0.5 * (b - a) * ws)
    return np.array(t), np.array(w)


_GLCACHE = {}


def _nodes_for(im_w: float, t_max: float):
    # the factor t^(i v) oscillates with total phase |v| log t_max
    n_per = int(40 + 0.6 * abs(im_w))
    key = (n_per, t_max)
    if key not in _GLCACHE:
        _GLCACHE[key] = _gl_nodes(t_max, n_per)
    return _GLCACHE[key]


MP_IM_SWITCH = 10.0


def A_eval(w, s, ctx: KernelContext, pole_tol: float = 1e-8):
    """A[k,sign](w, s), valid for every complex w off the four poles.

    A decays like exp(-pi |Im w| / 2) while the symmetrized integrand stays
    O(1), so beyond |Im w| = 10 the cancellation exceeds float64 and the
    integral is redone in multiprecision.
    """
    if abs(complex(w).imag) > MP_IM_SWITCH:
        _check_poles(np.array([complex(w)]), complex(s), ctx, pole_tol)
        return _A_eval_mp(complex(w), complex(s), ctx)
    return complex(A_eval_batch(np.array([w]), s, ctx, pole_tol=pole_tol)[0])


_MP_FVAL_CACHE = {}


def _A_eval_mp(w: complex, s: complex, ctx: KernelContext) -> complex:
    import mpmath as mp

    dps = int(math.ceil((30 + 1.37 * abs(w.imag)) / 16.0) * 16)
    n_per = int(math.ceil((40 + 0.6 * abs(w.imag)) / 24.0) * 24)
    key = (ctx.k, ctx.sign, s, dps, n_per)
    if key not in _MP_FVAL_CACHE:
        from .alpha import gauss_legendre

        eng = engine(ctx.k, ctx.sign)
        level = max(eng.dps_for(ctx.depth, abs(s.imag)), int(math.ceil(dps / 32.0) * 32))
        alphas, _ = eng.alpha_many(list(range(ctx.depth + 1)), s, dps=level, keep_mp=True)
        with mp.workdps(dps + 10):
            xs, ws = gauss_legendre(n_per, dps)
            edges = [mp.mpf(e) for e in (1.0, 2.0, 4.0, 8.0, ctx.t_max)]
            t, glw = [], []
            for a, b in zip(edges[:-1], edges[1:]):
                mid, half = (a + b) / 2, (b - a) / 2
                for x, wq in zip(xs, ws):
                    t.append(mid + half * x)
                    glw.append(half * wq)
            a0 = alphas[0]
            fvals = []
            logt = []
            for tm in t:
                fv = mp.mpc(0)  # F(it,s) - alpha_0 = sum over n >= 1
                for n in range(max(ctx.nu, 1), ctx.depth + 1):
                    fv += alphas[n] * mp.exp(-mp.pi * n * tm)
                fvals.append(fv)
                logt.append(mp.log(tm))
        _MP_FVAL_CACHE[key] = (a0, logt, glw, fvals)
    a0, logt, glw, fvals = _MP_FVAL_CACHE[key]
    k = float(ctx.k)
    with mp.workdps(dps + 10):
        wm = mp.mpc(w)
        sm = mp.mpc(s)
        out = -a0 * (1 / wm + ctx.sign / (k - wm)) + 1 / (wm - sm) + ctx.sign / (k - wm - sm)
        for lt, ww, fv in zip(logt, glw, fvals):
            out += ww * fv * (mp.exp((wm - 1) * lt) + ctx.sign * mp.exp((k - wm - 1) * lt))
        return complex(out)


def _check_poles(w, s, ctx, pole_tol):
    k = float(ctx.k)
    a0 = ctx.table(s)[0]
    for name, p, res in (
        ("s", s, 1.0),
        ("k-s", k - s, -ctx.sign),
        ("0", 0.0, -a0),
        ("k", k, ctx.sign * a0),
    ):
        if np.any(np.abs(w - p) < pole_tol):
            raise PoleSignal(
                "A evaluation within %g of pole w=%s (residue %s)" % (pole_tol, name, res)
            )


def A_eval_batch(w, s, ctx: KernelContext, pole_tol: float = 1e-8):
    """Vectorized A over an array of w at fixed s (float64 path)."""
    w = np.asarray(w, dtype=complex)
    s = complex(s)
    k = float(ctx.k)
    alphas = ctx.table(s)
    a0 = alphas[0]
    _check_poles(w, s, ctx, pole_tol)
    out = -a0 * (1.0 / w + ctx.sign / (k - w)) + 1.0 / (w - s) + ctx.sign / (k - w - s)
    t, glw = _nodes_for(float(np.abs(w.imag).max()), ctx.t_max)
    # F(it, s) - alpha_0 over the nodes
    qs = np.exp(-math.pi * np.outer(t, np.arange(ctx.nu, ctx.depth + 1)))
    fvals = qs @ alphas[ctx.nu :]
    fvals -= a0
    integ = (fvals * glw)[None, :] * (
        t[None, :] ** (w[:, None] - 1) + ctx.sign * t[None, :] ** (k - w[:, None] - 1)
    )
    out = out + integ.sum(axis=1)
    return out


def D_eval(w, s, sign: int) -> complex:
    """Auxiliary kernel Gamma_R(s)/2 * sum alpha[n](s/2) n^(-w/2) via A."""
    ctx = context(Fraction(1, 2), sign)
    s = complex(s)
    base = gamma_r(s) / 2.0 * A_eval(w / 2.0, s / 2.0, ctx) / gamma_r(w)
    if sign > 0:
        a1 = alpha_table(Fraction(1, 2), +1, s / 2.0, nmax=1).values[1]
        base -= gamma_r(s) / 2.0 * a1 * zeta(w / 2.0)
    return base


def H_eval(w, s, sign: int) -> complex:
    return complex(H_eval_batch(np.array([w]), s, sign)[0])


def H_eval_batch(w, s, sign: int, s_offset: float = 1e-6):
    """Zeta kernel H[sign](w, s); s = 0, 1 handled by a Richardson limit."""
    s = complex(s)
    if min(abs(s), abs(s - 1)) < 1e-12:
        v1 = _H_raw(w, s + s_offset, sign)
        v2 = _H_raw(w, s + s_offset / 2, sign)
        return 2.0 * v2 - v1  # Richardson step for the removable point
    return _H_raw(w, s, sign)


def _H_raw(w, s, sign: int):
    w = np.asarray(w, dtype=complex)
    s = complex(s)
    ctx = context(Fraction(1, 2), sign)
    zs = zeta_star(s)
    zw = np.array([zeta_star(complex(x)) for x in w])
    out = zs / 2.0 * A_eval_batch(w / 2.0, s / 2.0, ctx) / zw
    if sign > 0:
        a1 = alpha_table(Fraction(1, 2), +1, s / 2.0, nmax=1).values[1]
        out = out - zs / 2.0 * a1
    return out


def h_coeff(n: int, sign: int, s) -> complex:
    """Dirichlet coefficient by Moebius inversion; entire in s."""
    if n < 1:
        raise ValueError("h needs n >= 1")
    s = complex(s)
    if n == 1 and sign > 0:
        return 0j  # convention after subtracting the n=1 term
    if min(abs(s), abs(s - 1)) < 1e-12:
        h = 1e-6
        return 2.0 * h_coeff(n, sign, s + h / 2) - h_coeff(n, sign, s + h)
    tab = alpha_table(Fraction(1, 2), 1 if sign > 0 else -1, s / 2.0, nmax=n)
    acc = 0j
    d = 1
    while d * d <= n:
        if n % (d * d) == 0:
            acc += analytic.mu(d) * tab[n // (d * d)]
        d += 1
    return zeta_star(s) / 2.0 * acc


def U_n(n: int, z, normalized: bool = False) -> complex:
    """Even basis function U[n](z) = h[n,-](1/2 + iz).

    With normalized=True the value is divided by 2 pi n^(1/4), the scaling
    under which the Fourier transform satisfies the unit interpolation deltas.
    """
    z = complex(z)
    val = h_coeff(n, -1, 0.5 + 1j * z)
    if normalized:
        val /= 2.0 * math.pi * n ** 0.25
    return val


def V_rho(rho: complex, j: int, z, zero_gap: float, eps: Optional[float] = None) -> complex:
    """Zero-attached basis function by a residue circle around rho.

    V is minus the circle integral of i^(-j) (w-rho)^j / j! * H[-](w, 1/2+iz);
    when the kernel pole w = s (or its mirror 1-s) falls inside the circle the
    corresponding residue is added back, which yields the entire continuation
    through the interpolation nodes themselves.
    """
    z = complex(z)
    s = 0.5 + 1j * z
    guards = [abs(rho - s), abs(rho - (1 - s)), zero_gap]
    if eps is None:
        eps = 0.4 * min(g for g in guards if g > 1e-9) if any(g > 1e-9 for g in guards) else 0.05
        eps = min(eps, 0.4 * zero_gap)
        eps = max(eps, 1e-3)
    if eps >= zero_gap:
        raise ValueError("circle radius %g reaches the neighbouring zero (gap %g)" % (eps, zero_gap))
    M = 64
    th = 2.0 * math.pi * np.arange(M) / M
    wpts = rho + eps * np.exp(1j * th)
    hv = H_eval_batch(wpts, s, -1)
    fac = (1j) ** (-j) * (wpts - rho) ** j / math.factorial(j)
    circ = (hv * fac * (wpts - rho)).sum() / M  # (1/2 pi i) closed integral
    out = -circ
    # pole corrections when an interpolation node sits inside the circle
    if abs(s - rho) < eps:
        out += (1j) ** (-j) * (s - rho) ** j / math.factorial(j)
    if abs((1 - s) - rho) < eps:
        out -= (1j) ** (-j) * ((1 - s) - rho) ** j / math.factorial(j)
    return complex(out)


def u_fourier(n: int, x: float, kmax: Optional[int] = None) -> float:
    """u[n](x) = sum_k sum_{d^2|n} mu(d) b[n/d^2](k x): the Fourier-side
    profile whose values at sqrt(m) are the interpolation deltas."""
    from . import rvbasis

    if kmax is None:
        kmax = max(8, int(12.0 / max(x, 0.5)))
    acc = 0.0
    d = 1
    while d * d <= n:
        if n % (d * d) == 0:
            mu_d = analytic.mu(d)
            if mu_d:
                for k in range(1, kmax + 1):
                    acc += mu_d * rvbasis.b(n // (d * d), -1, k * x)
        d += 1
    return acc


# ----------------------------------------------------------------------
# character kernels


def H_chi_eval(w, s, delta: int, chi: analytic.CharacterRep) -> complex:
    """Character kernel: L*(s,chi)/(2 L*(w,chi)) times the weight-1/2 kernel
    for even chi, or the weight-3/2 kernel with shifted arguments for odd chi."""
    if not chi.primitive:
        raise ValueError("character kernel requires a primitive character")
    w = complex(w)
    s = complex(s)
    delta = 1 if delta > 0 else -1
    if chi.parity > 0:
        ctx = context(Fraction(1, 2), delta)
        a = A_eval(w / 2.0, s / 2.0, ctx)
    else:
        ctx = context(Fraction(3, 2), delta)
        a = A_eval((w + 1.0) / 2.0, (s + 1.0) / 2.0, ctx)
    return analytic.L_completed(s, chi) / (2.0 * analytic.L_completed(w, chi)) * a
