"""Classical analytic number theory backend.

Euler-Maclaurin evaluation of zeta and Hurwitz zeta, Stirling-series gamma and
digamma with recurrence shift and reflection, the completed zeta, Hardy's Z
function and zero location by sign scanning, arithmetic functions, Dirichlet
characters with Gauss-sum root numbers, and Dirichlet L-functions.

Everything is float64; target absolute accuracy 1e-12 for |Im s| <= 500, which
the correction depths below are sized for.  The alternating-series (eta
function) evaluation of zeta is kept as an independent oracle.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

TWO_PI = 2.0 * math.pi


class PoleSignal(ArithmeticError):
    """Evaluation requested within 1e-8 of a pole."""


class IntegrityError(RuntimeError):
    """An internal cross-check failed (suspected missed zero etc.)."""


# ----------------------------------------------------------------------
# Bernoulli numbers (exact, computed once)


def _bernoulli_even(kmax: int):
    """B_2, B_4, ..., B_(2 kmax) as Fractions via the defining recurrence."""
    n_top = 2 * kmax
    B = [Fraction(1)]
    for m in range(1, n_top + 1):
        s = Fraction(0)
        for j in range(m):
            s += Fraction(math.comb(m + 1, j)) * B[j]
        B.append(-s / (m + 1))
    return [B[2 * k] for k in range(1, kmax + 1)]


_B2K = _bernoulli_even(30)
_B2K_F = [float(b) for b in _B2K]


# ----------------------------------------------------------------------
# gamma and digamma: Stirling series with recurrence shift and reflection

_STIRLING_TERMS = 16
_STIRLING_MIN_RE = 18.0


def _log_sin_pi(z: complex) -> complex:
    """log sin(pi z), overflow-safe for large |Im z| (branch only mod 2 pi i)."""
    if z.imag < 0:
        return _log_sin_pi(z.conjugate()).conjugate()
    # sin(pi z) = e^(-i pi z) (e^(2 i pi z) - 1) / (2i), |e^(2 i pi z)| <= 1 here
    w = cmath.exp(2j * math.pi * z)
    return -1j * math.pi * z + cmath.log(w - 1.0) - cmath.log(2j)


def log_gamma(s: complex) -> complex:
    """log Gamma by the Stirling series with recurrence shift.

    For Re s >= 1/2 this is the principal branch; below that the reflection
    formula determines it only mod 2 pi i, which is irrelevant here because
    every consumer exponentiates the result.
    """
    s = complex(s)
    if s.real < 0.5:
        if abs(s - round(s.real)) < 1e-12 and abs(s.imag) < 1e-12:
            raise PoleSignal("log_gamma at nonpositive integer %r" % (s,))
        return math.log(math.pi) - _log_sin_pi(s) - log_gamma(1 - s)
    z = s
    acc = 0j
    while z.real < _STIRLING_MIN_RE:
        acc -= cmath.log(z)
        z += 1
    out = (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(TWO_PI)
    zi2 = 1.0 / (z * z)
    p = 1.0 / z
    for k in range(1, _STIRLING_TERMS + 1):
        out += _B2K_F[k - 1] / ((2 * k) * (2 * k - 1)) * p
        p *= zi2
    return out + acc


def gamma_c(s: complex) -> complex:
    """Complex gamma function (asymptotic series plus recurrence)."""
    s = complex(s)
    if abs(s.imag) < 1e-12 and s.real <= 0 and abs(s - round(s.real)) < 1e-8:
        raise PoleSignal("gamma pole at %r" % (s,))
    if s.real < 0.5:
        return math.pi / (cmath.sin(math.pi * s) * gamma_c(1 - s))
    return cmath.exp(log_gamma(s))


def digamma(s: complex) -> complex:
    """psi(s) by the asymptotic series with recurrence shift and reflection."""
    s = complex(s)
    if abs(s.imag) < 1e-12 and s.real <= 0 and abs(s - round(s.real)) < 1e-8:
        raise PoleSignal("digamma pole at %r" % (s,))
    if s.real < 0.5:
        return digamma(1 - s) - math.pi / cmath.tan(math.pi * s)
    acc = 0j
    z = s
    while z.real < _STIRLING_MIN_RE:
        acc -= 1.0 / z
        z += 1
    out = cmath.log(z) - 0.5 / z
    zi2 = 1.0 / (z * z)
    p = zi2
    for k in range(1, _STIRLING_TERMS + 1):
        out -= _B2K_F[k - 1] / (2 * k) * p
        p *= zi2
    return out + acc


def gamma_r(s: complex) -> complex:
    """Gamma_R(s) = pi^(-s/2) Gamma(s/2)."""
    return cmath.exp(-0.5 * s * math.log(math.pi) + log_gamma(0.5 * s))


# ----------------------------------------------------------------------
# zeta: Euler-Maclaurin with computed truncation, plus the eta-series oracle

_EM_TERMS = 13


def _em_params(s: complex):
    t = abs(s.imag)
    N = int(max(12, 1.2 * t / TWO_PI * math.pi + 14))
    return N


def zeta(s: complex) -> complex:
    """Riemann zeta by Euler-Maclaurin; absolute error <= 1e-12 for |Im s| <= 500."""
    s = complex(s)
    if abs(s - 1) < 1e-8:
        raise PoleSignal("zeta pole at s=1 (distance %.2e)" % abs(s - 1))
    return hurwitz_zeta(s, 1.0)


def hurwitz_zeta(s: complex, a: float) -> complex:
    """Hurwitz zeta(s, a) for a > 0 by Euler-Maclaurin."""
    s = complex(s)
    if abs(s - 1) < 1e-8:
        raise PoleSignal("hurwitz zeta pole at s=1")
    N = _em_params(s)
    ns = np.arange(0, N) + a
    total = np.sum(ns ** (-s))
    Na = N + a
    total += Na ** (1 - s) / (s - 1)
    total += 0.5 * Na ** (-s)
    # correction sum: B_2k/(2k)! * (s)_(2k-1) * Na^(-s-2k+1)
    poch = s
    fact = 1.0
    p = Na ** (-s - 1)
    term = 0j
    for k in range(1, _EM_TERMS + 1):
        fact *= (2 * k - 1) * (2 * k)
        term = _B2K_F[k - 1] / fact * poch * p
        total += term
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        p /= Na * Na
    return complex(total)


def zeta_prime(s: complex) -> complex:
    """zeta'(s) by termwise-differentiated Euler-Maclaurin."""
    s = complex(s)
    if abs(s - 1) < 1e-8:
        raise PoleSignal("zeta pole at s=1")
    N = _em_params(s)
    ns = np.arange(1, N)
    ln = np.log(ns)
    total = np.sum(-ln * ns ** (-s))
    lnN = math.log(N)
    total += -(N ** (1 - s)) * (lnN / (s - 1) + 1.0 / (s - 1) ** 2)
    total += -0.5 * lnN * N ** (-s)
    poch = s
    dpoch = 1.0 + 0j
    fact = 1.0
    for k in range(1, _EM_TERMS + 1):
        fact *= (2 * k - 1) * (2 * k)
        p = N ** (-s - 2 * k + 1)
        total += _B2K_F[k - 1] / fact * (dpoch * p - poch * lnN * p)
        dpoch = dpoch * (s + 2 * k - 1) * (s + 2 * k) + poch * (2 * s + 4 * k - 1)
        poch *= (s + 2 * k - 1) * (s + 2 * k)
    return complex(total)


def zeta_eta_oracle(s: complex, terms: int = 72) -> complex:
    """zeta via the alternating eta series with Cohen-Rodriguez Villegas-Zagier
    acceleration; independent of the Euler-Maclaurin path."""
    s = complex(s)
    n = terms
    d = (3.0 + math.sqrt(8.0)) ** n
    d = 0.5 * (d + 1.0 / d)
    b = -1.0
    c = -d
    acc = 0j
    for k in range(n):
        c = b - c
        acc += c * (k + 1.0) ** (-s)
        b *= 2.0 * (k + n) * (k - n) / ((2.0 * k + 1.0) * (k + 1.0))
    eta = acc / d
    return eta / (1.0 - 2.0 ** complex(1 - s))


def zeta_star(s: complex) -> complex:
    """Completed zeta pi^(-s/2) Gamma(s/2) zeta(s); poles at 0 and 1."""
    s = complex(s)
    if min(abs(s), abs(s - 1)) < 1e-8:
        raise PoleSignal("completed zeta pole at %r" % (s,))
    return gamma_r(s) * zeta(s)


def zeta_star_prime(rho: complex) -> complex:
    """d/ds zeta*(s); at a zeta zero this is Gamma_R(rho) zeta'(rho)."""
    g = gamma_r(rho)
    return g * zeta_prime(rho) + g * (0.5 * digamma(0.5 * rho) - 0.5 * math.log(math.pi)) * zeta(rho)


# ----------------------------------------------------------------------
# Hardy Z and zero location


def rs_theta(t):
    """Riemann-Siegel theta phase, asymptotic with two correction terms."""
    t = np.asarray(t, dtype=float)
    return t / 2 * np.log(t / TWO_PI) - t / 2 - math.pi / 8 + 1 / (48 * t) + 7 / (5760 * t ** 3)


def hardy_z(t: float) -> float:
    """Z(t) = exp(i theta(t)) zeta(1/2 + it); real for real t."""
    val = cmath.exp(1j * float(rs_theta(t))) * zeta(0.5 + 1j * t)
    return val.real


def _hardy_z_vec(ts: np.ndarray) -> np.ndarray:
    return np.array([hardy_z(float(t)) for t in ts])


@dataclass
class ZeroTable:
    """Ordinates of nontrivial zeros with assumed-simple multiplicities."""

    ordinates: list
    precision: float
    source: str = "computed"
    multiplicities: list = field(default_factory=list)

    def __post_init__(self):
        if not self.multiplicities:
            self.multiplicities = [1] * len(self.ordinates)
        self.check()

    def check(self):
        g = self.ordinates
        for a, b in zip(g, g[1:]):
            if b - a <= 10 * self.precision:
                raise IntegrityError(
                    "zero ordinates %.9f, %.9f closer than 10x precision; "
                    "simplicity assumption unsupported" % (a, b)
                )

    def upto(self, T: float):
        return [g for g in self.ordinates if g <= T]

    def dump(self) -> str:
        lines = [
            "# ordinates of nontrivial zeros on the critical line",
            "# computed by Hardy-Z sign scanning; multiplicity 1 assumed throughout",
            "precision=%g" % self.precision,
        ]
        lines += ["%.12f" % g for g in self.ordinates]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "ZeroTable":
        precision = 1e-9
        ords = []
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            if ln.startswith("precision="):
                precision = float(ln.split("=", 1)[1])
                continue
            ords.append(float(ln))
        return cls(ords, precision, source="file")


_ZEROS_CACHE = {}


def find_zeros(T: float, refine_tol: float = 1e-10) -> ZeroTable:
    """All zero ordinates in (0, T] by sign changes of Hardy Z (T <= 500)."""
    if T > 500:
        raise ValueError("zero search capped at T = 500 (configured range)")
    key = round(float(T), 6)
    if key in _ZEROS_CACHE:
        return _ZEROS_CACHE[key]
    cached = _load_cached_zeros(T)
    if cached is not None:
        _ZEROS_CACHE[key] = cached
        return cached
    step = 0.04
    ts = np.arange(2.0, T + step, step)
    zs = _hardy_z_vec(ts)
    ords = []
    for i in range(len(ts) - 1):
        a, b = zs[i], zs[i + 1]
        if a == 0.0:
            ords.append(float(ts[i]))
            continue
        if a * b < 0:
            lo, hi = float(ts[i]), float(ts[i + 1])
            flo = a
            for _ in range(80):
                midp = 0.5 * (lo + hi)
                fm = hardy_z(midp)
                if flo * fm <= 0:
                    hi = midp
                else:
                    lo, flo = midp, fm
                if hi - lo < refine_tol / 4:
                    break
            # secant polish
            g = 0.5 * (lo + hi)
            ords.append(g)
        elif i > 0 and abs(b) < 1e-4 and abs(b) < abs(a) and abs(b) < abs(zs[i + 2] if i + 2 < len(zs) else 1.0):
            # local extremum suspiciously close to zero without a sign change
            if abs(b) < 1e-9:
                raise IntegrityError(
                    "Hardy Z extremum below resolution near t=%.6f; "
                    "possible multiple or missed zero" % float(ts[i + 1])
                )
    table = ZeroTable([g for g in ords if g <= T], refine_tol, source="computed")
    _integrity_count_check(table, T)
    _store_cached_zeros(table, T)
    _ZEROS_CACHE[key] = table
    return table


def _integrity_count_check(table: ZeroTable, T: float):
    if T < 15:
        return
    approx = float(rs_theta(T)) / math.pi + 1
    if abs(len(table.ordinates) - approx) > 4:
        raise IntegrityError(
            "zero count %d disagrees with theta-phase estimate %.2f at T=%g"
            % (len(table.ordinates), approx, T)
        )


def count_zeros(T: float) -> int:
    return len(find_zeros(T).ordinates)


def rvm_main_term(T: float) -> float:
    """(T/2 pi) log(T/(2 pi e)): the smooth zero-counting main term."""
    return T / TWO_PI * math.log(T / (TWO_PI * math.e))


def cache_dir() -> str:
    d = os.environ.get("ZI_CACHE_DIR")
    if not d:
        d = os.path.join(os.path.expanduser("~"), ".cache", "zetainterp")
    os.makedirs(d, exist_ok=True)
    return d


def _zeros_path(T: float) -> str:
    return os.path.join(cache_dir(), "zeros_T%g.txt" % T)


def _load_cached_zeros(T: float):
    p = _zeros_path(T)
    if os.path.exists(p):
        with open(p) as fh:
            return ZeroTable.parse(fh.read())
    return None


def _store_cached_zeros(table: ZeroTable, T: float):
    with open(_zeros_path(T), "w") as fh:
        fh.write(table.dump())


# ----------------------------------------------------------------------
# arithmetic functions


def mu(n: int) -> int:
    if n < 1:
        raise ValueError("mu needs n >= 1")
    out = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1 if p == 2 else 2
    if m > 1:
        out = -out
    return out


def von_mangoldt(n: int) -> float:
    if n < 1:
        raise ValueError("Lambda needs n >= 1")
    if n == 1:
        return 0.0
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            return math.log(p) if m == 1 else 0.0
        p += 1
    return math.log(m)  # n itself prime


def von_mangoldt_sieve(nmax: int) -> np.ndarray:
    """Vector of Lambda(n) for 0 <= n <= nmax via a smallest-prime-factor sieve."""
    spf = np.zeros(nmax + 1, dtype=np.int64)
    for p in range(2, nmax + 1):
        if spf[p] == 0:
            spf[p::p] = np.where(spf[p::p] == 0, p, spf[p::p])
    lam = np.zeros(nmax + 1)
    for n in range(2, nmax + 1):
        p = spf[n]
        m = n
        while m % p == 0:
            m //= p
        if m == 1:
            lam[n] = math.log(p)
    return lam


def sigma1(x) -> int:
    """Divisor sum sigma(n); zero for non-integral arguments."""
    f = Fraction(x)
    if f.denominator != 1 or f < 1:
        return 0
    n = int(f)
    return sum(d for d in range(1, n + 1) if n % d == 0)


def r_l(l: int, n: int) -> int:
    """Number of representations of n as an ordered sum of l squares."""
    if n < 0:
        raise ValueError("r_l needs n >= 0")
    if l == 1:
        if n == 0:
            return 1
        r = math.isqrt(n)
        return 2 if r * r == n else 0
    total = 0
    r = math.isqrt(n)
    for a in range(-r, r + 1):
        total += r_l(l - 1, n - a * a)
    return total


def arith(kind: str, n) -> float:
    if kind == "mu":
        return mu(int(n))
    if kind == "Lambda":
        return von_mangoldt(int(n))
    if kind == "sigma":
        return sigma1(n)
    if kind.startswith("r"):
        return r_l(int(kind[1:]), int(n))
    raise ValueError("unknown arithmetic function %r" % kind)


# ----------------------------------------------------------------------
# Dirichlet characters and L-functions


def _unit_group_structure(q: int):
    """Generators and orders of (Z/q)^* via CRT over prime powers."""
    def factorize(m):
        fs = []
        p = 2
        while p * p <= m:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                fs.append((p, e))
            p += 1
        if m > 1:
            fs.append((m, 1))
        return fs

    def primitive_root(pe, p, e):
        phi = pe // p * (p - 1)
        fs = [f for f, _ in factorize(phi)]
        for g in range(2, pe):
            if math.gcd(g, pe) != 1:
                continue
            if all(pow(g, phi // f, pe) != 1 for f in fs):
                return g
        raise ArithmeticError("no primitive root mod %d" % pe)

    gens = []  # (generator as residue mod q, order)
    if q == 1:
        return gens
    parts = factorize(q)
    moduli = [p ** e for p, e in parts]

    def crt_lift(r, m):
        # residue r mod m, 1 mod all other prime powers
        x = 0
        M = q
        for mi in moduli:
            if mi == m:
                ri = r
            else:
                ri = 1
            Mi = q // mi
            x += ri * Mi * pow(Mi, -1, mi)
        return x % q

    for (p, e), pe in zip(parts, moduli):
        if p == 2:
            if e == 1:
                continue
            gens.append((crt_lift(pe - 1, pe), 2))  # -1 mod 2^e
            if e >= 3:
                gens.append((crt_lift(5 % pe, pe), 2 ** (e - 2)))
        else:
            g = primitive_root(pe, p, e)
            gens.append((crt_lift(g, pe), pe // p * (p - 1)))
    return gens


@dataclass
class CharacterRep:
    """Dirichlet character mod q given by its value table on residues."""

    modulus: int
    values: list  # complex, index 0..q-1; zero off units
    parity: int   # +1 even, -1 odd
    primitive: bool
    label: int = 0

    def __call__(self, n: int) -> complex:
        return self.values[n % self.modulus]

    def conjugate(self) -> "CharacterRep":
        return CharacterRep(
            self.modulus,
            [v.conjugate() for v in self.values],
            self.parity,
            self.primitive,
            self.label,
        )

    def is_real(self) -> bool:
        return all(abs(v.imag) < 1e-12 for v in self.values)

    def gauss_sum(self) -> complex:
        q = self.modulus
        return sum(self.values[a] * cmath.exp(2j * math.pi * a / q) for a in range(q))


def characters(q: int):
    """All Dirichlet characters modulo q (trivial character first)."""
    gens = _unit_group_structure(q)
    units = [a for a in range(q) if math.gcd(a, q) == 1]
    # discrete logs of each unit with respect to the generators
    logs = {}
    from itertools import product

    exps = [range(ord_) for _, ord_ in gens]
    for tup in product(*exps):
        x = 1
        for (g, _), e in zip(gens, tup):
            x = x * pow(g, e, q) % q
        logs[x] = tup
    out = []
    label = 0
    for ks in product(*exps):
        vals = [0j] * q
        for a in units:
            tup = logs[a]
            ang = sum(
                k * e / o for k, e, o in zip(ks, tup, (o for _, o in gens))
            )
            vals[a] = cmath.exp(2j * math.pi * ang)
        parity = 1 if abs(vals[(q - 1) % q] - 1) < 1e-9 else -1
        chi = CharacterRep(q, vals, parity, primitive=False, label=label)
        chi.primitive = _is_primitive(chi)
        out.append(chi)
        label += 1
    return out


def _is_primitive(chi: CharacterRep) -> bool:
    q = chi.modulus
    if q == 1:
        return True
    for d in range(1, q):
        if q % d or d == q:
            continue
        # chi is induced from modulus d iff chi(a) = 1 whenever a = 1 mod d
        induced = all(
            abs(chi.values[a] - 1) < 1e-9
            for a in range(1, q)
            if math.gcd(a, q) == 1 and (a - 1) % d == 0
        )
        if induced:
            return False
    return True


def primitive_characters(q: int):
    return [chi for chi in characters(q) if chi.primitive and q > 1]


def root_number(chi: CharacterRep) -> complex:
    """w(chi) = g(chi) / (i^a sqrt(q)) with a = 0 for even, 1 for odd chi."""
    if not chi.primitive:
        raise ValueError("root number defined for primitive characters only")
    a = 0 if chi.parity > 0 else 1
    return chi.gauss_sum() / (1j ** a * math.sqrt(chi.modulus))


def L_chi(s: complex, chi: CharacterRep) -> complex:
    """L(s, chi) by Euler-Maclaurin per residue class.

    At s = 1 the per-class Hurwitz poles cancel for nontrivial chi; there the
    limit L(1, chi) = -q^-1 sum chi(a) psi(a/q) is used instead.
    """
    q = chi.modulus
    s = complex(s)
    nontrivial = abs(sum(chi.values)) < 1e-9
    if abs(s - 1) < 1e-8:
        if not nontrivial:
            raise PoleSignal("L(s, trivial chi) pole at s=1")
        return -sum(
            chi.values[a % q] * digamma(a / q) for a in range(1, q + 1) if chi.values[a % q] != 0
        ) / q
    out = 0j
    for a in range(1, q + 1):
        v = chi.values[a % q]
        if v != 0:
            out += v * hurwitz_zeta(s, a / q)
    return out * q ** (-s)


def L_completed(s: complex, chi: CharacterRep) -> complex:
    """q^(s/2) GammaFactor(s) L(s, chi); the gamma factor depends on parity."""
    q = chi.modulus
    s = complex(s)
    if chi.parity > 0:
        gf = gamma_r(s)
    else:
        gf = cmath.exp(-0.5 * (s + 1) * math.log(math.pi) + log_gamma(0.5 * (s + 1)))
    return q ** (s / 2) * gf * L_chi(s, chi)
