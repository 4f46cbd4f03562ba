"""Scalar special functions: zeta at integers, digamma/polygamma, polylog,
Dirichlet beta, unit-argument 3F2 and complete Bell polynomials.

Every series evaluator returns an :class:`Approx`, a ``float`` that also
carries ``.bound``, an absolute error bound for the value.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

EULER_GAMMA = 0.57721566490153286061
EPS = 2.220446049250313e-16


class DomainError(ValueError):
    """Argument outside the domain of a function (pole, divergence, ...)."""


@dataclass(frozen=True)
class Precision:
    rel_tol: float = 1e-14
    max_terms: int = 1_000_000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_PRECISION = Precision()


class Approx(float):
    """A float with an absolute error bound attached."""

    bound: float

    def __new__(cls, value: float, bound: float = 0.0):
        obj = super().__new__(cls, value)
        obj.bound = float(bound)
        return obj

    def __repr__(self):
        return f"Approx({float(self)!r}, bound={self.bound:.3g})"


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # B_1 = -1/2 convention
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(math.comb(m + 1, j) * b[j] for j in range(m)) / (m + 1))
    return tuple(b)


def bernoulli(n: int) -> Fraction:
    return _bernoulli_table(max(n, 64))[n]


def bernoulli_poly(n: int, x):
    """B_n(x) for real or complex x."""
    table = _bernoulli_table(max(n, 64))
    acc = 0
    for j in range(n + 1):
        b = table[j]
        if b:
            acc += math.comb(n, j) * float(b) * x ** (n - j)
    return acc


# ---------------------------------------------------------------------------
# Hurwitz zeta via Euler-Maclaurin
# ---------------------------------------------------------------------------

def _hurwitz_em(s, a: float, terms: int = 12):
    """Sum_{n>=0} (a+n)^-s for Re s > 1, a > 0; returns (value, bound)."""
    shift_to = max(15.0, (abs(s) + 2 * terms + 6) / 3.0)
    m = max(0, math.ceil(shift_to - a))
    head = 0
    for n in range(m):
        head += (a + n) ** (-s)
    x = a + m
    total = head + x ** (1 - s) / (s - 1) + 0.5 * x ** (-s)
    rising = s  # s (s+1) ... (s+2j-2)
    xpow = x ** (-s - 1)
    last = 0.0
    for j in range(1, terms + 2):
        term = float(bernoulli(2 * j)) / math.factorial(2 * j) * rising * xpow
        if j == terms + 1:
            last = abs(term)
            break
        total += term
        rising = rising * (s + 2 * j - 1) * (s + 2 * j)
        xpow = xpow / (x * x)
    bound = 2 * last + 4 * EPS * (abs(head) + abs(total)) + EPS * m * abs(total)
    return total, bound


def hurwitz_zeta(s: float, a: float, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """zeta(s, a) = sum_{n>=0} (n+a)^-s for real s > 1, a > 0."""
    if s <= 1:
        raise DomainError(f"hurwitz_zeta diverges for s={s}")
    if a <= 0:
        raise DomainError(f"hurwitz_zeta needs a > 0, got {a}")
    value, bound = _hurwitz_em(float(s), float(a))
    return Approx(value, bound)


def zeta_int(k: int, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """Riemann zeta at an integer k >= 2."""
    if k <= 1:
        raise DomainError(f"zeta({k}) is a pole or undefined here")
    return hurwitz_zeta(k, 1.0, prec)


# ---------------------------------------------------------------------------
# Digamma and polygamma
# ---------------------------------------------------------------------------

def _is_pole(x) -> bool:
    x = complex(x)
    return x.imag == 0 and x.real <= 0 and x.real.is_integer()


def _digamma_core(x, log):
    acc = 0
    while x.real < 10:
        acc -= 1 / x
        x = x + 1
    inv2 = 1 / (x * x)
    series = log(x) - 0.5 / x
    p = inv2
    last = 0.0
    for j in range(1, 12):
        term = float(bernoulli(2 * j)) / (2 * j) * p
        if j == 11:
            last = abs(term)
            break
        series -= term
        p = p * inv2
    value = acc + series
    return value, 2 * last + 8 * EPS * (abs(acc) + abs(series))


def digamma(x: float, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """psi(x) = Gamma'(x)/Gamma(x) for real x not a non-positive integer."""
    x = float(x)
    if _is_pole(x):
        raise DomainError(f"digamma has a pole at {x}")
    value, bound = _digamma_core(x, math.log)
    return Approx(value, bound)


def digamma_complex(z: complex) -> complex:
    """psi(z) for complex z away from the poles."""
    z = complex(z)
    if _is_pole(z):
        raise DomainError(f"digamma has a pole at {z}")
    return _digamma_core(z, cmath.log)[0]


def polygamma(order: int, x: float, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """psi^(order)(x) for order >= 1."""
    if order < 1:
        raise DomainError("polygamma order must be >= 1; use digamma for order 0")
    x = float(x)
    if _is_pole(x):
        raise DomainError(f"polygamma has a pole at {x}")
    sign = -1.0 if order % 2 == 0 else 1.0  # (-1)^(order+1)
    fact = math.factorial(order)
    acc = 0.0
    while x <= 0:
        acc += sign * fact / x ** (order + 1)
        x += 1
    hz, hb = _hurwitz_em(float(order + 1), x)
    value = acc + sign * fact * hz
    return Approx(value, fact * hb + 4 * EPS * abs(acc))


def log_gamma(x: float) -> float:
    return math.lgamma(x)


def zeta_gf(z: float, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """sum_{n>=2} zeta(n) z^n = -z (gamma + psi(1 - z)) for |z| < 1."""
    if not abs(z) < 1:
        raise DomainError("zeta_gf needs |z| < 1")
    if z == 0:
        return Approx(0.0, 0.0)
    psi = digamma(1 - z)
    value = -z * (EULER_GAMMA + psi)
    return Approx(value, abs(z) * (psi.bound + EPS) + EPS * abs(value))


# ---------------------------------------------------------------------------
# Dirichlet beta, Catalan's constant
# ---------------------------------------------------------------------------

def dirichlet_beta(s: float, prec: Precision = DEFAULT_PRECISION,
                   terms: int | None = None) -> Approx:
    """beta(s) = sum_{n>=0} (-1)^n / (2n+1)^s for s > 0.

    With ``terms`` given, returns the plain partial sum whose bound is the
    first omitted term. Otherwise uses Cohen-Villegas-Zagier acceleration,
    valid because 1/(2n+1)^s is a moment sequence.
    """
    if not s > 0:
        raise DomainError("dirichlet_beta needs s > 0")
    if terms is not None:
        if terms < 1:
            raise ValueError("terms must be >= 1")
        partial = math.fsum((-1) ** n / (2 * n + 1) ** s for n in range(terms))
        return Approx(partial, 1.0 / (2 * terms + 1) ** s)
    n = 40
    d = (3 + math.sqrt(8)) ** n
    d = (d + 1 / d) / 2
    b, c, acc = -1.0, -d, 0.0
    for k in range(n):
        c = b - c
        acc += c / (2 * k + 1) ** s
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1))
    value = acc / d
    return Approx(value, 2.0 / d + 8 * EPS * abs(value))


def catalan() -> Approx:
    return dirichlet_beta(2.0)


# ---------------------------------------------------------------------------
# Gamma-ratio series tails
# ---------------------------------------------------------------------------

def gamma_ratio_tail(ups: Sequence, downs: Sequence, start: int, terms: int = 18):
    """Sum_{n>=start} prod Gamma(n+u) / prod Gamma(n+d) via its 1/n expansion.

    ``ups`` and ``downs`` have equal length, so the summand behaves like
    n^(sum(ups)-sum(downs)) * exp(sum_k c_k n^-k) with no extra constant
    (Stirling). Each power is summed with a Hurwitz zeta. Parameters may be
    complex. Returns (value, error_estimate); the estimate is the size of
    the first omitted term of the expansion plus rounding.
    """
    if len(ups) != len(downs):
        raise ValueError("gamma_ratio_tail needs as many numerator as denominator gammas")
    sigma = sum(downs) - sum(ups)
    if not complex(sigma).real > 1:
        raise DomainError("gamma-ratio series diverges")
    scale = max([1.0] + [abs(p) for p in list(ups) + list(downs)])
    if start < 8 * scale + 20:
        raise ValueError(f"start={start} too small for the asymptotic tail")
    # log-ratio coefficients c_k, k = 1..terms+1
    c = [0j] * (terms + 2)
    for k in range(1, terms + 2):
        acc = sum(bernoulli_poly(k + 1, u) for u in ups) - sum(bernoulli_poly(k + 1, d) for d in downs)
        c[k] = (-1) ** (k + 1) * acc / (k * (k + 1))
    # exp of the series: d_0 = 1, j d_j = sum_k k c_k d_{j-k}
    dcoef = [1 + 0j] + [0j] * (terms + 1)
    for j in range(1, terms + 2):
        dcoef[j] = sum(k * c[k] * dcoef[j - k] for k in range(1, j + 1)) / j
    total = 0j
    err = 0.0
    for j in range(terms + 2):
        hz, hb = _hurwitz_em(sigma + j, float(start))
        piece = dcoef[j] * hz
        if j == terms + 1:
            err += 10 * abs(piece)
            break
        total += piece
        err += abs(dcoef[j]) * hb
    err += 8 * EPS * abs(total)
    if all(isinstance(p, (int, float)) for p in list(ups) + list(downs)):
        return total.real, err
    return total, err


def taylor_coefficients(f: Callable[[complex], complex], degree: int,
                        radius: float = 0.5, points: int = 64) -> np.ndarray:
    """First ``degree + 1`` Taylor coefficients of f at 0 by the trapezoid rule
    on the circle |z| = radius. Aliasing adds sum_{i>=1} c_{k+iM} r^{iM}."""
    if points <= degree:
        raise ValueError("need more sample points than the degree")
    w = np.exp(2j * np.pi * np.arange(points) / points)
    vals = np.array([f(radius * wi) for wi in w], dtype=complex)
    coeffs = np.fft.fft(vals) / points
    return coeffs[: degree + 1] / radius ** np.arange(degree + 1)


# ---------------------------------------------------------------------------
# 3F2 at unit argument
# ---------------------------------------------------------------------------

def _nonpos_int(a: float) -> bool:
    return a <= 0 and float(a).is_integer()


def hyp3f2_unit(a1: float, a2: float, a3: float, b1: float, b2: float,
                prec: Precision = DEFAULT_PRECISION) -> Approx:
    """3F2(a1, a2, a3; b1, b2; 1) for real parameters with b1+b2-a1-a2-a3 > 0."""
    if _nonpos_int(b1) or _nonpos_int(b2):
        raise DomainError("3F2 lower parameter is a non-positive integer")
    ups = (a1, a2, a3)
    terminating = [a for a in ups if _nonpos_int(a)]
    if terminating:
        n_max = int(-max(terminating))
        term, acc = 1.0, 1.0
        for n in range(n_max):
            term *= (n + a1) * (n + a2) * (n + a3) / ((n + b1) * (n + b2) * (n + 1))
            acc += term
        return Approx(acc, 4 * EPS * (n_max + 1) * abs(acc))
    excess = b1 + b2 - a1 - a2 - a3
    if not excess > 0:
        raise DomainError("3F2 at unit argument diverges (b1+b2-a1-a2-a3 <= 0)")
    scale = max(1.0, *(abs(p) for p in (a1, a2, a3, b1, b2)))
    start = int(max(400, 40 * scale))
    term, head = 1.0, 0.0
    abs_head = 0.0
    for n in range(start):
        head += term
        abs_head += abs(term)
        term *= (n + a1) * (n + a2) * (n + a3) / ((n + b1) * (n + b2) * (n + 1))
    const = math.gamma(b1) * math.gamma(b2) / (math.gamma(a1) * math.gamma(a2) * math.gamma(a3))
    tail, tail_err = gamma_ratio_tail((a1, a2, a3), (b1, b2, 1.0), start)
    value = head + const * tail
    bound = abs(const) * tail_err + 8 * EPS * start * abs_head
    return Approx(value, bound)


# ---------------------------------------------------------------------------
# Polylogarithm
# ---------------------------------------------------------------------------

def _zeta_any_int(n: int) -> float:
    if n >= 2:
        return float(zeta_int(n))
    if n == 0:
        return -0.5
    j = -n
    return -float(bernoulli(j + 1)) / (j + 1) if j % 2 == 1 else 0.0


def polylog(m: int, z: float, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """Li_m(z) = sum z^n / n^m for integer m >= 1 and 0 <= z < 1."""
    if m < 1:
        raise DomainError("polylog order must be >= 1")
    if not 0 <= z < 1:
        raise DomainError("polylog needs 0 <= z < 1")
    if z == 0:
        return Approx(0.0, 0.0)
    if m == 1:
        value = -math.log1p(-z)
        return Approx(value, 4 * EPS * abs(value))
    if z <= 0.5:
        acc, zn, n = 0.0, z, 1
        while True:
            term = zn / n ** m
            acc += term
            if term <= EPS * acc * 1e-2:
                break
            n += 1
            zn *= z
        return Approx(acc, 2 * term + 4 * EPS * acc)
    # expansion around z = 1 in mu = log z, |mu| < log 2
    mu = math.log(z)
    harm = sum(1.0 / j for j in range(1, m))
    acc = 0.0
    mupow = 1.0
    last = 0.0
    for k in range(0, 60):
        if k == m - 1:
            term = mupow / math.factorial(k) * (harm - math.log(-mu))
        else:
            term = _zeta_any_int(m - k) * mupow / math.factorial(k)
        acc += term
        last = abs(term)
        mupow *= mu
    return Approx(acc, 4 * last + 8 * EPS * abs(acc))


# ---------------------------------------------------------------------------
# Complete Bell polynomials
# ---------------------------------------------------------------------------

def bell_complete(xs: Sequence):
    """P_k(x_1..x_k) via P_n = sum_j C(n-1, j-1) x_j P_{n-j}; exact on Fractions."""
    k = len(xs)
    if k == 0:
        raise DomainError("bell_complete needs at least one argument")
    one = xs[0] * 0 + 1
    p = [one]
    for n in range(1, k + 1):
        p.append(sum((math.comb(n - 1, j - 1) * xs[j - 1] * p[n - j] for j in range(1, n + 1)),
                     one * 0))
    return p[k]


def bell_complete_all(xs: Sequence) -> list:
    """[P_0, P_1, ..., P_k] for the given arguments."""
    one = xs[0] * 0 + 1 if xs else 1
    p = [one]
    for n in range(1, len(xs) + 1):
        p.append(sum((math.comb(n - 1, j - 1) * xs[j - 1] * p[n - j] for j in range(1, n + 1)),
                     one * 0))
    return p
