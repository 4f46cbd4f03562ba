"""Iterated harmonic sums, (multiple) zeta and Hurwitz zeta values, Euler sums.

Most series here have the shape

    sum_{n>=1} w(n) * S_d(a_1, ..., a_{n+off})

where S_d is the degree-d elementary (strict nesting) or complete
homogeneous (weak nesting) symmetric polynomial. Summing over d with t^d
turns the inner polynomial into a product, and for every family used here
the summand becomes a ratio of gamma functions in n. So each value is
computed as

* head: the symmetric-polynomial coefficients, accumulated exactly in
  degree for n <= N, and
* tail: sum_{n>N} of the gamma ratio (asymptotic expansion), with its
  Taylor coefficients in t recovered by the FFT on a circle.

Indices without that shape go through a plain nested summation with
two-sided tail bounds.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate
from scipy.special import loggamma

from .special_fn import (
    DEFAULT_PRECISION,
    EPS,
    EULER_GAMMA,
    Approx,
    DomainError,
    Precision,
    digamma,
    gamma_ratio_tail,
    hurwitz_zeta,
    polygamma,
    zeta_int,
)

# ---------------------------------------------------------------------------
# Exact harmonic sums
# ---------------------------------------------------------------------------


class HarmonicCache:
    """Memo of H*_k(n) and H_k(n).

    Exact Fractions for n <= exact_limit, floats beyond. k_max caps only the
    float tables; exact rows grow on demand. Reads are lock-free; extensions
    of the tables are serialized.
    """

    def __init__(self, k_max: int = 64, n_max: int = 10 ** 6, exact_limit: int = 10 ** 4):
        self.k_max = k_max
        self.n_max = n_max
        self.exact_limit = exact_limit
        self._star: dict[int, list] = {0: [Fraction(1)]}
        self._power: dict[int, list] = {}
        self._lock = threading.Lock()

    def _check(self, k: int, n: int) -> None:
        if n > self.n_max or (k > self.k_max and n > self.exact_limit):
            raise DomainError(f"(k={k}, n={n}) outside cache bounds ({self.k_max}, {self.n_max})")
        if n < 0:
            raise DomainError("n must be >= 0")

    def h_star(self, k: int, n: int):
        """H*_k(n) = sum_{m<=n} H*_{k-1}(m)/m, H*_0 = 1, H*_{-1} = 0."""
        if k == -1:
            return Fraction(0)
        if k < -1:
            raise DomainError("k must be >= -1")
        self._check(k, n)
        if k == 0:
            return Fraction(1)
        if n > self.exact_limit:
            return float(h_star_table(k, n)[k, n])
        row = self._star.get(k)
        if row is None or len(row) <= n:
            with self._lock:
                self._extend_star(k, n)
            row = self._star[k]
        return row[n]

    def _extend_star(self, k: int, n: int) -> None:
        for j in range(1, k + 1):
            row = self._star.setdefault(j, [Fraction(0)])
            while len(row) <= n:
                m = len(row)
                prev = Fraction(1) if j == 1 else self._star[j - 1][m]
                row.append(row[-1] + prev / m)

    def h_power(self, k: int, n: int):
        """H_k(n) = sum_{m<=n} m^-k."""
        if k < 1:
            raise DomainError("k must be >= 1")
        self._check(k, n)
        if n > self.exact_limit:
            return math.fsum(1.0 / m ** k for m in range(1, n + 1))
        row = self._power.get(k)
        if row is None or len(row) <= n:
            with self._lock:
                row = self._power.setdefault(k, [Fraction(0)])
                while len(row) <= n:
                    m = len(row)
                    row.append(row[-1] + Fraction(1, m ** k))
        return self._power[k][n]


_DEFAULT_CACHE = HarmonicCache()


def h_star(k: int, n: int):
    return _DEFAULT_CACHE.h_star(k, n)


def h_power(k: int, n: int):
    return _DEFAULT_CACHE.h_power(k, n)


def h_star_table(k_max: int, n_max: int) -> np.ndarray:
    """Float table T[j, n] = H*_j(n) for 0 <= j <= k_max, 0 <= n <= n_max."""
    inv = np.zeros(n_max + 1)
    inv[1:] = 1.0 / np.arange(1, n_max + 1)
    t = np.zeros((k_max + 1, n_max + 1))
    t[0, :] = 1.0
    for j in range(1, k_max + 1):
        t[j] = np.cumsum(t[j - 1] * inv)
    return t


# ---------------------------------------------------------------------------
# Indices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MzvIndex:
    """(s_1, ..., s_k) summed over n_1 < ... < n_k with s_i on n_i.

    Convergence needs the exponent on the largest index, s_k, to be >= 2.
    """

    s: tuple

    def __post_init__(self):
        s = tuple(int(v) for v in self.s)
        object.__setattr__(self, "s", s)
        if not s:
            raise DomainError("empty index")
        if any(v < 1 for v in s):
            raise DomainError("exponents must be positive integers")
        if s[-1] < 2:
            raise DomainError(f"divergent index {s}: last exponent must be >= 2")

    @property
    def depth(self) -> int:
        return len(self.s)

    @property
    def weight(self) -> int:
        return sum(self.s)

    def ones_prefix(self) -> Optional[tuple[int, int]]:
        """(d, nu) when the index is (1, ..., 1, nu) with d ones."""
        if all(v == 1 for v in self.s[:-1]):
            return len(self.s) - 1, self.s[-1]
        return None


def _as_index(idx) -> MzvIndex:
    return idx if isinstance(idx, MzvIndex) else MzvIndex(tuple(idx))


def star_expand(idx) -> list[MzvIndex]:
    """All indices obtained by replacing each comma by ',' or '+'."""
    s = _as_index(idx).s
    out = []
    for ops in product((False, True), repeat=len(s) - 1):
        cur = [s[0]]
        for merge, v in zip(ops, s[1:]):
            if merge:
                cur[-1] += v
            else:
                cur.append(v)
        out.append(MzvIndex(tuple(cur)))
    return out


# ---------------------------------------------------------------------------
# Generating-function engine
# ---------------------------------------------------------------------------

_TailFn = Callable[[complex], tuple[complex, float]]


def _gamma_tail(pref: Callable[[complex], complex], ups: Callable, downs: Callable,
                start: int) -> _TailFn:
    def tail(t: complex):
        val, err = gamma_ratio_tail(ups(t), downs(t), start)
        p = pref(t)
        return complex(p * val), abs(p) * err
    return tail


def _gf_coefficients(weight: Callable[[int], float], elem: Callable[[int], float], off: int,
                     kind: str, tail: _TailFn, dmax: int, N: int,
                     rho: float = 0.5, R: float = 0.9, points: int = 64):
    """Coefficients c_0..c_dmax of sum_n w(n) prod_{m<=n+off} (1 -/+ t a_m)^{+-1}.

    kind 'e' means prod (1 + t a_m) (strict nesting), 'h' means
    prod 1/(1 - t a_m) (weak nesting). All a_m and w(n) must be positive,
    which makes every coefficient non-negative; that fact bounds the
    aliasing of the FFT. Returns (values, bounds) as numpy arrays.
    """
    poly = np.zeros(dmax + 1)
    poly[0] = 1.0
    head = np.zeros(dmax + 1)
    m_done = 0
    for n in range(1, N + 1):
        while m_done < n + off:
            m_done += 1
            a = elem(m_done)
            if kind == "e":
                poly[1:] = poly[1:] + a * poly[:-1]
            else:
                for d in range(1, dmax + 1):
                    poly[d] += a * poly[d - 1]
        head += weight(n) * poly
    head_err = 4 * (N + m_done + dmax) * EPS * head

    w = np.exp(2j * np.pi * np.arange(points) / points)
    vals = np.empty(points, dtype=complex)
    eval_err = 0.0
    for i, wi in enumerate(w):
        v, e = tail(rho * wi)
        vals[i] = v
        eval_err = max(eval_err, e)
    coeffs = (np.fft.fft(vals) / points)[: dmax + 1].real / rho ** np.arange(dmax + 1)
    big, big_err = tail(R)
    big = abs(big) + big_err
    d = np.arange(dmax + 1)
    # c_j <= tail(R) / R^j, so the aliases c_{d+iM} rho^(iM) sum to at most
    q = (rho / R) ** points
    alias = big * R ** (-d) * q / (1 - q)
    coef_err = eval_err / rho ** d + alias + 8 * EPS * np.abs(coeffs)
    return head + coeffs, head_err + coef_err


def _ones_strict(nu: int, x: float, dmax: int, N: int):
    """zeta({1}^d, nu; x) for d = 0..dmax."""
    start = N + 1
    lg1x = loggamma(1 + x)
    return _gf_coefficients(
        weight=lambda n: (n + x) ** -nu,
        elem=lambda m: 1.0 / (m + x),
        off=-1,
        kind="e",
        tail=_gamma_tail(lambda t: np.exp(lg1x - loggamma(1 + x + t)),
                         lambda t: [x + t] + [x] * (nu - 1),
                         lambda t: [x + 1] * nu, start),
        dmax=dmax, N=N)


def _ones_star(nu: int, x: float, dmax: int, N: int):
    """zeta*({1}^d, nu; x) = sum_{n_1<=...<=n_{d+1}} for d = 0..dmax."""
    start = N + 1
    lg1x = loggamma(1 + x)
    return _gf_coefficients(
        weight=lambda n: (n + x) ** -nu,
        elem=lambda m: 1.0 / (m + x),
        off=0,
        kind="h",
        tail=_gamma_tail(lambda t: np.exp(loggamma(1 + x - t) - lg1x),
                         lambda t: [x] * nu,
                         lambda t: [x + 1 - t] + [x + 1] * (nu - 1), start),
        dmax=dmax, N=N)


def _default_n(x: float = 0.0) -> int:
    return max(2000, int(16 * (abs(x) + 2)) + 40)


# ---------------------------------------------------------------------------
# Nested summation with two-sided tail bounds (indices of any shape)
# ---------------------------------------------------------------------------


def _nested_generic(s: Sequence[int], x: float, star: bool, N: int) -> Approx:
    """Nested sum truncated at N for the largest index, plus a tail bracket.

    With A_j(n) the partial sum over the first j exponents, the tail is
    sum_{n>N} A_{k-1}(n) (n+x)^-s_k. Below, A_{k-1}(n) >= A_{k-1}(N); above,
    A_{k-1}(n) <= G(log(n/N)) for a polynomial G built level by level.
    """
    if x < 0:
        raise DomainError("general-index evaluation needs x >= 0")
    n = np.arange(1, N + 1, dtype=float)
    level = None
    at_n = []
    for sj in s:
        w = (n + x) ** (-float(sj))
        if level is None:
            level = np.cumsum(w)
        elif star:
            level = np.cumsum(level * w)
        else:
            level = np.cumsum(np.concatenate(([0.0], level[:-1])) * w)
        at_n.append(float(level[-1]))
    head = at_n[-1]
    sk = s[-1]
    prev = 1.0 if len(s) == 1 else at_n[-2]
    lo = prev * float(hurwitz_zeta(sk, N + 1 + x))
    gpoly = [1.0]
    for j, sj in enumerate(s[:-1]):
        if sj == 1:
            nxt = [0.0] + gpoly
        else:
            nxt = [c * N ** (1 - sj) / (sj - 1) for c in gpoly]
        nxt[0] += at_n[j]
        gpoly = nxt
    fac = ((N + 1) / N) ** sk * N ** (1 - sk)
    hi = fac * sum(c * math.factorial(i) / (sk - 1) ** (i + 1) for i, c in enumerate(gpoly))
    hi = max(hi, lo)
    value = head + 0.5 * (lo + hi)
    bound = 0.5 * (hi - lo) + 4 * len(s) * N * EPS * abs(value)
    return Approx(value, bound)


# ---------------------------------------------------------------------------
# Public evaluators
# ---------------------------------------------------------------------------


def hurwitz_multi(nu, x: float = 0.0, prec: Precision = DEFAULT_PRECISION,
                  N: Optional[int] = None) -> Approx:
    """sum_{0<n_1<...<n_k} prod (n_i + x)^-nu_i."""
    idx = _as_index(nu)
    if x <= -1:
        raise DomainError("x must exceed -1")
    shape = idx.ones_prefix()
    if shape is not None and shape[1] >= 2:
        d, v = shape
        vals, errs = _ones_strict(v, x, d, N or _default_n(x))
        return Approx(vals[d], errs[d])
    return _nested_generic(idx.s, x, False, N or 200_000)


def mzv(idx, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """zeta(s_1, ..., s_k) summed over n_1 < ... < n_k, depth <= 5."""
    idx = _as_index(idx)
    if idx.depth > 5 and idx.ones_prefix() is None:
        raise DomainError("depth above 5 is only supported for (1, ..., 1, nu)")
    return hurwitz_multi(idx, 0.0, prec)


def mzv_star(idx, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """zeta*(s_1, ..., s_k) summed over n_1 <= ... <= n_k."""
    idx = _as_index(idx)
    shape = idx.ones_prefix()
    if shape is not None:
        d, v = shape
        vals, errs = _ones_star(v, 0.0, d, _default_n())
        return Approx(vals[d], errs[d])
    if idx.depth > 5:
        raise DomainError("depth above 5 unsupported")
    return _nested_generic(idx.s, 0.0, True, 200_000)


def duality_check(k: int, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """|zeta(1, ..., 1, 2) - zeta(k)| with k-2 ones; the bound covers both sides."""
    if k < 2:
        raise DomainError("k must be >= 2")
    lhs = mzv((1,) * (k - 2) + (2,), prec)
    rhs = zeta_int(k, prec)
    return Approx(abs(lhs - rhs), lhs.bound + rhs.bound)


def h_k(k: int, x: float, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """h_k(x) = zeta(1, ..., 1, 2; x) with k-2 ones."""
    if k < 2:
        raise DomainError("k must be >= 2")
    return hurwitz_multi((1,) * (k - 2) + (2,), x, prec)


def uk_theta_series(k: int, theta: float, prec: Precision = DEFAULT_PRECISION,
                    N: Optional[int] = None) -> Approx:
    """u_k for GEM(theta) from the series with the last index summed in closed form:

    theta^k Gamma(theta) sum_{0<n_1<...<n_{k-1}} prod 1/(theta+n_i+1)
        * Gamma(n_{k-1}+2) / Gamma(n_{k-1}+theta+2).
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    if not theta > 0:
        raise DomainError("theta must be positive")
    if k == 1:
        v = 1.0 / (1.0 + theta)
        return Approx(v, 2 * EPS * v)
    th = float(theta)
    N = N or max(2000, int(16 * (th + 3)) + 40)
    lg_t2 = loggamma(th + 2)
    const = th * th * math.gamma(th)

    def weight(n):
        return math.exp(math.lgamma(n + 2) - math.lgamma(n + th + 2)) / (th + n + 1)

    vals, errs = _gf_coefficients(
        weight=weight,
        elem=lambda m: th / (th + m + 1),
        off=-1,
        kind="e",
        tail=_gamma_tail(lambda s: np.exp(lg_t2 - loggamma(th + 2 + th * s)),
                         lambda s: [2.0, th + 1 + th * s],
                         lambda s: [th + 2, th + 2], N + 1),
        dmax=k - 2, N=N)
    v = const * vals[k - 2]
    return Approx(v, const * errs[k - 2] + 8 * EPS * abs(v))


def a_coeff(i: int, theta: int) -> Fraction:
    """sum over 0 < n_1 < ... < n_i <= theta+1 of theta^i / (n_1 ... n_i)."""
    if not (isinstance(theta, int) and theta >= 1):
        raise DomainError("theta must be a positive integer")
    if not 1 <= i <= theta + 1:
        raise DomainError(f"i must lie in 1..{theta + 1}")
    e = [Fraction(1)] + [Fraction(0)] * i
    for n in range(1, theta + 2):
        for d in range(i, 0, -1):
            e[d] += e[d - 1] / n
    return theta ** i * e[i]


def ohno_xi(m: int, k: int, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """xi_m(k) = sum_n H*_{k-1}(n) / n^(m+1)."""
    if m < 1 or k < 1:
        raise DomainError("m and k must be >= 1")
    vals, errs = _ones_star(m + 1, 0.0, k - 1, _default_n())
    return Approx(vals[k - 1], errs[k - 1])


def ohno_xi_integral(m: int, s: float) -> Approx:
    """xi_m(s) from its integral over t of t^(s-1) e^-t Li_m(1-e^-t) / (1-e^-t)."""
    from .special_fn import polylog

    if m < 1 or not s > 0:
        raise DomainError("need m >= 1 and s > 0")

    def f(t):
        if t == 0:
            return 0.0
        z = -math.expm1(-t)
        if m == 1:
            li = t
        elif z < 1.0:
            li = float(polylog(m, z))
        else:
            li = float(zeta_int(m))
        return t ** (s - 1) * math.exp(-t) * li / z

    upper = 60.0 + 2 * s
    val, err = integrate.quad(f, 0, upper, limit=200, epsabs=1e-14, epsrel=1e-12)
    val /= math.gamma(s)
    return Approx(val, err / math.gamma(s) + 1e-15)


def hsumk_lhs(k_max: int) -> tuple[np.ndarray, np.ndarray]:
    """sum_n H*_k(n+1) / (n(n+1)) for k = 0..k_max."""
    N = _default_n()
    return _gf_coefficients(
        weight=lambda n: 1.0 / (n * (n + 1.0)),
        elem=lambda m: 1.0 / m,
        off=1,
        kind="h",
        tail=_gamma_tail(lambda t: np.exp(loggamma(1 - t)),
                         lambda t: [0.0], lambda t: [2.0 - t], N + 1),
        dmax=k_max, N=N)


def ohno4_lhs(k_max: int) -> tuple[np.ndarray, np.ndarray]:
    """sum_n H*_k(n+1) / (n(n+1)^2) for k = 0..k_max."""
    N = _default_n()
    return _gf_coefficients(
        weight=lambda n: 1.0 / (n * (n + 1.0) ** 2),
        elem=lambda m: 1.0 / m,
        off=1,
        kind="h",
        tail=_gamma_tail(lambda t: np.exp(loggamma(1 - t)),
                         lambda t: [0.0, 1.0], lambda t: [2.0, 2.0 - t], N + 1),
        dmax=k_max, N=N)


# ---------------------------------------------------------------------------
# Euler sums
# ---------------------------------------------------------------------------


def _series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: len(a)]


def _harmonic_taylor(kind: str, k: int, x0: float, deg: int) -> np.ndarray:
    """Taylor coefficients at x0 of H(x)^k ('h') or H_k(x) ('power')."""
    c = np.zeros(deg + 1)
    if kind == "h":
        base = np.zeros(deg + 1)
        base[0] = float(digamma(x0 + 1)) + EULER_GAMMA
        for i in range(1, deg + 1):
            base[i] = float(polygamma(i, x0 + 1)) / math.factorial(i)
        c[0] = 1.0
        for _ in range(k):
            c = _series_mul(c, base)
        return c
    c[0] = float(zeta_int(k)) - float(hurwitz_zeta(k, x0 + 1))
    for i in range(1, deg + 1):
        c[i] = (-1) ** (i + 1) * math.comb(k + i - 1, i) * float(hurwitz_zeta(k + i, x0 + 1))
    return c


def _harmonic_float(kind: str, k: int, x: float) -> float:
    if kind == "h":
        return (float(digamma(x + 1)) + EULER_GAMMA) ** k
    return float(zeta_int(k)) - float(hurwitz_zeta(k, x + 1))


def harmonic_dirichlet_sum(kind: str, k: int, s: int, shift: int = 0, N: int = 400,
                           em_terms: int = 6) -> Approx:
    """sum_{n>=1} X(n) / (n+shift)^s with X = H^k ('h') or H_k ('power').

    Head summed directly; tail by Euler-Maclaurin with derivatives from
    Taylor series of the digamma/Hurwitz continuation of X.
    """
    if kind not in ("h", "power"):
        raise ValueError("kind must be 'h' or 'power'")
    if s < 2:
        raise DomainError("s must be >= 2")
    n = np.arange(1, N + 1, dtype=float)
    if kind == "h":
        x_vals = np.cumsum(1.0 / n) ** k
    else:
        x_vals = np.cumsum(n ** (-float(k)))
    head = math.fsum(x_vals / (n + shift) ** s)

    deg = 2 * em_terms + 2
    tx = _harmonic_taylor(kind, k, float(N), deg)
    tp = np.array([_binom_neg(s, i) for i in range(deg + 1)])
    tp = tp * (N + shift) ** (-(s + np.arange(deg + 1, dtype=float)))
    f = _series_mul(tx, tp)
    deriv = [math.factorial(i) * f[i] for i in range(deg + 1)]

    def g(u):
        x = N * math.exp(u)
        return _harmonic_float(kind, k, x) * (x + shift) ** (-s) * x

    # beyond u_max the integrand is below e^-80 relative to its start
    u_max = min(600.0, (80.0 + 10.0 * k) / (s - 1))
    integral, qerr = integrate.quad(g, 0, u_max, limit=200, epsabs=1e-16, epsrel=1e-13)
    tail = integral - 0.5 * deriv[0]
    last = 0.0
    for j in range(1, em_terms + 2):
        b = float(_bernoulli(2 * j)) / math.factorial(2 * j)
        term = b * deriv[2 * j - 1]
        if j == em_terms + 1:
            last = abs(term)
            break
        tail -= term
    value = head + tail
    bound = qerr + 10 * last + 8 * N * EPS * abs(head)
    return Approx(value, bound)


def _binom_neg(s: int, i: int) -> float:
    # binomial(-s, i)
    out = 1.0
    for j in range(i):
        out *= (-s - j) / (j + 1)
    return out


def _bernoulli(n: int) -> Fraction:
    from .special_fn import bernoulli

    return bernoulli(n)


def s_h(k: int, s: int) -> Approx:
    """sum_{n>=1} H(n)^k / (n+1)^s."""
    return harmonic_dirichlet_sum("h", k, s, shift=1)


def sigma_h(k: int, s: int) -> Approx:
    """sum_{n>=1} H_k(n) / (n+1)^s."""
    return harmonic_dirichlet_sum("power", k, s, shift=1)


def zeta_minus_one_sum(M: int = 80) -> Approx:
    """sum_{n>=2} (zeta(n) - 1), each term as a Hurwitz zeta at 2."""
    terms = [hurwitz_zeta(n, 2.0) for n in range(2, M + 1)]
    val = math.fsum(float(t) for t in terms)
    # sum_{n>M} (zeta(n)-1) = sum_{j>=2} j^-M/(j-1) <= 2^(1-M)
    return Approx(val, sum(t.bound for t in terms) + 2.0 ** (1 - M) + M * EPS)


# ---------------------------------------------------------------------------
# Identity suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityResult:
    name: str
    param: Optional[int]
    lhs: float
    rhs: float
    residual: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.residual <= max(self.bound, 0.0) + 1e-8

    def as_dict(self) -> dict:
        return {"name": self.name, "param": self.param, "lhs": self.lhs, "rhs": self.rhs,
                "residual": self.residual, "bound": self.bound}


@dataclass(frozen=True)
class IdentityReport:
    results: tuple

    @property
    def max_residual(self) -> float:
        return max(r.residual for r in self.results)

    def all_within(self, tol: float) -> bool:
        return all(r.residual <= tol for r in self.results)

    def as_dict(self) -> dict:
        return {"max_residual": self.max_residual, "results": [r.as_dict() for r in self.results]}


def _z(k: int) -> float:
    return float(zeta_int(k))


def identity_suite(k_max: int = 6, ohno5_max: int = 8, duality_max: int = 6) -> IdentityReport:
    """Evaluate the harmonic-sum identities and return every residual."""
    out = []

    def rec(name, param, lhs, rhs, lb=0.0, rb=0.0):
        out.append(IdentityResult(name, param, float(lhs), float(rhs),
                                  abs(float(lhs) - float(rhs)), float(lb + rb)))

    hs, hs_err = hsumk_lhs(k_max)
    for k in range(k_max + 1):
        rec("hsumk", k, hs[k], k + 1, hs_err[k])

    for k in range(k_max + 1):
        xi = ohno_xi(1, k + 1)
        rec("ohno3", k, xi, (k + 1) * _z(k + 2), xi.bound, (k + 1) * zeta_int(k + 2).bound)

    l4, l4_err = ohno4_lhs(max(k_max, ohno5_max))
    for k in range(k_max + 1):
        rec("ohno4", k, l4[k], k + 2 - (k + 1) * _z(k + 2), l4_err[k])

    for k in range(2, ohno5_max + 1):
        lhs = l4[k - 1] - l4[k - 2]
        rhs = 1 - k * _z(k + 1) + (k - 1) * _z(k)
        rec("ohno5", k, lhs, rhs, l4_err[k - 1] + l4_err[k - 2])

    h2 = harmonic_dirichlet_sum("h", 2, 2)
    rec("euler_h2", None, 0.5 * h2, 17 / 8 * _z(4), 0.5 * h2.bound)
    p2 = harmonic_dirichlet_sum("power", 2, 2)
    rec("euler_H2", None, 0.5 * p2, 7 / 8 * _z(4), 0.5 * p2.bound)
    rec("hstar2_split", None, 0.5 * h2 + 0.5 * p2, 3 * _z(4), 0.5 * (h2.bound + p2.bound))
    xi3 = ohno_xi(1, 3)
    rec("hstar2_direct", None, xi3, 0.5 * h2 + 0.5 * p2, xi3.bound, 0.5 * (h2.bound + p2.bound))

    sh = s_h(1, 2)
    rec("s_h(1,2)", None, sh, _z(3), sh.bound)
    sg = sigma_h(2, 2)
    rec("sigma_h(2,2)", None, sg, 0.75 * _z(4), sg.bound)

    zs = zeta_minus_one_sum()
    rec("zeta_minus_one", None, zs, 1.0, zs.bound)

    for k in range(2, duality_max + 1):
        d = duality_check(k)
        out.append(IdentityResult("duality", k, float(d), 0.0, float(d), float(d.bound)))
    return IdentityReport(tuple(out))
