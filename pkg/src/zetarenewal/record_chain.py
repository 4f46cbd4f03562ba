"""The weakly increasing chain with kernel

    qhat(m, n) = (m)_{n-m} theta / (theta+m)_{n-m+1},   m <= n,

its weak-record description, the number C_k of repeats in k steps, and the
limit law of C_k.

Every row of the kernel is the base law qhat(l, .) conditioned on being
>= m, so with base(n) = qhat(l, n) and S(m) = P(X >= m),

    qhat(m, n) = base(n) / S(m).

All the dynamic programs below use that factorization, which turns each
transition step into a cumulative sum.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np
from scipy import integrate
from scipy.special import loggamma

from .harmonic_mzv import h_star_table, ohno4_lhs
from .special_fn import (
    DEFAULT_PRECISION,
    EPS,
    Approx,
    DomainError,
    Precision,
    digamma,
    gamma_ratio_tail,
    polygamma,
)
from .zeta_combo import ZetaCombo

Real = Union[int, float, Fraction]


@dataclass(frozen=True)
class ChainParams:
    ell: int = 1
    theta: Real = 1

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 1:
            raise DomainError("ell must be a positive integer")
        if not self.theta > 0:
            raise DomainError("theta must be positive")

    @property
    def is_exact(self) -> bool:
        return isinstance(self.theta, (int, Fraction))


GEM1 = ChainParams(1, 1)


class TruncatedDist:
    """Probabilities on consecutive states plus the unassigned mass."""

    def __init__(self, probs, start: int, truncation_mass: float):
        self.probs = np.asarray(probs, dtype=float)
        self.start = int(start)
        self.truncation_mass = float(truncation_mass)
        if np.any(self.probs < -1e-15):
            raise ValueError("negative probability")
        if abs(self.probs.sum() + self.truncation_mass - 1) > 1e-12:
            raise ValueError("probabilities and truncation mass do not add to 1")

    def __getitem__(self, state: int) -> float:
        i = state - self.start
        if 0 <= i < len(self.probs):
            return float(self.probs[i])
        return 0.0

    @property
    def pmf(self) -> dict:
        return {self.start + i: float(p) for i, p in enumerate(self.probs)}

    @property
    def states(self) -> range:
        return range(self.start, self.start + len(self.probs))

    def total(self) -> float:
        return float(self.probs.sum())

    def mean(self) -> float:
        return float(np.dot(np.arange(self.start, self.start + len(self.probs)), self.probs))

    def to_rows(self) -> list[dict]:
        return [{"state": s, "p": p} for s, p in self.pmf.items()]


# ---------------------------------------------------------------------------
# Kernel
# ---------------------------------------------------------------------------


def _poch(x, j: int):
    out = x * 0 + 1
    for i in range(j):
        out *= x + i
    return out


def qhat(m: int, n: int, p: Union[ChainParams, Real] = GEM1):
    """(m)_{n-m} theta / (theta+m)_{n-m+1}; exact for rational theta."""
    theta = p.theta if isinstance(p, ChainParams) else p
    if m < 1:
        raise DomainError("states start at 1")
    if n < m:
        return Fraction(0) if isinstance(theta, (int, Fraction)) else 0.0
    if isinstance(theta, (int, Fraction)):
        th = Fraction(theta)
        return _poch(Fraction(m), n - m) * th / _poch(th + m, n - m + 1)
    th = float(theta)
    return math.exp(math.lgamma(n) - math.lgamma(m) + math.log(th)
                    + math.lgamma(th + m) - math.lgamma(th + n + 1))


def survival(m: int, n: int, p: Union[ChainParams, Real] = GEM1):
    """P(next state >= n | current m) = Gamma(n)Gamma(theta+m) / (Gamma(m)Gamma(theta+n))."""
    theta = p.theta if isinstance(p, ChainParams) else p
    if n <= m:
        return Fraction(1) if isinstance(theta, (int, Fraction)) else 1.0
    if isinstance(theta, (int, Fraction)):
        th = Fraction(theta)
        return _poch(Fraction(m), n - m) / _poch(th + m, n - m)
    th = float(theta)
    return math.exp(math.lgamma(n) - math.lgamma(m) + math.lgamma(th + m) - math.lgamma(th + n))


def qhat_general(m: int, n: int, w_moment: Callable[[int, int], float]):
    """C(n-1, m-1) E[W^(n-m) (1-W)^m] for a stick-breaking factor W."""
    if n < m:
        return 0
    return math.comb(n - 1, m - 1) * w_moment(n - m, m)


def beta_moment(theta: Real) -> Callable[[int, int], Real]:
    """E[W^i (1-W)^j] for W ~ beta(1, theta); exact when theta is rational."""
    def mom(i: int, j: int):
        if isinstance(theta, (int, Fraction)):
            th = Fraction(theta)
            return _poch(Fraction(1), i) * _poch(th, j) / _poch(th + 1, i + j)
        th = float(theta)
        return math.exp(math.lgamma(i + 1) + math.lgamma(th + j) - math.lgamma(th)
                        + math.lgamma(th + 1) - math.lgamma(th + 1 + i + j))
    return mom


def record_kernel(m: int, n: int, base_pmf: Callable[[int], Real], support_min: int = 1):
    """P(X = n) / P(X >= m), with P(X >= m) = 1 - sum_{j<m} P(X = j)."""
    if m < support_min:
        raise DomainError(f"state {m} is below the support start {support_min}")
    first = base_pmf(support_min)
    if n < m:
        return first * 0
    below = sum((base_pmf(j) for j in range(support_min, m)), first * 0)
    return base_pmf(n) / (1 - below)


def _base_and_survival(p: ChainParams, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays over states 0..N: base(n) = qhat(l, n) and S(n) = P(X >= n)."""
    ell, th = p.ell, float(p.theta)
    base = np.zeros(N + 1)
    surv = np.zeros(N + 1)
    surv[: ell + 1] = 1.0
    base[ell] = th / (th + ell)
    n = np.arange(ell, N, dtype=float)
    # base(n+1)/base(n) = n/(theta+n+1), S(n+1)/S(n) = n/(theta+n)
    base[ell + 1:] = base[ell] * np.cumprod(n / (th + n + 1))
    surv[ell + 1:] = np.cumprod(n / (th + n))
    return base, surv


# ---------------------------------------------------------------------------
# Distribution of the chain at step k (theta = 1, start 1)
# ---------------------------------------------------------------------------


def qk_dist(k: int, N: int, p: ChainParams = GEM1) -> TruncatedDist:
    """P(Q_k = n) = (H*_{k-1}(n+1) - H*_{k-2}(n+1)) / (n(n+1)) for n <= N."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if p.ell != 1 or p.theta != 1:
        raise DomainError("the harmonic-sum law holds for ell = theta = 1; use qk_dist_composition")
    t = h_star_table(k - 1, N + 1)
    n = np.arange(1, N + 1, dtype=float)
    upper = t[k - 1, 2:]
    lower = t[k - 2, 2:] if k >= 2 else 0.0
    probs = (upper - lower) / (n * (n + 1))
    probs = np.maximum(probs, 0.0)
    return TruncatedDist(probs, 1, max(0.0, 1.0 - math.fsum(probs)))


def qk_dist_composition(k: int, N: int, p: ChainParams = GEM1) -> TruncatedDist:
    """Law of Q_k by composing the kernel k times on states <= N."""
    if k < 0:
        raise DomainError("k must be >= 0")
    base, surv = _base_and_survival(p, N)
    v = np.zeros(N + 1)
    v[p.ell] = 1.0
    for _ in range(k):
        # new(n) = base(n) * sum_{m <= n} v(m)/S(m)
        acc = np.zeros(N + 1)
        acc[p.ell:] = np.cumsum(v[p.ell:] / surv[p.ell:])
        v = base * acc
    probs = v[p.ell:]
    return TruncatedDist(probs, p.ell, max(0.0, 1.0 - math.fsum(probs)))


def path_prob(path: Sequence[int], theta: Real = 1, start: int = 1):
    """P(Q_1 = n_1, ..., Q_k = n_k | Q_0 = start).

    For theta = 1 and start 1 this is 1/((n_1+1)...(n_{k-1}+1)(n_k+1) n_k).
    """
    if not path:
        return Fraction(1)
    seq = [start] + list(path)
    if any(b < a for a, b in zip(seq, seq[1:])):
        return Fraction(0) if isinstance(theta, (int, Fraction)) else 0.0
    if theta == 1 and start == 1:
        den = 1
        for x in path[:-1]:
            den *= x + 1
        den *= (path[-1] + 1) * path[-1]
        return Fraction(1, den)
    out = None
    for a, b in zip(seq, seq[1:]):
        q = qhat(a, b, theta)
        out = q if out is None else out * q
    return out


# ---------------------------------------------------------------------------
# Strictly increasing paths
# ---------------------------------------------------------------------------


def uk_strict_path(k: int, theta: Real = 1, prec: Precision = DEFAULT_PRECISION,
                   N: int = 2000) -> Approx:
    """P(1 = Q_0 < Q_1 < ... < Q_k).

    Paths ending at or below N: kernel composition restricted to strict
    moves. Paths ending above N: on a strict path every visited state m
    contributes theta/(theta+m) except the last, which contributes
    base(n). Summing over paths ending at n with weight s^k gives

        s base(n) prod_{m=2}^{n-1} (1 + theta s/(theta+m)),

    a gamma ratio in n; its tail over n > N is expanded analytically and the
    coefficient of s^k is read off with the FFT.
    """
    if k < 0:
        raise DomainError("k must be >= 0")
    if k == 0:
        return Approx(1.0, 0.0)
    th = float(theta)
    if not th > 0:
        raise DomainError("theta must be positive")
    p = ChainParams(1, th)
    N = max(N, int(16 * (th + 3)) + 40)
    base, surv = _base_and_survival(p, N)
    v = np.zeros(N + 1)
    v[2:] = base[2:]
    for _ in range(k - 1):
        # strict move: new(n) = base(n) * sum_{2 <= m < n} v(m)/S(m)
        ratio = np.zeros(N + 1)
        ratio[2:] = v[2:] / surv[2:]
        acc = np.concatenate(([0.0], np.cumsum(ratio)[:-1]))
        v = base * acc
    head = math.fsum(v)
    head_err = 8 * (N + k) * EPS * head

    lg1, lg2 = math.lgamma(th + 1), math.lgamma(th + 2)

    def tail(s: complex):
        pref = th * s * np.exp(lg1 + lg2 - loggamma(th + 2 + th * s))
        val, err = gamma_ratio_tail([0.0, th + th * s], [th + 1, th], N + 1)
        return complex(pref * val), abs(pref) * err

    rho, R, M = 0.5, 0.9, 64
    w = np.exp(2j * np.pi * np.arange(M) / M)
    vals = np.empty(M, dtype=complex)
    eval_err = 0.0
    for i, wi in enumerate(w):
        vals[i], e = tail(rho * wi)
        eval_err = max(eval_err, e)
    coef = (np.fft.fft(vals) / M)[k].real / rho ** k
    big, big_err = tail(R)
    q = (rho / R) ** M
    alias = (abs(big) + big_err) * R ** (-k) * q / (1 - q)
    err = head_err + eval_err / rho ** k + alias + 8 * EPS * abs(coef)
    return Approx(head + coef, err)


# ---------------------------------------------------------------------------
# The limit law of the repeat count
# ---------------------------------------------------------------------------


def c_inf_pgf(p: ChainParams, z: float) -> float:
    """Gamma(l+1+theta)Gamma(l+theta-theta z) / (Gamma(l)Gamma(l+1+2theta-theta z))."""
    ell, th = p.ell, float(p.theta)
    args = (ell + 1 + th, ell + th - th * z, ell + 1 + 2 * th - th * z)
    if any(a <= 0 for a in args):
        raise DomainError("a gamma argument is not positive")
    return math.exp(math.lgamma(args[0]) + math.lgamma(args[1])
                    - math.lgamma(ell) - math.lgamma(args[2]))


def _delta(p: ChainParams, j: int, z: float) -> float:
    ell, th = p.ell, float(p.theta)
    a, b = ell + th - th * z, ell + 1 + 2 * th - th * z
    if j == 1:
        return float(digamma(a)) - float(digamma(b))
    return float(polygamma(j - 1, a)) - float(polygamma(j - 1, b))


def _bell_over_factorial(y: Sequence[float]) -> list[float]:
    """P_n(y_1..y_n)/n! for n = 0..len(y), via n p_n = sum_j y_j p_{n-j}/(j-1)!."""
    out = [1.0]
    for n in range(1, len(y) + 1):
        out.append(sum(y[j - 1] / math.factorial(j - 1) * out[n - j] for j in range(1, n + 1)) / n)
    return out


def _scaled_deltas(p: ChainParams, k: int, z: float) -> list[float]:
    # (-theta)^j Delta_j(z) >= 0 for every j, so the Bell sums never cancel
    th = float(p.theta)
    return [(-th) ** j * _delta(p, j, z) for j in range(1, k + 1)]


def c_inf_pmf(p: ChainParams, k: int) -> float:
    """P(C_inf = k) from the Bell-polynomial expansion at z = 0."""
    if k < 0:
        raise DomainError("k must be >= 0")
    return c_inf_pmf_all(p, k)[k]


def c_inf_pmf_all(p: ChainParams, k_max: int) -> list[float]:
    ell, th = p.ell, float(p.theta)
    pref = math.exp(math.lgamma(ell + th) + math.lgamma(ell + th + 1)
                    - math.lgamma(ell) - math.lgamma(ell + 2 * th + 1))
    return [pref * b for b in _bell_over_factorial(_scaled_deltas(p, k_max, 0.0))]


def c_binom_moment(p: ChainParams, k: int) -> float:
    """E binomial(C_inf, k) from the Bell-polynomial expansion at z = 1."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return _bell_over_factorial(_scaled_deltas(p, k, 1.0))[k]


def c_inf_pmf_mixed_poisson(p: ChainParams, k: int) -> Approx:
    """P(C_inf = k) as a Poisson(-theta log H) mixture, H ~ beta(l, theta+1)."""
    ell, th = p.ell, float(p.theta)
    lbeta = math.lgamma(ell) + math.lgamma(th + 1) - math.lgamma(ell + th + 1)

    # substitute h = e^-x: density of x is e^(-l x) (1-e^-x)^theta / B
    def f(x):
        lam = th * x
        logp = -lam + k * math.log(lam) - math.lgamma(k + 1) if lam > 0 else (0.0 if k == 0 else -math.inf)
        return math.exp(logp - ell * x + th * math.log1p(-math.exp(-x)) - lbeta) if x > 0 else 0.0

    val, err = integrate.quad(f, 0, np.inf, limit=400, epsabs=1e-14, epsrel=1e-12)
    return Approx(val, err)


def c_inf_pmf_geometric(ell: int, theta: int, k_max: int) -> list[Fraction]:
    """Law of a sum of independent geometrics with parameters (l+j)/(l+j+theta), 0 <= j <= theta."""
    if not (isinstance(theta, int) and theta >= 1):
        raise DomainError("theta must be a positive integer")
    dist = [Fraction(1)] + [Fraction(0)] * k_max
    for j in range(theta + 1):
        pj = Fraction(ell + j, ell + j + theta)
        geo = [pj * (1 - pj) ** s for s in range(k_max + 1)]
        dist = [sum(dist[i] * geo[n - i] for i in range(n + 1)) for n in range(k_max + 1)]
    return dist


# ---------------------------------------------------------------------------
# Finite k, theta = 1, l = 1
# ---------------------------------------------------------------------------


def mean_empty_ck(k: int) -> ZetaCombo:
    """E C_k: 1/2 for k = 1, 1/2 + k - (k-1) zeta(k) for k >= 2."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if k == 1:
        return ZetaCombo(Fraction(1, 2))
    return ZetaCombo(Fraction(1, 2) + k, {k: -(k - 1)})


def _zc(c0, **z) -> ZetaCombo:
    return ZetaCombo(Fraction(c0), {int(j[1:]): Fraction(v) for j, v in z.items()})


_F = Fraction
_CK_TABLE = {
    1: (_zc(_F(1, 2)), _zc(_F(1, 2))),
    2: (_zc(_F(-5, 4), z2=1), _zc(2, z2=-1), _zc(_F(1, 4))),
    3: (
        _zc(_F(13, 8), z2=_F(-3, 2), z3=1),
        _zc(_F(-37, 8), z2=3),
        _zc(_F(31, 8), z2=_F(-3, 2), z3=-1),
        _zc(_F(1, 8)),
    ),
    4: (
        _zc(_F(-29, 16), z2=_F(7, 4), z3=_F(-3, 2), z4=1),
        _zc(_F(57, 8), z2=_F(-21, 4), z3=_F(3, 2)),
        _zc(_F(-41, 4), z2=_F(21, 4), z3=_F(3, 2)),
        _zc(_F(47, 8), z2=_F(-7, 4), z3=_F(-3, 2), z4=-1),
        _zc(_F(1, 16)),
    ),
}


def ck11_table(k: int) -> tuple[ZetaCombo, ...]:
    """Exact P(C_k = j), j = 0..k, for l = theta = 1 and k <= 4."""
    if k not in _CK_TABLE:
        raise DomainError("exact rows are tabulated for 1 <= k <= 4; use ck_pmf_dp")
    return _CK_TABLE[k]


@dataclass(frozen=True)
class CkDist:
    k: int
    probs: tuple                # P(C_k = j, chain still <= N)
    truncation_mass: float      # P(chain exceeds N within k steps)
    escaped: tuple = ()         # escaped mass by repeat count at the time of escape
    extra_repeat_bound: float = 0.0

    def mean(self) -> float:
        return sum(j * p for j, p in enumerate(self.probs))

    def completed(self) -> tuple:
        """probs + escaped: the law of C_k if no repeat happens above N.

        Total-variation distance to the true law is at most extra_repeat_bound.
        """
        if not self.escaped:
            return self.probs
        return tuple(a + b for a, b in zip(self.probs, self.escaped))


def ck_pmf_dp(k: int, p: ChainParams = GEM1, N: int = 100_000) -> CkDist:
    """P(C_k = j), j = 0..k, by dynamic programming over (state <= N, repeats).

    truncation_mass is the probability of leaving {l..N} within k steps;
    each true probability lies in [probs[j], probs[j] + truncation_mass].
    Mass that leaves keeps its repeat count in escaped; above N a step
    repeats with probability at most theta/(theta+N+1), which bounds the
    error of completed().
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    th = float(p.theta)
    base, surv = _base_and_survival(p, N)
    surv_out = surv[N] * N / (th + N)                # S(N+1)
    stay = np.zeros(N + 1)
    stay[p.ell:] = base[p.ell:] / surv[p.ell:]      # qhat(n, n)
    v = np.zeros((N + 1, k + 1))
    v[p.ell, 0] = 1.0
    inv_s = np.zeros(N + 1)
    inv_s[p.ell:] = 1.0 / surv[p.ell:]
    esc = np.zeros(k + 1)
    extra = 0.0
    for _ in range(k):
        extra += esc.sum() * th / (th + N + 1)
        esc += surv_out * (v * inv_s[:, None]).sum(axis=0)
        new = np.zeros_like(v)
        new[:, 1:] = v[:, :-1] * stay[:, None]
        # strict moves: base(n) * sum_{m<n} v(m, j)/S(m)
        acc = np.cumsum(v * inv_s[:, None], axis=0)
        new[1:, :] += base[1:, None] * acc[:-1, :]
        v = new
    probs = v.sum(axis=0)
    mass = max(0.0, 1.0 - math.fsum(probs))
    return CkDist(k, tuple(float(x) for x in probs), mass, tuple(float(x) for x in esc), extra)


def binom_km1(k: int) -> ZetaCombo:
    """E binomial(C_k, k-1) = 2k - 2 + 2^(1-k) - sum_{j=2}^k (2^(k+1-j) - 1)/2^(k-j) zeta(j)."""
    if k < 2:
        raise DomainError("k must be >= 2")
    c0 = 2 * k - 2 + Fraction(1, 2 ** (k - 1))
    return ZetaCombo(c0, {j: -Fraction(2 ** (k + 1 - j) - 1, 2 ** (k - j)) for j in range(2, k + 1)})


def occupation_geom_pmf(n: int, s: int) -> Fraction:
    """P(S_n = s) = (n+1)^-s (1 - 1/(n+1)) for the total time spent at n."""
    if n < 1 or s < 0:
        raise DomainError("need n >= 1 and s >= 0")
    return Fraction(1, (n + 1) ** s) * Fraction(n, n + 1)


def inv_moment_qk(k: int) -> ZetaCombo:
    """E[1/(Q_k + 1)] = 1 - k zeta(k+1) + (k-1) zeta(k), valid for k >= 2."""
    if k == 1:
        raise DomainError("k = 1 is outside the closed form; inv_moment_qk_direct(1) = 2 - zeta(2)")
    if k < 1:
        raise DomainError("k must be >= 2")
    return ZetaCombo(1, {k + 1: -k, k: k - 1})


def inv_moment_qk_direct(k: int) -> Approx:
    """E[1/(Q_k + 1)] summed against the harmonic-sum law; any k >= 1."""
    if k < 1:
        raise DomainError("k must be >= 1")
    l4, err = ohno4_lhs(k - 1)
    prev = l4[k - 2] if k >= 2 else 0.0
    prev_err = err[k - 2] if k >= 2 else 0.0
    return Approx(l4[k - 1] - prev, err[k - 1] + prev_err)


def rows_to_csv(rows: Iterable[Mapping]) -> str:
    rows = list(rows)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
