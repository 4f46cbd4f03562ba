"""Seeded Monte Carlo for stick-breaking, interval discovery, record chains,
Engel digits and Ewens permutations.

Every estimator splits its trials into fixed-size blocks. Block b of stream
s draws from SeedSequence([seed, s, b]), so a trial's randomness depends
only on (seed, stream, trial index) and the pooled result does not depend
on how blocks are scheduled across threads.

Interval discovery is simulated in continuous time: sample points arrive
as a rate-1 Poisson process, so interval i is first hit after Exp(1)/P_i
and the region beyond R_k after Exp(1)/(1 - R_k), all independent given
the stick. The discovery order matches the discrete sampling order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import gammaln

from .exact_perm import _first_k_agree, cycles_of
from .record_chain import GEM1, ChainParams, qhat
from .special_fn import DomainError

BLOCK = 1 << 15


@dataclass(frozen=True)
class RngConfig:
    master_seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2 ** 64:
            raise DomainError("master_seed must fit in 64 bits")

    def generator(self, block: int = 0) -> np.random.Generator:
        ss = np.random.SeedSequence([self.master_seed, self.stream_id, block])
        return np.random.Generator(np.random.PCG64(ss))

    def stream(self, i: int) -> "RngConfig":
        return RngConfig(self.master_seed, i)


def _as_cfg(rng) -> RngConfig:
    if isinstance(rng, RngConfig):
        return rng
    if rng is None:
        return RngConfig()
    return RngConfig(int(rng))


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_err: float
    n_trials: int
    seed: RngConfig = field(default_factory=RngConfig)

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")

    def z_score(self, target: float) -> float:
        if self.std_err == 0:
            return 0.0 if self.mean == target else math.inf
        return (self.mean - target) / self.std_err

    def within(self, target: float, sigmas: float = 4.0) -> bool:
        return abs(self.z_score(target)) <= sigmas

    def as_dict(self) -> dict:
        return {"mean": self.mean, "std_err": self.std_err, "n_trials": self.n_trials,
                "seed": self.seed.master_seed, "stream": self.seed.stream_id}


def _estimate(values: np.ndarray, cfg: RngConfig) -> MonteCarloEstimate:
    values = np.asarray(values, dtype=float)
    n = len(values)
    mean = float(values.mean())
    sd = float(values.std(ddof=1)) if n > 1 else 0.0
    return MonteCarloEstimate(mean, sd / math.sqrt(n), n, cfg)


def run_trials(fn: Callable[[np.random.Generator, int], np.ndarray], n_trials: int,
               rng=None, streams: int = 1) -> np.ndarray:
    """Concatenated per-trial outputs of fn(generator, size) over all blocks.

    Trials are dealt to streams round-robin by count; each stream is cut
    into blocks of BLOCK trials. Output order is (stream, block).
    """
    if n_trials < 1:
        raise DomainError("n_trials must be >= 1")
    if streams < 1:
        raise DomainError("streams must be >= 1")
    cfg = _as_cfg(rng)
    jobs = []
    for s in range(streams):
        count = n_trials // streams + (1 if s < n_trials % streams else 0)
        sc = RngConfig(cfg.master_seed, cfg.stream_id * streams + s) if streams > 1 else cfg
        for b in range(0, count, BLOCK):
            jobs.append((sc, b // BLOCK, min(BLOCK, count - b)))

    def work(job):
        sc, b, size = job
        return fn(sc.generator(b), size)

    if streams > 1:
        with ThreadPoolExecutor(max_workers=streams) as ex:
            parts = list(ex.map(work, jobs))
    else:
        parts = [work(j) for j in jobs]
    return np.concatenate(parts, axis=0)


# ---------------------------------------------------------------------------
# Stick breaking
# ---------------------------------------------------------------------------


def _beta_1_theta(gen: np.random.Generator, theta: float, size=None):
    """(W, 1 - W) with W ~ beta(1, theta) via 1 - W = U^(1/theta)."""
    rest = gen.random(size) ** (1.0 / theta)
    return 1.0 - rest, rest


class StickBreaking:
    """A lazily realized GEM(theta) partition of [0, 1)."""

    def __init__(self, theta: float, gen: np.random.Generator):
        if not theta > 0:
            raise DomainError("theta must be positive")
        self.theta = float(theta)
        self._gen = gen
        self.w: list[float] = []
        self.right: list[float] = [0.0]     # R_0 = 0
        self._remaining = 1.0

    def extend(self) -> None:
        w, rest = _beta_1_theta(self._gen, self.theta)
        self.w.append(float(w))
        self._remaining *= float(rest)
        self.right.append(1.0 - self._remaining)

    def ensure(self, k: int) -> None:
        while len(self.w) < k:
            self.extend()

    def length(self, k: int) -> float:
        self.ensure(k)
        return self.right[k] - self.right[k - 1]

    def remaining(self, k: int) -> float:
        """1 - R_k computed as a product, without cancellation."""
        self.ensure(k)
        out = 1.0
        for w in self.w[:k]:
            out *= 1.0 - w
        return out

    @property
    def realized(self) -> int:
        return len(self.w)


def sample_x(sb: StickBreaking, gen: np.random.Generator) -> int:
    """Index k of the interval [R_{k-1}, R_k) containing a fresh uniform."""
    u = gen.random()
    k = 1
    while True:
        sb.ensure(k)
        if u < sb.right[k]:
            return k
        k += 1


def _stick(gen: np.random.Generator, theta: float, size: int, k: int):
    """Lengths P_1..P_k (size x k) and 1 - R_k."""
    w, rest = _beta_1_theta(gen, theta, (size, k))
    before = np.cumprod(np.concatenate([np.ones((size, 1)), rest[:, :-1]], axis=1), axis=1)
    return w * before, before[:, -1] * rest[:, -1]


def estimate_uk(k: int, theta: float = 1.0, n_trials: int = 100_000, rng=None,
                streams: int = 1) -> MonteCarloEstimate:
    """P(all of intervals 1..k are discovered before any point lands beyond R_k)."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if not theta > 0:
        raise DomainError("theta must be positive")

    def fn(gen, size):
        p, outside = _stick(gen, theta, size, k)
        first_hit = gen.standard_exponential((size, k))
        exit_time = gen.standard_exponential(size)
        # E_i / P_i < E_0 / (1 - R_k), cross-multiplied
        ok = np.all(first_hit * outside[:, None] < exit_time[:, None] * p, axis=1)
        return ok.astype(np.int8)

    vals = run_trials(fn, n_trials, rng, streams)
    return _estimate(vals, _as_cfg(rng))


def estimate_uk_sequential(k: int, theta: float, n_trials: int, rng=None,
                           max_draws: int = 10 ** 6) -> MonteCarloEstimate:
    """The same event by drawing X_1, X_2, ... one at a time (slow; small runs)."""
    cfg = _as_cfg(rng)
    gen = cfg.generator(0)
    hits = np.zeros(n_trials, dtype=np.int8)
    for t in range(n_trials):
        sb = StickBreaking(theta, gen)
        seen = set()
        for _ in range(max_draws):
            x = sample_x(sb, gen)
            if x > k:
                break
            seen.add(x)
        else:
            raise RuntimeError("sequential trial exceeded max_draws")
        hits[t] = len(seen) == k
    return _estimate(hits, cfg)


def simulate_qstar_path(k: int, m: int, theta: float, gen: np.random.Generator,
                        size: int = 1) -> np.ndarray:
    """Rows (Q*(k), Q*(k-1), ..., Q*(0)) at the time the m-th point lands beyond R_k."""
    if k < 1 or m < 1:
        raise DomainError("k and m must be >= 1")
    p, outside = _stick(gen, theta, size, k)
    t = gen.gamma(m, size=size) / outside
    counts = gen.poisson(p * t[:, None])                    # points in I_1..I_k
    inner = np.cumsum(counts[:, ::-1], axis=1)              # I_k, I_k + I_{k-1}, ...
    return np.concatenate([np.full((size, 1), m), m + inner], axis=1)


def ck_samples(k: int, p: ChainParams, gen: np.random.Generator, size: int) -> np.ndarray:
    """Empty intervals among 1..k when the ell-th point lands beyond R_k."""
    lengths, outside = _stick(gen, float(p.theta), size, k)
    t = gen.gamma(p.ell, size=size) / outside
    first_hit = gen.standard_exponential((size, k))
    return np.sum(first_hit > lengths * t[:, None], axis=1)


@dataclass(frozen=True)
class CkEstimate:
    k: int
    pmf: tuple          # MonteCarloEstimate per j = 0..k
    mean: MonteCarloEstimate


def estimate_ck(k: int, p: ChainParams = GEM1, n_trials: int = 100_000, rng=None,
                streams: int = 1) -> CkEstimate:
    """Empirical law of C_k from direct interval discovery."""
    if k < 1:
        raise DomainError("k must be >= 1")
    cfg = _as_cfg(rng)
    vals = run_trials(lambda g, n: ck_samples(k, p, g, n), n_trials, cfg, streams)
    pmf = tuple(_estimate(vals == j, cfg) for j in range(k + 1))
    return CkEstimate(k, pmf, _estimate(vals, cfg))


# ---------------------------------------------------------------------------
# Record chain
# ---------------------------------------------------------------------------


def _log_surv(m: np.ndarray, n: np.ndarray, theta: float) -> np.ndarray:
    return gammaln(n) - gammaln(m) + gammaln(theta + m) - gammaln(theta + n)


def kernel_step(m: np.ndarray, theta: float, gen: np.random.Generator) -> np.ndarray:
    """One chain step from each state in m by inverse CDF on the survival function.

    States are float64, so values beyond 2^53 are approximate.
    """
    m = np.asarray(m, dtype=float)
    logv = np.log1p(-gen.random(m.shape))       # log V, V in (0, 1]
    lo = m.copy()                               # surv(lo) >= V always
    hi = m + 1.0
    grow = _log_surv(m, hi, theta) >= logv
    while np.any(grow):
        hi[grow] = np.minimum(2.0 * hi[grow], 2.0 ** 62)
        stuck = hi >= 2.0 ** 62
        grow = (_log_surv(m, hi, theta) >= logv) & ~stuck
    while True:
        gap = hi - lo > 1
        if not np.any(gap):
            break
        mid = np.floor((lo + hi) / 2)
        up = gap & (_log_surv(m, mid, theta) >= logv)
        down = gap & ~up
        lo[up] = mid[up]
        hi[down] = mid[down]
    return lo


def simulate_chain(p: ChainParams, steps: int, gen: np.random.Generator,
                   size: int = 1) -> np.ndarray:
    """Rows (Q_0 = ell, Q_1, ..., Q_steps) sampled from the kernel."""
    out = np.empty((size, steps + 1))
    out[:, 0] = p.ell
    for j in range(steps):
        out[:, j + 1] = kernel_step(out[:, j], float(p.theta), gen)
    return out


def simulate_weak_records(p: ChainParams, steps: int, gen: np.random.Generator,
                          size: int = 1, max_draws: int = 1 << 27) -> np.ndarray:
    """Rows (R_0 = ell, R_1, ..., R_steps): weak ascending records of i.i.d.
    draws from the one-step law out of ell.

    Each record is found by drawing until a value >= the current record.
    A row that needs more than max_draws draws is marked -1 from there on.
    """
    theta = float(p.theta)
    out = np.empty((size, steps + 1))
    out[:, 0] = p.ell
    if steps == 0:
        return out
    out[:, 1] = kernel_step(np.full(size, float(p.ell)), theta, gen)
    for j in range(1, steps):
        cur = out[:, j].copy()
        nxt = np.full(size, np.nan)
        nxt[cur < 0] = -1.0
        used = np.zeros(size, dtype=np.int64)
        batch = 4
        while True:
            active = np.flatnonzero(np.isnan(nxt))
            if active.size == 0:
                break
            width = max(1, min(batch, (1 << 22) // active.size))
            draws = kernel_step(np.full((active.size, width), float(p.ell)), theta, gen)
            good = draws >= cur[active, None]
            found = good.any(axis=1)
            first = good.argmax(axis=1)
            idx = active[found]
            nxt[idx] = draws[found, first[found]]
            used[active] += width
            over = active[~found][used[active[~found]] >= max_draws]
            nxt[over] = -1.0
            batch = min(batch * 2, 1 << 16)
        out[:, j + 1] = nxt
    return out


# ---------------------------------------------------------------------------
# Goodness of fit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChiSquareReport:
    statistic: float
    df: int
    n: int

    @property
    def z(self) -> float:
        """Standardized statistic (X^2 - df) / sqrt(2 df)."""
        return (self.statistic - self.df) / math.sqrt(2 * self.df) if self.df else 0.0

    def passed(self, sigmas: float = 3.0) -> bool:
        return self.z <= sigmas

    def as_dict(self) -> dict:
        return {"statistic": self.statistic, "df": self.df, "n": self.n, "z": self.z}


def _cells(rows: np.ndarray, caps: Sequence[int]) -> list[tuple]:
    rows = np.asarray(rows)
    clipped = np.minimum(rows, np.asarray(caps)[None, :]).astype(np.int64)
    return [tuple(r) for r in clipped]


def chi_square_gof(observed: dict, expected_prob: dict, n: int, min_expected: float = 5.0) -> ChiSquareReport:
    """Goodness of fit; cells with expected count below min_expected are pooled."""
    stat, df = 0.0, 0
    pool_o, pool_e = 0.0, 0.0
    for cell, p in expected_prob.items():
        e = n * float(p)
        o = observed.get(cell, 0)
        if e < min_expected:
            pool_o += o
            pool_e += e
        else:
            stat += (o - e) ** 2 / e
            df += 1
    rest_o = n - sum(observed.get(c, 0) for c in expected_prob) + pool_o
    rest_e = n * (1 - sum(float(p) for p in expected_prob.values())) + pool_e
    if rest_e > 0:
        stat += (rest_o - rest_e) ** 2 / rest_e
        df += 1
    return ChiSquareReport(stat, max(df - 1, 0), n)


def chi_square_two_sample(a: Sequence, b: Sequence, min_expected: float = 5.0) -> ChiSquareReport:
    """Homogeneity test between two samples of hashable cells."""
    from collections import Counter
    ca, cb = Counter(a), Counter(b)
    na, nb = len(a), len(b)
    stat, df = 0.0, 0
    pool_a = pool_b = 0
    for cell in sorted(set(ca) | set(cb)):
        tot = ca[cell] + cb[cell]
        if tot * min(na, nb) / (na + nb) < min_expected:
            pool_a += ca[cell]
            pool_b += cb[cell]
            continue
        for o, n in ((ca[cell], na), (cb[cell], nb)):
            e = n * tot / (na + nb)
            stat += (o - e) ** 2 / e
        df += 1
    if pool_a + pool_b:
        tot = pool_a + pool_b
        for o, n in ((pool_a, na), (pool_b, nb)):
            e = n * tot / (na + nb)
            stat += (o - e) ** 2 / e
        df += 1
    return ChiSquareReport(stat, max(df - 1, 0), na + nb)


def chain_vs_records_test(p: ChainParams = GEM1, n_paths: int = 100_000, steps: int = 2,
                          rng=None, caps: Optional[Sequence[int]] = None) -> ChiSquareReport:
    """Two-sample test between kernel paths and weak-record paths on (Q_1..Q_steps)."""
    cfg = _as_cfg(rng)
    caps = list(caps) if caps is not None else [12] * steps
    a = run_trials(lambda g, n: simulate_chain(p, steps, g, n), n_paths, cfg.stream(0))
    b = run_trials(lambda g, n: simulate_weak_records(p, steps, g, n), n_paths, cfg.stream(1))
    b = b[np.all(b >= 0, axis=1)]
    return chi_square_two_sample(_cells(a[:, 1:], caps), _cells(b[:, 1:], caps))


# ---------------------------------------------------------------------------
# Engel series
# ---------------------------------------------------------------------------


def engel_digits(u, depth: int) -> list[int]:
    """Digits 2 <= q_1 <= q_2 <= ... with u = sum_i 1/(q_1...q_i), in exact arithmetic.

    A float is read through its shortest decimal repr, so 0.7 means 7/10.
    """
    x = Fraction(repr(u)) if isinstance(u, float) else Fraction(u)
    if not 0 < x < 1:
        raise DomainError("u must lie in (0, 1)")
    out = []
    while x and len(out) < depth:
        q = -((-x.denominator) // x.numerator)      # ceil(1/x)
        out.append(q)
        x = q * x - 1
    return out


def engel_vs_chain_test(trials: int = 100_000, depth: int = 2, rng=None,
                        cap: int = 30) -> ChiSquareReport:
    """Law of (q_1 - 1, ..., q_depth - 1) for uniform u against chain paths from 1."""
    from collections import Counter
    gen = _as_cfg(rng).generator(0)
    raw = gen.integers(1, 2 ** 62, size=trials)
    counts: Counter = Counter()
    for r in raw:
        d = engel_digits(Fraction(int(r), 2 ** 62), depth)
        if len(d) < depth:
            continue        # terminating expansion; probability ~ 2^-62 per draw
        counts[tuple(x - 1 for x in d)] += 1
    expected = {}

    def walk(prefix, last, prob):
        if len(prefix) == depth:
            expected[tuple(prefix)] = prob
            return
        for n in range(last, cap + 1):
            walk(prefix + [n], n, prob * float(qhat(last, n, 1)))

    walk([], 1, 1.0)
    return chi_square_gof(counts, expected, sum(counts.values()))


# ---------------------------------------------------------------------------
# Permutations
# ---------------------------------------------------------------------------


def ewens_permutation(n: int, theta: float, gen: np.random.Generator) -> list[int]:
    """A permutation of 0..n-1 with probability theta^#cycles / (theta)_n.

    Element i opens a new cycle with probability theta/(theta+i), otherwise
    it is inserted after a uniformly chosen earlier element.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    perm = [0] * n
    u = gen.random(n)
    picks = gen.integers(0, np.maximum(np.arange(n), 1))
    for i in range(n):
        if u[i] * (theta + i) < theta:
            perm[i] = i
        else:
            j = int(picks[i])
            perm[i] = perm[j]
            perm[j] = i
    return perm


def estimate_ukn(k: int, n: int, theta: float = 1.0, n_trials: int = 10_000, rng=None,
                 streams: int = 1) -> MonteCarloEstimate:
    """Empirical u_{k:n} from Ewens permutations."""
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")

    def fn(gen, size):
        out = np.empty(size, dtype=np.int8)
        for t in range(size):
            blocks = [frozenset(c) for c in cycles_of(ewens_permutation(n, theta, gen))]
            out[t] = True if len(blocks) < k else _first_k_agree(blocks, n)[k - 1]
        return out

    vals = run_trials(fn, n_trials, rng, streams)
    return _estimate(vals, _as_cfg(rng))
