"""Exact finite-n probabilities for listing the cycles of a random permutation
by least element versus by greatest element.

u_{k:n} is the probability that the first k cycles in both orders have the
same union. It is computed here by enumeration (Ewens weights over all n!
permutations, or EPPF weights over all set partitions) and, for k = 2, by
a five-term sum over compositions.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterator, Optional, Sequence, Union

from .special_fn import DEFAULT_PRECISION, EPS, Approx, DomainError, Precision, dirichlet_beta, \
    gamma_ratio_tail, hyp3f2_unit

Real = Union[int, float, Fraction]
MAX_ENUM_N = 10


@dataclass(frozen=True)
class Composition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if not parts or any(x < 1 for x in parts):
            raise DomainError("a composition needs positive parts")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)


def _poch(x, j: int):
    out = x * 0 + 1
    for i in range(j):
        out *= x + i
    return out


def eppf_ewens(c: Union[Composition, Sequence[int]], theta: Real):
    """theta^(k-1) / (1+theta)_{n-1} * prod (n_i - 1)!."""
    parts = c.parts if isinstance(c, Composition) else Composition(tuple(c)).parts
    if not theta > 0:
        raise DomainError("theta must be positive")
    th = Fraction(theta) if isinstance(theta, (int, Fraction)) else float(theta)
    n, k = sum(parts), len(parts)
    num = th ** (k - 1)
    for x in parts:
        num *= math.factorial(x - 1)
    return num / _poch(1 + th, n - 1)


def eppf_two_param(c: Union[Composition, Sequence[int]], alpha: Real, theta: Real):
    """prod_{i<k} (theta + i alpha) / (1+theta)_{n-1} * prod (1-alpha)_{n_i - 1}."""
    parts = c.parts if isinstance(c, Composition) else Composition(tuple(c)).parts
    a = Fraction(alpha) if isinstance(alpha, (int, Fraction)) else float(alpha)
    th = Fraction(theta) if isinstance(theta, (int, Fraction)) else float(theta)
    if not (0 <= a < 1 and th > -a):
        raise DomainError("need 0 <= alpha < 1 and theta > -alpha")
    n, k = sum(parts), len(parts)
    num = a * 0 + 1
    for i in range(1, k):
        num *= th + i * a
    for x in parts:
        num *= _poch(1 - a, x - 1)
    return num / _poch(1 + th, n - 1)


class Eppf:
    """A memoized exchangeable partition probability function."""

    def __init__(self, fn: Callable[[tuple], Real], name: str = "eppf"):
        self._fn = lru_cache(maxsize=None)(fn)
        self.name = name

    def __call__(self, *parts):
        if len(parts) == 1 and isinstance(parts[0], (tuple, list, Composition)):
            parts = parts[0].parts if isinstance(parts[0], Composition) else tuple(parts[0])
        return self._fn(tuple(parts))

    @classmethod
    def ewens(cls, theta: Real) -> "Eppf":
        return cls(lambda parts: eppf_ewens(parts, theta), f"ewens({theta})")

    @classmethod
    def two_param(cls, alpha: Real, theta: Real) -> "Eppf":
        return cls(lambda parts: eppf_two_param(parts, alpha, theta), f"two_param({alpha},{theta})")

    def addition_residual(self, parts: Sequence[int]):
        """p(parent) minus the sum over the ways to add one more element."""
        parts = tuple(parts)
        children = [parts[:i] + (parts[i] + 1,) + parts[i + 1:] for i in range(len(parts))]
        children.append(parts + (1,))
        return self(parts) - sum(self(c) for c in children)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def cycles_of(perm: Sequence[int]) -> list[list[int]]:
    """Cycles of a permutation of 0..n-1, each listed from its least element,
    cycles ordered by least element."""
    n = len(perm)
    seen = [False] * n
    out = []
    for i in range(n):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = perm[j]
            out.append(cyc)
    return out


def _first_k_agree(blocks: list[frozenset], n: int) -> list[bool]:
    """agree[k] for k = 1..len(blocks): union of the first k blocks by least
    element equals the union of the first k by greatest element."""
    by_least = sorted(blocks, key=min)
    by_greatest = sorted(blocks, key=max, reverse=True)
    out = []
    left, right = set(), set()
    for a, b in zip(by_least, by_greatest):
        left |= a
        right |= b
        out.append(left == right)
    return out


def _count_block(args) -> Counter:
    n, first = args
    counts: Counter = Counter()
    rest = [i for i in range(n) if i != first]
    for tail in permutations(rest):
        perm = (first,) + tail
        cyc = [frozenset(c) for c in cycles_of(perm)]
        agree = _first_k_agree(cyc, n)
        c = len(cyc)
        for k, ok in enumerate(agree, start=1):
            if ok:
                counts[(k, c)] += 1
        counts[("total", c)] += 1
    return counts


@lru_cache(maxsize=None)
def ukn_counts(n: int, workers: int = 1) -> dict:
    """{(k, cycles): number of permutations of [n] with that many cycles on
    which the k-block unions agree}; ('total', c) counts all permutations."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if n > MAX_ENUM_N:
        raise MemoryError(f"enumerating {n}! permutations is refused (limit n <= {MAX_ENUM_N})")
    jobs = [(n, first) for first in range(n)]
    total: Counter = Counter()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_count_block, jobs))
    else:
        parts = [_count_block(j) for j in jobs]
    for part in parts:          # merged in block order
        total.update(part)
    return dict(total)


def brute_force_ukn(k: int, n: int, theta: Real = 1, workers: int = 1):
    """u_{k:n} under Ewens(theta) by enumerating all n! permutations."""
    if k < 1:
        raise DomainError("k must be >= 1")
    counts = ukn_counts(n, workers)
    th = Fraction(theta) if isinstance(theta, (int, Fraction)) else float(theta)
    norm = _poch(th, n)
    acc = th * 0
    for c in range(1, n + 1):
        # with fewer than k cycles both unions are all of [n]
        hits = counts.get(("total", c), 0) if c < k else counts.get((k, c), 0)
        acc += hits * th ** c
    return acc / norm


def set_partitions(n: int) -> Iterator[list[list[int]]]:
    """All set partitions of 0..n-1 (restricted growth strings)."""
    if n == 0:
        yield []
        return
    for part in set_partitions(n - 1):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [n - 1]] + part[i + 1:]
        yield part + [[n - 1]]


def brute_force_ukn_partitions(k: int, n: int, p: Eppf):
    """u_{k:n} for any EPPF by summing p over all set partitions of [n]."""
    if n > MAX_ENUM_N:
        raise MemoryError(f"refusing to enumerate partitions of n = {n}")
    acc = None
    for part in set_partitions(n):
        blocks = [frozenset(b) for b in part]
        agree = _first_k_agree(blocks, n)
        ok = True if len(blocks) < k else agree[k - 1]
        if ok:
            w = p(tuple(len(b) for b in blocks))
            acc = w if acc is None else acc + w
    return acc if acc is not None else 0


# ---------------------------------------------------------------------------
# Five-term formula for u_{2:n}
# ---------------------------------------------------------------------------


def _as_eppf(p) -> Eppf:
    if isinstance(p, Eppf):
        return p
    return Eppf.ewens(p)


def u2n_terms(n: int, p) -> tuple:
    """The five sums making up u_{2:n}, in the order they are usually listed."""
    if n < 3:
        raise DomainError("n must be >= 3")
    p = _as_eppf(p)
    zero = p(1) * 0
    t1 = p(n)
    t2 = (n - 2) * p(n - 1, 1)
    t3 = sum((p(j - 1 + n - k, 2) for j in range(2, n) for k in range(j + 1, n)), zero)
    t4 = sum((p(j, n - j) for j in range(1, n)), zero)
    t5 = sum((p(j, n - k + 1) for j in range(2, n) for k in range(j + 1, n)), zero)
    return t1, t2, t3, t4, t5


def u2n_formula(n: int, p) -> Real:
    """u_{2:n} for the partition structure with EPPF p (or Ewens theta)."""
    return sum(u2n_terms(n, p))


def noninterference_check(n: int, p) -> Real:
    """sum_{h=2}^{n-2} (h-1) p(h,2) - [p(2) - p(n) - (n-2) p(n-1,1)] p(2).

    Zero for every Ewens model; generally nonzero otherwise.
    """
    if n < 4:
        raise DomainError("n must be >= 4")
    p = _as_eppf(p)
    lhs = sum((h - 1) * p(h, 2) for h in range(2, n - 1))
    rhs = (p(2) - p(n) - (n - 2) * p(n - 1, 1)) * p(2)
    return lhs - rhs


def regrouping_residual(n: int, p) -> Real:
    """The double sum of p(j-1+n-k, 2) minus its regrouped single sum; zero for any EPPF."""
    p = _as_eppf(p)
    double = sum(p(j - 1 + n - k, 2) for j in range(2, n) for k in range(j + 1, n))
    single = sum((h - 1) * p(h, 2) for h in range(2, n - 1))
    return double - single


# ---------------------------------------------------------------------------
# Limit of u_{2:n}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class U2Limit:
    theta: float
    series: Approx
    hyp3f2: Approx

    @property
    def value(self) -> float:
        return float(self.series)

    @property
    def bound(self) -> float:
        return self.series.bound

    @property
    def discrepancy(self) -> float:
        return abs(float(self.series) - float(self.hyp3f2))

    def agree(self) -> bool:
        return self.discrepancy <= self.series.bound + self.hyp3f2.bound + 4 * EPS

    def __float__(self):
        return self.value


def _u2_series(theta: float) -> Approx:
    """(1+theta)^-2 + sum_{j>=2} theta (1)_{j-1} / ((theta+j-1)(theta+1)_j)."""
    th = float(theta)
    start = int(max(400, 8 * (th + 2) + 40))
    term = th / ((th + 1) * (th + 2))       # j = 2 without the 1/(theta+1) factor
    acc, abs_acc = 0.0, 0.0
    for j in range(2, start):
        t = term / (th + j - 1)
        acc += t
        abs_acc += abs(t)
        term *= j / (th + j + 1)
    # summand = theta Gamma(theta+1) Gamma(j) Gamma(theta+j-1) / (Gamma(theta+j) Gamma(theta+j+1))
    const = th * math.gamma(th + 1)
    tail, err = gamma_ratio_tail([0.0, th - 1], [th, th + 1], start)
    value = 1.0 / (1 + th) ** 2 + acc + const * tail
    return Approx(value, const * err + 4 * start * EPS * abs_acc + 4 * EPS)


def _u2_hyp(theta: float, prec: Precision) -> Approx:
    th = float(theta)
    f = hyp3f2_unit(1.0, 1.0, th, th + 1, th + 2, prec)
    value = 1.0 / (1 + th) ** 2 + (float(f) - 1.0) / (1 + th)
    return Approx(value, f.bound / (1 + th) + 8 * EPS)


def u2_limit(theta: Real, prec: Precision = DEFAULT_PRECISION) -> U2Limit:
    """lim u_{2:n} under Ewens(theta), by the series and by the 3F2 form."""
    if not theta > 0:
        raise DomainError("theta must be positive")
    th = float(theta)
    return U2Limit(th, _u2_series(th), _u2_hyp(th, prec))


def u2_half_catalan(prec: Precision = DEFAULT_PRECISION) -> Approx:
    """u_2 at theta = 1/2 equals 2G - 11/9 (G = Catalan's constant)."""
    g = dirichlet_beta(2.0, prec)
    value = 2 * float(g) - 11 / 9
    return Approx(value, 2 * g.bound + 4 * EPS)


def u2n_sequence(ns: Sequence[int], theta: Real = 1) -> dict:
    """Exact u_{2:n} for each n in ns (O(n^2) EPPF evaluations each)."""
    p = Eppf.ewens(theta)
    return {n: u2n_formula(n, p) for n in ns}
