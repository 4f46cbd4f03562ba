"""Renewal sequences u_k and first-renewal laws f_k, plus the family

    u_k = sum_{n>=1} n^-k / q(n),   q(n) = a n^2 + b n + c,

whose entries satisfy c u_k + b u_{k-1} + a u_{k-2} = zeta(k).
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .special_fn import (
    DEFAULT_PRECISION,
    EPS,
    EULER_GAMMA,
    Approx,
    DomainError,
    Precision,
    digamma_complex,
    hurwitz_zeta,
    polygamma,
)

Number = Union[int, float, Fraction]


class NormalizationError(ValueError):
    """q does not satisfy sum 1/q(n) = 1; ``u0`` holds the computed sum."""

    def __init__(self, u0: float, tol: float):
        super().__init__(f"sum 1/q(n) = {u0!r}, not 1 within {tol:g}")
        self.u0 = u0
        self.tol = tol


@dataclass
class RenewalSeq:
    u: list
    bounds: Optional[list] = None

    def __post_init__(self):
        if not self.u:
            raise ValueError("empty renewal sequence")
        if self.bounds is not None and len(self.bounds) != len(self.u):
            raise ValueError("bounds must match u in length")

    def __len__(self):
        return len(self.u)

    def __getitem__(self, k):
        return self.u[k]

    def validate(self, tol: float = 1e-12) -> None:
        if abs(self.u[0] - 1) > tol:
            raise ValueError("u[0] must be 1")
        for k, x in enumerate(self.u):
            if not -tol <= x <= 1 + tol:
                raise ValueError(f"u[{k}] = {x} outside [0, 1]")


@dataclass
class FirstRenewalDist:
    """f[k] for k >= 1; ``f[0]`` is stored as 0 so indices match k."""

    f: list

    def __getitem__(self, k):
        return self.f[k]

    def __len__(self):
        return len(self.f)

    @property
    def k_max(self) -> int:
        return len(self.f) - 1

    def total(self):
        return sum(self.f[1:])

    def mean(self):
        return sum(k * self.f[k] for k in range(1, len(self.f)))

    def validate(self, tol: float = 1e-12) -> None:
        if any(x < -tol for x in self.f[1:]):
            raise ValueError("negative f")
        if self.total() > 1 + tol:
            raise ValueError("f sums above 1")


def u_to_f(u: Union[RenewalSeq, Sequence], k_max: int) -> FirstRenewalDist:
    """f_k = u_k - sum_{j<k} f_j u_{k-j}; exact when u holds Fractions."""
    uu = u.u if isinstance(u, RenewalSeq) else list(u)
    if len(uu) <= k_max:
        raise ValueError(f"u has {len(uu)} entries, need {k_max + 1}")
    zero = uu[0] * 0
    f = [zero]
    for k in range(1, k_max + 1):
        f.append(uu[k] - sum((f[j] * uu[k - j] for j in range(1, k)), zero))
    return FirstRenewalDist(f)


def f_to_u(f: Union[FirstRenewalDist, Sequence], k_max: int) -> RenewalSeq:
    """u_0 = 1, u_k = sum_{j=1}^k f_j u_{k-j}. A plain sequence is read from f_1."""
    ff = f.f if isinstance(f, FirstRenewalDist) else [0] + list(f)
    if len(ff) <= k_max:
        raise ValueError(f"f has {len(ff) - 1} entries, need {k_max}")
    one = ff[1] * 0 + 1 if len(ff) > 1 else 1
    u = [one]
    for k in range(1, k_max + 1):
        u.append(sum((ff[j] * u[k - j] for j in range(1, k + 1)), one * 0))
    return RenewalSeq(u)


def kaluza_check(u: Union[RenewalSeq, Sequence], k_max: int) -> tuple[bool, Optional[int]]:
    """Check u_k^2 <= u_{k-1} u_{k+1} for 1 <= k <= k_max."""
    uu = u.u if isinstance(u, RenewalSeq) else list(u)
    if len(uu) < k_max + 2:
        raise ValueError("need u up to k_max + 1")
    for k in range(1, k_max + 1):
        if uu[k] * uu[k] > uu[k - 1] * uu[k + 1]:
            return False, k
    return True, None


# ---------------------------------------------------------------------------
# Quadratic q
# ---------------------------------------------------------------------------

def _psi_sum(r1: complex, r2: complex) -> float:
    """psi(1-r1) + psi(1-r2), real for real roots or a conjugate pair."""
    if complex(r1).imag == 0 and complex(r2).imag == 0:
        return (digamma_complex(1 - complex(r1)) + digamma_complex(1 - complex(r2))).real
    return 2 * digamma_complex(1 - complex(r1)).real


def _check_root(r: complex) -> None:
    r = complex(r)
    if r.imag == 0 and r.real >= 1 and r.real.is_integer():
        raise DomainError(f"root {r.real:g} is a positive integer")


def normalize_a(r1: complex, r2: complex) -> float:
    """The leading coefficient making sum_n 1/(a (n-r1)(n-r2)) = 1."""
    _check_root(r1)
    _check_root(r2)
    z1, z2 = complex(r1), complex(r2)
    if abs(z1 - z2) < 1e-12 * max(1.0, abs(z1)):
        if z1.imag != 0:
            raise DomainError("a double root must be real")
        return float(polygamma(1, 1 - z1.real))
    val = (digamma_complex(1 - z2) - digamma_complex(1 - z1)) / (z1 - z2)
    return val.real


@dataclass(frozen=True)
class QuadraticQ:
    """q(n) = a n^2 + b n + c = a (n - r1)(n - r2)."""

    a: Number
    b: Number
    c: Number
    r1: complex = field(compare=False)
    r2: complex = field(compare=False)

    def __post_init__(self):
        if self.a == 0:
            raise DomainError("q must be quadratic (a != 0)")
        _check_root(self.r1)
        _check_root(self.r2)

    @classmethod
    def from_coeffs(cls, a: Number, b: Number, c: Number) -> "QuadraticQ":
        fa, fb, fc = float(a), float(b), float(c)
        if fa == 0:
            raise DomainError("q must be quadratic (a != 0)")
        disc = complex(fb * fb - 4 * fa * fc)
        sq = cmath.sqrt(disc)
        # numerically stable pair
        if fb >= 0:
            t = -(fb + sq) / 2
        else:
            t = -(fb - sq) / 2
        r1 = t / fa
        r2 = fc / t if t != 0 else -r1
        r1, r2 = _tidy(r1), _tidy(r2)
        q = cls(a, b, c, r1, r2)
        for n in range(1, 4 + int(max(abs(r1), abs(r2)))):
            if not q(n) > 0:
                raise DomainError(f"q({n}) = {q(n)} is not positive")
        return q

    @classmethod
    def from_roots(cls, r1: complex, r2: complex, a: Optional[float] = None) -> "QuadraticQ":
        """Roots given; a defaults to the normalizing value."""
        if a is None:
            a = normalize_a(r1, r2)
        z1, z2 = complex(r1), complex(r2)
        b = (-a * (z1 + z2)).real
        c = (a * z1 * z2).real
        return cls(a, b, c, _tidy(z1), _tidy(z2))

    def __call__(self, n):
        return self.a * n * n + self.b * n + self.c

    @property
    def root_radius(self) -> float:
        return max(abs(complex(self.r1)), abs(complex(self.r2)))

    def _inverse_expansion(self, terms: int) -> list:
        """e_j with 1/((1 - r1 y)(1 - r2 y)) = sum_j e_j y^j."""
        z1, z2 = complex(self.r1), complex(self.r2)
        # e_j = sum_{i=0}^j r1^i r2^(j-i) = r2 e_{j-1} + r1^j
        e, cur, p1 = [], 0j, 1 + 0j
        for _ in range(terms):
            cur = z2 * cur + p1
            e.append(cur.real)
            p1 *= z1
        return e


def _tidy(z: complex):
    z = complex(z)
    return z.real if abs(z.imag) <= 1e-15 * max(1.0, abs(z.real)) else z


def _tail_sum(q: QuadraticQ, k: int, n0: int, terms: int = 30) -> tuple[float, float]:
    """sum_{n>n0} n^-k / q(n) and a rigorous bound on expansion truncation."""
    a = float(q.a)
    e = q._inverse_expansion(terms)
    val, err = 0.0, 0.0
    for j, ej in enumerate(e):
        hz = hurwitz_zeta(k + 2 + j, n0 + 1.0)
        val += ej * float(hz)
        err += abs(ej) * hz.bound
    # |e_j| <= (j+1) R^j and sum_{n>n0} n^-s <= n0^(1-s)/(s-1)
    rho = q.root_radius / n0
    tail_series = rho ** terms * ((terms + 1) / (1 - rho) + rho / (1 - rho) ** 2)
    err += tail_series * n0 ** (-(k + 1)) / (k + 1)
    return val / a, err / abs(a) + 4 * EPS * abs(val / a)


def quadratic_u(q: QuadraticQ, k: int, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """u_k = sum_{n>=1} n^-k / q(n), head summed directly, tail expanded."""
    n0 = max(200, int(8 * q.root_radius) + 50)
    head = math.fsum(float(n) ** -k / float(q(n)) for n in range(1, n0 + 1))
    tail, err = _tail_sum(q, k, n0)
    return Approx(head + tail, err + 4 * EPS * abs(head))


def quadratic_renewal(q: QuadraticQ, k_max: int, prec: Precision = DEFAULT_PRECISION,
                      tol: float = 1e-10) -> RenewalSeq:
    """u_0..u_{k_max} for q; raises NormalizationError when u_0 is not 1."""
    vals = [quadratic_u(q, k, prec) for k in range(k_max + 1)]
    if abs(vals[0] - 1) > tol:
        raise NormalizationError(float(vals[0]), tol)
    return RenewalSeq([float(v) for v in vals], [v.bound for v in vals])


def recursion_residuals(q: QuadraticQ, seq: RenewalSeq, prec: Precision = DEFAULT_PRECISION):
    """(k, |c u_k + b u_{k-1} + a u_{k-2} - zeta(k)|, allowed) for k >= 2."""
    from .special_fn import zeta_int

    a, b, c = float(q.a), float(q.b), float(q.c)
    out = []
    bnd = seq.bounds or [0.0] * len(seq)
    for k in range(2, len(seq)):
        z = zeta_int(k, prec)
        res = abs(c * seq[k] + b * seq[k - 1] + a * seq[k - 2] - float(z))
        allowed = abs(c) * bnd[k] + abs(b) * bnd[k - 1] + abs(a) * bnd[k - 2] + z.bound + 16 * EPS
        out.append((k, res, allowed))
    return out


@dataclass(frozen=True)
class QuadraticStats:
    mean: Number
    variance: float
    u_inf: Number
    u1: float
    variance_bound: float
    u1_bound: float


def quadratic_stats(q: QuadraticQ) -> QuadraticStats:
    """Mean, variance, limit and u_1 of the renewal law, from digamma values.

    Mean q(1) and u_inf = 1/q(1) stay exact when the coefficients are
    rational.
    """
    mean = q(1)
    u_inf = 1 / Fraction(mean) if isinstance(mean, (int, Fraction)) else 1 / mean
    s = _psi_sum(q.r1, q.r2)
    a, c = float(q.a), float(q.c)
    var = (4 - float(mean)) * a - float(q(-1)) + float(mean) * (c + 2 * EULER_GAMMA + s)
    u1 = (-float(q.b) + 2 * EULER_GAMMA + s) / (2 * c)
    var_b = 64 * EPS * (abs(var) + abs(float(mean)) * (abs(c) + abs(s) + 2))
    u1_b = 32 * EPS * (abs(float(q.b)) + abs(s) + 2) / abs(2 * c)
    return QuadraticStats(mean, var, u_inf, u1, var_b, u1_b)


def renewal_table(q: QuadraticQ, k_max: int, prec: Precision = DEFAULT_PRECISION) -> list[dict]:
    seq = quadratic_renewal(q, k_max, prec)
    f = u_to_f(seq, k_max)
    rows = []
    for k in range(k_max + 1):
        # error in f_k accumulates the u bounds through the convolution
        rows.append({
            "k": k,
            "u": seq[k],
            "u_bound": seq.bounds[k],
            "f": None if k == 0 else f[k],
        })
    return rows


def table_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if v is None else v) for k, v in r.items()})
    return buf.getvalue()


def table_to_json(rows: list[dict]) -> str:
    return json.dumps(rows)
