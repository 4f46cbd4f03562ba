"""Exact rational linear combinations of 1, zeta(2), zeta(3), ...

and the equivalent descriptions of the GEM(1) renewal sequence u_k:
the three-term zeta recursion, the closed alternating form, the positive
series sum_j 2/(j^k (j+1)(j+2)) and the digamma generating function.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Union

from .special_fn import (
    DEFAULT_PRECISION,
    EPS,
    EULER_GAMMA,
    Approx,
    DomainError,
    Precision,
    digamma,
    hurwitz_zeta,
    zeta_int,
)

Rational = Union[int, Fraction]


class ZetaCombo:
    """c0 + sum_j c[j] zeta(j), j >= 2, with Fraction coefficients.

    Immutable and canonical: zero coefficients are never stored, so two
    combos are equal iff their coefficients agree.
    """

    __slots__ = ("_c0", "_c")

    def __init__(self, c0: Rational = 0, zeta: Optional[Mapping[int, Rational]] = None):
        self._c0 = Fraction(c0)
        coeffs = {}
        for j, v in (zeta or {}).items():
            j = int(j)
            if j < 2:
                raise DomainError(f"zeta({j}) cannot appear in a combo")
            v = Fraction(v)
            if v:
                coeffs[j] = v
        self._c = dict(sorted(coeffs.items()))

    @classmethod
    def zeta(cls, j: int, coeff: Rational = 1) -> "ZetaCombo":
        return cls(0, {j: coeff})

    @property
    def c0(self) -> Fraction:
        return self._c0

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def coeff(self, j: int) -> Fraction:
        if j == 0:
            return self._c0
        return self._c.get(j, Fraction(0))

    @property
    def max_index(self) -> int:
        return max(self._c, default=0)

    def is_rational(self) -> bool:
        return not self._c

    # ring operations (module over Q)
    def __add__(self, other):
        other = _as_combo(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for j, v in other._c.items():
            c[j] = c.get(j, 0) + v
        return ZetaCombo(self._c0 + other._c0, c)

    __radd__ = __add__

    def __neg__(self):
        return ZetaCombo(-self._c0, {j: -v for j, v in self._c.items()})

    def __sub__(self, other):
        other = _as_combo(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        s = Fraction(scalar)
        return ZetaCombo(self._c0 * s, {j: v * s for j, v in self._c.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(scalar))

    def __eq__(self, other):
        other = _as_combo(other)
        if other is NotImplemented:
            return False
        return self._c0 == other._c0 and self._c == other._c

    def __hash__(self):
        return hash((self._c0, tuple(self._c.items())))

    def __repr__(self):
        return f"ZetaCombo({str(self)!r})"

    def __str__(self):
        parts = []
        for j, v in self._c.items():
            parts.append((v, f"zeta({j})"))
        if self._c0 or not parts:
            parts.append((self._c0, ""))
        out = ""
        for i, (v, name) in enumerate(parts):
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            if name:
                body = name if mag == 1 else f"{mag}*{name}"
            else:
                body = str(mag)
            if i == 0:
                out = body if sign == "+" else "-" + body
            else:
                out += f" {sign} {body}"
        return out

    def eval(self, prec: Precision = DEFAULT_PRECISION) -> Approx:
        """Numeric value with an accumulated absolute error bound."""
        value = float(self._c0)
        bound = abs(value) * EPS
        for j, v in self._c.items():
            z = zeta_int(j, prec)
            fv = float(v)
            value += fv * float(z)
            bound += abs(fv) * z.bound + abs(fv * float(z)) * 2 * EPS
        bound += abs(value) * EPS
        return Approx(value, bound)

    # JSON: {"c0": "p/q", "zeta": {"2": "p/q", ...}}
    def to_dict(self) -> dict:
        return {"c0": _frac_str(self._c0), "zeta": {str(j): _frac_str(v) for j, v in self._c.items()}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: Mapping) -> "ZetaCombo":
        return cls(Fraction(d.get("c0", "0")), {int(j): Fraction(v) for j, v in d.get("zeta", {}).items()})

    @classmethod
    def from_json(cls, s: str) -> "ZetaCombo":
        return cls.from_dict(json.loads(s))


ZERO = ZetaCombo()
ONE = ZetaCombo(1)


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _as_combo(x):
    if isinstance(x, ZetaCombo):
        return x
    if isinstance(x, (int, Fraction)):
        return ZetaCombo(x)
    return NotImplemented


def combo_add(a: ZetaCombo, b: ZetaCombo) -> ZetaCombo:
    return a + b


def combo_scale(a: ZetaCombo, s: Rational) -> ZetaCombo:
    return a * s


def combo_eval(a: ZetaCombo, prec: Precision = DEFAULT_PRECISION) -> Approx:
    return a.eval(prec)


@dataclass(frozen=True)
class RenewalValue:
    """A renewal-sequence entry carried both exactly and numerically."""

    exact: Optional[ZetaCombo]
    numeric: float
    tail_bound: float

    def __post_init__(self):
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be non-negative")

    def consistent(self, prec: Precision = DEFAULT_PRECISION) -> bool:
        if self.exact is None:
            return True
        ev = self.exact.eval(prec)
        return abs(self.numeric - float(ev)) <= self.tail_bound + ev.bound


# ---------------------------------------------------------------------------
# u_k for GEM(1)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def uk_recursion(k: int) -> ZetaCombo:
    """u_k from 2u_k + 3u_{k-1} + u_{k-2} = 2 zeta(k), u_0 = 1, u_1 = 1/2."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return ONE
    if k == 1:
        return ZetaCombo(Fraction(1, 2))
    return (ZetaCombo.zeta(k, 2) - 3 * uk_recursion(k - 1) - uk_recursion(k - 2)) / 2


def uk_closed(k: int) -> ZetaCombo:
    """(-1)^(k-1) (2 - 3/2^k) + sum_{j=2}^k (-1)^(k-j) (2 - 1/2^(k-j)) zeta(j)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    c0 = (-1) ** (k - 1) * (2 - Fraction(3, 2 ** k))
    zeta = {j: (-1) ** (k - j) * (2 - Fraction(1, 2 ** (k - j))) for j in range(2, k + 1)}
    return ZetaCombo(c0, zeta)


def uk_series(k: int, prec: Precision = DEFAULT_PRECISION, head: int = 2000) -> Approx:
    """sum_{j>=1} 2 / (j^k (j+1)(j+2)), tail summed in powers of 1/j.

    For j > N, 2/((j+1)(j+2)) = 2 j^-2 sum_i (-1)^i (2^(i+1) - 1) j^-i, so
    the tail is a combination of Hurwitz zetas zeta(k+2+i, N+1); the
    truncation of that expansion is bounded geometrically (ratio 2/N).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    acc = math.fsum(2.0 * float(j) ** -k / ((j + 1) * (j + 2)) for j in range(1, head + 1))
    tail = 0.0
    bound = 4 * EPS * acc
    n0 = float(head + 1)
    terms = 12
    for i in range(terms):
        hz = hurwitz_zeta(k + 2 + i, n0)
        c = 2.0 * (-1) ** i * (2 ** (i + 1) - 1)
        tail += c * float(hz)
        bound += abs(c) * hz.bound
    # remainder: sum_{i>=terms} 2 * 2^(i+1) * sum_{j>N} j^-(k+2+i)
    r = 2.0 / n0
    bound += 4.0 * (r ** terms / (1 - r)) * n0 ** (-k - 1) * 2
    return Approx(acc + tail, bound)


def uk_genfun(z: float, prec: Precision = DEFAULT_PRECISION) -> Approx:
    """U(z) = 2/((1+z)(2+z)) * [1 + (2 - gamma - psi(1-z)) z] for |z| < 1."""
    if not abs(z) < 1:
        raise DomainError("uk_genfun needs |z| < 1")
    psi = digamma(1 - z, prec)
    pre = 2.0 / ((1 + z) * (2 + z))
    value = pre * (1 + (2 - EULER_GAMMA - psi) * z)
    return Approx(value, abs(pre * z) * psi.bound + 8 * EPS * abs(value))


def uk_value(k: int, prec: Precision = DEFAULT_PRECISION) -> RenewalValue:
    exact = uk_closed(k)
    ser = uk_series(k, prec)
    return RenewalValue(exact, float(ser), ser.bound)
