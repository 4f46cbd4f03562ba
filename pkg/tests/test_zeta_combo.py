from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetarenewal.special_fn import DomainError
from zetarenewal.zeta_combo import (
    ONE,
    ZERO,
    RenewalValue,
    ZetaCombo,
    uk_closed,
    uk_genfun,
    uk_recursion,
    uk_series,
    uk_value,
)

fractions = st.fractions(min_value=-100, max_value=100, max_denominator=50)
combos = st.builds(
    ZetaCombo,
    fractions,
    st.dictionaries(st.integers(2, 12), fractions, max_size=5),
)


def mp_uk(k: int):
    mpmath.mp.dps = 30
    return mpmath.nsum(lambda j: 2 / (j ** k * (j + 1) * (j + 2)), [1, mpmath.inf])


# -- the combo type -----------------------------------------------------------


def test_canonical_form_drops_zeros():
    assert ZetaCombo(0, {2: 0, 3: 1}) == ZetaCombo.zeta(3)
    assert ZetaCombo(0, {2: 0}) == ZERO
    with pytest.raises(DomainError):
        ZetaCombo(0, {1: 1})


def test_str_rendering():
    assert str(uk_closed(2)) == "zeta(2) - 5/4"
    assert str(uk_closed(3)) == "-3/2*zeta(2) + zeta(3) + 13/8"
    assert str(ZERO) == "0"
    assert str(ONE) == "1"


@given(combos, combos, combos)
def test_module_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a - a == ZERO
    assert a + ZERO == a


@given(combos, fractions, fractions)
def test_scalar_distributes(a, s, t):
    assert (s + t) * a == s * a + t * a
    if s:
        assert (a * s) / s == a


@given(combos)
def test_json_round_trip(a):
    assert ZetaCombo.from_json(a.to_json()) == a
    assert hash(ZetaCombo.from_dict(a.to_dict())) == hash(a)


@given(combos, combos)
@settings(max_examples=50, deadline=None)
def test_eval_is_linear(a, b):
    lhs = (a + b).eval()
    rhs = float(a.eval()) + float(b.eval())
    assert abs(lhs - rhs) <= lhs.bound + a.eval().bound + b.eval().bound + 1e-12


def test_eval_against_mpmath():
    c = ZetaCombo(Fraction(13, 8), {2: Fraction(-3, 2), 3: 1})
    ref = mpmath.mpf(13) / 8 - mpmath.mpf(3) / 2 * mpmath.zeta(2) + mpmath.zeta(3)
    v = c.eval()
    assert abs(v - float(ref)) <= v.bound + 1e-16


# -- u_k ----------------------------------------------------------------------


def test_small_values():
    assert uk_recursion(0) == ONE
    assert uk_recursion(1) == ZetaCombo(Fraction(1, 2))
    assert uk_recursion(2) == ZetaCombo(Fraction(-5, 4), {2: 1})
    assert uk_recursion(3) == ZetaCombo(Fraction(13, 8), {2: Fraction(-3, 2), 3: 1})


@pytest.mark.parametrize("k", range(0, 41))
def test_recursion_equals_closed_form(k):
    assert uk_recursion(k) == uk_closed(k)


@pytest.mark.parametrize("k", [1, 2, 3, 5, 8, 13, 20, 30])
def test_series_against_mpmath(k):
    s = uk_series(k)
    assert abs(s - float(mp_uk(k))) <= s.bound + 1e-16
    assert s.bound < 1e-13


@pytest.mark.parametrize("k", range(1, 25))
def test_exact_and_series_agree(k):
    assert uk_value(k).consistent()


def test_genfun_taylor_coefficients():
    """Coefficients of U(z) recovered on a circle match the exact u_k."""
    import numpy as np

    from zetarenewal.special_fn import taylor_coefficients

    coeffs = taylor_coefficients(lambda z: complex(_genfun_complex(z)), 12, radius=0.5, points=128)
    for k in range(13):
        assert abs(coeffs[k].real - float(uk_closed(k).eval())) < 1e-12
    assert abs(uk_genfun(0.0) - 1.0) < 1e-15
    with pytest.raises(DomainError):
        uk_genfun(1.0)


def _genfun_complex(z):
    from zetarenewal.special_fn import EULER_GAMMA, digamma_complex

    return 2 / ((1 + z) * (2 + z)) * (1 + (2 - EULER_GAMMA - digamma_complex(1 - z)) * z)


@pytest.mark.parametrize("z", [-0.7, -0.2, 0.0, 0.4, 0.9])
def test_genfun_against_power_series(z):
    direct = sum(float(uk_series(k)) * z ** k for k in range(0, 400))
    g = uk_genfun(z)
    assert abs(g - direct) < 1e-10 + g.bound


@given(st.integers(0, 28))
def test_decreasing_to_one_third(k):
    assert uk_series(k) > uk_series(k + 1) > 1 / 3


def test_renewal_value_rejects_negative_bound():
    with pytest.raises(ValueError):
        RenewalValue(ONE, 1.0, -1.0)


@pytest.mark.parametrize("k", range(2, 31))
def test_recursion_identity_as_combos(k):
    lhs = 2 * uk_closed(k) + 3 * uk_closed(k - 1) + uk_closed(k - 2)
    assert lhs == 2 * ZetaCombo.zeta(k)


@pytest.mark.parametrize("k", range(0, 21))
def test_closed_form_eval_within_series_bound(k):
    ev, s = uk_closed(k).eval(), uk_series(k)
    assert abs(ev - s) <= ev.bound + s.bound
