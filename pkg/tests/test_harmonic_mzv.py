from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetarenewal.harmonic_mzv import (
    HarmonicCache,
    MzvIndex,
    _nested_generic,
    a_coeff,
    duality_check,
    h_k,
    h_power,
    h_star,
    h_star_table,
    harmonic_dirichlet_sum,
    hurwitz_multi,
    identity_suite,
    mzv,
    mzv_star,
    ohno_xi,
    ohno_xi_integral,
    star_expand,
    uk_theta_series,
    zeta_minus_one_sum,
)
from zetarenewal.special_fn import DomainError
from zetarenewal.zeta_combo import uk_closed

mpmath.mp.dps = 30
Z = {k: float(mpmath.zeta(k)) for k in range(2, 12)}


def close(v, ref, slack=1e-13):
    return abs(float(v) - ref) <= v.bound + slack * max(1.0, abs(ref))


# -- harmonic sums -------------------------------------------------------------


@given(st.integers(0, 4), st.integers(0, 9))
def test_h_star_brute_force(k, n):
    brute = sum((Fraction(1, math.prod(c)) for c in combinations_with_replacement(range(1, n + 1), k)),
                Fraction(0))
    assert h_star(k, n) == brute


def test_h_power_values():
    assert h_power(2, 2) == Fraction(5, 4)
    assert h_power(1, 4) == Fraction(25, 12)


def test_h_star_table_matches_exact():
    t = h_star_table(3, 40)
    for k in range(4):
        for n in (0, 1, 7, 40):
            assert abs(t[k, n] - float(h_star(k, n))) < 1e-13


def test_cache_switches_to_floats_beyond_limit():
    c = HarmonicCache(k_max=3, n_max=200, exact_limit=50)
    assert isinstance(c.h_star(2, 50), Fraction)
    assert isinstance(c.h_star(2, 120), float)
    assert abs(c.h_star(2, 120) - float(h_star(2, 120))) < 1e-12


# -- indices -------------------------------------------------------------------


def test_index_validation():
    assert MzvIndex((1, 1, 3)).ones_prefix() == (2, 3)
    assert MzvIndex((2, 1, 3)).ones_prefix() is None
    assert MzvIndex((2, 3)).weight == 5
    with pytest.raises(DomainError):
        MzvIndex((2, 1))
    with pytest.raises(DomainError):
        MzvIndex(())


@given(st.lists(st.integers(1, 4), min_size=1, max_size=5).map(lambda s: s[:-1] + [max(s[-1], 2)]))
def test_star_expand_shape(s):
    parts = star_expand(s)
    assert len(parts) == 2 ** (len(s) - 1)
    assert all(p.weight == sum(s) for p in parts)
    assert len(set(parts)) == len(parts)


# -- values --------------------------------------------------------------------


@pytest.mark.parametrize("idx,ref", [
    ((2,), Z[2]),
    ((1, 2), Z[3]),
    ((1, 3), Z[4] / 4),
    ((2, 2), (Z[2] ** 2 - Z[4]) / 2),
    ((1, 1, 2), Z[4]),
    ((2, 3), 3 * Z[2] * Z[3] - 11 / 2 * Z[5]),
    ((3, 2), 9 / 2 * Z[5] - 2 * Z[2] * Z[3]),
    ((2, 2, 2), math.pi ** 6 / 5040),
])
def test_mzv_closed_forms(idx, ref):
    assert close(mzv(idx), ref, 1e-11)


@pytest.mark.parametrize("idx", [(1, 2), (2, 2), (1, 1, 2), (2, 3), (1, 2, 2)])
def test_star_is_sum_over_merges(idx):
    total = sum(float(mzv(p)) for p in star_expand(idx))
    bound = sum(mzv(p).bound for p in star_expand(idx))
    v = mzv_star(idx)
    assert abs(v - total) <= v.bound + bound + 1e-12


def test_star_values():
    assert close(mzv_star((1, 2)), 2 * Z[3], 1e-11)
    assert close(mzv_star((2, 2)), (Z[2] ** 2 + Z[4]) / 2, 1e-11)


@pytest.mark.parametrize("k", range(2, 9))
def test_duality(k):
    d = duality_check(k)
    assert d <= d.bound + 1e-13


def test_depth_limit():
    with pytest.raises(DomainError):
        mzv((2, 1, 1, 1, 1, 2))
    assert close(mzv((1,) * 6 + (2,)), Z[8], 1e-11)


def test_hurwitz_depth_two_against_digamma_sum():
    x = 0.5
    f = lambda n: (n + x) ** -3 * (mpmath.digamma(n + x) - mpmath.digamma(1 + x))
    ref = mpmath.nsum(f, [1, mpmath.inf], method="euler-maclaurin")
    assert close(hurwitz_multi((1, 3), x), float(ref), 1e-10)


@pytest.mark.parametrize("x", [0.0, 0.5, 3.0])
def test_ones_route_against_nested_route(x):
    fast = hurwitz_multi((1, 1, 2), x)
    slow = _nested_generic((1, 1, 2), x, False, 100_000)
    assert abs(fast - slow) <= fast.bound + slow.bound


def test_h_k_at_zero_is_zeta():
    for k in range(2, 7):
        assert close(h_k(k, 0.0), Z[k], 1e-11)


# -- theta series and helpers --------------------------------------------------


@pytest.mark.parametrize("k", range(1, 9))
def test_theta_series_at_one(k):
    v = uk_theta_series(k, 1.0)
    ev = uk_closed(k).eval()
    assert abs(v - ev) <= v.bound + ev.bound


def test_a_coeff_brute_force():
    for theta in (1, 2, 4):
        for i in range(1, theta + 2):
            brute = sum((Fraction(1, math.prod(c)) for c in combinations(range(1, theta + 2), i)), Fraction(0))
            assert a_coeff(i, theta) == theta ** i * brute
    with pytest.raises(DomainError):
        a_coeff(1, Fraction(1, 2))


@pytest.mark.parametrize("m,k", [(1, 1), (1, 3), (2, 2), (3, 4)])
def test_xi_series_against_integral(m, k):
    a, b = ohno_xi(m, k), ohno_xi_integral(m, k)
    assert abs(a - b) <= a.bound + b.bound + 1e-11


@pytest.mark.parametrize("kind,k,s,shift,ref", [
    ("h", 1, 2, 0, 2 * Z[3]),
    ("h", 1, 3, 0, 5 / 4 * Z[4]),
    ("h", 2, 3, 0, 7 / 2 * Z[5] - Z[2] * Z[3]),
    ("power", 2, 2, 0, 7 / 4 * Z[4]),
    ("h", 1, 2, 1, Z[3]),
])
def test_euler_sums_literature_values(kind, k, s, shift, ref):
    assert close(harmonic_dirichlet_sum(kind, k, s, shift), ref, 1e-11)


def test_zeta_minus_one_telescopes():
    v = zeta_minus_one_sum()
    assert abs(v - 1) <= v.bound


def test_identity_suite_small():
    rep = identity_suite(k_max=3, ohno5_max=4, duality_max=4)
    assert all(r.ok for r in rep.results)
    assert rep.all_within(1e-8)
    names = {r.name for r in rep.results}
    assert {"hsumk", "ohno3", "ohno4", "ohno5", "duality", "zeta_minus_one"} <= names


@given(st.integers(1, 40), st.integers(1, 30))
@settings(max_examples=50, deadline=None)
def test_h_star_increases_in_k_below_n(k, n):
    a, b = h_star(k, n), h_star(k + 1, n)
    assert a <= b <= n


def test_h_star_tends_to_n():
    assert abs(h_star(200, 5) - 5) < 1e-6


def test_star_matches_merges_for_all_small_indices():
    from itertools import product

    for depth in (1, 2, 3):
        for s in product(range(1, 5), repeat=depth):
            if s[-1] < 2:
                continue
            v = mzv_star(s)
            parts = star_expand(s)
            total = sum(float(mzv(p)) for p in parts)
            bound = sum(mzv(p).bound for p in parts)
            assert abs(v - total) <= v.bound + bound + 1e-12, s


convergent = st.lists(st.integers(1, 3), min_size=1, max_size=3).map(lambda s: tuple(s[:-1] + [max(s[-1], 2)]))


@given(convergent, st.sampled_from([1.0, 2.0, 3.0]))
@settings(max_examples=15, deadline=None)
def test_hurwitz_shift_relation(nu, x):
    # zeta(nu; x-1) = zeta(nu; x) + x^-nu_1 zeta(nu_2, ...; x)
    lhs, head = hurwitz_multi(nu, x - 1), hurwitz_multi(nu, x)
    rest = hurwitz_multi(nu[1:], x) if len(nu) > 1 else None
    rest_val, rest_bound = (float(rest), rest.bound) if rest is not None else (1.0, 0.0)
    residual = abs(lhs - (head + x ** -nu[0] * rest_val))
    assert residual <= lhs.bound + head.bound + x ** -nu[0] * rest_bound + 1e-13
