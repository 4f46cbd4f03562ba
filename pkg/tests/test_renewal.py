from __future__ import annotations

import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetarenewal.renewal import (
    FirstRenewalDist,
    NormalizationError,
    QuadraticQ,
    RenewalSeq,
    f_to_u,
    kaluza_check,
    normalize_a,
    quadratic_renewal,
    quadratic_stats,
    quadratic_u,
    recursion_residuals,
    renewal_table,
    table_to_csv,
    table_to_json,
    u_to_f,
)
from zetarenewal.special_fn import DomainError
from zetarenewal.zeta_combo import uk_closed, uk_series

EXAMPLE = QuadraticQ.from_coeffs(Fraction(1, 2), Fraction(3, 2), 1)


def mp_mean_variance(q: QuadraticQ):
    """Mean and variance of the first-renewal law from 1/U(z), U(z) = sum_n n/(q(n)(n-z)).

    The n = 1 pole is split off so 1/U is analytic at z = 1.
    """
    mpmath.mp.dps = 30
    a, b, c = (mpmath.mpf(float(x)) for x in (q.a, q.b, q.c))
    qq = lambda n: a * n * n + b * n + c
    q1 = qq(1)

    def V(z):
        return mpmath.nsum(lambda n: n / (qq(n) * (n - z)), [2, mpmath.inf])

    def F(z):
        return 1 - q1 * (1 - z) / (1 + q1 * (1 - z) * V(z))

    d = mpmath.taylor(F, 1, 2)
    mean = d[1]
    second = 2 * d[2]
    return float(mean), float(second + mean - mean ** 2)


# -- generic renewal algebra --------------------------------------------------

first_laws = st.lists(st.fractions(min_value=0, max_value=1, max_denominator=30), min_size=1, max_size=8).filter(
    lambda xs: sum(xs) <= 1)


@given(first_laws)
def test_f_to_u_to_f_round_trip_exact(f):
    k = len(f)
    u = f_to_u(f, k)
    assert u[0] == 1
    back = u_to_f(u, k)
    assert back.f[1:] == f


@given(st.lists(st.fractions(min_value=Fraction(1, 20), max_value=1, max_denominator=40), min_size=2, max_size=10))
@settings(max_examples=80)
def test_kaluza_sequences_have_nonnegative_first_renewals(ratios):
    """Nondecreasing ratios u_k/u_{k-1} give a Kaluza sequence, hence f_k >= 0."""
    ratios = sorted(ratios)
    u = [Fraction(1)]
    for r in ratios:
        u.append(u[-1] * r)
    ok, _ = kaluza_check(u, len(u) - 2)
    assert ok
    f = u_to_f(u, len(u) - 1)
    assert min(f.f[1:]) >= 0


def test_kaluza_detects_violation():
    ok, where = kaluza_check([1, 0.9, 0.2, 0.2], 2)
    assert not ok and where == 1


def test_first_renewal_dist_helpers():
    d = FirstRenewalDist([0, Fraction(1, 2), Fraction(1, 4)])
    assert d.k_max == 2 and d.total() == Fraction(3, 4) and d.mean() == 1
    with pytest.raises(ValueError):
        FirstRenewalDist([0, 0.8, 0.5]).validate()
    with pytest.raises(ValueError):
        RenewalSeq([0.5, 0.2]).validate()


# -- the worked example q(n) = (n+1)(n+2)/2 ----------------------------------


def test_example_roots_and_normalization():
    assert sorted([EXAMPLE.r1, EXAMPLE.r2]) == [-2, -1]
    assert abs(normalize_a(-1, -2) - 0.5) < 1e-15


def test_example_stats():
    st_ = quadratic_stats(EXAMPLE)
    assert st_.mean == 3 and isinstance(st_.mean, Fraction)
    assert st_.u_inf == Fraction(1, 3)
    assert abs(st_.variance - 11) <= max(st_.variance_bound, 1e-9)
    assert abs(st_.u1 - 0.5) <= max(st_.u1_bound, 1e-10)


def test_example_matches_gem_series():
    seq = quadratic_renewal(EXAMPLE, 15)
    for k in range(16):
        assert abs(seq[k] - uk_series(k)) <= 1e-10


@pytest.mark.parametrize("roots", [(-1.0, -2.0), (-0.5, -3.0), (0.25, -4.0)])
def test_mean_and_variance_against_generating_function(roots):
    q = QuadraticQ.from_roots(*roots)
    s = quadratic_stats(q)
    mean, var = mp_mean_variance(q)
    assert abs(float(s.mean) - mean) < 1e-9
    assert abs(s.variance - var) < 1e-8 * max(1.0, var)


def test_complex_roots_satisfy_recursion():
    q = QuadraticQ.from_roots(-1 + 2j, -1 - 2j)
    seq = quadratic_renewal(q, 12)
    assert abs(seq[0] - 1) < 1e-12
    for k, res, allowed in recursion_residuals(q, seq):
        assert res <= allowed, k


def test_gem_recursion_residuals():
    seq = quadratic_renewal(EXAMPLE, 20)
    for k, res, allowed in recursion_residuals(EXAMPLE, seq):
        assert res <= allowed, k
    for k in range(21):
        ev = uk_closed(k).eval()
        assert abs(seq[k] - ev) <= seq.bounds[k] + ev.bound


def test_double_root_normalization():
    # sum 1/(a (n+1)^2) = 1 needs a = zeta(2) - 1
    a = normalize_a(-1.0, -1.0)
    assert abs(a - (float(mpmath.zeta(2)) - 1)) < 1e-14
    q = QuadraticQ.from_roots(-1.0, -1.0)
    assert abs(quadratic_u(q, 0) - 1) < 1e-12


def test_unnormalized_q_is_rejected():
    with pytest.raises(NormalizationError) as err:
        quadratic_renewal(QuadraticQ.from_coeffs(2, 2, 0), 3)
    assert abs(err.value.u0 - 0.5) < 1e-12


def test_bad_quadratics():
    with pytest.raises(DomainError):
        QuadraticQ.from_coeffs(1, -3, 1)       # q(1) < 0
    with pytest.raises(DomainError):
        QuadraticQ.from_roots(2.0, -1.0)       # pole at n = 2
    with pytest.raises(DomainError):
        QuadraticQ.from_coeffs(0, 1, 1)


@given(st.integers(0, 200))
@settings(max_examples=30, deadline=None)
def test_large_k_tends_to_one_over_q1(k):
    v = quadratic_u(EXAMPLE, k)
    assert 1 / 3 <= v + 1e-15 <= 1 + 1e-12


def test_table_export():
    rows = renewal_table(EXAMPLE, 5)
    assert [r["k"] for r in rows] == list(range(6))
    assert rows[0]["f"] is None
    assert abs(rows[1]["f"] - 0.5) < 1e-12
    csv_text = table_to_csv(rows)
    assert csv_text.splitlines()[0] == "k,u,u_bound,f"
    assert json.loads(table_to_json(rows))[2]["k"] == 2


NORMALIZED = [(-1.0, -2.0), (-0.5, -3.0), (0.25, -4.0), (-1 + 2j, -1 - 2j), (-3.0, -3.0)]


@pytest.mark.parametrize("roots", NORMALIZED)
def test_first_renewal_law_of_normalized_quadratics(roots):
    q = QuadraticQ.from_roots(*roots)
    seq = quadratic_renewal(q, 250)
    f = u_to_f(seq, 250).f
    assert min(f[1:]) >= -1e-12
    assert sum(f[1:]) <= 1 + 1e-10
    mean = sum(k * fk for k, fk in enumerate(f))
    assert abs(mean - float(q(1))) < 1e-8


@pytest.mark.parametrize("roots", NORMALIZED[:3])
@pytest.mark.parametrize("z", [0.1, 0.5, 0.9])
def test_generating_functions_multiply_to_one(roots, z):
    q = QuadraticQ.from_roots(*roots)
    seq = quadratic_renewal(q, 400)
    f = u_to_f(seq, 400).f
    U = sum(uk * z ** k for k, uk in enumerate(seq.u))
    F = sum(fk * z ** k for k, fk in enumerate(f))
    assert abs(U * (1 - F) - 1) < 1e-9
