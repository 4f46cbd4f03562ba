"""The eleven acceptance criteria, one test each.

Every test prints a PASS/FAIL line (also collected into the terminal summary).
Tolerances and runtime ceilings are the contract values; nothing is loosened.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from zetarenewal.exact_perm import (
    brute_force_ukn,
    noninterference_check,
    u2_half_catalan,
    u2_limit,
    u2n_formula,
)
from zetarenewal.harmonic_mzv import identity_suite, uk_theta_series
from zetarenewal.record_chain import (
    GEM1,
    c_inf_pgf,
    ck11_table,
    ck_pmf_dp,
    mean_empty_ck,
    qhat,
    record_kernel,
    uk_strict_path,
)
from zetarenewal.renewal import QuadraticQ, quadratic_renewal, quadratic_stats, u_to_f
from zetarenewal.simulation import (
    RngConfig,
    chain_vs_records_test,
    engel_vs_chain_test,
    estimate_ck,
    estimate_uk,
)
from zetarenewal.zeta_combo import ZetaCombo, uk_closed, uk_recursion, uk_series

ZERO = ZetaCombo()


@contextmanager
def criterion(number: int, title: str, limit_s: float | None = None):
    """Report one criterion; failures inside the block (or a blown runtime) mark it FAIL."""
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        secs = time.perf_counter() - t0
        slow = limit_s is not None and secs >= limit_s
        status = "PASS" if ok and not slow else "FAIL"
        note = f" (runtime {secs:.2f}s" + (f", limit {limit_s:g}s)" if limit_s else ")")
        line = f"{status} criterion {number}: {title}{note}"
        print(line)
        ACCEPTANCE_LINES.append(line)
    assert not slow, f"runtime {secs:.2f}s exceeds {limit_s}s"


def test_c01_recursion_equals_closed_form():
    with criterion(1, "u_k recursion == closed form, k = 0..30, exact", 1.0):
        bad = [k for k in range(31) if uk_recursion(k) != uk_closed(k)]
        assert not bad, bad


def test_c02_three_routes():
    with criterion(2, "exact vs series vs strict-path routes, k = 1..12", 60.0):
        for k in range(1, 13):
            ex = uk_closed(k).eval()
            for other in (uk_series(k), uk_strict_path(k, 1)):
                budget = ex.bound + other.bound
                assert budget <= 1e-9, (k, budget)
                assert abs(ex - other) <= budget, (k, abs(ex - other), budget)


def test_c03_reference_values():
    with criterion(3, "u_0..u_3 exact, u_25 just above 1/3, limit law at 0"):
        assert uk_closed(0) == ZetaCombo(1)
        assert uk_closed(1) == ZetaCombo(Fraction(1, 2))
        assert uk_closed(2) == ZetaCombo(Fraction(-5, 4), {2: 1})
        assert uk_closed(3) == ZetaCombo(Fraction(13, 8), {2: Fraction(-3, 2), 3: 1})
        gap = uk_series(25) - 1 / 3
        assert 0 < gap < 1e-6, gap
        assert abs(c_inf_pgf(GEM1, 0.0) - 1 / 3) <= 1e-12


def test_c04_positivity():
    with criterion(4, "u_k > 1/3 and f_k > 0 for k <= 30"):
        assert all(uk_series(k) > 1 / 3 for k in range(31))
        u = [float(uk_closed(k).eval()) for k in range(31)]
        f = u_to_f(u, 30)
        assert all(f[k] > 0 for k in range(1, 31))


def test_c05_quadratic_example():
    with criterion(5, "q(n) = (n+1)(n+2)/2: u_0, mean, variance, u_1, match with series"):
        q = QuadraticQ.from_coeffs(Fraction(1, 2), Fraction(3, 2), 1)
        seq = quadratic_renewal(q, 15)
        st = quadratic_stats(q)
        assert abs(seq[0] - 1) <= 1e-10
        assert st.mean == 3 and isinstance(st.mean, Fraction)
        assert abs(st.variance - 11) <= 1e-9
        assert abs(st.u1 - 0.5) <= 1e-10
        assert max(abs(seq[k] - uk_series(k)) for k in range(16)) <= 1e-10


def test_c06_record_equivalence():
    with criterion(6, "record kernel == chain kernel on m <= n <= 30; two-sample test at 1e5 paths"):
        for theta in (Fraction(1, 2), Fraction(1), Fraction(2)):
            base = lambda n, th=theta: qhat(1, n, th)
            for m in range(1, 31):
                for n in range(m, 31):
                    a, b = record_kernel(m, n, base), qhat(m, n, theta)
                    assert abs(float(a) - float(b)) <= 1e-14 and a == b
        rep = chain_vs_records_test(GEM1, 100_000, 2, rng=RngConfig(2024))
        print(f"  two-sample chi-square: X2={rep.statistic:.1f} df={rep.df} z={rep.z:.2f}")
        assert rep.passed(3.0)


def test_c07_ck_table():
    with criterion(7, "C_k dynamic program vs exact rows, k <= 4; row sums; mean of C_2"):
        for k in range(1, 5):
            dp = ck_pmf_dp(k, GEM1, 100_000)
            row = ck11_table(k)
            for j, c in enumerate(row):
                assert abs(dp.probs[j] - float(c.eval())) <= dp.truncation_mass + 1e-10, (k, j)
            assert sum(row, ZERO) == ZetaCombo(1)
        inner = sum((j * c for j, c in enumerate(ck11_table(2))), ZERO)
        assert inner == mean_empty_ck(2) == ZetaCombo(Fraction(5, 2), {2: -1})


def test_c08_identity_suite():
    with criterion(8, "harmonic-sum and MZV identity residuals <= 1e-8", 300.0):
        rep = identity_suite(k_max=6, ohno5_max=8, duality_max=6)
        names = {r.name for r in rep.results}
        required = {"hsumk", "ohno3", "ohno4", "ohno5", "euler_h2", "euler_H2", "hstar2_split",
                    "zeta_minus_one", "duality"}
        assert required <= names, required - names
        params = lambda name: sorted(r.param for r in rep.results if r.name == name)
        assert params("ohno5") == list(range(2, 9))
        assert params("duality") == list(range(2, 7))
        for name in ("hsumk", "ohno3", "ohno4"):
            assert set(range(1, 7)) <= set(params(name)), name
        for r in rep.results:
            assert r.residual <= 1e-8, (r.name, r.param, r.residual)
            assert r.ok, (r.name, r.param)


def test_c09_permutation_oracle():
    with criterion(9, "five-term u_{2:n} == enumeration, n <= 8; u_{1:n}; u_{2:3}; noninterference", 120.0):
        for theta in (Fraction(1, 2), Fraction(1), Fraction(2)):
            for n in range(3, 9):
                assert u2n_formula(n, theta) == brute_force_ukn(2, n, theta), (theta, n)
            for n in range(2, 9):
                assert brute_force_ukn(1, n, theta) == 1 / (1 + theta)
            for n in range(4, 10):
                assert noninterference_check(n, theta) == 0
        assert brute_force_ukn(2, 3, 1) == Fraction(5, 6)


def test_c10_monte_carlo():
    with criterion(10, "Monte Carlo at 1e6 trials: u_1, u_2, C_2 row, Engel digits; determinism", 120.0):
        e1 = estimate_uk(1, 1.0, 10 ** 6, rng=RngConfig(1))
        e2 = estimate_uk(2, 1.0, 10 ** 6, rng=RngConfig(2))
        print(f"  u_1 z={e1.z_score(0.5):.2f}  u_2 z={e2.z_score(0.394934):.2f}")
        assert e1.within(0.5, 4.0)
        assert e2.within(0.394934, 4.0)
        assert estimate_uk(2, 1.0, 10 ** 6, rng=RngConfig(2)).mean == e2.mean
        ck = estimate_ck(2, GEM1, 10 ** 6, rng=RngConfig(3))
        for j, c in enumerate(ck11_table(2)):
            assert ck.pmf[j].within(float(c.eval()), 4.0), j
        rep = engel_vs_chain_test(100_000, 2, rng=RngConfig(4))
        print(f"  Engel chi-square: X2={rep.statistic:.1f} df={rep.df} z={rep.z:.2f}")
        assert rep.passed(3.0)


def test_c11_general_theta():
    with criterion(11, "GEM(theta) u_2 vs permutation limit, theta in {1/2, 1, 2, 3}; Catalan route"):
        for theta in (0.5, 1.0, 2.0, 3.0):
            lim = u2_limit(theta)
            assert lim.agree()
            assert abs(uk_theta_series(2, theta) - lim.value) <= 1e-8, theta
        assert abs(u2_half_catalan() - u2_limit(0.5).value) <= 1e-10
