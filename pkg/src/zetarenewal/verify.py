"""Named cross-checks grouped into suites, each reporting residual vs budget."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import zeta_combo
from .exact_perm import Eppf, brute_force_ukn, noninterference_check, u2_half_catalan, u2_limit, u2n_formula
from .harmonic_mzv import identity_suite, uk_theta_series
from .record_chain import (
    GEM1,
    ChainParams,
    c_inf_pgf,
    c_inf_pmf_all,
    ck11_table,
    ck_pmf_dp,
    mean_empty_ck,
    qhat,
    record_kernel,
    uk_strict_path,
)
from .renewal import QuadraticQ, kaluza_check, quadratic_renewal, quadratic_stats, u_to_f
from .special_fn import DEFAULT_PRECISION, Precision
from .zeta_combo import ZetaCombo, uk_recursion, uk_series

SUITES = ("zeta", "renewal", "chain", "mzv", "perm")


@dataclass(frozen=True)
class CheckResult:
    name: str
    suite: str
    residual: float
    budget: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "suite": self.suite, "residual": self.residual,
                "budget": self.budget, "passed": self.passed, "detail": self.detail}


def sign_flipped_closed(k: int) -> ZetaCombo:
    """The closed form with the sign of its rational part flipped (mutation probe)."""
    c = zeta_combo.uk_closed(k)
    return ZetaCombo(-c.c0, c.coeffs)


def _exact(name, suite, mismatches: int, detail="") -> CheckResult:
    return CheckResult(name, suite, float(mismatches), 0.0, mismatches == 0, detail)


def _within(name, suite, residual: float, budget: float, detail="") -> CheckResult:
    return CheckResult(name, suite, float(residual), float(budget), residual <= budget, detail)


# ---------------------------------------------------------------------------


def check_zeta(prec: Precision, closed: Optional[Callable[[int], ZetaCombo]] = None) -> list[CheckResult]:
    closed = closed or zeta_combo.uk_closed
    out = []
    bad = [k for k in range(31) if uk_recursion(k) != closed(k)]
    out.append(_exact("recursion_eq_closed_k0_30", "zeta", len(bad), f"mismatch at k={bad[:5]}" if bad else ""))

    worst, worst_budget, ok = 0.0, 0.0, True
    for k in range(1, 13):
        ex = closed(k).eval(prec)
        ser = uk_series(k, prec)
        ch = uk_strict_path(k, 1, prec)
        for other in (ser, ch):
            r = abs(float(ex) - float(other))
            b = ex.bound + other.bound
            ok &= r <= b and b <= 1e-9
            if r > worst:
                worst, worst_budget = r, b
    out.append(CheckResult("three_routes_k1_12", "zeta", worst, worst_budget, ok))

    expect = {0: ZetaCombo(1), 1: ZetaCombo(Fraction(1, 2)),
              2: ZetaCombo(Fraction(-5, 4), {2: 1}),
              3: ZetaCombo(Fraction(13, 8), {2: Fraction(-3, 2), 3: 1})}
    out.append(_exact("small_k_values", "zeta", sum(closed(k) != v for k, v in expect.items())))

    gap = float(uk_series(25, prec)) - 1 / 3
    out.append(CheckResult("u25_above_limit", "zeta", gap, 1e-6, 0 < gap < 1e-6))
    out.append(_within("limit_pgf_at_zero", "zeta", abs(c_inf_pgf(GEM1, 0.0) - 1 / 3), 1e-12))
    low = [k for k in range(31) if not float(uk_series(k, prec)) > 1 / 3]
    out.append(_exact("uk_above_one_third_k0_30", "zeta", len(low)))
    return out


def check_renewal(prec: Precision) -> list[CheckResult]:
    out = []
    exact_u = [float(zeta_combo.uk_closed(k).eval(prec)) for k in range(32)]
    f = u_to_f(exact_u, 30)
    out.append(_exact("first_renewal_positive_k1_30", "renewal", sum(1 for k in range(1, 31) if not f[k] > 0)))
    ok, where = kaluza_check(exact_u, 30)
    out.append(_exact("kaluza_k0_30", "renewal", 0 if ok else 1, "" if ok else f"fails at {where}"))

    q = QuadraticQ.from_coeffs(Fraction(1, 2), Fraction(3, 2), 1)
    seq = quadratic_renewal(q, 15, prec)
    st = quadratic_stats(q)
    out.append(_within("example_u0", "renewal", abs(seq[0] - 1), 1e-10))
    out.append(_exact("example_mean", "renewal", 0 if st.mean == 3 else 1))
    out.append(_within("example_variance", "renewal", abs(st.variance - 11), 1e-9))
    out.append(_within("example_u1", "renewal", abs(st.u1 - 0.5), 1e-10))
    worst = max(abs(seq[k] - float(uk_series(k, prec))) for k in range(16))
    out.append(_within("example_matches_series_k0_15", "renewal", worst, 1e-10))
    return out


def check_chain(prec: Precision) -> list[CheckResult]:
    out = []
    worst, bad = 0.0, 0
    for theta in (Fraction(1, 2), 1, 2):
        base = lambda n, th=theta: qhat(1, n, th)
        for m in range(1, 31):
            for n in range(m, 31):
                a, b = record_kernel(m, n, base), qhat(m, n, theta)
                bad += a != b
                worst = max(worst, abs(float(a) - float(b)))
    out.append(CheckResult("record_kernel_eq_qhat", "chain", worst, 1e-14, bad == 0 and worst <= 1e-14))

    worst, ok, allowed = 0.0, True, 0.0
    for k in range(1, 5):
        dp = ck_pmf_dp(k, GEM1, 100_000)
        allowed = max(allowed, dp.truncation_mass + 1e-10)
        row = ck11_table(k)
        for j, comb in enumerate(row):
            r = abs(dp.probs[j] - float(comb.eval(prec)))
            ok &= r <= dp.truncation_mass + 1e-10
            worst = max(worst, r)
        ok &= sum(row, ZetaCombo()) == ZetaCombo(1)
    out.append(CheckResult("ck_table_vs_dp_k1_4", "chain", worst, allowed, ok))

    inner = sum((j * c for j, c in enumerate(ck11_table(2))), ZetaCombo())
    out.append(_exact("mean_c2_two_routes", "chain", 0 if inner == mean_empty_ck(2) == ZetaCombo(Fraction(5, 2), {2: -1}) else 1))

    worst = 0.0
    for p in (ChainParams(1, 1), ChainParams(1, 2), ChainParams(2, 0.5), ChainParams(3, 1)):
        worst = max(worst, abs(sum(c_inf_pmf_all(p, 60)) - 1))
    out.append(_within("c_inf_sums_to_one", "chain", worst, 1e-10))
    return out


def check_mzv(prec: Precision) -> list[CheckResult]:
    rep = identity_suite(k_max=6, ohno5_max=8, duality_max=6)
    out = []
    for r in rep.results:
        name = r.name if r.param is None else f"{r.name}[{r.param}]"
        out.append(CheckResult(name, "mzv", r.residual, max(r.bound, 1e-8),
                               r.residual <= max(r.bound, 1e-8)))
    return out


def check_perm(prec: Precision) -> list[CheckResult]:
    out = []
    bad = 0
    for theta in (Fraction(1, 2), 1, 2):
        p = Eppf.ewens(theta)
        bad += sum(u2n_formula(n, p) != brute_force_ukn(2, n, theta) for n in range(3, 9))
        bad += sum(brute_force_ukn(1, n, theta) != 1 / (1 + Fraction(theta)) for n in range(2, 9))
    out.append(_exact("u2n_formula_vs_enumeration", "perm", bad))
    out.append(_exact("u23_five_sixths", "perm", 0 if brute_force_ukn(2, 3, 1) == Fraction(5, 6) else 1))
    nz = sum(noninterference_check(n, theta) != 0 for theta in (Fraction(1, 2), 1, 2, 3) for n in range(4, 10))
    out.append(_exact("noninterference_ewens_n4_9", "perm", nz))
    worst = 0.0
    for theta in (0.5, 1.0, 2.0, 3.0):
        lim = u2_limit(theta, prec)
        worst = max(worst, abs(lim.value - float(uk_theta_series(2, theta, prec))), lim.discrepancy)
    out.append(_within("u2_limit_vs_theta_series", "perm", worst, 1e-8))
    out.append(_within("u2_half_catalan", "perm", abs(u2_limit(0.5).value - u2_half_catalan(prec)), 1e-10))
    return out


_RUNNERS = {"zeta": check_zeta, "renewal": check_renewal, "chain": check_chain,
            "mzv": check_mzv, "perm": check_perm}


def run_suite(suite: str = "all", prec: Precision = DEFAULT_PRECISION,
              closed: Optional[Callable[[int], ZetaCombo]] = None) -> list[CheckResult]:
    """Run one suite (or all). closed overrides the closed form under test."""
    names = SUITES if suite == "all" else (suite,)
    out = []
    for s in names:
        if s not in _RUNNERS:
            raise ValueError(f"unknown suite {s!r}")
        if s == "zeta":
            out.extend(check_zeta(prec, closed))
        else:
            out.extend(_RUNNERS[s](prec))
    return out


def timed_suite(suite: str = "all", **kw) -> tuple[list[CheckResult], float]:
    t0 = time.perf_counter()
    res = run_suite(suite, **kw)
    return res, time.perf_counter() - t0
