"""Renewal sequences from stick-breaking, record chains, and the zeta and
harmonic-sum identities behind them, each computed by more than one route."""

from __future__ import annotations

__version__ = "0.1.0"

from .exact_perm import Eppf, brute_force_ukn, noninterference_check, u2_limit, u2n_formula
from .harmonic_mzv import identity_suite, mzv, mzv_star, uk_theta_series
from .record_chain import GEM1, ChainParams, ck11_table, ck_pmf_dp, path_prob, qhat, qk_dist, record_kernel, uk_strict_path
from .renewal import QuadraticQ, quadratic_renewal, quadratic_stats, u_to_f
from .simulation import MonteCarloEstimate, RngConfig, estimate_ck, estimate_uk, estimate_ukn
from .special_fn import Approx, DomainError, Precision
from .zeta_combo import ZetaCombo, uk_closed, uk_recursion, uk_series

__all__ = [
    "Approx", "ChainParams", "DomainError", "Eppf", "GEM1", "MonteCarloEstimate", "Precision",
    "QuadraticQ", "RngConfig", "ZetaCombo", "brute_force_ukn", "ck11_table", "ck_pmf_dp",
    "estimate_ck", "estimate_uk", "estimate_ukn", "identity_suite", "mzv", "mzv_star",
    "noninterference_check", "path_prob", "qhat", "qk_dist", "quadratic_renewal", "quadratic_stats",
    "record_kernel", "u2_limit", "u2n_formula", "u_to_f", "uk_closed", "uk_recursion", "uk_series",
    "uk_strict_path", "uk_theta_series",
]
