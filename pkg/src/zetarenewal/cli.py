"""Command-line entry point: zetarenewal <command> [options].

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
Output is a JSON envelope (--json) or a short text rendering of it.
Exact rationals are always serialized as "p/q" strings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .exact_perm import MAX_ENUM_N, brute_force_ukn, u2_half_catalan, u2_limit, u2n_formula
from .harmonic_mzv import duality_check, identity_suite, mzv, mzv_star, uk_theta_series
from .record_chain import ChainParams, ck11_table, ck_pmf_dp, qk_dist, qk_dist_composition, rows_to_csv, uk_strict_path
from .renewal import NormalizationError, QuadraticQ, renewal_table, table_to_csv
from .simulation import RngConfig, chain_vs_records_test, estimate_ck, estimate_uk, estimate_ukn, simulate_chain
from .special_fn import DomainError, Precision
from .verify import SUITES, run_suite, sign_flipped_closed
from .zeta_combo import uk_closed, uk_series

SCHEMA_VERSION = 1
PREC_ENV = "ZETARENEWAL_REL_TOL"


class UsageError(Exception):
    pass


def default_precision() -> Precision:
    raw = os.environ.get(PREC_ENV)
    if not raw:
        return Precision()
    try:
        return Precision(rel_tol=float(raw))
    except ValueError as e:
        raise UsageError(f"{PREC_ENV}={raw!r}: {e}") from None


def _frac(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _theta(s: str) -> Fraction:
    try:
        th = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if th <= 0:
        raise argparse.ArgumentTypeError("theta must be positive")
    return th


def _num(th: Fraction):
    """int when integral, else float."""
    return int(th) if th.denominator == 1 else float(th)


def envelope(command: str, params: dict, values, error_bounds=None, seed=None, t0: float = 0.0) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "values": values,
        "error_bounds": error_bounds,
        "seed": seed,
        "wall_time": time.perf_counter() - t0,
    }


# ---------------------------------------------------------------------------
# Commands. Each returns (envelope, exit_code, text).
# ---------------------------------------------------------------------------


def cmd_uk(a, prec):
    th = a.theta
    params = {"k": a.k, "theta": _frac(th), "mode": a.mode}
    if a.k < 0:
        raise UsageError("k must be >= 0")
    if a.mode == "exact":
        if th != 1:
            raise UsageError("exact mode requires theta = 1")
        c = uk_closed(a.k)
        v = c.eval(prec)
        values = {"exact": str(c), "combo": c.to_dict(), "numeric": float(v)}
        return values, {"numeric": v.bound}, None, f"{c}\n{float(v):.15g}"
    if a.k == 0:
        return {"numeric": 1.0}, {"numeric": 0.0}, None, "1"
    if a.mode == "series":
        v = uk_series(a.k, prec) if th == 1 else uk_theta_series(a.k, float(th), prec)
    elif a.mode == "chain":
        v = uk_strict_path(a.k, _num(th), prec)
    else:
        cfg = RngConfig(a.seed)
        e = estimate_uk(a.k, float(th), a.trials, cfg, a.streams)
        return e.as_dict(), {"std_err": e.std_err}, a.seed, f"{e.mean:.10g} +- {e.std_err:.3g}"
    return {"numeric": float(v)}, {"numeric": v.bound}, None, f"{float(v):.15g}"


def cmd_verify(a, prec):
    closed = sign_flipped_closed if a.mutate == "sign-flip" else None
    res = run_suite(a.suite, prec, closed=closed)
    values = [r.as_dict() for r in res]
    failed = [r for r in res if not r.passed]
    text = "\n".join(f"{'PASS' if r.passed else 'FAIL'} {r.suite}/{r.name} residual={r.residual:.3g} "
                     f"budget={r.budget:.3g}" for r in res)
    return {"checks": values, "passed": not failed}, None, None, text, (1 if failed else 0)


def cmd_table(a, prec):
    th = a.theta
    if a.what == "ck":
        p = ChainParams(a.ell, _num(th))
        if p.ell == 1 and th == 1 and a.k <= 4:
            row = ck11_table(a.k)
            rows = [{"j": j, "exact": str(c), "p": float(c.eval(prec))} for j, c in enumerate(row)]
            bounds = {"truncation_mass": 0.0}
        else:
            d = ck_pmf_dp(a.k, p, a.n_max)
            rows = [{"j": j, "p": x, "p_completed": y} for j, (x, y) in enumerate(zip(d.probs, d.completed()))]
            bounds = {"truncation_mass": d.truncation_mass, "completed_tv": d.extra_repeat_bound}
    elif a.what == "qkdist":
        p = ChainParams(a.ell, _num(th))
        d = qk_dist(a.k, a.n_max) if p.ell == 1 and th == 1 else qk_dist_composition(a.k, a.n_max, p)
        rows = d.to_rows()
        bounds = {"truncation_mass": d.truncation_mass}
    elif a.what == "ukn":
        rows = []
        theta = th if th.denominator != 1 else int(th)
        for n in range(max(a.k, 1), a.n_max + 1):
            if a.k == 2 and n >= 3:
                v = u2n_formula(n, theta)
            elif n <= MAX_ENUM_N:
                v = brute_force_ukn(a.k, n, theta)
            else:
                raise UsageError(f"u_{{k:n}} for k != 2 is enumerated only up to n = {MAX_ENUM_N}")
            rows.append({"n": n, "exact": _frac(v), "p": float(v)})
        bounds = {"p": 0.0}
    else:
        if None in (a.a, a.b, a.c):
            raise UsageError("renewal table needs --a --b --c")
        q = QuadraticQ.from_coeffs(Fraction(a.a), Fraction(a.b), Fraction(a.c))
        try:
            rows = renewal_table(q, a.kmax, prec)
        except NormalizationError as e:
            raise UsageError(str(e)) from None
        bounds = {"u_bound": [r["u_bound"] for r in rows]}
    text = rows_to_csv(rows) if a.what != "renewal" else table_to_csv(rows)
    return {"rows": rows}, bounds, None, text.rstrip("\n")


def cmd_simulate(a, prec):
    th = float(a.theta)
    cfg = RngConfig(a.seed)
    if a.what == "uk":
        e = estimate_uk(a.k, th, a.trials, cfg, a.streams)
        vals = e.as_dict()
    elif a.what == "ukn":
        if a.n is None:
            raise UsageError("simulate ukn needs --n")
        e = estimate_ukn(a.k, a.n, th, a.trials, cfg, a.streams)
        vals = e.as_dict()
    elif a.what == "ck":
        est = estimate_ck(a.k, ChainParams(a.ell, th), a.trials, cfg, a.streams)
        vals = {"pmf": [x.as_dict() for x in est.pmf], "mean": est.mean.as_dict()}
    else:
        rep = chain_vs_records_test(ChainParams(a.ell, th), a.trials, max(a.k, 1), cfg)
        vals = {"two_sample": rep.as_dict(), "passed_3sigma": rep.passed(3.0)}
    vals["trials"] = a.trials
    return vals, None, a.seed, json.dumps(vals)


def cmd_mzv(a, prec):
    if a.op == "duality":
        r = duality_check(a.k, prec)
        ok = float(r) <= max(r.bound, 1e-8)
        return {"k": a.k, "residual": float(r), "passed": ok}, {"residual": r.bound}, None, \
            f"residual={float(r):.3g} bound={r.bound:.3g}", (0 if ok else 1)
    if not a.s:
        raise UsageError("mzv eval needs --s, e.g. --s 2,3")
    try:
        idx = tuple(int(x) for x in a.s.split(","))
    except ValueError:
        raise UsageError(f"bad index list {a.s!r}") from None
    v = (mzv_star if a.star else mzv)(idx, prec)
    return {"s": list(idx), "star": a.star, "numeric": float(v)}, {"numeric": v.bound}, None, f"{float(v):.15g}"


def cmd_identity_suite(a, prec):
    rep = identity_suite(a.k_max, a.ohno5_max, a.duality_max)
    bad = [r for r in rep.results if not r.ok]
    text = "\n".join(f"{'PASS' if r.ok else 'FAIL'} {r.name}{'' if r.param is None else f'[{r.param}]'} "
                     f"residual={r.residual:.3g}" for r in rep.results)
    return rep.as_dict(), None, None, text, (1 if bad else 0)


def cmd_ukn(a, prec):
    th = a.theta
    theta = int(th) if th.denominator == 1 else th
    if not 1 <= a.k <= a.n:
        raise UsageError("need 1 <= k <= n")
    if a.exact:
        if a.k == 2 and a.n >= 3:
            v = u2n_formula(a.n, theta)
        elif a.n <= MAX_ENUM_N:
            v = brute_force_ukn(a.k, a.n, theta)
        else:
            raise UsageError(f"exact u_{{k:n}} needs k = 2 or n <= {MAX_ENUM_N}")
        return {"exact": _frac(v), "numeric": float(v)}, {"numeric": 0.0}, None, f"{_frac(v)}\n{float(v):.15g}"
    e = estimate_ukn(a.k, a.n, float(th), a.trials, RngConfig(a.seed), a.streams)
    return e.as_dict(), {"std_err": e.std_err}, a.seed, f"{e.mean:.10g} +- {e.std_err:.3g}"


def cmd_u2_limit(a, prec):
    lim = u2_limit(float(a.theta), prec)
    vals = {"series": float(lim.series), "hyp3f2": float(lim.hyp3f2), "agree": lim.agree()}
    bounds = {"series": lim.series.bound, "hyp3f2": lim.hyp3f2.bound}
    if a.theta == Fraction(1, 2):
        g = u2_half_catalan(prec)
        vals["catalan_route"] = float(g)
        bounds["catalan_route"] = g.bound
    return vals, bounds, None, f"{lim.value:.15g}", (0 if lim.agree() else 1)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zetarenewal", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, sim=False):
        p.add_argument("--json", action="store_true", help="emit the JSON envelope")
        p.add_argument("--out", help="also write the output to this file")
        if sim:
            p.add_argument("--trials", type=int, default=100_000)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--streams", type=int, default=1)

    p = sub.add_parser("uk", help="renewal probability u_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--theta", type=_theta, default=Fraction(1))
    p.add_argument("--mode", choices=["exact", "series", "chain", "simulate"], default="exact")
    common(p, sim=True)

    p = sub.add_parser("verify", help="run cross-check suites")
    p.add_argument("--suite", choices=["all", *SUITES], default="all")
    p.add_argument("--mutate", choices=["sign-flip"], help="self-test: corrupt the closed form first")
    common(p)

    p = sub.add_parser("table", help="emit a table as CSV (or JSON)")
    p.add_argument("--what", choices=["ck", "qkdist", "ukn", "renewal"], required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--theta", type=_theta, default=Fraction(1))
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--a", type=Fraction)
    p.add_argument("--b", type=Fraction)
    p.add_argument("--c", type=Fraction)
    p.add_argument("--kmax", type=int, default=10)
    common(p)

    p = sub.add_parser("simulate", help="Monte Carlo estimates")
    p.add_argument("what", choices=["uk", "ukn", "ck", "chain"])
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--theta", type=_theta, default=Fraction(1))
    common(p, sim=True)

    p = sub.add_parser("mzv", help="multiple zeta values")
    p.add_argument("op", choices=["eval", "duality"])
    p.add_argument("--s", help="comma-separated exponents, last one >= 2")
    p.add_argument("--star", action="store_true")
    p.add_argument("--k", type=int, default=4)
    common(p)

    p = sub.add_parser("identity-suite", help="harmonic-sum identity residuals")
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--ohno5-max", type=int, default=8)
    p.add_argument("--duality-max", type=int, default=6)
    common(p)

    p = sub.add_parser("ukn", help="u_{k:n} for Ewens permutations")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=_theta, default=Fraction(1))
    p.add_argument("--exact", action="store_true")
    common(p, sim=True)

    p = sub.add_parser("u2-limit", help="limit of u_{2:n} for Ewens(theta)")
    p.add_argument("--theta", type=_theta, default=Fraction(1))
    common(p)
    return ap


_COMMANDS = {"uk": cmd_uk, "verify": cmd_verify, "table": cmd_table, "simulate": cmd_simulate,
             "mzv": cmd_mzv, "identity-suite": cmd_identity_suite, "ukn": cmd_ukn, "u2-limit": cmd_u2_limit}

_N_MAX_DEFAULT = {"ck": 100_000, "qkdist": 50, "ukn": 8, "renewal": 0}


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) and 2
    if getattr(a, "n_max", "absent") is None:
        a.n_max = _N_MAX_DEFAULT[a.what]
    for name in ("trials", "streams"):
        if getattr(a, name, 1) < 1:
            print(f"error: --{name} must be >= 1", file=sys.stderr)
            return 2
    t0 = time.perf_counter()
    try:
        prec = default_precision()
        out = _COMMANDS[a.command](a, prec)
    except (UsageError, DomainError, MemoryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    values, bounds, seed, text, *rest = out
    code = rest[0] if rest else 0
    params = {k: (_frac(v) if isinstance(v, Fraction) else v) for k, v in vars(a).items()
              if k not in ("json", "out", "command")}
    env = envelope(a.command, params, values, bounds, seed, t0)
    rendered = json.dumps(env, indent=2) if a.json else text
    print(rendered)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(rendered + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
