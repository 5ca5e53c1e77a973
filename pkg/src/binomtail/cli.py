"""binomtail command line.

Records are JSON, one per line. Exact rationals are written as "num/den"
strings and integers bare; decimals appear only when asked for.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 usage or
domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal
from fractions import Fraction
from typing import Callable, Iterable, Optional

from . import __version__
from .binomial_core import partial_sum
from .bounds_cert import DomainError, Method, Target, enclosure
from .cf_engine import ZeroDenominator, cf_coefficients, head, q_exact, r_sequence, tails
from .gauss_approx import berry_esseen_report
from .maximizer import (
    WeightError,
    as_weight,
    check_formula_theorem,
    check_gap,
    check_gerhard_hypothesis,
    check_omega2,
    check_root3_theorem,
    find_r0,
    g_exact,
    gap_experiment,
    t_ratio,
)
from .surd import QuadraticNumber
from .verify import verify_m

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- rendering ---------------------------------------------------------------

def format_fixed(x: Fraction, digits: int) -> str:
    """x rounded half-even to ``digits`` places."""
    n = round(Fraction(x) * 10 ** digits)
    sign = "-" if n < 0 else ""
    n = abs(n)
    if digits == 0:
        return f"{sign}{n}"
    whole, frac = divmod(n, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _outward(x: QuadraticNumber, digits: int) -> tuple[str, str]:
    lo, hi = x.enclose(digits + 5)
    scale = 10 ** digits
    lo_n = math.floor(lo * scale)
    hi_n = math.ceil(hi * scale)
    return format_fixed(Fraction(lo_n, scale), digits), format_fixed(Fraction(hi_n, scale), digits)


def encode(value, digits: int = 20):
    """JSON-ready form of an exact value."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, QuadraticNumber):
        if value.is_rational:
            return encode(value.a)
        lo, hi = _outward(value, digits)
        return {"exact": f"{encode(value.a)} + ({encode(value.b)})*sqrt({value.d})",
                "lo": lo, "hi": hi, "digits": digits}
    if isinstance(value, Decimal):
        return str(value)
    if value == math.inf:
        return "inf"
    if isinstance(value, (list, tuple)):
        return [encode(v, digits) for v in value]
    if isinstance(value, dict):
        return {k: encode(v, digits) for k, v in value.items()}
    raise TypeError(f"cannot encode {type(value)}")


def decode_exact(text) -> Fraction:
    """Inverse of ``encode`` for integers and "num/den" strings."""
    return Fraction(text)


def as_decimal(value, digits: int) -> str:
    if isinstance(value, QuadraticNumber) and not value.is_rational:
        lo, hi = value.enclose(digits + 10)
        return format_fixed((lo + hi) / 2, digits)
    if isinstance(value, QuadraticNumber):
        value = value.a
    return format_fixed(Fraction(value), digits)


def emit(command: str, inputs: dict, results: dict, decimal_digits: Optional[int] = None,
         decimals: Optional[dict] = None, out=None) -> None:
    out = out or sys.stdout
    record = {"schema_version": SCHEMA_VERSION, "command": command,
              "inputs": encode(inputs), "results": encode(results)}
    if decimal_digits is not None and decimals:
        record["results"]["decimal"] = {"digits": decimal_digits,
                                        **{k: as_decimal(v, decimal_digits) for k, v in decimals.items()}}
    out.write(json.dumps(record) + "\n")


# -- argument helpers --------------------------------------------------------

def parse_m_range(text: str) -> range:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad m range {text!r}; use A..B or N")
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad m range {text!r}")
    return range(lo, hi + 1)


def parse_fraction(text: str) -> Fraction:
    try:
        if "." in text:
            raise ValueError
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected an exact rational p/q, got {text!r}")


def thread_count(flag: Optional[int]) -> int:
    if flag is not None:
        return max(flag, 1)
    env = os.environ.get("BINOMTAIL_THREADS")
    try:
        return max(int(env), 1) if env else 1
    except ValueError:
        raise UsageError(f"BINOMTAIL_THREADS must be an integer, got {env!r}")


def run_partitioned(func: Callable, items: list, threads: int) -> list:
    """Map func over items, results in item order regardless of worker count."""
    if threads <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    # static contiguous partition keeps the work split reproducible
    chunk = max(1, math.ceil(len(items) / threads))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items, chunksize=chunk))


def _check_mr(m: int, r: int) -> None:
    if m < 0 or r < 0 or r > m:
        raise UsageError(f"need 0 <= r <= m, got m={m}, r={r}")


# -- commands ----------------------------------------------------------------

def cmd_sum(args) -> int:
    _check_mr(args.m, args.r)
    emit("sum", {"m": args.m, "r": args.r}, {"s": partial_sum(args.m, args.r)})
    return EXIT_OK


def cmd_q(args) -> int:
    _check_mr(args.m, args.r)
    q = q_exact(args.m, args.r)
    emit("q", {"m": args.m, "r": args.r}, {"q": q}, args.decimal, {"q": q})
    return EXIT_OK


def cmd_t(args) -> int:
    if args.m < 0 or not -1 <= args.r <= args.m:
        raise UsageError(f"need -1 <= r <= m, got m={args.m}, r={args.r}")
    t = t_ratio(args.m, args.r)
    emit("t", {"m": args.m, "r": args.r}, {"t": t}, args.decimal,
         {"t": t} if t != math.inf else None)
    return EXIT_OK


def cmd_cf(args) -> int:
    m, r = args.m, args.r
    _check_mr(m, r)
    a, b = cf_coefficients(m, r)
    results = {"a": a, "b": b, "Q": q_exact(m, r)}
    if args.show_R:
        results["R"] = r_sequence(m, r)
    if args.show_tails:
        results["tails"] = tails(m, r)
    if args.head is not None:
        if not 0 <= args.head <= r:
            raise UsageError(f"head depth must lie in 0..{r}")
        results["head"] = {"j": args.head, "value": head(m, r, args.head)}
    emit("cf", {"m": m, "r": r}, results)
    return EXIT_OK


_EXACT_TARGET = {
    Target.Q: q_exact,
    Target.T_RATIO: t_ratio,
    Target.S_SUM: partial_sum,
}


def cmd_bounds(args) -> int:
    m, r = args.m, args.r
    _check_mr(m, r)
    target = Target(args.target)
    method = Method(args.method)
    enc = enclosure(m, r, target, method, args.depth)
    exact = _EXACT_TARGET[target](m, r)
    results = {"lo": enc.lo, "hi": enc.hi, "strict_lo": enc.strict_lo, "strict_hi": enc.strict_hi,
               "informative": enc.informative, "exact": exact, "contains": enc.contains(exact)}
    inputs = {"m": m, "r": r, "target": target.value, "method": method.value}
    if enc.depth is not None:
        inputs["depth"] = enc.depth
    emit("bounds", inputs, results, args.decimal,
         {"lo": enc.lo, "hi": enc.hi, "exact": exact})
    return EXIT_OK if enc.contains(exact) else EXIT_FAIL


def cmd_maximize(args) -> int:
    omega = as_weight(args.omega)
    profile = find_r0(omega, args.m, verify=args.chain_verify)
    g = g_exact(omega, args.m, profile.r0)
    results = {"r_prime": profile.r_prime, "r0": profile.r0, "tie": profile.tie, "g_r0": g}
    if profile.convention:
        results["convention"] = profile.convention
    if args.chain_verify:
        results["chain_verified"] = profile.chain_verified
    emit("maximize", {"omega": str(omega), "m": args.m}, results, args.decimal, {"g_r0": g})
    return EXIT_OK if profile.chain_verified or not args.chain_verify else EXIT_FAIL


def _scan_item(item: tuple) -> dict:
    check, omega, m, d = item
    if check == "formula":
        res = check_formula_theorem(omega, m)
    elif check == "root3":
        res = check_root3_theorem(omega, m)
    elif check == "omega2":
        if m % 3 == 0:
            return {"m": m, "passed": True, "skipped": True, "detail": "3 divides m"}
        res = check_omega2(m)
    elif check == "gerhard":
        res = check_gerhard_hypothesis(omega, m)
    elif check == "gap":
        res = check_gap(m, omega)
    else:
        res = gap_experiment(omega, m, d)
    return {"m": m, "passed": res.passed, "skipped": res.skipped, "r_prime": res.r_prime,
            "r0": res.r0, "tie": res.tie, "witness": res.witness, "detail": res.detail}


def _validate_scan(check: str, omega) -> None:
    if check in ("formula", "root3", "gerhard", "dgap") and omega is None:
        raise UsageError(f"--check {check} needs --omega")
    if check == "formula":
        if not omega.is_rational or omega.value.denominator != 1 or omega.value < 3:
            raise UsageError("--check formula needs an integer omega >= 3")
    elif check == "root3":
        check_root3_theorem(omega, 0)
    elif check == "omega2":
        if omega is not None and omega.value != 2:
            raise UsageError("--check omega2 needs omega = 2")
    elif check in ("gerhard", "dgap"):
        if omega.value == 1:
            raise UsageError(f"--check {check} needs omega > 1")


SCAN_FIELDS = ["m", "passed", "skipped", "r_prime", "r0", "tie", "witness", "detail"]


def cmd_scan(args) -> int:
    omega = as_weight(args.omega) if args.omega is not None else None
    _validate_scan(args.check, omega)
    items = [(args.check, omega, m, args.d) for m in args.m]
    rows = run_partitioned(_scan_item, items, thread_count(args.threads))
    rows.sort(key=lambda row: row["m"])
    if args.csv:
        writer = csv.DictWriter(sys.stdout, fieldnames=SCAN_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k) for k in SCAN_FIELDS})
    else:
        for row in rows:
            inputs = {"omega": str(omega) if omega else None, "m": row["m"], "check": args.check}
            emit("scan", inputs, {k: v for k, v in row.items() if k != "m"})
    return EXIT_OK if all(row["passed"] for row in rows) else EXIT_FAIL


def cmd_plot_data(args) -> int:
    omega = as_weight(args.omega)
    values = [g_exact(omega, args.m, r) for r in range(args.m + 1)]
    if args.normalize:
        peak = max(values)
        values = [v / peak for v in values]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["r", "g"])
    for r, v in enumerate(values):
        writer.writerow([r, as_decimal(v, args.decimal)])
    return EXIT_OK


def cmd_normal(args) -> int:
    if args.m < 1 or not 0 <= args.b <= args.m:
        raise UsageError(f"need m >= 1 and 0 <= b <= m, got m={args.m}, b={args.b}")
    if not 0 < args.p < 1:
        raise UsageError(f"p must lie in (0, 1), got {args.p}")
    rep = berry_esseen_report(args.m, args.b, args.p, args.precision)
    results = {"exact_cdf": rep.exact_cdf, "phi": rep.phi, "abs_diff": rep.abs_diff,
               "envelope": rep.envelope, "within": rep.within, "precision": rep.precision}
    emit("normal", {"m": args.m, "b": args.b, "p": args.p}, results)
    return EXIT_OK if rep.within else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.m_max < 0:
        raise UsageError("--m-max must be non-negative")
    per_m = run_partitioned(verify_m, list(range(args.m_max + 1)), thread_count(args.threads))
    failures = [f for item in per_m for f in item["failures"]]
    results = {"checks": sum(item["checks"] for item in per_m),
               "failures": len(failures), "passed": not failures,
               "witnesses": failures[:50]}
    emit("verify", {"m_max": args.m_max}, results)
    return EXIT_OK if not failures else EXIT_FAIL


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="binomtail",
                                     description="Exact partial binomial sums, continued fractions and maximizers.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def mr(p):
        p.add_argument("m", type=int)
        p.add_argument("r", type=int)

    def decimal_flag(p):
        p.add_argument("--decimal", type=int, metavar="DIGITS",
                       help="also render exact values as decimals")

    p = sub.add_parser("sum", help="exact s_m(r)")
    mr(p)
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("q", help="exact Q = (r+1) C(m,r+1) / s_m(r)")
    mr(p)
    decimal_flag(p)
    p.set_defaults(func=cmd_q)

    p = sub.add_parser("t", help="exact t(r) = s_m(r+1)/s_m(r)")
    mr(p)
    decimal_flag(p)
    p.set_defaults(func=cmd_t)

    p = sub.add_parser("cf", help="continued fraction coefficients for Q")
    mr(p)
    p.add_argument("--show-R", action="store_true")
    p.add_argument("--show-tails", action="store_true")
    p.add_argument("--head", type=int, metavar="J")
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("bounds", help="certified enclosure of q, t or s")
    mr(p)
    p.add_argument("--target", choices=["q", "t", "s"], default="q")
    p.add_argument("--method", choices=["geometric", "coarse", "heads"], default="coarse")
    p.add_argument("--depth", type=int)
    decimal_flag(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("maximize", help="largest maximizer r0 of g")
    p.add_argument("--omega", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--chain-verify", action="store_true")
    decimal_flag(p)
    p.set_defaults(func=cmd_maximize)

    p = sub.add_parser("scan", help="run a check over a range of m")
    p.add_argument("--omega")
    p.add_argument("--m", type=parse_m_range, required=True, metavar="A..B")
    p.add_argument("--check", required=True,
                   choices=["formula", "root3", "omega2", "gerhard", "gap", "dgap"])
    p.add_argument("--d", type=int, default=1, help="gap bound for the experimental dgap scan")
    p.add_argument("--threads", type=int)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("plot-data", help="CSV rows r,g(r)")
    p.add_argument("--omega", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--decimal", type=int, default=4, metavar="DIGITS")
    p.set_defaults(func=cmd_plot_data)

    p = sub.add_parser("normal", help="Berry-Esseen check of the normal approximation")
    p.add_argument("m", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--p", type=parse_fraction, default=Fraction(1, 2))
    p.add_argument("--precision", type=int, default=20)
    p.set_defaults(func=cmd_normal)

    p = sub.add_parser("verify", help="run the full identity suite")
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, WeightError, ZeroDenominator, ValueError) as exc:
        print(f"binomtail {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
