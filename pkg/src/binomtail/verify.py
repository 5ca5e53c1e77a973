"""Exhaustive identity suite over all 0 <= r <= m, one m at a time."""

from __future__ import annotations

from fractions import Fraction

from .binomial_core import reflect_identity_check
from .bounds_cert import coarse_q_bounds, coarse_t_bounds, head_enclosure_q
from .cf_engine import expansion_violations, q_exact
from .maximizer import Weight, brute_force_r0, find_r0, t_ratio, verify_unimodal_chain

SUITE_WEIGHTS = ("3/2", "2", "5/2", "3", "sqrt:2", "sqrt:3")


def head_nesting_failures(m: int, r: int) -> list[str]:
    """Nested, strictly shrinking head enclosures that collapse onto Q at depth r."""
    q = q_exact(m, r)
    bad = []
    prev = None
    for d in range(1, r + 1):
        enc = head_enclosure_q(m, r, d)
        if not enc.contains(q):
            bad.append(f"depth {d} misses Q")
        if prev is not None and not (enc.within(prev) and enc.width < prev.width):
            bad.append(f"depth {d} not strictly nested")
        prev = enc
    if prev is not None and q not in (prev.lo, prev.hi):
        bad.append("no collapse at depth r")
    return bad


def coarse_failures(m: int, r: int) -> list[str]:
    """Coarse Q and t enclosures with equality exactly at r = 0 (lo) and r in {0, 1} (hi)."""
    bad = []
    q, t = q_exact(m, r), t_ratio(m, r)
    for name, enc, value in (("Q", coarse_q_bounds(m, r), q), ("t", coarse_t_bounds(m, r), t)):
        if not enc.contains(value):
            bad.append(f"coarse {name} misses value")
        if (value == enc.lo) != (r == 0):
            bad.append(f"coarse {name} lower equality")
        if (value == enc.hi) != (r in (0, 1)):
            bad.append(f"coarse {name} upper equality")
    return bad


def verify_m(m: int) -> dict:
    """Run every check for one m. Returns counts and failures with witnesses."""
    checks = 0
    failures = []

    def record(kind: str, r, problems):
        nonlocal checks
        checks += 1
        for p in problems:
            failures.append({"m": m, "r": r, "check": kind, "problem": p})

    for r in range(m + 1):
        record("expansion", r, expansion_violations(m, r))
        if r >= 1:
            record("reflection", r, [] if reflect_identity_check(m, r) else ["s_m(m-r) != 2^m - s_m(r-1)"])
        if 2 * r < m + 3:
            record("coarse", r, coarse_failures(m, r))
            if r >= 1:
                record("heads", r, head_nesting_failures(m, r))
        prev = t_ratio(m, r - 1)
        cur = t_ratio(m, r)
        record("t-monotone", r, [] if prev > cur > Fraction(m - r, r + 1) else ["t not strictly decreasing"])
    for text in SUITE_WEIGHTS:
        w = Weight.parse(text)
        profile = find_r0(w, m)
        r0, tie = brute_force_r0(w, m)
        problems = []
        if (profile.r0, profile.tie) != (r0, tie):
            problems.append(f"omega={text}: bisection {profile.r0} vs brute force {r0}")
        if not verify_unimodal_chain(w, m, profile):
            problems.append(f"omega={text}: unimodal chain")
        if profile.r_prime > profile.r0:
            problems.append(f"omega={text}: r' > r0")
        record("r0", profile.r0, problems)
    return {"m": m, "checks": checks, "failures": failures}
