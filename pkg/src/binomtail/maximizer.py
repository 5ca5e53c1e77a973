"""Locating the maximizer of g(r) = omega**-r * s_m(r).

The ratio t(r) = s_m(r+1)/s_m(r) is strictly decreasing, and g(r) < g(r+1)
exactly when omega < t(r). So the largest maximizer r0 is the first r with
omega > t(r), and can be found by bisection. Everything is decided with exact
comparisons; omega may be rational or the square root of a rational.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Optional, Union

from .binomial_core import partial_sum
from .surd import QuadraticNumber, rational_sqrt


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


class WeightKind(Enum):
    RATIONAL = "rational"
    SQRT_RATIONAL = "sqrt"


class WeightError(ValueError):
    pass


class Requires3NotDividingM(ValueError):
    pass


_RATIONAL_RE = re.compile(r"^\s*(\d+)(?:\s*/\s*(\d+))?\s*$")


@dataclass(frozen=True)
class Weight:
    """omega >= 1, either a rational or sqrt of a rational radicand."""

    kind: WeightKind
    value: Fraction

    def __post_init__(self):
        value = Fraction(self.value)
        kind = self.kind
        if kind is WeightKind.SQRT_RATIONAL:
            root = rational_sqrt(value)
            if root is not None:
                # sqrt of a rational square is just a rational
                kind, value = WeightKind.RATIONAL, root
        if value < 1:
            raise WeightError(f"omega must be >= 1, got {self._render(kind, value)}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "value", value)

    @classmethod
    def rational(cls, q) -> "Weight":
        return cls(WeightKind.RATIONAL, Fraction(q))

    @classmethod
    def sqrt(cls, radicand) -> "Weight":
        return cls(WeightKind.SQRT_RATIONAL, Fraction(radicand))

    @classmethod
    def parse(cls, text: str) -> "Weight":
        """Parse ``n``, ``p/q``, ``sqrt:n`` or ``sqrt:p/q``."""
        body = text.strip()
        kind = WeightKind.RATIONAL
        if body.lower().startswith("sqrt:"):
            kind, body = WeightKind.SQRT_RATIONAL, body[5:]
        match = _RATIONAL_RE.match(body)
        if not match:
            hint = ""
            if re.match(r"^\s*\d*\.\d+\s*$", body):
                hint = " (decimals are not accepted, write it as p/q, e.g. 5/2)"
            raise WeightError(f"cannot parse weight {text!r}{hint}")
        num, den = int(match.group(1)), int(match.group(2) or 1)
        if den == 0:
            raise WeightError(f"zero denominator in weight {text!r}")
        return cls(kind, Fraction(num, den))

    @property
    def is_rational(self) -> bool:
        return self.kind is WeightKind.RATIONAL

    def as_number(self) -> Union[Fraction, QuadraticNumber]:
        if self.is_rational:
            return self.value
        return QuadraticNumber.sqrt_of(self.value)

    def as_quadratic(self) -> QuadraticNumber:
        if self.is_rational:
            return QuadraticNumber(self.value)
        return QuadraticNumber.sqrt_of(self.value)

    @staticmethod
    def _render(kind, value) -> str:
        return str(value) if kind is WeightKind.RATIONAL else f"sqrt:{value}"

    def __str__(self):
        return self._render(self.kind, self.value)


def as_weight(omega) -> Weight:
    if isinstance(omega, Weight):
        return omega
    if isinstance(omega, str):
        return Weight.parse(omega)
    return Weight.rational(omega)


def compare_weight(omega, q) -> Ordering:
    """Exact three-way comparison of omega with a rational q."""
    omega = as_weight(omega)
    if q == math.inf:
        return Ordering.LT
    q = Fraction(q)
    if omega.is_rational:
        lhs, rhs = omega.value, q
    else:
        if q <= 0:
            return Ordering.GT
        lhs, rhs = omega.value, q * q
    return Ordering((lhs > rhs) - (lhs < rhs))


def weight_at_least(omega, a, b=0, d=1) -> bool:
    """Decide omega >= a + b*sqrt(d) exactly, for rationals a and b >= 0."""
    omega = as_weight(omega)
    a, b = Fraction(a), Fraction(b)
    if b < 0:
        raise ValueError("b must be non-negative")
    threshold = QuadraticNumber(a, b, d)
    if omega.is_rational:
        return omega.value >= threshold
    if threshold <= 0:
        return True
    # both sides positive: square once
    return QuadraticNumber(omega.value) >= threshold * threshold


def t_ratio(m: int, r: int):
    """t(r) = s_m(r+1)/s_m(r); math.inf at r = -1 and exactly 1 at r = m."""
    if m < 0 or not -1 <= r <= m:
        raise ValueError(f"need -1 <= r <= m, got r={r}, m={m}")
    if r == -1:
        return math.inf
    return Fraction(partial_sum(m, r + 1), partial_sum(m, r))


def r_prime(omega, m: int) -> int:
    """floor((m+2)/(omega+1)), decided exactly."""
    omega = as_weight(omega)
    if omega.is_rational:
        return math.floor(Fraction(m + 2) / (omega.value + 1))

    def fits(n: int) -> bool:
        # n*(omega+1) <= m+2  <=>  omega <= (m+2)/n - 1
        return n == 0 or compare_weight(omega, Fraction(m + 2, n) - 1) != Ordering.GT

    lo, hi = 0, m + 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if fits(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def g_exact(omega, m: int, r: int) -> Union[Fraction, QuadraticNumber]:
    """g(r) for any weight; a Fraction for rational omega."""
    omega = as_weight(omega)
    if not 0 <= r <= m:
        raise ValueError(f"need 0 <= r <= m, got r={r}, m={m}")
    s = partial_sum(m, r)
    if omega.is_rational:
        return Fraction(s) / omega.value ** r
    # omega**-r = rho**(-r//2) or rho**(-(r-1)/2) / sqrt(rho)
    rho = omega.value
    half, odd = divmod(r, 2)
    base = Fraction(s) / rho ** half
    if not odd:
        return base
    return QuadraticNumber(base) / QuadraticNumber.sqrt_of(rho)


@dataclass(frozen=True)
class UnimodalProfile:
    m: int
    omega: Weight
    r_prime: int
    r0: int
    tie: bool
    chain_verified: bool = False
    convention: Optional[str] = None


def find_r0(omega, m: int, verify: bool = False) -> UnimodalProfile:
    """Largest maximizer of g by bisection on the sign of omega - t(r)."""
    omega = as_weight(omega)
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    rp = r_prime(omega, m)
    if omega.value == 1:
        profile = UnimodalProfile(m, omega, rp, m, False,
                                  convention="omega=1: g is increasing, r0=m by convention")
    else:
        # first r in [0, m] with omega > t(r); t(m) = 1 < omega so it exists
        lo, hi = 0, m
        while lo < hi:
            mid = (lo + hi) // 2
            if compare_weight(omega, t_ratio(m, mid)) == Ordering.GT:
                hi = mid
            else:
                lo = mid + 1
        tie = lo > 0 and omega.is_rational and compare_weight(omega, t_ratio(m, lo - 1)) == Ordering.EQ
        profile = UnimodalProfile(m, omega, rp, lo, tie)
    if verify:
        profile = replace(profile, chain_verified=verify_unimodal_chain(omega, m, profile))
    return profile


def brute_force_r0(omega, m: int) -> tuple[int, bool]:
    """Largest argmax of g over 0..m by comparing the g values themselves.

    Returns (r0, tie) where tie means g(r0 - 1) == g(r0). Kept as an oracle.
    """
    values = [g_exact(omega, m, r) for r in range(m + 1)]
    best = 0
    for r in range(1, m + 1):
        if values[r] >= values[best]:
            best = r
    return best, best > 0 and values[best - 1] == values[best]


def step_signs(omega, m: int) -> list[Ordering]:
    """sign of g(r+1) - g(r) for r = 0..m-1, via omega vs t(r)."""
    return [Ordering(-compare_weight(omega, t_ratio(m, r))) for r in range(m)]


def verify_unimodal_chain(omega, m: int, profile: Optional[UnimodalProfile] = None) -> bool:
    """Check every step of g against the shape the profile claims."""
    omega = as_weight(omega)
    if profile is None:
        profile = find_r0(omega, m)
    r0, tie = profile.r0, profile.tie
    for r, sign in enumerate(step_signs(omega, m)):
        if r < r0 - 1:
            expected = Ordering.GT
        elif r == r0 - 1:
            expected = Ordering.EQ if tie else Ordering.GT
        else:
            expected = Ordering.LT
        if sign != expected:
            return False
    return True


def first_non_descent(omega, m: int, start: int) -> Optional[int]:
    """First r >= start with g(r) <= g(r+1), or None if g descends from start."""
    for r in range(max(start, 0), m):
        if compare_weight(omega, t_ratio(m, r)) != Ordering.GT:
            return r
    return None


@dataclass(frozen=True)
class CheckResult:
    check: str
    m: int
    omega: str
    passed: bool
    r_prime: Optional[int] = None
    r0: Optional[int] = None
    tie: Optional[bool] = None
    witness: Optional[int] = None
    detail: str = ""
    skipped: bool = False


def _result(check, omega, profile, passed, witness=None, detail="") -> CheckResult:
    return CheckResult(check, profile.m, str(omega), passed, profile.r_prime,
                       profile.r0, profile.tie, witness, detail)


def check_formula_theorem(omega, m: int) -> CheckResult:
    """Integer omega >= 3: r0 = r' and a tie exactly when omega = m + 1."""
    omega = as_weight(omega)
    if not omega.is_rational or omega.value.denominator != 1 or omega.value < 3:
        raise WeightError(f"formula check needs an integer omega >= 3, got {omega}")
    p = find_r0(omega, m)
    tie_expected = omega.value == m + 1
    if p.r0 != p.r_prime:
        return _result("formula", omega, p, False, p.r0, "r0 != r'")
    if p.tie != tie_expected:
        return _result("formula", omega, p, False, p.r0, "tie flag disagrees with omega == m+1")
    return _result("formula", omega, p, True)


def check_root3_theorem(omega, m: int) -> CheckResult:
    """omega >= sqrt(3): r0 in {r', r'+1}."""
    omega = as_weight(omega)
    if not weight_at_least(omega, 0, 1, 3):
        raise WeightError(f"root3 check needs omega >= sqrt(3), got {omega}")
    p = find_r0(omega, m)
    if p.r_prime <= p.r0 <= p.r_prime + 1:
        return _result("root3", omega, p, True)
    return _result("root3", omega, p, False, p.r0, "r0 outside {r', r'+1}")


def check_omega2(m: int) -> CheckResult:
    """omega = 2 and 3 does not divide m: r0 = r'."""
    if m % 3 == 0:
        raise Requires3NotDividingM(f"omega=2 check needs 3 not dividing m, got m={m}")
    omega = Weight.rational(2)
    p = find_r0(omega, m)
    if p.r0 == p.r_prime:
        return _result("omega2", omega, p, True)
    return _result("omega2", omega, p, False, p.r0, "r0 != r'")


def gerhard_hypothesis(omega, m: int) -> bool:
    """(m+2)/(r'+1) >= sqrt(3) + 1."""
    c = Fraction(m + 2, r_prime(omega, m) + 1) - 1
    return c >= 0 and c * c >= 3


def check_gerhard_hypothesis(omega, m: int) -> CheckResult:
    """Under the hypothesis, g rises up to r' (non-strict last step) and falls from r'+1."""
    omega = as_weight(omega)
    if omega.value == 1:
        raise WeightError("gerhard check needs omega > 1")
    p = find_r0(omega, m)
    if not gerhard_hypothesis(omega, m):
        return replace(_result("gerhard", omega, p, True, detail="hypothesis fails; vacuous"),
                       skipped=True)
    rp = p.r_prime
    signs = step_signs(omega, m)
    for r in range(min(rp, m)):
        ok = signs[r] == Ordering.GT or (r == rp - 1 and signs[r] == Ordering.EQ)
        if not ok:
            return _result("gerhard", omega, p, False, r, "rising chain broken")
    bad = first_non_descent(omega, m, rp + 1)
    if bad is not None:
        return _result("gerhard", omega, p, False, bad, "falling chain broken")
    return _result("gerhard", omega, p, True)


def gap_weight(m: int) -> Weight:
    """The largest weight 1/(1 - 2**-m) = 2**m/(2**m - 1) for which r0 = m."""
    if m < 1:
        raise ValueError("gap weight needs m >= 1")
    return Weight.rational(Fraction(2 ** m, 2 ** m - 1))


def check_gap(m: int, omega=None) -> CheckResult:
    """1 < omega <= 2**m/(2**m - 1) forces r0 = m.

    With omega omitted the boundary weight 2**m/(2**m - 1) is used.
    """
    if m < 1:
        p = find_r0(Weight.rational(2), m)
        return replace(_result("gap", "n/a", p, True, detail="m=0; vacuous"), skipped=True)
    omega = gap_weight(m) if omega is None else as_weight(omega)
    p = find_r0(omega, m)
    if omega.value == 1 or compare_weight(omega, gap_weight(m).value) == Ordering.GT:
        return replace(_result("gap", omega, p, True, detail="omega outside (1, 2^m/(2^m-1)]; vacuous"),
                       skipped=True)
    if p.r0 == m:
        return _result("gap", omega, p, True)
    return _result("gap", omega, p, False, p.r0, "r0 != m")


def gap_experiment(omega, m: int, d: int) -> CheckResult:
    """Report whether r0 - r' <= d. Experimental and never counted as a failure."""
    omega = as_weight(omega)
    p = find_r0(omega, m)
    gap = p.r0 - p.r_prime
    detail = f"r0-r'={gap}, {'within' if gap <= d else 'exceeds'} d={d}"
    return _result("dgap", omega, p, True, detail=detail)
