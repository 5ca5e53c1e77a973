"""Normal approximation of the binomial CDF with the Berry-Esseen envelope.

For B ~ Binomial(m, p) and q = 1 - p,

    |P(B <= b) - Phi((b - mp)/sqrt(mpq))| <= C (p^2 + q^2) / sqrt(mpq),  C = 0.4215.

The envelope comes from E|X_i|^3 / (E X_i^2)^(3/2) with X_i = B_i - p, where
E X_i^2 = pq and E|X_i|^3 = pq(p^2 + q^2); those moments are folded into the
formula above rather than exposed. At p = 1/2 it reduces to 0.4215/sqrt(m).

Phi is evaluated here in ``decimal`` with an explicit error budget, so the
check never rests on a platform erf.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Union

from .binomial_core import binomial_row, partial_sum

BERRY_ESSEEN_C = Decimal("0.4215")
MAX_PRECISION = 30
_GUARD = 12

Real = Union[int, Fraction, Decimal]


@lru_cache(maxsize=None)
def _pi(digits: int) -> Decimal:
    """pi to ``digits`` significant digits (series from the decimal module docs)."""
    with localcontext() as ctx:
        ctx.prec = digits + 2
        three = Decimal(3)
        lasts, t, s, n, na, d, da = 0, three, 3, 1, 0, 0, 24
        while s != lasts:
            lasts = s
            n, na = n + na, na + 8
            d, da = d + da, da + 32
            t = (t * n) / d
            s += t
        ctx.prec = digits
        return +s


@lru_cache(maxsize=None)
def _inv_sqrt_2pi(digits: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits
        return 1 / (2 * _pi(digits + 5)).sqrt()


def to_decimal(x: Real, digits: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits
        if isinstance(x, Fraction):
            return Decimal(x.numerator) / Decimal(x.denominator)
        return +Decimal(x)


def phi(x: Real, precision: int = 20) -> Decimal:
    """Standard normal CDF with absolute error <= 10**-precision.

    Budget: the result is rounded to ``precision`` places (<= 0.5e-precision);
    the series tail and the Mills-ratio cut each contribute < 1e-(precision+3)
    and the working-precision arithmetic well under that.
    """
    if not 1 <= precision <= MAX_PRECISION:
        raise ValueError(f"precision must be in 1..{MAX_PRECISION}, got {precision}")
    wp = precision + _GUARD
    quantum = Decimal(1).scaleb(-precision)
    with localcontext() as ctx:
        ctx.prec = wp
        x = to_decimal(x, wp)
        ax = abs(x)
        if ax == 0:
            return Decimal("0.5").quantize(quantum)
        tiny = Decimal(1).scaleb(-(precision + 3))
        if ax > 40:
            upper = Decimal(0)
        else:
            density = (-(ax * ax) / 2).exp() * _inv_sqrt_2pi(wp)
            if density / ax < tiny:
                # Mills ratio: 1 - Phi(ax) < density/ax
                upper = Decimal(0)
            else:
                # Phi(ax) - 1/2 = density * sum ax^(2n+1) / (2n+1)!!, all terms positive
                x2 = ax * ax
                term = ax
                total = ax
                n = 0
                while True:
                    ratio = x2 / (2 * n + 3)
                    term *= ratio
                    total += term
                    n += 1
                    # once the ratio is below 1/2 the remainder is under 2*term
                    if x2 / (2 * n + 3) < Decimal("0.5") and 2 * term * density < tiny:
                        break
                upper = Decimal("0.5") - density * total
        value = 1 - upper if x > 0 else upper
        return value.quantize(quantum)


def _clip_precision(precision: int) -> int:
    return min(max(precision, 1), MAX_PRECISION)


@dataclass(frozen=True)
class NormalApproxReport:
    m: int
    b: int
    p: Fraction
    exact_cdf: Fraction
    phi: Decimal
    abs_diff: Decimal
    envelope: Decimal
    within: bool
    precision: int


@lru_cache(maxsize=64)
def _cdf_numerators(m: int, p: Fraction) -> tuple[int, ...]:
    """Cumulative sums of C(m,i) a^i (c-a)^(m-i) for p = a/c, over i = 0..m."""
    a, c = p.numerator, p.denominator
    out = []
    acc = 0
    for i, coeff in enumerate(binomial_row(m)):
        acc += coeff * a ** i * (c - a) ** (m - i)
        out.append(acc)
    return tuple(out)


def binomial_cdf(m: int, b: int, p: Fraction) -> Fraction:
    """P(B <= b) exactly, for rational p."""
    p = Fraction(p)
    if b < 0:
        return Fraction(0)
    if p == Fraction(1, 2):
        return Fraction(partial_sum(m, b), 1 << m)
    return Fraction(_cdf_numerators(m, p)[min(b, m)], p.denominator ** m)


def berry_esseen_report(m: int, b: int, p=Fraction(1, 2), precision: int = 20) -> NormalApproxReport:
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if m < 1 or not 0 <= b <= m:
        raise ValueError(f"need m >= 1 and 0 <= b <= m, got m={m}, b={b}")
    precision = _clip_precision(precision)
    q = 1 - p
    exact = binomial_cdf(m, b, p)
    wp = precision + _GUARD
    with localcontext() as ctx:
        ctx.prec = wp
        spread = to_decimal(m * p * q, wp).sqrt()
        x = to_decimal(b - m * p, wp) / spread
        value = phi(x, precision)
        diff = abs(to_decimal(exact, wp) - value)
        envelope = BERRY_ESSEEN_C * to_decimal(p * p + q * q, wp) / spread
        # phi error plus slack for rounding x, exact_cdf and the envelope
        budget = 2 * Decimal(1).scaleb(-precision)
        within = diff <= envelope + budget
        quantum = Decimal(1).scaleb(-(precision + 2))
        diff, envelope = diff.quantize(quantum), envelope.quantize(quantum)
    return NormalApproxReport(m, b, p, exact, value, diff, envelope, within, precision)


class SumEstimate(NamedTuple):
    estimate: Decimal
    radius: Decimal

    def contains(self, value: int) -> bool:
        return abs(Decimal(value) - self.estimate) <= self.radius


def approx_s(m: int, r: int, precision: int = 20) -> SumEstimate:
    """2**m * Phi((2r - m)/sqrt(m)) with a certified absolute error radius."""
    if m < 1 or not 0 <= r <= m:
        raise ValueError(f"need m >= 1 and 0 <= r <= m, got m={m}, r={r}")
    precision = _clip_precision(precision)
    # 2**m has about 0.302 m digits; keep the estimate's own rounding negligible
    wp = precision + _GUARD + m // 3 + 2
    with localcontext() as ctx:
        ctx.prec = wp
        root = Decimal(m).sqrt()
        value = phi(Decimal(2 * r - m) / root, precision)
        scale = Decimal(1 << m)
        radius = scale * (BERRY_ESSEEN_C / root + 2 * Decimal(1).scaleb(-precision))
        return SumEstimate(scale * value, radius)
