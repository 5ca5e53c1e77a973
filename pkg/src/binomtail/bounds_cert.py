"""Certified rational enclosures for Q, t(r), s_m(r) and max g.

Every enclosure carries its strictness flags: ``strict_lo`` means the exact
value is strictly above ``lo`` and so on. Requests outside the range where a
bound is proven raise ``DomainError`` instead of returning something weaker.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .binomial_core import binomial
from .cf_engine import cf_coefficients, head
from .maximizer import Weight, as_weight, find_r0
from .surd import QuadraticNumber, simplify

Value = Union[Fraction, QuadraticNumber]


class DomainError(ValueError):
    pass


class Target(Enum):
    Q = "q"
    T_RATIO = "t"
    S_SUM = "s"
    G_MAX = "g_max"


class Method(Enum):
    GEOMETRIC = "geometric"
    COARSE_CF = "coarse"
    HEADS = "heads"
    MAX_LEMMA = "max_lemma"
    K_REFINED = "k_refined"


@dataclass(frozen=True)
class Enclosure:
    lo: Value
    hi: Value
    target: Target
    method: Method
    depth: Optional[int] = None
    strict_lo: bool = False
    strict_hi: bool = False
    informative: bool = True

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    def contains(self, value) -> bool:
        above = value > self.lo if self.strict_lo else value >= self.lo
        below = value < self.hi if self.strict_hi else value <= self.hi
        return above and below

    def within(self, other: "Enclosure") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    @property
    def width(self) -> Value:
        return self.hi - self.lo


def _needs_small_r(m: int, r: int) -> None:
    if not 0 <= r <= m:
        raise DomainError(f"need 0 <= r <= m, got r={r}, m={m}")
    if 2 * r >= m + 3:
        raise DomainError(f"bound only certified for r < (m+3)/2, got r={r}, m={m}")


def geometric_bounds_s(m: int, r: int) -> Enclosure:
    """C(m,r) * sum x^i <= s_m(r) <= C(m,r) * sum y^i, x = 1/m, y = r/(m-r+1).

    Finite sums keep the x = 1 and y = 1 cases well defined. The upper bound
    stays valid for y > 1 but is then marked non-informative.
    """
    if m < 1:
        raise DomainError("geometric bounds need m >= 1")
    if not 0 <= r <= m:
        raise DomainError(f"need 0 <= r <= m, got r={r}, m={m}")
    c = binomial(m, r)
    x, y = Fraction(1, m), Fraction(r, m - r + 1)
    lo = c * sum(x ** i for i in range(r + 1))
    hi = c * sum(y ** i for i in range(r + 1))
    return Enclosure(lo, hi, Target.S_SUM, Method.GEOMETRIC, informative=y <= 1)


def coarse_q_bounds(m: int, r: int) -> Enclosure:
    """m - 2r <= Q <= m - 2r + 2r/(m - 2r + 3) for r < (m+3)/2."""
    _needs_small_r(m, r)
    a0 = m - 2 * r
    return Enclosure(Fraction(a0), a0 + Fraction(2 * r, m - 2 * r + 3),
                     Target.Q, Method.COARSE_CF,
                     strict_lo=r >= 1, strict_hi=r > 1)


def _q_to_t(enc: Enclosure, r: int) -> Enclosure:
    # t = 1 + Q/(r+1) is increasing in Q
    return Enclosure(1 + enc.lo / (r + 1), 1 + enc.hi / (r + 1), Target.T_RATIO,
                     enc.method, enc.depth, enc.strict_lo, enc.strict_hi)


def _q_to_s(enc: Enclosure, m: int, r: int) -> Enclosure:
    # s = (r+1) C(m, r+1) / Q is decreasing in Q
    if r >= m:
        raise DomainError("need r < m so that C(m, r+1) > 0")
    if enc.lo <= 0:
        raise DomainError(f"Q lower bound {enc.lo} is not positive; cannot invert")
    top = (r + 1) * binomial(m, r + 1)
    return Enclosure(top / enc.hi, top / enc.lo, Target.S_SUM, enc.method, enc.depth,
                     enc.strict_hi, enc.strict_lo)


def coarse_t_bounds(m: int, r: int) -> Enclosure:
    """(m+2)/(r+1) - 1 <= t(r) <= (m+2)/(r+1) - 1 + 2r/((r+1)(m-2r+3))."""
    return _q_to_t(coarse_q_bounds(m, r), r)


def coarse_s_bounds(m: int, r: int) -> Enclosure:
    return _q_to_s(coarse_q_bounds(m, r), m, r)


def head_enclosure_q(m: int, r: int, depth: int) -> Enclosure:
    """a_0 + H_even <= Q <= a_0 + H_odd using the deepest heads up to ``depth``."""
    if r < 1:
        raise DomainError("head enclosures need r >= 1")
    _needs_small_r(m, r)
    if not 1 <= depth <= r:
        raise DomainError(f"need 1 <= depth <= r, got depth={depth}, r={r}")
    a0 = cf_coefficients(m, r)[0][0]
    even = depth if depth % 2 == 0 else depth - 1
    odd = depth if depth % 2 == 1 else depth - 1
    return Enclosure(a0 + head(m, r, even), a0 + head(m, r, odd), Target.Q, Method.HEADS,
                     depth, strict_lo=even != r, strict_hi=odd != r)


def head_enclosure_t(m: int, r: int, depth: int) -> Enclosure:
    return _q_to_t(head_enclosure_q(m, r, depth), r)


def head_enclosure_s(m: int, r: int, depth: int) -> Enclosure:
    return _q_to_s(head_enclosure_q(m, r, depth), m, r)


def _needs_heavy(omega: Weight) -> None:
    if omega.value == 1:
        raise DomainError("max-value bounds need omega > 1")


def _scale(omega: Weight, r: int) -> Value:
    """1 / ((omega - 1) * omega**r)."""
    w = omega.as_quadratic()
    return simplify(((w - 1) * w ** r).inverse())


def max_value_bounds(omega, m: int) -> Enclosure:
    """C(m, r0+1)/((w-1) w^r0) < g(r0) <= C(m, r0)/((w-1) w^(r0-1))."""
    omega = as_weight(omega)
    _needs_heavy(omega)
    r0 = find_r0(omega, m).r0
    lo = simplify(_scale(omega, r0) * binomial(m, r0 + 1))
    hi = simplify(_scale(omega, r0 - 1) * binomial(m, r0))
    return Enclosure(lo, hi, Target.G_MAX, Method.MAX_LEMMA, strict_lo=True)


def k_offset(omega, m: int) -> Value:
    """k = m + 2 - (omega + 1) r'."""
    omega = as_weight(omega)
    rp = find_r0(omega, m).r_prime
    return simplify(m + 2 - (omega.as_quadratic() + 1) * rp)


def k_refined_lower(omega, m: int) -> Optional[Enclosure]:
    """Sharper lower bound on g(r') when r0 = r'; None when r0 != r'.

    lo = C(m,r') / ((w-1) w^(r'-1)) * (1 - (1 - (k-2)/w)/(r'+1)), with
    k = m + 2 - (w+1) r' in [0, w+1).
    """
    omega = as_weight(omega)
    _needs_heavy(omega)
    profile = find_r0(omega, m)
    if profile.r0 != profile.r_prime:
        return None
    rp = profile.r_prime
    w = omega.as_quadratic()
    k = m + 2 - (w + 1) * rp
    if not (k >= 0 and k < w + 1):
        raise AssertionError(f"k={k} outside [0, omega+1)")
    hi = _scale(omega, rp - 1) * binomial(m, rp)
    factor = 1 - (1 - (k - 2) / w) / (rp + 1)
    return Enclosure(simplify(hi * factor), simplify(hi), Target.G_MAX, Method.K_REFINED,
                     strict_lo=True)


def enclosure(m: int, r: int, target: Target, method: Method, depth: Optional[int] = None) -> Enclosure:
    """Dispatch for the CLI: any supported (target, method) pair."""
    if method is Method.GEOMETRIC:
        if target is not Target.S_SUM:
            raise DomainError("geometric bounds exist only for the s target")
        return geometric_bounds_s(m, r)
    if method is Method.COARSE_CF:
        return {Target.Q: coarse_q_bounds, Target.T_RATIO: coarse_t_bounds,
                Target.S_SUM: coarse_s_bounds}[target](m, r)
    if method is Method.HEADS:
        if depth is None:
            raise DomainError("heads method needs a depth")
        return {Target.Q: head_enclosure_q, Target.T_RATIO: head_enclosure_t,
                Target.S_SUM: head_enclosure_s}[target](m, r, depth)
    raise DomainError(f"unsupported method {method}")
