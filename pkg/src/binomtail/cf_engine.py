"""Generalized continued fraction for Q = (r+1) C(m, r+1) / s_m(r).

With ``a_i = m - 2r + 3i`` and ``b_i = 2i(r + 1 - i)``,

    Q = a_0 + b_1/(a_1 + b_2/(a_2 + ... + b_r/a_r)).

The tails ``T_j`` (the fraction from level ``j`` down) equal ``R_j / R_{j-1}``
where ``R_j = 2^j j! sum_{k=0}^{r-j} C(r-k, j) C(m, k)``. The ``R_j`` here are
always built from that defining sum; the three-term recurrence they satisfy is
something we check, never something we compute with.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .binomial_core import binomial, partial_sum


class ZeroDenominator(ArithmeticError):
    """A nested denominator vanished while evaluating a head."""


def _check_range(m: int, r: int) -> None:
    if m < 0 or r < 0 or r > m:
        raise ValueError(f"need 0 <= r <= m, got r={r}, m={m}")


def cf_coefficients(m: int, r: int) -> tuple[list[int], list[int]]:
    """Partial denominators a_0..a_r and partial numerators b_1..b_r."""
    _check_range(m, r)
    a = [m - 2 * r + 3 * i for i in range(r + 1)]
    b = [2 * i * (r + 1 - i) for i in range(1, r + 1)]
    return a, b


def r_sequence(m: int, r: int) -> list[int]:
    """R_{-1}, R_0, ..., R_{r+1}, each from its defining sum."""
    _check_range(m, r)
    seq = [(r + 1) * binomial(m, r + 1)]
    for j in range(r + 2):
        total = sum(binomial(r - k, j) * binomial(m, k) for k in range(r - j + 1))
        seq.append((1 << j) * factorial(j) * total)
    return seq


def tails(m: int, r: int) -> list[Fraction]:
    """T_1..T_{r+1} with T_j = R_j / R_{j-1} (so T_{r+1} = 0).

    For r = 0 the fraction is empty and the list is empty.
    """
    if r == 0:
        _check_range(m, r)
        return []
    R = r_sequence(m, r)
    # R[j + 1] holds R_j
    return [Fraction(R[j + 1], R[j]) for j in range(1, r + 2)]


def q_exact(m: int, r: int) -> Fraction:
    _check_range(m, r)
    return Fraction((r + 1) * binomial(m, r + 1), partial_sum(m, r))


def head(m: int, r: int, j: int) -> Fraction:
    """H_j = b_1/(a_1 + ... + b_j/a_j), evaluated bottom-up; H_0 = 0."""
    _check_range(m, r)
    if not 0 <= j <= r:
        raise ValueError(f"need 0 <= j <= r, got j={j}, r={r}")
    a, b = cf_coefficients(m, r)
    value = Fraction(0)
    for i in range(j, 0, -1):
        den = a[i] + value
        if den == 0:
            raise ZeroDenominator(f"a_{i} + nested value vanishes for m={m}, r={r}, j={j}")
        value = b[i - 1] / den
    return value


def kettenbruch_K(m: int, r: int) -> Fraction:
    """K_m(r), the full fraction below a_0 (equal to T_1; 0 when r = 0)."""
    _check_range(m, r)
    if r == 0:
        return Fraction(0)
    R = r_sequence(m, r)
    return Fraction(R[2], R[1])


@dataclass(frozen=True)
class CFExpansion:
    m: int
    r: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    R: tuple[int, ...]
    tails: tuple[Fraction, ...]

    def R_at(self, j: int) -> int:
        """R_j for -1 <= j <= r+1."""
        return self.R[j + 1]

    def tail(self, j: int) -> Fraction:
        """T_j for 1 <= j <= r+1."""
        if self.r == 0:
            return Fraction(0)
        return self.tails[j - 1]

    @property
    def q(self) -> Fraction:
        return Fraction(self.R[0], self.R[1])


def expand(m: int, r: int) -> CFExpansion:
    a, b = cf_coefficients(m, r)
    return CFExpansion(m, r, tuple(a), tuple(b), tuple(r_sequence(m, r)), tuple(tails(m, r)))


def expansion_violations(m: int, r: int) -> list[str]:
    """Names of every expansion invariant that fails for (m, r); empty if all hold."""
    e = expand(m, r)
    a, b, R = e.a, e.b, e.R_at
    bad = []
    if not R(-1) == (r + 1) * binomial(m, r + 1) == (m - r) * binomial(m, r):
        bad.append("R_-1")
    if R(0) != partial_sum(m, r):
        bad.append("R_0=s_m(r)")
    if R(r) != (1 << r) * factorial(r):
        bad.append("R_r=2^r r!")
    if R(r + 1) != 0:
        bad.append("R_r+1=0")
    if R(-1) - a[0] * R(0) != R(1):
        bad.append("first recurrence")
    for j in range(1, r + 1):
        if b[j - 1] * R(j - 1) - a[j] * R(j) != R(j + 1):
            bad.append(f"recurrence j={j}")
    for j in range(1, r + 1):
        t = e.tail(j)
        if not t > 0:
            bad.append(f"T_{j} > 0")
        if t != b[j - 1] / (a[j] + e.tail(j + 1)):
            bad.append(f"T_{j} tail recurrence")
    if r and e.tail(r + 1) != 0:
        bad.append("T_r+1=0")
    if q_exact(m, r) != a[0] + e.tail(1):
        bad.append("Q=a_0+T_1")
    if not verify_factorizations(m, r):
        bad.append("factorizations")
    return bad


def verify_factorizations(m: int, r: int) -> bool:
    """s_m(r) * prod T_j == 2^r r!  and  r! s_m(r) == prod (a_j + T_{j+1})."""
    _check_range(m, r)
    s = partial_sum(m, r)
    a, _ = cf_coefficients(m, r)
    T = tails(m, r)
    prod_t = Fraction(1)
    prod_den = Fraction(1)
    for j in range(1, r + 1):
        prod_t *= T[j - 1]
        prod_den *= a[j] + T[j]
    return s * prod_t == (1 << r) * factorial(r) and factorial(r) * s == prod_den
