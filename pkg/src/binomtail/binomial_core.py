"""Binomial coefficients, partial binomial sums and weighted sums.

Python ``int`` is the arbitrary-precision natural and ``fractions.Fraction``
the exact rational (always reduced, positive denominator). Out-of-range
indices follow the usual conventions: ``binomial(m, i) == 0`` outside
``0..m`` and ``partial_sum`` clamps to ``2**m`` for ``r >= m``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def _check_m(m: int) -> None:
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")


def binomial(m: int, i: int) -> int:
    """C(m, i) by the multiplicative formula, exact division at each step."""
    _check_m(m)
    if i < 0 or i > m:
        return 0
    i = min(i, m - i)
    c = 1
    for k in range(1, i + 1):
        c = c * (m - k + 1) // k
    return c


@lru_cache(maxsize=128)
def binomial_row(m: int) -> tuple[int, ...]:
    """The full row C(m, 0..m). Cached; lru_cache is safe across threads."""
    _check_m(m)
    row = [1] * (m + 1)
    for k in range(1, m + 1):
        row[k] = row[k - 1] * (m - k + 1) // k
    return tuple(row)


@lru_cache(maxsize=128)
def partial_sums(m: int) -> tuple[int, ...]:
    """Prefix sums s_m(0..m) of the binomial row."""
    out = []
    acc = 0
    for c in binomial_row(m):
        acc += c
        out.append(acc)
    return tuple(out)


def partial_sum(m: int, r: int) -> int:
    """s_m(r) = C(m,0) + ... + C(m,r); 0 for r < 0 and 2**m for r >= m."""
    _check_m(m)
    if r < 0:
        return 0
    if r >= m:
        return 1 << m
    return partial_sums(m)[r]


def g_value(omega, m: int, r: int) -> Fraction:
    """omega**-r * s_m(r) for a rational omega >= 1."""
    omega = Fraction(omega)
    if omega < 1:
        raise ValueError(f"omega must be >= 1, got {omega}")
    if not 0 <= r <= m:
        raise ValueError(f"need 0 <= r <= m, got r={r}, m={m}")
    return Fraction(partial_sum(m, r)) / omega ** r


def reflect_identity_check(m: int, r: int) -> bool:
    """Whether s_m(m - r) == 2**m - s_m(r - 1)."""
    if not 1 <= r <= m:
        raise ValueError(f"need 1 <= r <= m, got r={r}, m={m}")
    return partial_sum(m, m - r) == (1 << m) - partial_sum(m, r - 1)
