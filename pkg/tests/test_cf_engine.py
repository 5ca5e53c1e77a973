from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from binomtail.cf_engine import (
    ZeroDenominator,
    cf_coefficients,
    expand,
    expansion_violations,
    head,
    kettenbruch_K,
    q_exact,
    r_sequence,
    tails,
    verify_factorizations,
)
from binomtail.maximizer import t_ratio

import oracles

pairs = st.integers(0, 40).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, m)))


@pytest.mark.parametrize("m, r, a, b", [
    (10, 3, [4, 7, 10, 13], [6, 8, 6]),
    (4, 1, [2, 5], [2]),
    (5, 0, [5], []),
])
def test_coefficients(m, r, a, b):
    assert cf_coefficients(m, r) == (a, b)


@pytest.mark.parametrize("m, r", [(3, 4), (-1, 0), (4, -1)])
def test_coefficients_reject_bad_range(m, r):
    with pytest.raises(ValueError):
        cf_coefficients(m, r)


def test_r_sequence_examples():
    assert r_sequence(4, 1) == [12, 5, 2, 0]
    assert 12 - 2 * 5 == 2
    for m in range(8):
        assert r_sequence(m, 0) == [m, 1, 0]
    R = r_sequence(10, 3)
    assert R[1] == 176 == oracles.s(10, 3)
    assert R[4] == 48 == oracles.R(10, 3, 3)


@given(pairs)
def test_r_sequence_matches_oracle(mr):
    m, r = mr
    assert r_sequence(m, r) == [oracles.R(m, r, j) for j in range(-1, r + 2)]


def test_tails_examples():
    assert tails(4, 1) == [Fraction(2, 5), 0]
    assert tails(7, 0) == []
    T = tails(10, 3)
    assert all(t > 0 for t in T[:3]) and T[3] == 0


@pytest.mark.parametrize("m, r, expected", [(4, 1, Fraction(12, 5)), (10, 3, Fraction(105, 22))])
def test_q_exact_examples(m, r, expected):
    assert q_exact(m, r) == expected
    a, b = cf_coefficients(m, r)
    assert oracles.cf_value(a, b) == expected


def test_q_exact_r0():
    for m in range(20):
        assert q_exact(m, 0) == m


@given(pairs)
def test_q_equals_a0_plus_first_tail(mr):
    m, r = mr
    a, _ = cf_coefficients(m, r)
    first = tails(m, r)[0] if r else 0
    assert q_exact(m, r) == a[0] + first
    assert q_exact(m, r) == Fraction(oracles.R(m, r, -1), oracles.s(m, r))


def test_tail_positivity_with_negative_partial_denominators():
    # r close to m makes the leading a_i negative; the tails stay positive
    seen_negative = False
    for m in range(1, 41):
        for r in range(max(0, m - 3), m + 1):
            a, _ = cf_coefficients(m, r)
            seen_negative |= any(x < 0 for x in a[1:])
            T = tails(m, r)
            assert all(t > 0 for t in T[:r])
    assert seen_negative


def test_head_examples():
    assert head(10, 3, 1) == Fraction(6, 7)
    assert head(10, 3, 2) == Fraction(10, 13)
    assert head(10, 3, 0) == 0
    assert head(10, 3, 3) + 4 == q_exact(10, 3)


def test_head_matches_top_down_convergents():
    for m in range(0, 30):
        for r in range(0, m + 1):
            if 2 * r >= m + 3:
                continue
            a, b = cf_coefficients(m, r)
            for j in range(r + 1):
                assert head(m, r, j) + a[0] == oracles.cf_value(a[:j + 1], b[:j])


def test_full_head_equals_q_whenever_defined():
    for m in range(0, 41):
        for r in range(m + 1):
            try:
                h = head(m, r, r)
            except ZeroDenominator:
                continue
            assert h + cf_coefficients(m, r)[0][0] == q_exact(m, r)


def test_head_zero_denominator_is_reported():
    # a_1 = 3 - 6 + 3 = 0
    with pytest.raises(ZeroDenominator):
        head(3, 3, 1)


def test_head_rejects_bad_depth():
    with pytest.raises(ValueError):
        head(10, 3, 4)


@pytest.mark.parametrize("m, r", [(4, 1), (7, 0), (12, 7), (40, 40), (40, 13)])
def test_factorization_examples(m, r):
    assert verify_factorizations(m, r)


def test_factorization_with_negative_a0():
    a, _ = cf_coefficients(12, 7)
    assert a[0] == -2 and a[1] == 1
    assert verify_factorizations(12, 7)


def test_factorization_oracle_4_1():
    assert oracles.s(4, 1) * Fraction(2, 5) == 2 ** 1 * factorial(1)


def test_kettenbruch():
    assert kettenbruch_K(4, 1) == Fraction(2, 5)
    assert kettenbruch_K(9, 0) == 0
    for m in range(0, 30):
        for r in range(0, m):
            K = kettenbruch_K(m, r)
            assert t_ratio(m, r) == Fraction(m - r + 1, r + 1) + K / (r + 1)
            assert 1 + q_exact(m, r) / (r + 1) == Fraction(m - r + 1, r + 1) + K / (r + 1)


def test_expansion_object():
    e = expand(10, 3)
    assert e.R_at(-1) == 840 and e.R_at(0) == 176 and e.R_at(4) == 0
    assert e.tail(4) == 0 and e.q == Fraction(105, 22)


@given(pairs)
def test_every_invariant_holds(mr):
    assert expansion_violations(*mr) == []
