"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Values are ``a + b*sqrt(d)`` with rational ``a``, ``b`` and a positive integer
radicand ``d``. Ordering is decided exactly by sign analysis and squaring, so
no floating point is involved anywhere. Decimal output is produced only on
request, as a certified enclosure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Union

Number = Union[int, Fraction, "QuadraticNumber"]


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Return sqrt(q) if it is rational, else None."""
    q = Fraction(q)
    if q < 0:
        return None
    p, d = q.numerator, q.denominator
    if is_square(p) and is_square(d):
        return Fraction(isqrt(p), isqrt(d))
    return None


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class QuadraticNumber:
    """The real number ``a + b*sqrt(d)``.

    ``d`` is kept as a positive non-square integer whenever ``b != 0``; a zero
    ``b`` means the value is rational and ``d`` is irrelevant (normalized to 1).
    """

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 1

    def __post_init__(self):
        a, b, d = Fraction(self.a), Fraction(self.b), int(self.d)
        if d <= 0:
            raise ValueError(f"radicand must be positive, got {d}")
        if b and is_square(d):
            a, b, d = a + b * isqrt(d), Fraction(0), 1
        if not b:
            d = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @classmethod
    def sqrt_of(cls, q) -> "QuadraticNumber":
        """sqrt(q) for a positive rational q, written as (1/den)*sqrt(num*den)."""
        q = Fraction(q)
        if q <= 0:
            raise ValueError(f"sqrt_of needs a positive rational, got {q}")
        return cls(Fraction(0), Fraction(1, q.denominator), q.numerator * q.denominator)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return self.a

    def _coerce(self, other) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            if self.b and other.b and self.d != other.d:
                raise ValueError(
                    f"cannot mix radicands {self.d} and {other.d}")
            return other
        if isinstance(other, (int, Rational)):
            return QuadraticNumber(Fraction(other))
        return NotImplemented

    def _radicand(self, other: "QuadraticNumber") -> int:
        return self.d if self.b else other.d

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a + o.a, self.b + o.b, self._radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._radicand(o)
        return QuadraticNumber(self.a * o.a + self.b * o.b * d,
                               self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "QuadraticNumber":
        n = self.norm()
        if n == 0:
            # d is non-square, so the norm only vanishes at zero
            raise ZeroDivisionError("inverse of zero")
        return QuadraticNumber(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = QuadraticNumber(Fraction(1))
        for _ in range(abs(n)):
            result = result * base
        return result

    def sign(self) -> int:
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2*d
        return sa * _sign(self.a * self.a - self.b * self.b * self.d)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, float) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() == 0

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() >= 0

    def enclose(self, digits: int = 30) -> tuple[Fraction, Fraction]:
        """Rational lo <= self <= hi with hi - lo <= |b| * 10**-digits."""
        if not self.b:
            return self.a, self.a
        scale = 10 ** digits
        root_lo = Fraction(isqrt(self.d * scale * scale), scale)
        root_hi = root_lo + Fraction(1, scale)
        x, y = self.a + self.b * root_lo, self.a + self.b * root_hi
        return (x, y) if x <= y else (y, x)

    def __float__(self):
        lo, hi = self.enclose(20)
        return float((lo + hi) / 2)

    def __str__(self):
        if not self.b:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.d})"


def as_quadratic(x: Number) -> QuadraticNumber:
    if isinstance(x, QuadraticNumber):
        return x
    return QuadraticNumber(Fraction(x))


def simplify(x: Number) -> Fraction | QuadraticNumber:
    """Return a Fraction when the value is rational."""
    if isinstance(x, QuadraticNumber) and x.is_rational:
        return x.a
    return x
