"""Exact arithmetic in the real quadratic field Q(√D)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[int, Fraction]


def _frac(x: object) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@dataclass(frozen=True, slots=True)
class QuadNum:
    """The number x + y√D with rational x, y.

    Comparisons and signs are decided exactly, never through floats.
    """

    x: Fraction
    y: Fraction
    D: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _frac(self.x))
        object.__setattr__(self, "y", _frac(self.y))
        if self.D < 2 or is_square(self.D):
            raise ValueError(f"D must be a positive non-square integer, got {self.D}")

    @classmethod
    def rational(cls, x: Scalar, D: int) -> QuadNum:
        return cls(Fraction(x), Fraction(0), D)

    @classmethod
    def sqrt_d(cls, D: int) -> QuadNum:
        return cls(Fraction(0), Fraction(1), D)

    def _lift(self, other: object) -> QuadNum | None:
        if isinstance(other, QuadNum):
            if other.D != self.D:
                raise ValueError(f"mixing Q(√{self.D}) and Q(√{other.D})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNum(Fraction(other), Fraction(0), self.D)
        return None

    # ring operations

    def __add__(self, other: object) -> QuadNum:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadNum(self.x + o.x, self.y + o.y, self.D)

    __radd__ = __add__

    def __neg__(self) -> QuadNum:
        return QuadNum(-self.x, -self.y, self.D)

    def __sub__(self, other: object) -> QuadNum:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadNum(self.x - o.x, self.y - o.y, self.D)

    def __rsub__(self, other: object) -> QuadNum:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> QuadNum:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadNum(self.x * o.x + self.D * self.y * o.y, self.x * o.y + self.y * o.x, self.D)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> QuadNum:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        nrm = o.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero in Q(√D)")
        return self * QuadNum(o.x / nrm, -o.y / nrm, self.D)

    def __rtruediv__(self, other: object) -> QuadNum:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, p: int) -> QuadNum:
        if p < 0:
            return QuadNum.rational(1, self.D) / self**-p
        out, base = QuadNum.rational(1, self.D), self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    def conjugate(self) -> QuadNum:
        """Galois conjugate x − y√D."""
        return QuadNum(self.x, -self.y, self.D)

    def norm(self) -> Fraction:
        return self.x * self.x - self.D * self.y * self.y

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_rational(self) -> bool:
        return self.y == 0

    # order

    def sign(self) -> int:
        sx = (self.x > 0) - (self.x < 0)
        sy = (self.y > 0) - (self.y < 0)
        if sx == sy or sy == 0:
            return sx
        if sx == 0:
            return sy
        # opposite signs: the larger square wins
        return sx if self.x * self.x > self.D * self.y * self.y else sy

    def __abs__(self) -> QuadNum:
        return -self if self.sign() < 0 else self

    def _cmp(self, other: object) -> int | None:
        o = self._lift(other)
        if o is None:
            return None
        return (self - o).sign()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (QuadNum, int, Fraction)):
            try:
                return self._cmp(other) == 0
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        # rational values hash like the Fraction they equal
        return hash(self.x) if self.y == 0 else hash((self.x, self.y, self.D))

    def __lt__(self, other: object) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other: object) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other: object) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other: object) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    # floating views

    def __float__(self) -> float:
        # x + y√D suffers cancellation when the two parts nearly cancel; the
        # norm identity x + y√D = N / (x − y√D) avoids it.
        plus = float(self.x) + float(self.y) * math.sqrt(self.D)
        minus = float(self.x) - float(self.y) * math.sqrt(self.D)
        if self.y != 0 and self.x != 0 and abs(minus) > 4.0 * abs(plus):
            return float(self.norm()) / minus
        return plus

    def log_abs(self) -> float:
        """log |x + y√D|, accurate even when the value is tiny relative to x."""
        if self.is_zero():
            raise ValueError("log of zero")
        if self.y == 0:
            return _log_abs_fraction(self.x)
        if self.x == 0:
            return _log_abs_fraction(self.y) + 0.5 * math.log(self.D)
        conj = self.conjugate()
        if (self.x > 0) == (self.y > 0):
            return _log_abs_big(self)
        # |self| is the smaller of the pair; use |self| = |N| / |conj|
        return _log_abs_fraction(self.norm()) - _log_abs_big(conj)

    def __repr__(self) -> str:
        return f"QuadNum({self.x}, {self.y}, D={self.D})"

    def __str__(self) -> str:
        if self.y == 0:
            return str(self.x)
        y = "" if abs(self.y) == 1 else f"{abs(self.y)}*"
        root = f"{y}sqrt({self.D})"
        if self.x == 0:
            return root if self.y > 0 else f"-{root}"
        op = "+" if self.y > 0 else "-"
        return f"{self.x} {op} {root}"


def _log_abs_fraction(q: Fraction) -> float:
    return math.log(abs(q.numerator)) - math.log(q.denominator)


def _log_abs_big(q: QuadNum) -> float:
    # x and y share a sign, so no cancellation; factor out the denominator
    # to keep big integers from overflowing a double
    den = q.x.denominator * q.y.denominator
    xi = abs(q.x.numerator * q.y.denominator)
    yi = abs(q.y.numerator * q.x.denominator)
    shift = max(xi.bit_length(), yi.bit_length()) - 60
    if shift > 0:
        xf, yf = xi / 2**shift, yi / 2**shift
    else:
        xf, yf, shift = float(xi), float(yi), 0
    return math.log(xf + yf * math.sqrt(q.D)) + shift * math.log(2.0) - math.log(den)
