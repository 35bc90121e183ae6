"""Exact numbers of the form a * 2**b * 5**c.

This set is closed under addition, subtraction and multiplication and every
element has a finite decimal expansion, which makes it a convenient exact
domain for decimal weights.  Values are kept canonical: zero is (0, 0, 0) and
otherwise ``a`` is divisible by neither 2 nor 5.
"""

from __future__ import annotations

import re
from fractions import Fraction

_DECIMAL = re.compile(r"^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$")


def _normalize(a: int, b: int, c: int) -> tuple:
    if a == 0:
        return 0, 0, 0
    tz = (a & -a).bit_length() - 1
    if tz:
        a >>= tz
        b += tz
    while a % 5 == 0:
        a //= 5
        c += 1
    return a, b, c


def _pow25(b: int, c: int) -> int:
    return (1 << b) * 5 ** c


class Q25:
    __slots__ = ("a", "b", "c")

    def __init__(self, a: int = 0, b: int = 0, c: int = 0):
        self.a, self.b, self.c = _normalize(int(a), int(b), int(c))

    @classmethod
    def _raw(cls, a, b, c):
        obj = cls.__new__(cls)
        obj.a, obj.b, obj.c = a, b, c
        return obj

    @property
    def triple(self) -> tuple:
        return self.a, self.b, self.c

    def is_zero(self) -> bool:
        return self.a == 0

    def __add__(self, other):
        if not isinstance(other, Q25):
            other = Q25.coerce(other)
        if self.a == 0:
            return other
        if other.a == 0:
            return self
        b, c = min(self.b, other.b), min(self.c, other.c)
        x = self.a * _pow25(self.b - b, self.c - c)
        y = other.a * _pow25(other.b - b, other.c - c)
        return Q25(x + y, b, c)

    __radd__ = __add__

    def __neg__(self):
        return Q25._raw(-self.a, self.b, self.c)

    def __sub__(self, other):
        if not isinstance(other, Q25):
            other = Q25.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return Q25.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Q25):
            other = Q25.coerce(other)
        if self.a == 0 or other.a == 0:
            return ZERO
        # product of two canonical mantissas is still free of 2 and 5
        return Q25._raw(self.a * other.a, self.b + other.b, self.c + other.c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Q25):
            return self.triple == other.triple
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.triple)

    def __lt__(self, other):
        return self.to_fraction() < Q25.coerce(other).to_fraction()

    def __repr__(self):
        return f"Q25({self.a}, {self.b}, {self.c})"

    def __str__(self):
        return self.to_decimal()

    def to_fraction(self) -> Fraction:
        num, den = self.a, 1
        if self.b >= 0:
            num <<= self.b
        else:
            den <<= -self.b
        if self.c >= 0:
            num *= 5 ** self.c
        else:
            den *= 5 ** -self.c
        return Fraction(num, den)

    def is_integer(self) -> bool:
        return self.a == 0 or (self.b >= 0 and self.c >= 0)

    def to_int(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not an integer")
        return self.a * _pow25(self.b, self.c) if self.a else 0

    def to_decimal(self) -> str:
        if self.a == 0:
            return "0"
        k = max(0, -self.b, -self.c)
        scaled = self.a * _pow25(self.b + k, self.c + k)
        sign = "-" if scaled < 0 else ""
        digits = str(abs(scaled))
        if k == 0:
            return sign + digits
        digits = digits.rjust(k + 1, "0")
        whole, frac = digits[:-k], digits[-k:].rstrip("0")
        return sign + whole + ("." + frac if frac else "")

    @classmethod
    def parse(cls, text: str) -> "Q25":
        """Parse a finite decimal such as ``-12.5``, ``.25`` or ``3e-2``."""
        m = _DECIMAL.match(text)
        if not m or not (m.group(2) or m.group(3)):
            raise ValueError(f"not a finite decimal: {text!r}")
        sign, whole, frac, exp = m.groups()
        frac = frac or ""
        a = int((whole or "0") + frac)
        e = int(exp or 0) - len(frac)
        return cls(-a if sign == "-" else a, e, e)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Q25":
        q = Fraction(q)
        den = q.denominator
        b = (den & -den).bit_length() - 1
        den >>= b
        c = 0
        while den % 5 == 0:
            den //= 5
            c += 1
        if den != 1:
            raise ValueError(f"{q} is not of the form a*2^b*5^c")
        return cls(q.numerator, -b, -c)

    @classmethod
    def coerce(cls, x) -> "Q25":
        if isinstance(x, Q25):
            return x
        if isinstance(x, int):
            return cls(x)
        if isinstance(x, Fraction):
            return cls.from_fraction(x)
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Q25")


ZERO = Q25(0)
ONE = Q25(1)
HALF = Q25(1, -1, 0)
