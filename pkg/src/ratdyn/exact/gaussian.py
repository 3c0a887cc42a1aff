"""Exact Gaussian rationals, i.e. elements of Q(i).

A value is stored as ``(a + b*i) / d`` with integers ``a, b`` and ``d > 0``
and ``gcd(a, b, d) == 1``.  This is noticeably faster than a pair of
``Fraction`` objects because every operation needs a single gcd.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational as _Rational

Rational = Fraction


def _norm3(a: int, b: int, d: int) -> tuple[int, int, int]:
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    return a, b, d


class GaussianRational:
    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        self._a, self._b, self._d = _norm3(a, b, d)
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussianRational":
        obj = object.__new__(cls)
        obj._a, obj._b, obj._d = _norm3(a, b, d)
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, int):
            return cls._raw(x, 0, 1)
        if isinstance(x, _Rational):
            return cls._raw(int(x.numerator), 0, int(x.denominator))
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    # -- accessors -------------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    @property
    def parts(self) -> tuple[int, int, int]:
        """Raw ``(a, b, d)`` with value ``(a + b i) / d``."""
        return self._a, self._b, self._d

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_one(self) -> bool:
        return self._a == 1 and self._b == 0 and self._d == 1

    def is_real(self) -> bool:
        return self._b == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def __complex__(self) -> complex:
        return complex(self._a / self._d, self._b / self._d)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._d * o._d
        return GaussianRational._raw(self._a * o._d + o._a * self._d,
                                     self._b * o._d + o._b * self._d, d)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._raw(self._a * o._d - o._a * self._d,
                                     self._b * o._d - o._b * self._d,
                                     self._d * o._d)

    def __rsub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        a1, b1, d1 = self._a, self._b, self._d
        a2, b2, d2 = o._a, o._b, o._d
        return GaussianRational._raw(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        if self.is_zero():
            raise ZeroDivisionError("GaussianRational division by zero")
        n = self._a * self._a + self._b * self._b
        return GaussianRational._raw(self._a * self._d, -self._b * self._d, n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        if self._hash is None:
            if self._b == 0:
                self._hash = hash(Fraction(self._a, self._d))
            else:
                self._hash = hash((self._a, self._b, self._d))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- text ------------------------------------------------------------
    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if re == 0:
            return _imag_str(im)
        sign = "+" if im > 0 else "-"
        return f"{re}{sign}{_imag_str(abs(im))}"


def _imag_str(im: Fraction) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    if im.denominator == 1:
        return f"{im.numerator}*i"
    return f"{im.numerator}/{im.denominator}*i"


ZERO = GaussianRational._raw(0, 0, 1)
ONE = GaussianRational._raw(1, 0, 1)
I = GaussianRational._raw(0, 1, 1)


def gr(x=0, y=0) -> GaussianRational:
    """Shorthand constructor: ``gr(1, 2)`` is ``1 + 2i``."""
    if y == 0 and isinstance(x, GaussianRational):
        return x
    return GaussianRational(x, y)
