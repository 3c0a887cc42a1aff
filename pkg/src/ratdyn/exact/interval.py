"""Complex rectangle arithmetic with dyadic endpoints and outward rounding.

Every operation computes the exact rational result of the endpoint formulas
and then rounds lower endpoints down and upper endpoints up to ``prec``
significant bits, so results are always enclosures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .gaussian import GaussianRational


def _exp2(q: Fraction) -> int:
    # floor(log2(|q|)) for q != 0
    n, d = abs(q.numerator), q.denominator
    e = n.bit_length() - d.bit_length()
    if (n << max(0, -e)) < (d << max(0, e)):
        e -= 1
    return e


def round_down(q: Fraction, prec: int) -> Fraction:
    if q == 0:
        return Fraction(0)
    if q.denominator & (q.denominator - 1) == 0 and q.numerator.bit_length() <= prec:
        return q
    shift = prec - 1 - _exp2(q)
    if shift >= 0:
        return Fraction(floor(q * (1 << shift)), 1 << shift)
    return Fraction(floor(q / (1 << -shift)) << -shift)


def round_up(q: Fraction, prec: int) -> Fraction:
    return -round_down(-q, prec)


def ratio_down(n: int, d: int, prec: int) -> Fraction:
    """``round_down(n / d, prec)`` for ``d > 0`` without normalising ``n / d``."""
    if n == 0:
        return Fraction(0)
    shift = prec + d.bit_length() - abs(n).bit_length() + 1
    if shift >= 0:
        return Fraction((n << shift) // d, 1 << shift)
    return Fraction((n // (d << -shift)) << -shift)


def ratio_up(n: int, d: int, prec: int) -> Fraction:
    return -ratio_down(-n, d, prec)


def is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


@dataclass(frozen=True)
class ComplexInterval:
    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction
    im_hi: Fraction

    def __post_init__(self):
        if self.re_lo > self.re_hi or self.im_lo > self.im_hi:
            raise ValueError("empty complex interval")

    # -- construction ----------------------------------------------------
    @classmethod
    def point(cls, z, prec: int = 64) -> "ComplexInterval":
        z = GaussianRational.coerce(z)
        re, im = z.re, z.im
        return cls(round_down(re, prec), round_up(re, prec),
                   round_down(im, prec), round_up(im, prec))

    @classmethod
    def from_ratio(cls, re: int, im: int, d: int, prec: int) -> "ComplexInterval":
        """Enclosure of ``(re + im i) / d`` with ``d > 0``."""
        return cls(ratio_down(re, d, prec), ratio_up(re, d, prec),
                   ratio_down(im, d, prec), ratio_up(im, d, prec))

    @classmethod
    def around(cls, center, radius) -> "ComplexInterval":
        c = GaussianRational.coerce(center)
        r = Fraction(radius)
        return cls(c.re - r, c.re + r, c.im - r, c.im + r)

    @classmethod
    def from_complex(cls, z: complex, radius: float) -> "ComplexInterval":
        re, im, r = Fraction(z.real), Fraction(z.imag), Fraction(radius)
        return cls(re - r, re + r, im - r, im + r)

    # -- geometry --------------------------------------------------------
    @property
    def center(self) -> GaussianRational:
        return GaussianRational((self.re_lo + self.re_hi) / 2,
                                (self.im_lo + self.im_hi) / 2)

    @property
    def width(self) -> Fraction:
        return max(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    def contains_point(self, z) -> bool:
        z = GaussianRational.coerce(z)
        return self.re_lo <= z.re <= self.re_hi and self.im_lo <= z.im <= self.im_hi

    def contains(self, other: "ComplexInterval") -> bool:
        return (self.re_lo <= other.re_lo and other.re_hi <= self.re_hi
                and self.im_lo <= other.im_lo and other.im_hi <= self.im_hi)

    def contains_interior(self, other: "ComplexInterval") -> bool:
        return (self.re_lo < other.re_lo and other.re_hi < self.re_hi
                and self.im_lo < other.im_lo and other.im_hi < self.im_hi)

    def intersects(self, other: "ComplexInterval") -> bool:
        return not (self.re_hi < other.re_lo or other.re_hi < self.re_lo
                    or self.im_hi < other.im_lo or other.im_hi < self.im_lo)

    def contains_zero(self) -> bool:
        return self.re_lo <= 0 <= self.re_hi and self.im_lo <= 0 <= self.im_hi

    def abs_lower(self) -> Fraction:
        """A lower bound for |z| over the box, as an exact rational."""
        rx = 0 if self.re_lo <= 0 <= self.re_hi else min(abs(self.re_lo), abs(self.re_hi))
        ry = 0 if self.im_lo <= 0 <= self.im_hi else min(abs(self.im_lo), abs(self.im_hi))
        # |z| >= max(|re|, |im|) >= ... ; use the Euclidean bound on squares
        return _sqrt_lower(rx * rx + ry * ry)

    def abs_upper(self) -> Fraction:
        rx = max(abs(self.re_lo), abs(self.re_hi))
        ry = max(abs(self.im_lo), abs(self.im_hi))
        return _sqrt_upper(rx * rx + ry * ry)

    def __complex__(self) -> complex:
        c = self.center
        return complex(c)

    # -- arithmetic ------------------------------------------------------
    def _rounded(self, rl, rh, il, ih, prec) -> "ComplexInterval":
        return ComplexInterval(round_down(rl, prec), round_up(rh, prec),
                               round_down(il, prec), round_up(ih, prec))

    def add(self, other: "ComplexInterval", prec: int) -> "ComplexInterval":
        return self._rounded(self.re_lo + other.re_lo, self.re_hi + other.re_hi,
                             self.im_lo + other.im_lo, self.im_hi + other.im_hi, prec)

    def sub(self, other: "ComplexInterval", prec: int) -> "ComplexInterval":
        return self._rounded(self.re_lo - other.re_hi, self.re_hi - other.re_lo,
                             self.im_lo - other.im_hi, self.im_hi - other.im_lo, prec)

    def neg(self) -> "ComplexInterval":
        return ComplexInterval(-self.re_hi, -self.re_lo, -self.im_hi, -self.im_lo)

    def mul(self, other: "ComplexInterval", prec: int) -> "ComplexInterval":
        ac = _rmul(self.re_lo, self.re_hi, other.re_lo, other.re_hi)
        bd = _rmul(self.im_lo, self.im_hi, other.im_lo, other.im_hi)
        ad = _rmul(self.re_lo, self.re_hi, other.im_lo, other.im_hi)
        bc = _rmul(self.im_lo, self.im_hi, other.re_lo, other.re_hi)
        return self._rounded(ac[0] - bd[1], ac[1] - bd[0],
                             ad[0] + bc[0], ad[1] + bc[1], prec)

    def scale(self, c, prec: int) -> "ComplexInterval":
        return self.mul(ComplexInterval.point(c, max(prec, 64) * 4), prec)

    def inverse(self, prec: int) -> "ComplexInterval":
        # 1/z = conj(z) / |z|^2 ; requires 0 outside the box
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        n_lo = _sq_lo(self.re_lo, self.re_hi) + _sq_lo(self.im_lo, self.im_hi)
        n_hi = _sq_hi(self.re_lo, self.re_hi) + _sq_hi(self.im_lo, self.im_hi)
        if n_lo <= 0:
            raise ZeroDivisionError("interval too close to zero")
        inv_n = (1 / n_hi, 1 / n_lo)
        re = _rmul(self.re_lo, self.re_hi, inv_n[0], inv_n[1])
        im = _rmul(-self.im_hi, -self.im_lo, inv_n[0], inv_n[1])
        return self._rounded(re[0], re[1], im[0], im[1], prec)

    def div(self, other: "ComplexInterval", prec: int) -> "ComplexInterval":
        return self.mul(other.inverse(prec), prec)

    def pow(self, n: int, prec: int) -> "ComplexInterval":
        result = ComplexInterval(Fraction(1), Fraction(1), Fraction(0), Fraction(0))
        base = self
        while n:
            if n & 1:
                result = result.mul(base, prec)
            base = base.mul(base, prec)
            n >>= 1
        return result

    def hull(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(min(self.re_lo, other.re_lo), max(self.re_hi, other.re_hi),
                               min(self.im_lo, other.im_lo), max(self.im_hi, other.im_hi))

    def __str__(self):
        return (f"[{float(self.re_lo):.6g}, {float(self.re_hi):.6g}] + "
                f"[{float(self.im_lo):.6g}, {float(self.im_hi):.6g}]i")


def _rmul(a, b, c, d):
    ps = (a * c, a * d, b * c, b * d)
    return min(ps), max(ps)


def _sq_lo(a, b):
    if a <= 0 <= b:
        return Fraction(0)
    return min(a * a, b * b)


def _sq_hi(a, b):
    return max(a * a, b * b)


def _isqrt_frac(q: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    from math import isqrt
    if q <= 0:
        return Fraction(0), Fraction(0)
    scale = 1 << (2 * bits)
    n = q.numerator * scale // q.denominator
    s = isqrt(n)
    lo = Fraction(s, 1 << bits)
    hi = Fraction(s + 2, 1 << bits)
    return lo, hi


def _sqrt_lower(q: Fraction) -> Fraction:
    lo, _ = _isqrt_frac(q)
    # guard against rounding in the integer floor division
    while lo * lo > q:
        lo /= 2
    return lo


def _sqrt_upper(q: Fraction) -> Fraction:
    _, hi = _isqrt_frac(q)
    while hi * hi < q:
        hi *= 2
    return hi
