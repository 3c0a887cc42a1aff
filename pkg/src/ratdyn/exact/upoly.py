"""Dense univariate polynomials over Q(i).

Polynomials are plain tuples of :class:`GaussianRational` coefficients,
lowest degree first, with no trailing zeros.  The zero polynomial is ``()``.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd as _gcd
from typing import Iterable, Sequence

from .gaussian import GaussianRational, ZERO, ONE
from .interval import ComplexInterval

UPoly = tuple  # tuple[GaussianRational, ...]

_c = GaussianRational.coerce


def make(coeffs: Iterable) -> UPoly:
    out = [_c(c) for c in coeffs]
    while out and out[-1].is_zero():
        out.pop()
    return tuple(out)


def degree(p: UPoly) -> int:
    return len(p) - 1


def lc(p: UPoly) -> GaussianRational:
    return p[-1] if p else ZERO


def add(p: UPoly, q: UPoly) -> UPoly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for k, c in enumerate(q):
        out[k] = out[k] + c
    return make(out)


def neg(p: UPoly) -> UPoly:
    return tuple(-c for c in p)


def sub(p: UPoly, q: UPoly) -> UPoly:
    return add(p, neg(q))


def scale(p: UPoly, c) -> UPoly:
    c = _c(c)
    if c.is_zero():
        return ()
    return tuple(a * c for a in p)


def mul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return make(out)


def power(p: UPoly, n: int) -> UPoly:
    result: UPoly = (ONE,)
    base = p
    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    return result


def divmod_(p: UPoly, q: UPoly) -> tuple[UPoly, UPoly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    inv = q[-1].inverse()
    quot = [ZERO] * max(0, len(p) - dq)
    for k in range(len(p) - 1, dq - 1, -1):
        c = r[k]
        if c.is_zero():
            continue
        f = c * inv
        quot[k - dq] = f
        for j in range(dq + 1):
            r[k - dq + j] = r[k - dq + j] - f * q[j]
    return make(quot), make(r[:dq] if dq > 0 else [])


def rem(p: UPoly, q: UPoly) -> UPoly:
    return divmod_(p, q)[1]


def exquo(p: UPoly, q: UPoly) -> UPoly:
    quot, r = divmod_(p, q)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return quot


def monic(p: UPoly) -> UPoly:
    if not p:
        return p
    return scale(p, p[-1].inverse())


def gcd(p: UPoly, q: UPoly) -> UPoly:
    p, q = make(p), make(q)
    while q:
        p, q = q, rem(p, q)
    return monic(p)


def deriv(p: UPoly) -> UPoly:
    return make(c * k for k, c in enumerate(p) if k > 0)


def squarefree(p: UPoly) -> UPoly:
    if not p:
        raise ValueError("squarefree part of zero polynomial")
    g = gcd(p, deriv(p))
    return monic(exquo(p, g))


def evaluate(p: UPoly, x):
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def evaluate_ratio(p: UPoly, x: GaussianRational) -> tuple[int, int, int]:
    """Unnormalised exact ``p(x)`` as integers ``(re, im, den)``, ``den > 0``."""
    a, b, d = x.parts
    coeffs, den = _int_form(p)
    re, im, dk = 0, 0, 1
    for cr, ci in reversed(coeffs):
        # acc * x + c with x = (a + b i)/d, keeping the common denominator d^k
        re, im = re * a - im * b + cr * dk, re * b + im * a + ci * dk
        dk *= d
    return re, im, den * (dk // d if coeffs else 1)


def evaluate_dyadic(p: UPoly, x: GaussianRational) -> GaussianRational:
    """Exact ``p(x)`` via integer Horner (one gcd at the end)."""
    return GaussianRational._raw(*evaluate_ratio(p, x))


@lru_cache(maxsize=1024)
def _int_form(p: UPoly) -> tuple[list[tuple[int, int]], int]:
    den = 1
    for c in p:
        den = den * c.parts[2] // _gcd(den, c.parts[2])
    return clear_denominators(p), den


def compose(p: UPoly, q: UPoly) -> UPoly:
    """p(q(x))."""
    acc: UPoly = ()
    for c in reversed(p):
        acc = add(mul(acc, q), (c,))
    return acc


def shift(p: UPoly, a) -> UPoly:
    """p(x + a)."""
    return compose(p, make([a, 1]))


def reflect_sq(p: UPoly) -> UPoly:
    """p(x^2)."""
    out = [ZERO] * (2 * len(p) - 1) if p else []
    for k, c in enumerate(p):
        out[2 * k] = c
    return make(out)


def eval_interval(p: UPoly, box: ComplexInterval, prec: int) -> ComplexInterval:
    acc = ComplexInterval.point(0)
    for c in reversed(p):
        acc = acc.mul(box, prec).add(ComplexInterval.point(c, prec), prec)
    return acc


def resultant(p: UPoly, q: UPoly) -> GaussianRational:
    """Resultant over a field via the Euclidean algorithm."""
    if not p or not q:
        return ZERO
    res = ONE
    while True:
        dp, dq = len(p) - 1, len(q) - 1
        if dq == 0:
            return res * q[0] ** dp
        r = rem(p, q)
        if not r:
            return ZERO
        dr = len(r) - 1
        if (dp * dq) % 2:
            res = -res
        res = res * q[-1] ** (dp - dr)
        p, q = q, r


def to_complex(p: UPoly) -> list[complex]:
    return [complex(c) for c in p]


def clear_denominators(p: UPoly) -> list[tuple[int, int]]:
    """Scale ``p`` to Gaussian-integer coefficients ``(re, im)``."""
    from math import lcm
    d = 1
    for c in p:
        d = lcm(d, c.parts[2])
    out = []
    for c in p:
        a, b, dd = c.parts
        out.append((a * (d // dd), b * (d // dd)))
    return out


def to_str(p: Sequence, var: str = "x") -> str:
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c.is_zero():
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        cs = str(c)
        if not c.is_real() and not c.re == 0:
            cs = f"({cs})"
        if mono and c.is_one():
            terms.append(mono)
        elif mono and c == -ONE:
            terms.append("-" + mono)
        elif mono:
            terms.append(f"{cs}*{mono}")
        else:
            terms.append(cs)
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"
