"""Certified isolation of the complex roots of squarefree polynomials over Q(i).

Approximate roots come from ``flint.acb_poly.roots``; each one is then certified
with the Krawczyk operator in dyadic complex rectangle arithmetic.  A box
``B`` is accepted when ``K(B)`` lies strictly inside ``B``, which proves that
``B`` holds exactly one root and that the root lies in ``K(B)``.

Isolating boxes handed out by this module are such accepted ``B``: each holds
exactly one root, and that root lies strictly inside it.  Strict interiority
is what lets containment tests against other boxes terminate.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import flint

from . import upoly
from .gaussian import GaussianRational
from .interval import ComplexInterval, ratio_down, round_down, round_up

START_BITS = 64
MAX_BITS = 4096


class RootIsolationError(ArithmeticError):
    pass


class NoRootInBox(ValueError):
    pass


class Ambiguous(ArithmeticError):
    pass


def krawczyk(p: upoly.UPoly, dp: upoly.UPoly, box: ComplexInterval,
             prec: int) -> ComplexInterval | None:
    """Return K(box) if it certifies a unique root inside ``box``, else None."""
    c = box.center
    dr, di, dd = upoly.evaluate_ratio(dp, c)
    if dr == 0 and di == 0:
        return None
    # y ~ 1/p'(c); any value works, a good one makes K(box) small
    n2 = dr * dr + di * di
    y = GaussianRational(ratio_down(dr * dd, n2, prec), ratio_down(-di * dd, n2, prec))
    wp = prec + 16 + _majorant_bits(dp, box.abs_upper())
    yi = ComplexInterval.point(y, wp)
    fc = upoly.eval_interval(p, ComplexInterval.point(c, wp), wp + 16)
    newton = ComplexInterval.point(c, wp).sub(yi.mul(fc, wp), wp)
    dfb = upoly.eval_interval(dp, box, wp)
    one = ComplexInterval.point(1)
    factor = one.sub(yi.mul(dfb, wp), wp)
    k = newton.add(factor.mul(box.sub(ComplexInterval.point(c, wp), wp), wp), wp)
    if box.contains_interior(k):
        return k
    return None


def _round_gr(z: GaussianRational, prec: int) -> GaussianRational:
    return GaussianRational(round_down(z.re, prec), round_down(z.im, prec))


def _majorant_bits(p: upoly.UPoly, radius) -> int:
    # Horner rounding errors scale with sum |c_k| R^k, not with |p(z)|
    r = max(1, int(radius) + 1)
    m = 0
    for c in reversed(p):
        a, b, d = c.parts
        m = m * r + (abs(a) + abs(b)) // d + 1
    return m.bit_length()


def _root_radius(p: upoly.UPoly) -> float:
    # Fujiwara's bound, slightly inflated; only used to pick precisions
    n = len(p) - 1
    top = abs(complex(p[-1]))
    r = max((abs(complex(p[n - k])) / top) ** (1.0 / k) for k in range(1, n + 1))
    return 2.0 * r * 1.01 + 1.0


def _acb(c: GaussianRational) -> flint.acb:
    a, b, d = c.parts
    return flint.acb(flint.arb(flint.fmpq(a, d)), flint.arb(flint.fmpq(b, d)))


def _frac_mid(x: flint.arb) -> Fraction:
    m, e = x.mid().man_exp()
    m, e = int(m), int(e)
    return Fraction(m << e) if e >= 0 else Fraction(m, 1 << -e)


def _approx_roots(p: upoly.UPoly, prec: int) -> list[GaussianRational]:
    old = flint.ctx.prec
    flint.ctx.prec = prec
    try:
        poly = flint.acb_poly([_acb(c) for c in p])
        try:
            found = poly.roots(tol=flint.arb(2) ** (-prec // 2), maxprec=8 * prec + 256)
        except ValueError as exc:
            raise RootIsolationError(str(exc)) from exc
    finally:
        flint.ctx.prec = old
    return [GaussianRational(_frac_mid(z.real), _frac_mid(z.imag)) for z in found]


def _newton_step(p, dp, z: GaussianRational, prec: int) -> tuple[GaussianRational, Fraction] | None:
    # heuristic: rounded z - p(z)/p'(z) and |p(z)/p'(z)|^2, computed with flint
    old = flint.ctx.prec
    flint.ctx.prec = prec + 32
    try:
        x = _acb(z)
        d = _acb_poly(dp)(x)
        if d == 0:
            return None
        q = _acb_poly(p)(x) / d
        zn = GaussianRational(z.re - _frac_mid(q.real), z.im - _frac_mid(q.imag))
        step2 = _frac_mid(abs(q) ** 2)
    finally:
        flint.ctx.prec = old
    return _round_gr(zn, prec), step2


def _acb_poly(p: upoly.UPoly) -> flint.acb_poly:
    return flint.acb_poly([_acb(c) for c in p])


def _newton(p, dp, z: GaussianRational, prec: int, steps: int) -> GaussianRational:
    for _ in range(steps):
        nxt = _newton_step(p, dp, z, prec)
        if nxt is None:
            break
        z = nxt[0]
    return z


def _certify_one(p, dp, z: GaussianRational, prec: int) -> ComplexInterval | None:
    nxt = _newton_step(p, dp, z, prec)
    if nxt is None:
        return None
    z, step2 = nxt
    scale = max(Fraction(1), abs(z.re) + abs(z.im))
    # radius^2 >= max(64 step^2, scale^2 * 2^-(2 prec - 16))
    rad2 = max(64 * step2, scale * scale / (1 << max(0, 2 * prec - 16)))
    r = round_up(_sqrt_upper_q(rad2), 32)
    for _ in range(8):
        box = ComplexInterval.around(z, r)
        if krawczyk(p, dp, box, prec) is not None:
            return box
        r *= 4
    return None


def _sqrt_upper_q(q: Fraction) -> Fraction:
    from math import isqrt
    if q <= 0:
        return Fraction(0)
    e = max(0, (q.denominator.bit_length() - q.numerator.bit_length()) // 2 + 40)
    n = -(-q.numerator * (1 << (2 * e)) // q.denominator)
    return Fraction(isqrt(n) + 1, 1 << e)


@lru_cache(maxsize=4096)
def isolate_roots(p: upoly.UPoly, prec: int = START_BITS) -> tuple[ComplexInterval, ...]:
    """Certified, pairwise disjoint boxes, one per root of squarefree ``p``."""
    if len(p) < 2:
        return ()
    deg = len(p) - 1
    dp = upoly.deriv(p)
    mb = _majorant_bits(p, _root_radius(p))
    bits = max(prec, START_BITS)
    while bits <= MAX_BITS:
        approx = _approx_roots(p, bits + mb)
        boxes = []
        for z in approx:
            b = _certify_one(p, dp, z, bits + mb)
            if b is None:
                break
            boxes.append(b)
        if len(boxes) == deg and _disjoint(boxes):
            boxes.sort(key=lambda b: (b.re_lo, b.im_lo))
            return tuple(boxes)
        bits *= 2
    raise Ambiguous(f"could not isolate the roots of a degree-{deg} polynomial "
                    f"below {MAX_BITS} bits")


def _disjoint(boxes) -> bool:
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if boxes[i].intersects(boxes[j]):
                return False
    return True


def refine_root(p: upoly.UPoly, box: ComplexInterval, prec: int) -> ComplexInterval:
    """Shrink an isolating box of ``p`` using ``prec`` bits; never widens it."""
    dp = upoly.deriv(p)
    wp = prec + _majorant_bits(p, box.abs_upper())
    z = _newton(p, dp, box.center, wp, prec.bit_length() + 4)
    k = _certify_one(p, dp, z, wp)
    # only a certified box inside the old one is known to hold the same root
    if k is None or not box.contains(k):
        return box
    return k


def roots_in_box(p: upoly.UPoly, box: ComplexInterval) -> list[ComplexInterval]:
    """Certified boxes of the roots of squarefree ``p`` lying in ``box``.

    Raises :class:`Ambiguous` if a root straddles the boundary of ``box`` at
    every precision up to the cap.
    """
    bits = START_BITS
    while bits <= MAX_BITS:
        inside, undecided = [], False
        for b in isolate_roots(p, bits):
            if box.contains(b):
                inside.append(b)
            elif b.intersects(box):
                undecided = True
        if not undecided:
            return inside
        bits *= 2
    raise Ambiguous("root on the boundary of the requested box")


def gaussian_roots(p: upoly.UPoly) -> list[GaussianRational]:
    """All roots of ``p`` lying in Q(i), found exactly.

    If ``u/v`` (lowest terms in Z[i]) is a root of a Gaussian-integer
    polynomial then ``v`` divides the leading coefficient ``L``, so ``L``
    times the root is a Gaussian integer.  Rounding a certified enclosure of
    ``L * root`` therefore yields the only possible candidate, which is then
    checked exactly.
    """
    if len(p) < 2:
        return []
    q = upoly.squarefree(p)
    ints = upoly.clear_denominators(q)
    lr, li = ints[-1]
    lead = GaussianRational(lr, li)
    size = abs(lr) + abs(li)
    out = []
    for box in isolate_roots(q):
        bits = START_BITS
        while box.width * size * 4 >= 1 and bits <= MAX_BITS:
            bits *= 2
            box = refine_root(q, box, bits)
        c = box.center * lead
        g = GaussianRational(round(c.re), round(c.im))
        cand = g / lead
        if box.contains_point(cand) and upoly.evaluate(q, cand).is_zero():
            out.append(cand)
    return out
