"""Algebraic numbers over Q(i) and arithmetic in simple extensions.

An :class:`AlgebraicNumber` is a squarefree polynomial together with a box
that isolates one of its roots (the root lies strictly inside the box).  The
polynomial need not be irreducible.

Arithmetic happens in a :class:`NumberField`, which is presented as
``Q(i)[t]/(m)`` with a designated root ``theta`` of ``m``.  Elements are
polynomials in ``theta`` and only their value at ``theta`` matters, so a zero
test is "does ``theta`` annihilate ``gcd(e, m)``" (decided with isolating
boxes) and an inverse is computed modulo the cofactor of that gcd.  Two fields
are merged with a primitive element ``y + c*theta`` found by exact linear
algebra in the tensor algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg, upoly
from .gaussian import GaussianRational, ZERO, ONE
from .interval import ComplexInterval
from .roots import (START_BITS, MAX_BITS, Ambiguous, NoRootInBox, gaussian_roots,
                    isolate_roots, refine_root)

_c = GaussianRational.coerce


class ZeroInput(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AlgebraicNumber:
    minpoly: upoly.UPoly
    box: ComplexInterval
    precision_bits: int = START_BITS

    def refine(self, bits: int) -> "AlgebraicNumber":
        """Same root, box shrunk using ``bits`` of precision (never widened)."""
        if bits <= self.precision_bits:
            return self
        return AlgebraicNumber(self.minpoly, refine_root(self.minpoly, self.box, bits), bits)

    def __complex__(self) -> complex:
        return complex(self.box.center)

    def __repr__(self):
        z = complex(self)
        return f"AlgebraicNumber(root of {upoly.to_str(self.minpoly)} near {z:.6g})"

    def __str__(self):
        return f"RootOf({upoly.to_str(self.minpoly)}, {complex(self):.12g})"


Number = GaussianRational  # or AlgebraicNumber


def _root_inside(h: upoly.UPoly, box: ComplexInterval) -> bool:
    """Whether ``h`` has a root in ``box``.

    Only valid when ``box`` holds at most one root of ``h`` and any such root
    is strictly interior, which is the case when ``box`` isolates a root of a
    multiple of ``h``.
    """
    bits = START_BITS
    while bits <= MAX_BITS:
        undecided = False
        for b in isolate_roots(h, bits):
            if box.contains(b):
                return True
            if b.intersects(box):
                undecided = True
        if not undecided:
            return False
        bits *= 2
    raise Ambiguous("could not decide root membership")


def alg_from_root(minpoly, box: ComplexInterval) -> AlgebraicNumber:
    p = upoly.make(minpoly)
    if not p or len(p) < 2:
        raise NoRootInBox("constant polynomial has no roots")
    p = upoly.squarefree(p)
    bits = START_BITS
    while bits <= MAX_BITS:
        inside, undecided = [], False
        for b in isolate_roots(p, bits):
            if box.contains(b):
                inside.append(b)
            elif b.intersects(box):
                undecided = True
        if not undecided:
            if not inside:
                raise NoRootInBox("no root of the polynomial in the box")
            if len(inside) > 1:
                raise Ambiguous("box contains several roots")
            return AlgebraicNumber(p, inside[0], bits)
        bits *= 2
    raise Ambiguous("root on the boundary of the box at every precision")


def rational_number(x) -> AlgebraicNumber:
    """A Gaussian rational presented as an algebraic number of degree one."""
    x = _c(x)
    b = ComplexInterval.point(x)
    q = Fraction(1, 4)
    return AlgebraicNumber(upoly.make([-x, 1]),
                           ComplexInterval(b.re_lo - q, b.re_hi + q, b.im_lo - q, b.im_hi + q))


def is_zero(x) -> bool:
    if isinstance(x, FieldElement):
        return x.is_zero()
    if isinstance(x, AlgebraicNumber):
        return len(x.minpoly) > 1 and x.minpoly[0].is_zero() and \
            _root_inside(upoly.make([0, 1]), x.box)
    return _c(x).is_zero()


def alg_equals(a, b) -> bool:
    if isinstance(a, FieldElement) or isinstance(b, FieldElement):
        fa, fb = common_field([a, b])[1]
        return is_zero(fa - fb)
    if not isinstance(a, AlgebraicNumber) and not isinstance(b, AlgebraicNumber):
        return _c(a) == _c(b)
    if not isinstance(a, AlgebraicNumber):
        a, b = b, a
    if not isinstance(b, AlgebraicNumber):
        g = _c(b)
        return upoly.evaluate(a.minpoly, g).is_zero() and a.box.contains_point(g)
    if not a.box.intersects(b.box):
        return False
    h = upoly.gcd(a.minpoly, b.minpoly)
    if len(h) < 2:
        return False
    bits = START_BITS
    while bits <= MAX_BITS:
        undecided = False
        for r in isolate_roots(h, bits):
            in_a, in_b = a.box.contains(r), b.box.contains(r)
            if in_a and in_b:
                return True
            if (in_a or r.intersects(a.box)) and (in_b or r.intersects(b.box)):
                undecided = True
        if not undecided:
            return False
        bits *= 2
    raise Ambiguous("could not decide equality of algebraic numbers")


def _principal_first(boxes: list[ComplexInterval]) -> tuple[ComplexInterval, ComplexInterval] | None:
    a, b = boxes
    if a.re_lo > 0 or b.re_hi < 0:
        return a, b
    if b.re_lo > 0 or a.re_hi < 0:
        return b, a
    # both straddle the imaginary axis: the roots are +-(purely imaginary)
    if a.im_lo > 0 or b.im_hi < 0:
        return a, b
    if b.im_lo > 0 or a.im_hi < 0:
        return b, a
    return None


def sqrt_branches(a) -> tuple[AlgebraicNumber, AlgebraicNumber]:
    """Both square roots of ``a``, principal branch first."""
    if isinstance(a, FieldElement):
        a = a.value()
    if is_zero(a):
        raise ZeroInput("square roots of zero are not simple")
    if not isinstance(a, AlgebraicNumber):
        a = _c(a)
        rs = gaussian_roots(upoly.make([-a, 0, 1]))
        if rs:
            r = rs[0]
            pos = r if (r.re > 0 or (r.re == 0 and r.im > 0)) else -r
            return rational_number(pos), rational_number(-pos)
        a = rational_number(a)
    m = upoly.squarefree(a.minpoly)
    m2 = upoly.squarefree(upoly.reflect_sq(m))
    bits = START_BITS
    while bits <= MAX_BITS:
        # each root b of m2 has b^2 a root of m; it is a iff b^2 meets a's box only
        boxes = isolate_roots(m, bits)
        own = [r for r in boxes if r.intersects(a.box)]
        if len(own) != 1:
            bits *= 2
            a = a.refine(bits)
            continue
        others = [r for r in boxes if r is not own[0]]
        cands, undecided = [], False
        for b in isolate_roots(m2, bits):
            sq = b.mul(b, 2 * bits)
            if not sq.intersects(own[0]):
                continue
            if any(sq.intersects(r) for r in others):
                undecided = True
            else:
                cands.append(b)
        if not undecided and len(cands) == 2:
            order = _principal_first(cands)
            if order is not None:
                return (AlgebraicNumber(m2, order[0], bits), AlgebraicNumber(m2, order[1], bits))
        bits *= 2
        a = a.refine(bits)
    raise Ambiguous("could not separate the square roots")


# -- simple extensions ---------------------------------------------------


class NumberField:
    """``Q(i)[t]/(m)`` with a designated root ``theta`` of squarefree ``m``."""

    def __init__(self, gen: AlgebraicNumber):
        self.gen = gen
        self.modulus = upoly.monic(gen.minpoly)
        self.degree = len(self.modulus) - 1

    def element(self, poly) -> "FieldElement":
        return FieldElement(self, upoly.rem(upoly.make(poly), self.modulus))

    @property
    def theta(self) -> "FieldElement":
        return self.element([0, 1])

    def __repr__(self):
        return f"NumberField({upoly.to_str(self.modulus, 't')})"


class FieldElement:
    __slots__ = ("field", "poly", "_zero")

    def __init__(self, field: NumberField, poly: upoly.UPoly):
        self.field = field
        self.poly = poly
        self._zero = None

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different number fields; use common_field")
            return other.poly
        if isinstance(other, AlgebraicNumber):
            raise ValueError("mix algebraic numbers through common_field")
        return upoly.make([_c(other)])

    def __add__(self, other):
        return FieldElement(self.field, upoly.add(self.poly, self._coerce(other)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, upoly.neg(self.poly))

    def __sub__(self, other):
        return FieldElement(self.field, upoly.sub(self.poly, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, upoly.sub(self._coerce(other), self.poly))

    def __mul__(self, other):
        prod = upoly.mul(self.poly, self._coerce(other))
        return FieldElement(self.field, upoly.rem(prod, self.field.modulus))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldElement(self.field, (ONE,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, FieldElement):
            return self * other.inverse()
        return self * _c(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def is_zero(self) -> bool:
        if self._zero is None:
            if not self.poly:
                self._zero = True
            else:
                h = upoly.gcd(self.poly, self.field.modulus)
                self._zero = len(h) > 1 and _root_inside(h, self.field.gen.box)
        return self._zero

    def is_rational(self) -> bool:
        return len(self.poly) <= 1

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("element vanishes at the designated root")
        m = self.field.modulus
        h = upoly.gcd(self.poly, m)
        if len(h) > 1:
            # theta is a root of m/h, so an inverse modulo m/h has the right value
            m = upoly.exquo(m, h)
        inv = _invmod(self.poly, m)
        return FieldElement(self.field, upoly.rem(inv, self.field.modulus))

    def enclosure(self, prec: int = 128) -> ComplexInterval:
        return upoly.eval_interval(self.poly, self.field.gen.box, prec)

    def __complex__(self) -> complex:
        return _horner_complex(self.poly, complex(self.field.gen))

    def minimal_polynomial(self) -> upoly.UPoly:
        """Monic annihilating polynomial of this element in the algebra."""
        n = self.field.degree
        vecs, power = [], FieldElement(self.field, (ONE,))
        for _ in range(n + 1):
            vecs.append(_vector(power.poly, n))
            power = power * self
        dep = linalg.first_dependency(vecs)
        return upoly.make(dep)

    def value(self):
        """The designated value as a GaussianRational or AlgebraicNumber."""
        if self.is_rational():
            return self.poly[0] if self.poly else ZERO
        mp = upoly.squarefree(self.minimal_polynomial())
        if len(mp) == 2:
            return -mp[0] / mp[1]
        rs = gaussian_roots(mp)
        gen = self.field.gen
        bits = START_BITS
        while bits <= MAX_BITS:
            enc = upoly.eval_interval(self.poly, gen.box, 2 * bits)
            for r in rs:
                if enc.contains_point(r) and self._equals_rational(r):
                    return r
            hits = [b for b in isolate_roots(mp, bits) if b.intersects(enc)]
            if len(hits) == 1:
                return AlgebraicNumber(mp, hits[0], bits)
            bits *= 2
            gen = gen.refine(bits)
        raise Ambiguous("could not designate the value of a field element")

    def _equals_rational(self, r: GaussianRational) -> bool:
        return (self - r).is_zero()

    def __repr__(self):
        return f"FieldElement({upoly.to_str(self.poly, 'theta')} in {self.field!r})"


def _horner_complex(p, z: complex) -> complex:
    acc = 0j
    for c in reversed(p):
        acc = acc * z + complex(c)
    return acc


def _vector(p: upoly.UPoly, n: int) -> list[GaussianRational]:
    return list(p) + [ZERO] * (n - len(p))


def _invmod(a: upoly.UPoly, m: upoly.UPoly) -> upoly.UPoly:
    """Inverse of ``a`` modulo ``m`` (requires gcd 1)."""
    r0, r1 = m, upoly.rem(a, m)
    s0, s1 = (), (ONE,)
    while r1:
        q, r = upoly.divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, upoly.sub(s0, upoly.mul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("not invertible modulo the given polynomial")
    return upoly.scale(s0, r0[0].inverse())


# -- merging fields --------------------------------------------------------


class _Algebra:
    """``F[y]/(P(y))`` for a field ``F`` and monic ``P`` with coefficients in F.

    Elements are lists of UPoly in theta (coefficient of ``y^j``).
    """

    def __init__(self, field: NumberField, coeffs: list[upoly.UPoly]):
        self.field = field
        self.m = field.modulus
        self.d = field.degree
        self.P = coeffs  # monic, low degree first, P[-1] == (1,)
        self.k = len(coeffs) - 1

    def mul(self, a, b):
        out = [()] * (2 * self.k - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = upoly.add(out[i + j], upoly.mul(x, y))
        for top in range(len(out) - 1, self.k - 1, -1):
            c = out[top]
            if not c:
                continue
            out[top] = ()
            for j in range(self.k):
                out[top - self.k + j] = upoly.sub(out[top - self.k + j], upoly.mul(c, self.P[j]))
        return [upoly.rem(c, self.m) for c in out[:self.k]]

    def vector(self, a) -> list[GaussianRational]:
        v = []
        for c in a:
            v.extend(_vector(c, self.d))
        return v


def adjoin(field: NumberField | None, poly_coeffs: list, target: AlgebraicNumber):
    """Adjoin the root of monic ``P`` (coefficients in ``field``) lying in ``target``.

    ``target`` designates the wanted root of ``P`` at the designated
    ``theta``; its box is refined as needed to tell the candidates apart.  Returns ``(new_field, theta_image, y)`` where
    ``theta_image`` and ``y`` are elements of the new field.
    """
    if field is None:
        field = NumberField(rational_number(0))
    coeffs = []
    for c in poly_coeffs:
        if isinstance(c, FieldElement):
            coeffs.append(c.poly)
        elif isinstance(c, tuple):
            coeffs.append(upoly.rem(c, field.modulus))
        else:
            coeffs.append(upoly.make([_c(c)]))
    lead = coeffs[-1]
    if lead != (ONE,):
        raise ValueError("adjoin needs a monic polynomial")
    alg = _Algebra(field, coeffs)
    n = alg.d * alg.k
    theta_vec = [upoly.make([0, 1])] + [()] * (alg.k - 1)
    y_vec = [()] * alg.k
    if alg.k > 1:
        y_vec[1] = (ONE,)
    else:
        y_vec[0] = upoly.neg(coeffs[0])
    for c in _shifts(n):
        gamma = [upoly.rem(upoly.add(y_vec[j], upoly.scale(theta_vec[j], c)), alg.m)
                 for j in range(alg.k)]
        powers = [[(ONE,)] + [()] * (alg.k - 1)]
        for _ in range(n):
            powers.append(alg.mul(powers[-1], gamma))
        vecs = [alg.vector(p) for p in powers]
        dep = linalg.first_dependency(vecs)
        if dep is None or len(dep) != n + 1:
            continue
        M = upoly.make(dep)
        cols = vecs[:n]
        A = upoly.make(linalg.solve(cols, alg.vector(theta_vec)))
        B = upoly.make(linalg.solve(cols, alg.vector(y_vec)))
        gen = _designate(M, field.gen, target, c)
        new = NumberField(gen)
        return new, new.element(A), new.element(B)
    raise ArithmeticError("no primitive element found")


def _shifts(n: int):
    yield 1
    for k in range(2, n * n + 3):
        yield k if k % 2 else -k // 2


def _designate(M, theta: AlgebraicNumber, target: AlgebraicNumber, c) -> AlgebraicNumber:
    bits = max(START_BITS, theta.precision_bits)
    cc = ComplexInterval.point(c)
    while bits <= MAX_BITS:
        enc = target.box.add(cc.mul(theta.box, 2 * bits), 2 * bits)
        hits = [b for b in isolate_roots(M, bits) if b.intersects(enc)]
        if len(hits) == 1:
            return AlgebraicNumber(M, hits[0], bits)
        bits *= 2
        theta = theta.refine(bits)
        target = target.refine(bits)
    raise Ambiguous("could not designate the primitive element")


def common_field(values: list) -> tuple[NumberField | None, list]:
    """Express all values in one number field.

    Returns ``(field, elements)``; Gaussian rationals stay GaussianRational,
    everything else becomes a FieldElement of ``field``.  ``field`` is None
    when all values are Gaussian rational.
    """
    field: NumberField | None = None
    images: dict[int, FieldElement] = {}  # id(source) -> image of its theta
    sources: dict[int, NumberField] = {}
    out: list = list(values)
    pending = []
    for k, v in enumerate(values):
        if isinstance(v, AlgebraicNumber):
            if len(v.minpoly) == 2:
                out[k] = -v.minpoly[0] / v.minpoly[1]
            else:
                pending.append(k)
                sources.setdefault(id(v), NumberField(v))
        elif isinstance(v, FieldElement):
            if v.is_rational():
                out[k] = v.poly[0] if v.poly else ZERO
            else:
                pending.append(k)
                sources.setdefault(id(v.field), v.field)
        else:
            out[k] = _c(v)
    for key, src in sources.items():
        if field is None:
            field = src
            images[key] = src.theta
            continue
        field, theta_img, y = adjoin(field, list(src.modulus), src.gen)
        images = {k: _lift(e, theta_img) for k, e in images.items()}
        images[key] = y
    for k in pending:
        v = values[k]
        if isinstance(v, FieldElement):
            out[k] = _lift(v, images[id(v.field)])
        else:
            out[k] = images[id(v)]
    return field, out


def _lift(e: FieldElement, theta_image: FieldElement) -> FieldElement:
    """Rewrite ``e`` (a polynomial in its theta) inside the field of ``theta_image``."""
    acc = FieldElement(theta_image.field, ())
    for c in reversed(e.poly):
        acc = acc * theta_image + c
    return acc


def extend_sqrt(a) -> tuple[object, object]:
    """Principal square root of ``a`` as an element of an extension field.

    Returns ``(root, lift)`` where ``lift`` maps elements of ``a``'s field
    (and Gaussian rationals) into the field of ``root``.  The other branch is
    ``-root``.  A Gaussian-rational root is returned as GaussianRational.
    """
    if not isinstance(a, FieldElement) or a.is_rational():
        if isinstance(a, FieldElement):
            a = a.poly[0] if a.poly else ZERO
        plus, _ = sqrt_branches(a)
        if len(plus.minpoly) == 2:
            return -plus.minpoly[0] / plus.minpoly[1], lambda x: x
        field = NumberField(plus)
        return field.theta, lambda x: x
    if a.is_zero():
        raise ZeroInput("square root of zero")
    field = a.field
    h = upoly.gcd(a.poly, field.modulus)
    if len(h) > 1:
        # drop conjugates where a vanishes; they would make y^2 - a inseparable
        field = NumberField(AlgebraicNumber(upoly.exquo(field.modulus, h), field.gen.box,
                                            field.gen.precision_bits))
    a = field.element(a.poly)
    plus, _ = sqrt_branches(a.value())
    _, theta_img, y = adjoin(field, [upoly.neg(a.poly), (), (ONE,)], plus)

    def lift(x):
        if isinstance(x, FieldElement):
            return _lift(x, theta_img)
        return x

    return y, lift
