"""Plane curves: implicit equations, rational parameterizations, images,
implicitization by resultants, multiplicity at a point, and line contact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .exact import upoly
from .exact.gaussian import GaussianRational, ZERO, ONE
from .mpoly import MPoly, lowest_degree_form, resultant, squarefree, substitute, variables

_c = GaussianRational.coerce
XYZ = ("X", "Y", "Z")


class ConstantParameterization(ValueError):
    pass


class CurveCollapsed(ValueError):
    pass


class PointMismatch(ValueError):
    pass


class LineContainedInCurve(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PlaneCurve:
    equation: MPoly
    provenance: str = ""

    def __post_init__(self):
        eq = self.equation.with_vars(XYZ)
        if not eq.is_homogeneous() or eq.is_zero():
            raise ValueError("a plane curve needs a nonzero homogeneous equation")
        object.__setattr__(self, "equation", eq)

    @classmethod
    def from_equation(cls, eq: MPoly, provenance: str = "", reduce: bool = True) -> "PlaneCurve":
        eq = eq.with_vars(XYZ) if set(eq.vars) <= set(XYZ) else eq
        return cls(squarefree(eq) if reduce else eq.monic(), provenance)

    @property
    def degree(self) -> int:
        return self.equation.total_degree()

    def contains(self, P) -> bool:
        return _is_zero(self.equation.evaluate(P.elems))

    def same_as(self, other: "PlaneCurve") -> bool:
        return self.equation.monic() == other.equation.monic()

    def __str__(self):
        return f"{{{self.equation} = 0}}"


def _is_zero(x) -> bool:
    return x.is_zero()


def line(a, b, c, provenance: str = "") -> PlaneCurve:
    X, Y, Z = variables(XYZ)
    return PlaneCurve((X * a + Y * b + Z * c).monic(), provenance)


def line_parameterization(L: PlaneCurve) -> tuple[list[GaussianRational], list[GaussianRational]]:
    """Two distinct points ``A, B`` on the line; ``A + t*B`` runs over it (B at t = oo)."""
    eq = L.equation
    if eq.total_degree() != 1:
        raise ValueError("not a line")
    a, b, c = (eq.terms.get(e, ZERO) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    coeffs = [a, b, c]
    k = max(range(3), key=lambda j: (not coeffs[j].is_zero(), -j))
    others = [j for j in range(3) if j != k]
    pts = []
    for j in others:
        v = [ZERO, ZERO, ZERO]
        v[j] = ONE
        v[k] = -coeffs[j] / coeffs[k]
        pts.append(v)
    return pts[0], pts[1]


@dataclass(frozen=True, eq=False)
class ParamCurve:
    """``t -> [x0(t) : x1(t) : x2(t)]`` with polynomial coordinates.

    The affine form ``(x1/x0, x2/x0)`` in the chart ``X = 1`` is the usual
    presentation; ``chart`` names the affine coordinates for display.
    """

    coords: tuple  # three UPoly in t
    chart: tuple = ("Y/X", "Z/X")
    chart_index: int = 0  # coordinate set to 1 in the affine form

    def __post_init__(self):
        cs = [upoly.make(c) for c in self.coords]
        g: upoly.UPoly = ()
        for c in cs:
            if c:
                g = upoly.gcd(g, c) if g else upoly.monic(c)
        if len(g) > 1:
            cs = [upoly.exquo(c, g) if c else c for c in cs]
        object.__setattr__(self, "coords", tuple(cs))

    @classmethod
    def affine(cls, x_num, x_den, y_num, y_den, chart=("x", "y"), at: int = 0) -> "ParamCurve":
        """From ``t -> (x_num/x_den, y_num/y_den)`` in the chart where coordinate
        ``at`` is 1; the other two coordinates keep their order."""
        xn, xd, yn, yd = (upoly.make(p) for p in (x_num, x_den, y_num, y_den))
        coords = [upoly.mul(xn, yd), upoly.mul(yn, xd)]
        coords.insert(at, upoly.mul(xd, yd))
        return cls(tuple(coords), chart, at)

    @classmethod
    def of_line(cls, L: PlaneCurve) -> "ParamCurve":
        A, B = line_parameterization(L)
        return cls(tuple(upoly.make([a, b]) for a, b in zip(A, B)))

    def is_constant(self) -> bool:
        # constant iff all coordinates are proportional to constants
        cs = self.coords
        for i in range(3):
            for j in range(i + 1, 3):
                m = upoly.sub(upoly.mul(cs[i], upoly.deriv(cs[j])), upoly.mul(cs[j], upoly.deriv(cs[i])))
                if m:
                    return False
        return True

    def at(self, t):
        from .projmap import ProjectivePoint
        return ProjectivePoint([upoly.evaluate(c, t) if c else ZERO for c in self.coords])

    def affine_parts(self) -> tuple:
        """``(den, x_num, y_num)`` for the affine form in the chart ``at``."""
        c = self.coords
        return (c[self.chart_index],) + tuple(c[j] for j in range(3) if j != self.chart_index)

    def affine_ratios(self) -> list[tuple[upoly.UPoly, upoly.UPoly]]:
        """Each affine coordinate as ``(num, den)`` with gcd 1 and monic ``den``."""
        x0, x1, x2 = self.affine_parts()
        if not x0:
            raise ZeroDivisionError("parameterization lies at infinity of its chart")
        out = []
        for x in (x1, x2):
            g = upoly.gcd(x, x0) if x else upoly.monic(x0)
            n, d = (upoly.exquo(x, g) if x else x), upoly.exquo(x0, g)
            s = d[-1].inverse()
            out.append((upoly.scale(n, s), upoly.scale(d, s)))
        return out

    def affine_strings(self) -> tuple[str, str]:
        out = []
        for n, d in self.affine_ratios():
            ns = upoly.to_str(n, "t") if n else "0"
            out.append(ns if len(d) == 1 else f"({ns})/({upoly.to_str(d, 't')})")
        return tuple(out)

    def degree(self) -> int:
        return max(len(c) - 1 for c in self.coords)


def map_image(f, c) -> ParamCurve:
    """Compose a parameterization (or a line) with a map, gcd-reduced."""
    if isinstance(c, PlaneCurve):
        c = ParamCurve.of_line(c)
    vals = [MPoly.from_upoly(x, "t") if x else MPoly.const(0, ("t",)) for x in c.coords]
    out = []
    for comp in f.comps:
        v = comp.evaluate(vals)
        v = v if isinstance(v, MPoly) else MPoly.const(v, ("t",))
        out.append(v.with_vars(("t",)).to_upoly("t"))
    if not any(out):
        raise CurveCollapsed("curve lies in the indeterminacy locus")
    img = ParamCurve(tuple(out), c.chart, c.chart_index)
    if img.is_constant():
        raise CurveCollapsed("curve is collapsed to a point")
    return img


def _chart_resultant(c: ParamCurve) -> MPoly:
    """Resultant eliminating t in the chart of the first nonzero coordinate.

    For a proper parameterization it is a constant times a power of the
    dehomogenized implicit equation; the result is homogenized again.
    """
    k = next(j for j in range(3) if c.coords[j])
    o1, o2 = [j for j in range(3) if j != k]
    names = ("t", XYZ[o1], XYZ[o2])
    t_ = lambda p: MPoly.from_upoly(p, "t", names) if p else MPoly.const(0, names)
    y, z = MPoly.var(XYZ[o1], names), MPoly.var(XYZ[o2], names)
    a = t_(c.coords[k]) * y - t_(c.coords[o1])
    b = t_(c.coords[k]) * z - t_(c.coords[o2])
    if a.degree_in("t") <= 0:
        a, b = a + b, b
    if b.degree_in("t") <= 0:
        b = b + a
    r = resultant(a, b, "t").with_vars((XYZ[o1], XYZ[o2]))
    if r.is_zero():
        return r.with_vars(XYZ)
    r = squarefree(r)
    return r.with_vars((XYZ[o1], XYZ[o2], XYZ[k])).homogenize(XYZ[k]).with_vars(XYZ)


def implicitize(c: ParamCurve, samples: int = 5, seed: int = 0) -> PlaneCurve:
    """Implicit equation of a parameterized curve, by resultant elimination.

    Linear factors of the squarefree resultant that are not satisfied by the
    parameterization at ``samples`` parameter values are discarded; whatever
    remains must vanish at every sample and, finally, identically under
    symbolic substitution.
    """
    from .mpoly import linear_factors
    if c.is_constant():
        raise ConstantParameterization("constant parameterization")
    rng = random.Random(seed)
    best = _chart_resultant(c)
    if best.is_zero():
        raise ConstantParameterization("resultant vanished identically")
    eq = best.with_vars(XYZ)
    lins, rest = linear_factors(eq)
    ts = _sample_parameters(c, samples, rng)
    keep = rest
    for L in _distinct(lins):
        if all(_vanishes(L, c, t) for t in ts):
            keep = keep * L
    if not keep.is_constant():
        # any remaining factor must vanish at every sample; the nonlinear
        # cofactor is kept whole when it does, otherwise it is a bug
        if not all(_vanishes(keep, c, t) for t in ts):
            raise ArithmeticError("implicit equation does not vanish on the parameterization")
    curve = PlaneCurve(keep.monic(), "implicitized")
    if not _vanishes_identically(curve.equation, c):
        raise ArithmeticError("implicit equation does not vanish identically")
    return curve


def _distinct(polys: list[MPoly]) -> list[MPoly]:
    out: list[MPoly] = []
    for p in polys:
        if not any(p == q for q in out):
            out.append(p)
    return out


def _sample_parameters(c: ParamCurve, n: int, rng: random.Random) -> list[GaussianRational]:
    out = []
    while len(out) < n:
        t = _c(rng.randint(-50, 50))
        if t in out:
            continue
        if all(upoly.evaluate(x, t).is_zero() for x in c.coords):
            continue
        out.append(t)
    return out


def _vanishes(p: MPoly, c: ParamCurve, t) -> bool:
    vals = [upoly.evaluate(x, t) if x else ZERO for x in c.coords]
    return p.evaluate(vals).is_zero()


def _vanishes_identically(p: MPoly, c: ParamCurve) -> bool:
    vals = [MPoly.from_upoly(x, "t") if x else MPoly.const(0, ("t",)) for x in c.coords]
    v = p.evaluate(vals)
    return (v.is_zero() if isinstance(v, MPoly) else _c(v).is_zero())


def affine_chart(P) -> int:
    """Index of the first nonzero coordinate (points are normalized so it is 1)."""
    for k, e in enumerate(P.elems):
        if not e.is_zero():
            return k
    raise ValueError("zero point")


def local_equation(c: PlaneCurve, P, names=("a", "b"), chart: int | None = None) -> MPoly:
    """Equation of ``c`` in the affine chart where coordinate ``chart`` is 1
    (default: P's first nonzero coordinate), translated so P is the origin.
    P must have Gaussian-rational coordinates."""
    if not P.is_rational:
        raise ValueError("local equations need a Gaussian-rational point")
    k = affine_chart(P) if chart is None else chart
    if P.elems[k].is_zero():
        raise ValueError("point is at infinity of the requested chart")
    scale = P.elems[k].inverse()
    others = [j for j in range(3) if j != k]
    a, b = (MPoly.var(n, names) for n in names)
    sub = {XYZ[k]: 1, XYZ[others[0]]: a + P.elems[others[0]] * scale,
           XYZ[others[1]]: b + P.elems[others[1]] * scale}
    return substitute(c.equation, sub).with_vars(names)


def multiplicity_at(c: PlaneCurve, P, chart: int | None = None) -> int:
    """Lowest total degree of the local equation at P (0 if P is off the curve)."""
    if P.is_rational:
        loc = local_equation(c, P, chart=chart)
        if loc.is_zero():
            raise ValueError("zero local equation")
        return lowest_degree_form(loc)[0]
    # algebraic point: count vanishing derivatives of increasing order
    eq = c.equation
    order = 0
    layer = [eq]
    while True:
        if not all(_is_zero(q.evaluate(P.elems)) for q in layer):
            return order
        order += 1
        nxt = []
        for q in layer:
            for v in XYZ:
                d = q.derivative(v)
                if not d.is_zero():
                    nxt.append(d)
        layer = nxt
        if not layer:
            return order


def singular_by_gradient(c: PlaneCurve, P) -> bool:
    """Independent test: equation and all partials vanish at P."""
    eq = c.equation
    return all(_is_zero(q.evaluate(P.elems)) for q in [eq] + [eq.derivative(v) for v in XYZ])


def line_vanishing_order(c: ParamCurve, point, t0=0, line=None) -> int:
    """Order of vanishing at ``t0`` of a line through ``point`` pulled back to ``c``.

    ``point`` is affine ``(x, y)`` in the chart of ``c``'s affine form.  With
    ``line=None`` the generic line ``A (x - x_p) + B (y - y_p)`` is used, with
    A and B as symbols, and the minimum order over all (A, B) is returned.
    """
    t0 = _c(t0)
    x0, x1, x2 = c.affine_parts()
    d0 = upoly.evaluate(x0, t0)
    if d0.is_zero():
        raise PointMismatch("parameterization is at infinity at t0")
    xp, yp = (_c(v) for v in point)
    if upoly.evaluate(x1, t0) / d0 != xp or upoly.evaluate(x2, t0) / d0 != yp:
        raise PointMismatch("parameterization does not pass through the point at t0")
    shift = upoly.make([t0, 1])
    x0s, x1s, x2s = (upoly.compose(p, shift) if p else () for p in (x0, x1, x2))
    # cleared-denominator line equation: A (x1 - xp x0) + B (x2 - yp x0)
    u = upoly.sub(x1s, upoly.scale(x0s, xp))
    v = upoly.sub(x2s, upoly.scale(x0s, yp))
    if line is not None:
        A, B = (_c(z) for z in line)
        w = upoly.add(upoly.scale(u, A), upoly.scale(v, B))
        return _order(w)
    # generic (A, B): the order is min(order(u), order(v)) unless the leading
    # terms cancel for every A, B, which cannot happen for independent symbols
    AB = ("A", "B", "t")
    Am, Bm = MPoly.var("A", AB), MPoly.var("B", AB)
    w = Am * MPoly.from_upoly(u, "t", AB) + Bm * MPoly.from_upoly(v, "t", AB)
    if w.is_zero():
        raise PointMismatch("every line contains the curve")
    k = 0
    for coeff in w.coefficients_in("t"):
        if not coeff.is_zero():
            return k
        k += 1
    return k


def _order(p: upoly.UPoly) -> int:
    if not p:
        raise PointMismatch("line contains the curve")
    k = 0
    while p[k].is_zero():
        k += 1
    return k


def intersect_with_line(c: PlaneCurve, L: PlaneCurve) -> list[tuple[object, int]]:
    """Points of ``c`` on ``L`` with intersection multiplicities."""
    from .projmap import ProjectivePoint
    from .exact.algebraic import AlgebraicNumber, NumberField
    from .exact.roots import gaussian_roots, isolate_roots, START_BITS
    A, B = line_parameterization(L)
    # binary form c(s*A + t*B); dehomogenize at s = 1 and track t = oo
    s_t = ("s", "t")
    S, T = (MPoly.var(n, s_t) for n in s_t)
    vals = [S * a + T * b for a, b in zip(A, B)]
    g = c.equation.evaluate(vals)
    if not isinstance(g, MPoly) or g.is_zero():
        raise LineContainedInCurve("the line is a component of the curve")
    gt = substitute(g, {"s": 1}).with_vars(("t",)).to_upoly("t") if g.degree_in("t") > 0 else \
        upoly.make([substitute(g, {"s": 1}).constant_value()])
    out = []
    deg = c.degree
    if len(gt) - 1 < deg:
        out.append((ProjectivePoint(B), deg - (len(gt) - 1)))
    if len(gt) <= 1:
        return out
    rest = gt
    for r in gaussian_roots(gt):
        m = 0
        while True:
            q, rem_ = upoly.divmod_(rest, upoly.make([-r, 1]))
            if rem_:
                break
            rest, m = q, m + 1
        out.append((ProjectivePoint([a + r * b for a, b in zip(A, B)]), m))
    rest_sf = upoly.squarefree(rest) if len(rest) > 1 else rest
    if len(rest_sf) > 1:
        for box in isolate_roots(rest_sf, START_BITS):
            F = NumberField(AlgebraicNumber(rest_sf, box, START_BITS))
            th = F.theta
            m = 0
            q = rest
            while len(q) > 1:
                val = F.element(q)
                if not val.is_zero():
                    break
                q = upoly.deriv(q)
                m += 1
            out.append((ProjectivePoint([th * b + a for a, b in zip(A, B)]), m))
    return out
