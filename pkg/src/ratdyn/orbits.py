"""Forward orbits, preorbit trees on invariant lines, and the certificates
that a preorbit is infinite and avoids the points where a map is not finite.

Points on a line are chart values: GaussianRational, FieldElement,
AlgebraicNumber, or None for the point at infinity of the chart.

The avoidance check runs forward: a preorbit of ``a0`` meets the finite set
NF exactly when some member of NF reaches ``a0`` after one or more steps, and
each member's forward orbit is settled by periodicity or by a certified
escape to infinity.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import flint

from .curves import ParamCurve, PlaneCurve
from .exact import upoly
from .exact.algebraic import (AlgebraicNumber, FieldElement, alg_equals, alg_from_root,
                              common_field, sqrt_branches)
from .exact.gaussian import GaussianRational, ZERO, ONE
from .exact.interval import ComplexInterval
from .exact.roots import MAX_BITS, START_BITS, NoRootInBox, gaussian_roots, isolate_roots, refine_root
from .mpoly import MPoly, exquo, substitute, InexactDivision
from .projmap import (Indeterminate, LineRestriction, ProjectiveMap, ProjectivePoint,
                      collapsed_curves, is_finite_at, line_point)

_c = GaussianRational.coerce


class HitIndeterminate(ArithmeticError):
    def __init__(self, step: int, point):
        super().__init__(f"orbit reaches an indeterminate point at step {step}: {point}")
        self.step = step
        self.point = point


class PreorbitHitsNF(ArithmeticError):
    def __init__(self, member, step: int):
        super().__init__(f"NF member {_fmt(member)} reaches the base point after {step} steps")
        self.member = member
        self.step = step


class ExceptionalPoint(ArithmeticError):
    pass


class NotApplicable(ValueError):
    pass


def _fmt(z) -> str:
    if z is None:
        return "oo"
    if isinstance(z, FieldElement):
        z = z.value()
    if isinstance(z, GaussianRational):
        from .mpoly import coeff_str
        return coeff_str(z)
    return str(z)


def _short(z) -> str:
    if isinstance(z, AlgebraicNumber) and len(z.minpoly) > 3:
        w = complex(z)
        return f"alg(deg {len(z.minpoly) - 1}) ~ {w.real:.6g}{w.imag:+.6g}i"
    return _fmt(z)


def _as_elem(z):
    """GaussianRational or FieldElement (AlgebraicNumbers are embedded in a field)."""
    if z is None or isinstance(z, (GaussianRational, FieldElement)):
        return z
    if isinstance(z, AlgebraicNumber):
        return common_field([z])[1][0]
    return _c(z)


def _same(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, GaussianRational) and isinstance(b, GaussianRational):
        return a == b
    return alg_equals(a, b)


# -- forward orbits --------------------------------------------------------------


@dataclass
class Orbit:
    points: list
    disposition: str  # "periodic", "escaping" or "open"
    preperiod: int | None = None
    period: int | None = None
    certificate: str = ""

    def describe(self, fmt=_fmt) -> str:
        pts = " -> ".join(fmt(p) for p in self.points)
        if self.disposition == "periodic":
            return f"{pts} (periodic, preperiod {self.preperiod}, period {self.period})"
        if self.disposition == "escaping":
            return f"{pts} (escaping: {self.certificate})"
        return f"{pts} (open after {len(self.points) - 1} steps)"


def escape_radius(g: LineRestriction) -> Fraction | None:
    """R with ``|g(z)| >= 2|z|`` whenever ``|z| >= R`` (polynomials of degree >= 2).

    With ``S`` the sum of the lower coefficient moduli and ``|z| >= 1``,
    ``|g(z)| >= |z|^(d-1) (|a_d||z| - S)``, which is at least ``2|z|`` once
    ``|z| >= (S + 2)/|a_d|``.
    """
    if not g.is_polynomial() or g.degree < 2:
        return None
    p = upoly.scale(g.num, g.den[0].inverse())
    lead = _abs_lower(p[-1])
    S = sum((_abs_upper(c) for c in p[:-1]), Fraction(0))
    return max(Fraction(2), (S + 2) / lead)


def _abs_upper(c: GaussianRational) -> Fraction:
    return abs(c.re) + abs(c.im)


def _abs_lower(c: GaussianRational) -> Fraction:
    return max(abs(c.re), abs(c.im))


def _modulus_bounds(z) -> tuple[Fraction, Fraction]:
    if isinstance(z, GaussianRational):
        return _abs_lower(z), _abs_upper(z)
    box = z.enclosure(128) if isinstance(z, FieldElement) else z.box
    return box.abs_lower(), box.abs_upper()


def _translation_step(g: LineRestriction):
    if g.is_polynomial() and g.degree == 1:
        p = upoly.scale(g.num, g.den[0].inverse())
        if p[1].is_one() and not p[0].is_zero():
            return p[0]
    return None


def forward_orbit(g, x, max_steps: int = 64) -> Orbit:
    """Exact forward orbit of ``x`` under a LineRestriction or ProjectiveMap."""
    if isinstance(g, ProjectiveMap):
        return _projective_orbit(g, x, max_steps)
    R = escape_radius(g)
    beta = _translation_step(g)
    pts = [_as_elem(x)]
    for step in range(max_steps + 1):
        z = pts[-1]
        if beta is not None and z is not None:
            return Orbit(pts, "escaping", certificate=f"translation by {_fmt(beta)}")
        if R is not None and z is not None and _modulus_bounds(z)[0] >= R:
            return Orbit(pts, "escaping", certificate=f"|z| >= {R} and |g(z)| >= 2|z| beyond that radius")
        if step == max_steps:
            break
        y = g(z)
        for k, w in enumerate(pts):
            if _same(w, y):
                pts.append(y)
                return Orbit(pts, "periodic", k, len(pts) - 1 - k)
        pts.append(y)
    return Orbit(pts, "open")


def _projective_orbit(f: ProjectiveMap, P: ProjectivePoint, max_steps: int) -> Orbit:
    pts = [P]
    for step in range(max_steps):
        try:
            Q = f(pts[-1])
        except Indeterminate:
            raise HitIndeterminate(step, pts[-1]) from None
        for k, w in enumerate(pts):
            if w == Q:
                pts.append(Q)
                return Orbit(pts, "periodic", k, len(pts) - 1 - k)
        pts.append(Q)
    return Orbit(pts, "open")


def first_hit(g: LineRestriction, x, target, max_steps: int = 256) -> tuple[int | None, Orbit]:
    """Least ``k >= 1`` with ``g^k(x) = target``, or None with the orbit proving
    it never happens.  An unsettled orbit raises ArithmeticError."""
    R = escape_radius(g)
    beta = _translation_step(g)
    target = _as_elem(target)
    pts = [_as_elem(x)]
    for step in range(1, max_steps + 1):
        z = pts[-1]
        if beta is not None and z is not None and target is not None:
            # z + n*beta = target has at most one solution n
            q = (target - z) * beta.inverse() if isinstance(target, FieldElement) else (target - z) / beta
            if isinstance(q, FieldElement):
                q = q.value() if q.is_rational() else None
            orbit = Orbit(pts, "escaping", certificate=f"translation by {_fmt(beta)}")
            if q is not None and q.is_real() and q.re.denominator == 1 and q.re >= 1:
                return step - 1 + int(q.re), orbit
            return None, orbit
        if R is not None and z is not None and target is not None:
            lo, _ = _modulus_bounds(z)
            _, hi = _modulus_bounds(target)
            if lo >= R and lo > hi:
                return None, Orbit(pts, "escaping",
                                   certificate=f"|z| >= {R}, beyond |target| <= {float(hi):.6g}; |g(z)| >= 2|z|")
        y = g(z)
        if _same(y, target):
            pts.append(y)
            return step, Orbit(pts, "open")
        for k, w in enumerate(pts):
            if _same(w, y):
                pts.append(y)
                return None, Orbit(pts, "periodic", k, len(pts) - 1 - k)
        pts.append(y)
    raise ArithmeticError(f"orbit of {_fmt(x)} not settled in {max_steps} steps")


# -- points where an iterate is not finite -----------------------------------------


@dataclass
class NFSet:
    """Points of an invariant line where ``f^k`` is not a finite holomorphic map."""

    map_name: str
    k: int
    line: PlaneCurve
    chart: tuple[str, str]
    members: list
    reasons: list[str] = field(default_factory=list)

    def contains(self, z) -> bool:
        return any(_same(_as_elem(z), _as_elem(m)) for m in self.members)

    def values(self) -> list[str]:
        return [_fmt(m) for m in self.members]


def _verify_members(f: ProjectiveMap, k: int, L: PlaneCurve, chart, members) -> list[str]:
    steps = (f,) * k
    reasons = []
    for z in members:
        fin = is_finite_at(steps, line_point(L, chart, _as_elem(z)))
        if fin.finite:
            raise ValueError(f"{_fmt(z)} is a finite point of {f.name}^{k}")
        reasons.append(f"{_fmt(z)}: {fin.reason}")
    return reasons


def nf_from_values(f: ProjectiveMap, k: int, L: PlaneCurve, chart, values) -> NFSet:
    members = [_as_elem(_c(v) if isinstance(v, (int, complex)) else v) for v in values]
    return NFSet(f.name, k, L, tuple(chart), members, _verify_members(f, k, L, chart, members))


def nf_set(f: ProjectiveMap, k: int, L: PlaneCurve, chart) -> NFSet:
    """All points of ``L`` where ``f^k`` is not finite, computed from the
    parameterized images ``f^j(L)``, ``j < k``, against the indeterminacy and
    the collapsed curves of ``f``."""
    chart = tuple(chart)
    param = ParamCurve(tuple(_line_param(L, chart)))
    bad_curves = [C for C, _ in collapsed_curves(f)]
    polys = []
    for j in range(k):
        vals = [MPoly.from_upoly(x, "t") if x else MPoly.const(0, ("t",)) for x in param.coords]
        comps = [_to_upoly(q.evaluate(vals)) for q in f.comps]
        g: upoly.UPoly = ()
        for p in comps:
            if p:
                g = upoly.gcd(g, p) if g else upoly.monic(p)
        if len(g) > 1:
            polys.append(g)
        for C in bad_curves:
            h = _to_upoly(C.equation.evaluate(vals))
            if not h:
                raise ValueError(f"{f.name}^{j}(L) lies in the collapsed curve {C}")
            if len(h) > 1:
                polys.append(h)
        param = ParamCurve(tuple(comps))
    members: list = []
    for p in polys:
        for z in _all_roots(upoly.squarefree(p)):
            if not any(_same(z, m) for m in members):
                members.append(z)
    inf_fin = is_finite_at((f,) * k, line_point(L, chart, None))
    if not inf_fin.finite:
        members.append(None)
    members = [_as_elem(m) for m in members]
    return NFSet(f.name, k, L, chart, members, _verify_members(f, k, L, chart, members))


def _to_upoly(v) -> upoly.UPoly:
    if isinstance(v, MPoly):
        return v.with_vars(("t",)).to_upoly("t") if v.used_vars() else upoly.make([v.constant_value()])
    return upoly.make([_c(v)])


def _line_param(L: PlaneCurve, chart) -> list[upoly.UPoly]:
    # t -> P0 + t (P1 - P0) with the chart denominator fixed at 1
    P0 = _rescale(line_point(L, chart, ZERO).elems, chart)
    P1 = _rescale(line_point(L, chart, ONE).elems, chart)
    return [upoly.make([a, b - a]) for a, b in zip(P0, P1)]


def _rescale(elems, chart) -> list:
    from .curves import XYZ
    d = elems[XYZ.index(chart[1])]
    inv = d.inverse()
    return [e * inv for e in elems]


def _all_roots(p: upoly.UPoly) -> list:
    """Roots of a squarefree polynomial: Gaussian rationals, then algebraic numbers."""
    if len(p) <= 1:
        return []
    out: list = list(gaussian_roots(p))
    rest = p
    for r in out:
        rest = upoly.exquo(rest, upoly.make([-r, 1]))
    if len(rest) > 1:
        for box in isolate_roots(rest, START_BITS):
            out.append(AlgebraicNumber(rest, box, START_BITS))
    return out


# -- preorbit trees -------------------------------------------------------------------


@dataclass
class Node:
    value: object  # GaussianRational, AlgebraicNumber or None
    box: ComplexInterval | None
    multiplicity: int
    parent: int | None


@dataclass
class PreorbitTree:
    base: object
    levels: list[list[Node]]
    requested_depth: int
    truncated_reason: str = ""

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def sizes(self) -> list[int]:
        return [len(lvl) for lvl in self.levels]

    def describe(self) -> list[str]:
        out = []
        for k, lvl in enumerate(self.levels):
            vals = ", ".join(_short(n.value) + (f" (x{n.multiplicity})" if n.multiplicity > 1 else "")
                             for n in lvl[:4])
            more = f", ... ({len(lvl)} nodes)" if len(lvl) > 4 else ""
            out.append(f"level {k}: {vals}{more}")
        if self.truncated_reason:
            out.append(f"explored to depth {self.depth} of {self.requested_depth}: {self.truncated_reason}")
        return out


def _minpoly_and_box(a0):
    if isinstance(a0, FieldElement):
        a0 = a0.value()
    if isinstance(a0, AlgebraicNumber):
        return a0.minpoly, a0.box, a0
    a0 = _c(a0)
    return upoly.make([-a0, 1]), ComplexInterval.point(a0), a0


def _sqf_decomposition(p: upoly.UPoly) -> list[tuple[upoly.UPoly, int]]:
    """Yun's algorithm; factors are monic and squarefree."""
    out = []
    a = upoly.monic(p)
    b = upoly.deriv(a)
    c = upoly.gcd(a, b) if b else a
    w = upoly.exquo(a, c)
    k = 1
    while len(w) > 1:
        y = upoly.gcd(w, c)
        z = upoly.exquo(w, y)
        if len(z) > 1:
            out.append((z, k))
        w, c = y, upoly.exquo(c, y)
        k += 1
    return out


def _rational_factors(p: upoly.UPoly) -> list[upoly.UPoly] | None:
    """Irreducible factors over Q when ``p`` has real rational coefficients."""
    if not all(c.is_real() for c in p):
        return None
    q = flint.fmpq_poly([flint.fmpq(c.re.numerator, c.re.denominator) for c in p])
    out = []
    for fac, _ in q.factor()[1]:
        out.append(upoly.make([Fraction(int(c.p), int(c.q)) for c in fac.coeffs()]))
    return out


def _node_number(sqf, factors, box: ComplexInterval) -> AlgebraicNumber:
    for q in factors or ():
        if len(q) > 2:
            try:
                return alg_from_root(q, box)
            except NoRootInBox:
                continue
    return AlgebraicNumber(sqf, box, START_BITS)


def _level_polynomial(num, den, m) -> upoly.UPoly:
    """``den^e m(num/den)`` with ``e = deg m``."""
    e = len(m) - 1
    acc: upoly.UPoly = ()
    npow = [(ONE,)]
    for _ in range(e):
        npow.append(upoly.mul(npow[-1], num))
    dpow = [(ONE,)]
    for _ in range(e):
        dpow.append(upoly.mul(dpow[-1], den))
    for j, c in enumerate(m):
        if not c.is_zero():
            acc = upoly.add(acc, upoly.scale(upoly.mul(npow[j], dpow[e - j]), c))
    return acc


def _image_box(gk: LineRestriction, box: ComplexInterval, prec: int) -> ComplexInterval | None:
    n = upoly.eval_interval(gk.num, box, prec)
    d = upoly.eval_interval(gk.den, box, prec)
    if d.contains_zero():
        return None
    return n.div(d, prec)


def preorbit_tree(g: LineRestriction, a0, depth: int, max_level_degree: int = 64) -> PreorbitTree:
    """All exact solutions of ``g^k(x) = a0`` for ``k <= depth``.

    Level ``k`` consists of the roots of ``den_k^e m(num_k/den_k)`` (``m`` the
    minimal polynomial of ``a0``) whose image under ``g^k`` is ``a0`` rather
    than a conjugate; parents are identified by interval images.  Exploration
    stops early once a level polynomial exceeds ``max_level_degree``.
    """
    m, box0, a0v = _minpoly_and_box(a0)
    m_boxes = list(isolate_roots(upoly.squarefree(m), START_BITS)) if len(m) > 2 else [box0]
    target = _designated(m_boxes, box0, m)
    tree = PreorbitTree(a0v, [[Node(a0v, box0, 1, None)]], depth)
    gk = None
    for k in range(1, depth + 1):
        gk = g if gk is None else g.compose(gk)
        N = _level_polynomial(gk.num, gk.den, m)
        sqf = upoly.squarefree(N)
        if len(sqf) - 1 > max_level_degree:
            tree.truncated_reason = f"level {k} polynomial has degree {len(sqf) - 1} > {max_level_degree}"
            break
        mult = {}
        for fac, mu in _sqf_decomposition(N):
            mult[fac] = mu
        level: list[Node] = []
        boxes = list(isolate_roots(sqf, START_BITS))
        rats = gaussian_roots(sqf)
        factors = _rational_factors(sqf) if len(boxes) > len(rats) else None
        for b in boxes:
            val = next((r for r in rats if b.contains_point(r)), None)
            if len(m) > 2 and not _lands_in(gk, sqf, b, m, m_boxes, target):
                continue
            mu = next(mm for fac, mm in mult.items() if upoly.evaluate(fac, val).is_zero()) \
                if val is not None else _multiplicity_at_box(mult, b)
            value = val if val is not None else _node_number(sqf, factors, b)
            level.append(Node(value, b, mu, None))
        deg_total = max(len(gk.num), len(gk.den)) - 1
        if len(N) - 1 < (len(m) - 1) * deg_total:
            level.append(Node(None, None, (len(m) - 1) * deg_total - (len(N) - 1), None))
        _link_parents(g, level, tree.levels[-1], sqf, tree)
        tree.levels.append(level)
    return tree


def _designated(m_boxes, box0, m) -> int:
    if len(m_boxes) == 1:
        return 0
    hits = [k for k, b in enumerate(m_boxes) if b.intersects(box0)]
    if len(hits) == 1:
        return hits[0]
    raise ArithmeticError("could not designate the base point among its conjugates")


def _lands_in(gk, p, box, m, m_boxes, target) -> bool:
    bits = START_BITS
    mb = list(m_boxes)
    msq = upoly.squarefree(m)
    while bits <= MAX_BITS:
        img = _image_box(gk, box, 2 * bits)
        if img is not None:
            hits = [k for k, b in enumerate(mb) if b.intersects(img)]
            if hits == [target]:
                return True
            if target not in hits:
                return False
        bits *= 2
        box = refine_root(p, box, bits)
        mb = [refine_root(msq, b, bits) for b in mb]
    raise ArithmeticError("could not decide which conjugate a preimage maps to")


def _multiplicity_at_box(mult: dict, box: ComplexInterval) -> int:
    for fac, mu in mult.items():
        if len(fac) > 1 and any(box.contains(b) or b.intersects(box)
                                for b in isolate_roots(fac, START_BITS)):
            # the isolating boxes of the squarefree part separate all roots, so
            # a factor root meeting this box is this root
            return mu
    return 1


def _link_parents(g: LineRestriction, level: list[Node], parents: list[Node], sqf, tree) -> None:
    if len(parents) == 1:
        for n in level:
            n.parent = 0
        return
    for n in level:
        if n.value is None or isinstance(n.value, GaussianRational):
            y = g(n.value)
            n.parent = next(k for k, p in enumerate(parents) if _same_value(p.value, y))
            continue
        box = n.box
        bits = START_BITS
        while True:
            img = _image_box(g, box, 2 * bits)
            if img is not None:
                hits = [k for k, p in enumerate(parents) if p.box is not None and p.box.intersects(img)]
                if len(hits) == 1:
                    n.parent = hits[0]
                    break
            bits *= 2
            if bits > MAX_BITS:
                raise ArithmeticError("could not link a preimage to its parent")
            box = refine_root(sqf, box, bits)
            for p in parents:
                if isinstance(p.value, AlgebraicNumber):
                    p.box = refine_root(p.value.minpoly, p.box, bits)


def _same_value(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return alg_equals(a, b)


# -- the infinite-preorbit certificate ---------------------------------------------------


@dataclass
class PreorbitCertificate:
    base: object
    restriction: str
    depth: int
    tree: PreorbitTree | None
    non_exceptional: str
    nf_dispositions: list[str]
    base_in_nf: bool
    accepted: bool
    reasons: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"base point: {_fmt(self.base)}", f"restriction: {self.restriction}",
               f"non-exceptional: {self.non_exceptional}"]
        if self.base_in_nf:
            out.append("base point lies in NF (allowed: the preorbit starts one step back)")
        out += [f"NF orbit: {d}" for d in self.nf_dispositions]
        if self.tree is not None:
            out += self.tree.describe()
        out += self.reasons
        out.append(f"accepted: {self.accepted}")
        return out


def non_exceptional_reason(g: LineRestriction, a0) -> str:
    """Why ``a0`` has an infinite preorbit, or raise ExceptionalPoint."""
    a0 = _as_elem(a0)
    if g.degree >= 2:
        if a0 is None:
            raise ExceptionalPoint("the point at infinity is not handled")
        # critical iff the Wronskian num' den - num den' vanishes at a0
        w = upoly.sub(upoly.mul(upoly.deriv(g.num), g.den), upoly.mul(g.num, upoly.deriv(g.den)))
        val = _horner(w, a0)
        zero = val.is_zero()
        if zero:
            raise ExceptionalPoint(f"{_fmt(a0)} is a critical point of the restriction")
        return f"{_fmt(a0)} is not a critical point of the restriction, so it is not exceptional"
    beta = _translation_step(g)
    if beta is not None and a0 is not None:
        return f"translation by {_fmt(beta)}: the preorbit a0 - k*({_fmt(beta)}) never repeats"
    raise ExceptionalPoint("degree-one restriction that is not a translation")


def _horner(p, z):
    acc = ZERO
    for c in reversed(p):
        acc = z * acc + c if isinstance(z, FieldElement) else acc * z + c
    return acc


def infinite_preorbit_certificate(g: LineRestriction, a0, nf: NFSet, depth: int,
                                  base_may_be_in_nf: bool = False, max_level_degree: int = 64,
                                  max_steps: int = 256) -> PreorbitCertificate:
    """Certificate that ``a0`` has an infinite preorbit under ``g`` avoiding NF.

    Raises PreorbitHitsNF when a member of NF reaches ``a0`` (step 0 means
    ``a0`` itself is in NF, which ``base_may_be_in_nf`` permits) and
    ExceptionalPoint when ``a0`` is critical.
    """
    a0e = _as_elem(a0)
    in_nf = nf.contains(a0e)
    if in_nf and not base_may_be_in_nf:
        raise PreorbitHitsNF(a0e, 0)
    reason = non_exceptional_reason(g, a0e)
    dispositions = []
    accepted = True
    reasons = []
    for x in nf.members:
        try:
            hit, orbit = first_hit(g, x, a0e, max_steps)
        except ArithmeticError as exc:
            accepted = False
            reasons.append(f"NF member {_fmt(x)}: {exc}")
            continue
        if hit is not None:
            raise PreorbitHitsNF(x, hit)
        dispositions.append(f"{_fmt(x)}: " + orbit.describe())
    tree = preorbit_tree(g, a0, depth, max_level_degree) if depth > 0 else None
    if depth <= 0:
        accepted = False
        reasons.append("depth 0: no preorbit evidence")
    elif tree is not None:
        for k, lvl in enumerate(tree.levels[1:], start=1):
            if not lvl:
                accepted = False
                reasons.append(f"level {k} of the preorbit is empty")
            bad = [n for n in lvl if n.value is not None and nf.contains(n.value)]
            if bad:
                raise PreorbitHitsNF(bad[0].value, k)
    return PreorbitCertificate(a0e, str(g), depth, tree, reason, dispositions, in_nf, accepted, reasons)


# -- both branches of a two-valued inverse -------------------------------------------------


@dataclass
class BranchCertificate:
    kind: str  # "symbolic" or "per-point"
    branches: tuple[str, str, str]  # U, V, D with preimages +-(U, V)/sqrt(D)
    constant: GaussianRational | None
    samples: list[str]
    holds: bool

    def lines(self) -> list[str]:
        U, V, D = self.branches
        out = [f"preimages of (a, b): (x, y) = +-({U}, {V})/sqrt({D})"]
        if self.constant is not None:
            out.append(f"sum of the two branch equations: {_fmt(self.constant)}")
        out += self.samples
        out.append(f"both preimages on the curve impossible: {self.holds} ({self.kind})")
        return out


def _affine_form(f: ProjectiveMap):
    for k, comp in enumerate(f.comps):
        terms = list(comp.terms.items())
        if len(terms) == 1 and terms[0][0][k] == f.degree:
            c = terms[0][1]
            others = [j for j in range(3) if j != k]
            return k, others, c
    return None


def two_branch_inverse(f: ProjectiveMap):
    """``(U, V, D, chart)`` with the preimages of ``(a, b)`` equal to
    ``+-(U, V)/sqrt(D)`` in the chart where the pure-power component is 1."""
    from .curves import XYZ
    form = _affine_form(f)
    if f.degree != 2 or form is None:
        raise NotApplicable("no explicit two-branch inverse for this map")
    k, others, c = form
    names = ("x", "y", "a", "b")
    x, y, a, b = (MPoly.var(n, names) for n in names)
    sub = {XYZ[k]: 1, XYZ[others[0]]: x, XYZ[others[1]]: y}
    F = [substitute(f.comps[j], sub).with_vars(names) * c.inverse() for j in others]
    quad, const = [], []
    for Fi in F:
        q = MPoly(names, {e: v for e, v in Fi.terms.items() if sum(e) == 2})
        c0 = MPoly(names, {e: v for e, v in Fi.terms.items() if sum(e) == 0})
        if not (Fi - q - c0).is_zero():
            raise NotApplicable("the affine map has linear terms")
        quad.append(q)
        const.append(c0)
    P = quad[0] * (b - const[1]) - quad[1] * (a - const[0])
    lin = _constant_ratio_factor(P, x, y)
    if lin is None:
        raise NotApplicable("the quadratic pencil has no constant linear factor")
    try:
        L2 = exquo(P, lin)
    except InexactDivision:
        raise NotApplicable("pencil factorization failed") from None
    alpha = substitute(L2, {"x": 1, "y": 0})
    beta = substitute(L2, {"x": 0, "y": 1})
    U, V = beta, -alpha
    W = substitute(quad[0], {"x": U, "y": V})
    try:
        D = exquo(W, a - const[0])
    except InexactDivision:
        raise NotApplicable("the branch radicand is not polynomial") from None
    # check: f(U/s, V/s) = (a, b) with s^2 = D
    for q, c0, target in ((quad[0], const[0], a), (quad[1], const[1], b)):
        if not (substitute(q, {"x": U, "y": V}) + c0 * D - target * D).is_zero():
            raise NotApplicable("branch formula does not invert the map")
    return U.with_vars(("a", "b")), V.with_vars(("a", "b")), D.with_vars(("a", "b")), (k, others)


def _constant_ratio_factor(P: MPoly, x: MPoly, y: MPoly) -> MPoly | None:
    A = P.coefficients_in("x")
    # P = A2 x^2 + A1 x + A0 with A_j homogeneous in y
    a2 = A[2] if len(A) > 2 else None
    if a2 is None or a2.is_zero():
        return y
    # A2 rho^2 + B rho + C = 0 identically, with P = A2 x^2 + B x y + C y^2
    names = tuple(v for v in P.vars if v not in ("x", "y"))
    B = substitute(A[1], {"y": 1}).with_vars(names)
    C = substitute(A[0], {"y": 1}).with_vars(names)
    A2 = substitute(a2, {"y": 1}).with_vars(names)
    keys = set(A2.terms) | set(B.terms) | set(C.terms)
    g: upoly.UPoly = ()
    for e in keys:
        q = upoly.make([C.terms.get(e, ZERO), B.terms.get(e, ZERO), A2.terms.get(e, ZERO)])
        if q:
            g = upoly.gcd(g, q) if g else upoly.monic(q)
    if len(g) <= 1:
        return None
    roots = gaussian_roots(upoly.squarefree(g))
    if not roots:
        return None
    return x - y * roots[0]


def both_preimages_on_curve_infeasible(f: ProjectiveMap, c: PlaneCurve, samples: int = 5,
                                       seed: int = 0) -> BranchCertificate:
    """Certificate that a point off the line ``c`` never has both preimages on ``c``."""
    from .curves import XYZ
    if c.degree != 1:
        raise NotApplicable("only lines are handled")
    U, V, D, (k, others) = two_branch_inverse(f)
    eq = _primitive_integer(c.equation)
    coef = {v: eq.terms.get(tuple(1 if w == v else 0 for w in XYZ), ZERO) for v in XYZ}
    al, be, ga = coef[XYZ[others[0]]], coef[XYZ[others[1]]], coef[XYZ[k]]
    # branch equations eps (al U + be V) r + ga with r = 1/sqrt(D)
    names = ("a", "b", "r")
    T = (U * al + V * be).with_vars(names)
    r = MPoly.var("r", names)
    total = (T * r + ga) + (T * r * -1 + ga)
    branches = (str(U), str(V), str(D))
    if total.is_constant() and not _c(total.constant_value()).is_zero():
        return BranchCertificate("symbolic", branches, _c(total.constant_value()), [], True)
    const = _c(total.constant_value()) if total.is_constant() else None
    rng = random.Random(seed)
    lines, ok = [], True
    while len(lines) < samples:
        av, bv = _c(rng.randint(-20, 20)), _c(rng.randint(-20, 20))
        Dv = D.evaluate({"a": av, "b": bv})
        Dv = Dv.constant_value() if isinstance(Dv, MPoly) else _c(Dv)
        target = [None] * 3
        target[k], target[others[0]], target[others[1]] = ONE, av, bv
        if Dv.is_zero() or eq.evaluate(target).is_zero():
            continue
        s_plus, _ = sqrt_branches(Dv)
        _, (s,) = common_field([s_plus])
        Uv = _c(_mval(U, av, bv))
        Vv = _c(_mval(V, av, bv))
        on = []
        for eps in (1, -1):
            xv = s.inverse() * (Uv * eps)
            yv = s.inverse() * (Vv * eps)
            val = xv * al + yv * be + ga
            on.append(val.is_zero())
        both = all(on)
        ok = ok and not both
        lines.append(f"sample (a, b) = ({_fmt(av)}, {_fmt(bv)}): preimages on the curve: {on}")
    return BranchCertificate("per-point", branches, const, lines, ok)


def _primitive_integer(eq: MPoly) -> MPoly:
    # scale to coprime Gaussian-integer coefficients so the constant is canonical
    den = 1
    for c in eq.terms.values():
        den = math.lcm(den, c.parts[2])
    eq = eq.scale(_c(den))
    g = 0
    for c in eq.terms.values():
        a, b, _ = c.parts
        g = math.gcd(g, a, b)
    return eq.scale(_c(Fraction(1, g))) if g > 1 else eq


def _mval(p: MPoly, av, bv):
    v = p.evaluate({"a": av, "b": bv})
    return v.constant_value() if isinstance(v, MPoly) else v
