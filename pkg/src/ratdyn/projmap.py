"""Rational self-maps of the projective plane and exact points.

A :class:`ProjectiveMap` keeps its normalized components and, for iterates
and composites, the chain of atomic maps it was built from.  The chain gives
cheap exact evaluation (apply the small maps one after another) and the
inclusion ``I(G o g) <= I(g) u g^-1(I(G))`` used to find indeterminacy
points of high iterates without solving high-degree systems.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property

from . import modular
from .curves import PlaneCurve, XYZ, line_parameterization
from .exact import upoly
from .exact.algebraic import FieldElement, common_field
from .exact.gaussian import GaussianRational, ZERO, ONE
from .exact.linalg import det
from .mpoly import (MPoly, coeff_str, exquo, gcd_list, linear_factors,
                    squarefree_decomposition, InexactDivision)
from .solve import PositiveDimensionalIntersection, solve_with_multiplicity

_c = GaussianRational.coerce


class NotHomogeneous(ValueError):
    pass


class UnequalDegrees(ValueError):
    pass


class ZeroMap(ValueError):
    pass


class NotDominant(ValueError):
    pass


class Indeterminate(ArithmeticError):
    pass


class PositiveDimensionalFiber(ArithmeticError):
    pass


class InconsistentSamples(ArithmeticError):
    pass


class NotInvariant(ValueError):
    pass


class ResourceCap(RuntimeError):
    pass


class OrbitHitsIndeterminacy(ArithmeticError):
    def __init__(self, step: int, point, certificate=None):
        super().__init__(f"orbit reaches an indeterminate point at step {step}: {point}")
        self.step = step
        self.point = point
        self.certificate = certificate


def _zero(x) -> bool:
    return x.is_zero()


def _val(x):
    return x.value() if isinstance(x, FieldElement) else x


# -- points ----------------------------------------------------------------------


class ProjectivePoint:
    """A point of P^2, scaled so its first nonzero coordinate is 1.

    Coordinates are held as Gaussian rationals or as elements of one number
    field (``elems``); ``coords`` gives them as GaussianRational or
    AlgebraicNumber.
    """

    __slots__ = ("elems", "field", "_coords")

    def __init__(self, coords):
        coords = list(coords)
        if len(coords) != 3:
            raise ValueError("a projective point has three coordinates")
        field_, elems = common_field(coords)
        k = next((j for j in range(3) if not _zero(elems[j])), None)
        if k is None:
            raise ValueError("all coordinates are zero")
        piv = elems[k]
        inv = piv.inverse()
        elems = [e * inv for e in elems]
        elems[k] = ONE
        elems = [e.poly[0] if isinstance(e, FieldElement) and e.is_rational() and e.poly else
                 (ZERO if isinstance(e, FieldElement) and not e.poly else e) for e in elems]
        self.elems = elems
        self.field = field_ if any(isinstance(e, FieldElement) for e in elems) else None
        self._coords = None

    @property
    def coords(self) -> list:
        if self._coords is None:
            self._coords = [_val(e) for e in self.elems]
        return self._coords

    @property
    def is_rational(self) -> bool:
        return self.field is None

    def pivot(self) -> int:
        return next(j for j in range(3) if not _zero(self.elems[j]))

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        if self.pivot() != other.pivot():
            return False
        if self.field is None and other.field is None:
            return self.elems == other.elems
        if self.field is other.field or self.field is None or other.field is None:
            return all(_zero(a - b) if isinstance(a, FieldElement) else
                       (_zero(-(b - a)) if isinstance(b, FieldElement) else a == b)
                       for a, b in zip(self.elems, other.elems))
        _, vals = common_field(self.elems + other.elems)
        return all(_zero(vals[k] - vals[k + 3]) if isinstance(vals[k], FieldElement) or
                   isinstance(vals[k + 3], FieldElement) else vals[k] == vals[k + 3]
                   for k in range(3))

    def __hash__(self):
        if self.field is None:
            return hash(tuple(self.elems))
        return hash(self.pivot())

    def evaluate_forms(self, forms) -> list:
        return [f.evaluate(self.elems) for f in forms]

    def affine(self, k: int = 0) -> list:
        """Coordinates divided by coordinate ``k`` (raises at infinity of that chart)."""
        d = self.elems[k]
        if _zero(d):
            raise ZeroDivisionError("point at infinity of this chart")
        inv = d.inverse()
        return [_val(e * inv) for j, e in enumerate(self.elems) if j != k]

    def approx(self) -> list[complex]:
        return [complex(e) for e in self.elems]

    def __str__(self):
        return "[" + ":".join(_num_str(c) for c in self.coords) + "]"

    def __repr__(self):
        return f"ProjectivePoint({self})"


def _num_str(x) -> str:
    if isinstance(x, GaussianRational):
        return coeff_str(x)
    return str(x)


def point(*coords) -> ProjectivePoint:
    return ProjectivePoint([_c(c) if isinstance(c, (int, complex)) else c for c in coords])


# -- maps ------------------------------------------------------------------------


class ProjectiveMap:
    """Three coprime ternary forms of equal degree in X, Y, Z."""

    def __init__(self, comps, degree: int, name: str = "", steps: tuple = ()):
        self.comps = tuple(c.with_vars(XYZ) for c in comps)
        self.degree = degree
        self.name = name
        self._steps = tuple(steps)

    @property
    def steps(self) -> tuple:
        """Atomic maps whose composite (first applied first) is this map."""
        return self._steps if self._steps else (self,)

    def __call__(self, P: ProjectivePoint) -> ProjectivePoint:
        if len(self.steps) > 1:
            try:
                x = P
                for s in self.steps:
                    x = s._apply(x)
                return x
            except Indeterminate:
                pass
        return self._apply(P)

    def _apply(self, P: ProjectivePoint) -> ProjectivePoint:
        vals = P.evaluate_forms(self.comps)
        if all(_zero(v) for v in vals):
            raise Indeterminate(f"{self.name or 'map'} is indeterminate at {P}")
        return ProjectivePoint(vals)

    def is_indeterminate_at(self, P: ProjectivePoint) -> bool:
        return all(_zero(v) for v in P.evaluate_forms(self.comps))

    @cached_property
    def jacobian_matrix(self) -> list[list[MPoly]]:
        return [[f.derivative(v) for v in XYZ] for f in self.comps]

    @cached_property
    def jacobian_det(self) -> MPoly:
        J = self.jacobian_matrix
        return (J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1])
                - J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0])
                + J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]))

    def jacobian_at(self, P: ProjectivePoint):
        rows = [[d.evaluate(P.elems) for d in row] for row in self.jacobian_matrix]
        return _det3(rows)

    def __str__(self):
        return "[" + " : ".join(str(c) for c in self.comps) + "]"

    def __repr__(self):
        return f"ProjectiveMap({self.name or str(self)}, degree={self.degree})"


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


_dominance_rng = random.Random(4242)


def normalize(polys, name: str = "", steps: tuple = (), check_dominant: bool = True) -> ProjectiveMap:
    """Divide out the common factor of three ternary forms."""
    polys = [p.with_vars(XYZ) if isinstance(p, MPoly) else MPoly.const(p, XYZ) for p in polys]
    if len(polys) != 3:
        raise ValueError("a map of the plane has three components")
    live = [p for p in polys if not p.is_zero()]
    if not live:
        raise ZeroMap("all components are zero")
    for p in live:
        if not p.is_homogeneous():
            raise NotHomogeneous(f"component {p} is not homogeneous")
    degs = {p.total_degree() for p in live}
    if len(degs) != 1:
        raise UnequalDegrees(f"component degrees differ: {sorted(degs)}")
    g = gcd_list(live)
    if not g.is_constant():
        polys = [exquo(p, g) if not p.is_zero() else p for p in polys]
    d = max(p.total_degree() for p in polys)
    f = ProjectiveMap(polys, d, name, steps)
    if check_dominant and not _dominant(f):
        raise NotDominant("the Jacobian determinant vanishes identically")
    return f


def _dominant(f: ProjectiveMap) -> bool:
    # a nonzero value of the Jacobian determinant at one point suffices
    for _ in range(6):
        P = [_c(_dominance_rng.randint(-30, 30)) for _ in range(3)]
        rows = [[d.evaluate(P) for d in row] for row in f.jacobian_matrix]
        if not _c(_det3(rows)).is_zero():
            return True
    return not f.jacobian_det.is_zero()


def from_matrix(A, name: str = "A") -> ProjectiveMap:
    X, Y, Z = (MPoly.var(v, XYZ) for v in XYZ)
    A = [[_c(x) for x in row] for row in A]
    if det(A).is_zero():
        raise NotDominant("singular matrix")
    comps = [X * row[0] + Y * row[1] + Z * row[2] for row in A]
    return ProjectiveMap(comps, 1, name)


def identity() -> ProjectiveMap:
    return from_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]], "id")


def compose(f: ProjectiveMap, g: ProjectiveMap, name: str = "") -> ProjectiveMap:
    """``f o g`` (apply g first), normalized."""
    vals = list(g.comps)
    raw = [c.evaluate(vals) for c in f.comps]
    raw = [r if isinstance(r, MPoly) else MPoly.const(r, XYZ) for r in raw]
    return normalize(raw, name or f"{f.name}o{g.name}", g.steps + f.steps, check_dominant=False)


def iterate(f: ProjectiveMap, n: int) -> ProjectiveMap:
    if n < 1:
        raise ValueError("iterate needs n >= 1")
    out = f
    for k in range(2, n + 1):
        out = compose(f, out, f"{f.name}^{k}")
    return out


def chain_map(steps: list[ProjectiveMap], name: str = "") -> ProjectiveMap:
    """Lazy composite: components are only formed by :func:`compose` on demand."""
    out = steps[0]
    for s in steps[1:]:
        out = compose(s, out)
    out.name = name or out.name
    return out


# -- degrees -----------------------------------------------------------------------


def degree_sequence(f: ProjectiveMap, N: int, exact_limit: int = 16, seed: int = 0) -> list[int]:
    """``[deg f, deg f^2, ..., deg f^N]``.

    Iterates of degree at most ``exact_limit`` are composed exactly.  Past
    that, ``deg f^n = d * deg f^(n-1)`` is certified by showing that the raw
    composite restricted to a random line has coprime components modulo a
    large prime (see :mod:`ratdyn.modular`).
    """
    if N < 1:
        raise ValueError("N must be positive")
    d = f.degree
    degs = [d]
    exact = f
    steps: list = [f.comps]
    rng = random.Random(seed)
    fields = [modular.PrimeField.choose(seed + k) for k in range(3)]
    for n in range(2, N + 1):
        if exact is not None and exact.degree * d <= exact_limit:
            exact = compose(f, exact)
            degs.append(exact.degree)
            steps = [exact.comps]
            continue
        trial = steps + [f.comps]
        ok = None
        for F in fields:
            base = [rng.randint(-50, 50) for _ in range(3)]
            direction = [rng.randint(-50, 50) for _ in range(3)]
            ok = modular.coprime_on_line(trial, base, direction, F)
            if ok:
                break
        if ok:
            degs.append(degs[-1] * d)
            steps = trial
            exact = None
            continue
        if exact is not None:
            exact = compose(f, exact)
            degs.append(exact.degree)
            steps = [exact.comps]
            continue
        raise ResourceCap(f"could not certify deg f^{n} without exact composition")
    return degs


# -- indeterminacy -----------------------------------------------------------------


def indeterminacy(f: ProjectiveMap, seed: int = 0) -> list[ProjectivePoint]:
    """Common zeros of the components, exact and without repetition."""
    steps = f.steps
    if len(steps) == 1:
        try:
            return [P for P, _ in solve_with_multiplicity(list(f.comps), seed)]
        except PositiveDimensionalIntersection as exc:
            raise PositiveDimensionalIntersection(str(exc)) from exc
    first, rest = steps[0], steps[1:]
    tail = _chain(rest)
    cands = list(indeterminacy(first, seed))
    for q in indeterminacy(tail, seed):
        if not q.is_rational:
            raise NotImplementedError("preimages of irrational points are not supported")
        for P, _ in preimages(first, q, seed):
            cands.append(P)
    out: list[ProjectivePoint] = []
    for P in cands:
        if f.is_indeterminate_at(P) and not any(P == Q for Q in out):
            out.append(P)
    return out


def _chain(steps: tuple) -> ProjectiveMap:
    if len(steps) == 1:
        return steps[0]
    out = steps[0]
    for s in steps[1:]:
        out = compose(s, out)
    return out


# -- critical and collapsed curves ---------------------------------------------------


def critical_locus(f: ProjectiveMap) -> list[tuple[PlaneCurve, int]]:
    """Factors of the Jacobian determinant with multiplicities, lines split out."""
    J = f.jacobian_det
    if J.is_zero():
        raise NotDominant("Jacobian determinant vanishes")
    if J.is_constant():
        return []
    lins, rest = linear_factors(J)
    out: list[tuple[PlaneCurve, int]] = []
    for L in lins:
        for k, (C, m) in enumerate(out):
            if C.equation == L:
                out[k] = (C, m + 1)
                break
        else:
            out.append((PlaneCurve(L, "critical"), 1))
    if not rest.is_constant():
        for s, m in squarefree_decomposition(rest):
            out.append((PlaneCurve(s.monic(), "critical"), m))
    return out


def _image_of_line(f: ProjectiveMap, L: PlaneCurve) -> ProjectivePoint | None:
    A, B = line_parameterization(L)
    vals = [MPoly.from_upoly(upoly.make([a, b]), "t") for a, b in zip(A, B)]
    img = []
    for comp in f.comps:
        v = comp.evaluate(vals)
        img.append(v.with_vars(("t",)).to_upoly("t") if isinstance(v, MPoly) else upoly.make([v]))
    g: upoly.UPoly = ()
    for p in img:
        if p:
            g = upoly.gcd(g, p) if g else upoly.monic(p)
    red = [upoly.exquo(p, g) if p else p for p in img]
    if all(len(p) <= 1 for p in red):
        return ProjectivePoint([p[0] if p else ZERO for p in red])
    return None


def _image_of_curve(f: ProjectiveMap, C: PlaneCurve, seed: int = 0) -> ProjectivePoint | None:
    if C.degree == 1:
        return _image_of_line(f, C)
    # candidate from a point of C, then proven by divisibility of the minors
    from .curves import intersect_with_line, line
    rng = random.Random(seed)
    for _ in range(5):
        L = line(rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(1, 9))
        for P, _m in intersect_with_line(C, L):
            if f.is_indeterminate_at(P):
                continue
            q = f._apply(P)
            if not q.is_rational:
                return None
            for a in range(3):
                for b in range(a + 1, 3):
                    minor = f.comps[b] * q.elems[a] - f.comps[a] * q.elems[b]
                    if minor.is_zero():
                        continue
                    try:
                        exquo(minor, C.equation)
                    except InexactDivision:
                        return None
            return q
    return None


def collapsed_curves(f: ProjectiveMap) -> list[tuple[PlaneCurve, ProjectivePoint]]:
    out = []
    for C, _m in critical_locus(f):
        q = _image_of_curve(f, C)
        if q is not None:
            out.append((C, q))
    return out


@dataclass
class StabilityCertificate:
    degrees: list[int]
    expected: list[int]
    orbits: list = field(default_factory=list)  # (curve, [points], disposition)
    stable: bool = True
    consistent: bool = True

    def lines(self) -> list[str]:
        out = [f"degrees: {' '.join(map(str, self.degrees))}",
               f"expected: {' '.join(map(str, self.expected))}"]
        for C, pts, disp in self.orbits:
            out.append(f"orbit of {C}: {' -> '.join(map(str, pts))} ({disp})")
        out.append(f"stable: {self.stable}")
        return out


def is_algebraically_stable_up_to(f: ProjectiveMap, N: int) -> StabilityCertificate:
    """Both criteria: degree growth and collapsed-curve orbits avoiding indeterminacy."""
    degs = degree_sequence(f, N)
    expected = [f.degree ** n for n in range(1, N + 1)]
    cert = StabilityCertificate(degs, expected)
    for C, q in collapsed_curves(f):
        pts = [q]
        disp = f"open after {N} steps"
        for step in range(1, N + 1):
            x = pts[-1]
            if f.is_indeterminate_at(x):
                cert.stable = False
                cert.orbits.append((C, pts, f"hits indeterminacy at step {step}"))
                cert.consistent = degs != expected
                raise OrbitHitsIndeterminacy(step, x, cert)
            y = f._apply(x)
            hit = next((k for k, z in enumerate(pts) if z == y), None)
            pts.append(y)
            if hit is not None:
                disp = f"periodic, preperiod {hit}, period {len(pts) - 1 - hit}"
                break
        cert.orbits.append((C, pts, disp))
    cert.stable = degs == expected
    cert.consistent = True
    return cert


# -- fibers ---------------------------------------------------------------------------


def preimages(f: ProjectiveMap, q: ProjectivePoint, seed: int = 0) -> list[tuple[ProjectivePoint, int]]:
    """Solutions of ``f(x) = q`` with multiplicities (q Gaussian-rational)."""
    if not q.is_rational:
        raise NotImplementedError("preimages of irrational points are not supported")
    qs = q.elems
    minors = []
    for a in range(3):
        for b in range(a + 1, 3):
            m = f.comps[b] * qs[a] - f.comps[a] * qs[b]
            if not m.is_zero():
                minors.append(m)
    try:
        sols = solve_with_multiplicity(minors, seed)
    except PositiveDimensionalIntersection as exc:
        raise PositiveDimensionalFiber(f"fiber over {q} is positive dimensional") from exc
    out = []
    for P, m in sols:
        if f.is_indeterminate_at(P):
            continue
        if not _zero(_as_elem(f.jacobian_at(P))):
            m = 1
        out.append((P, m))
    return out


def _as_elem(x):
    return x if isinstance(x, FieldElement) else _c(x)


def topological_degree(f: ProjectiveMap, samples: int = 3, seed: int = 0,
                       max_attempts: int = 40) -> int:
    """Generic number of preimages, from agreeing seeded samples with simple fibers."""
    rng = random.Random(seed)
    counts = []
    attempts = 0
    while len(counts) < samples:
        attempts += 1
        if attempts > max_attempts:
            raise InconsistentSamples("too many rejected samples")
        q = ProjectivePoint([_c(rng.randint(-9, 9)) for _ in range(2)] + [ONE])
        try:
            pre = preimages(f, q, seed=rng.randint(0, 10 ** 6))
        except PositiveDimensionalFiber:
            continue
        if any(m != 1 for _, m in pre):
            continue
        counts.append(len(pre))
    if len(set(counts)) != 1:
        raise InconsistentSamples(f"sample counts disagree: {counts}")
    return counts[0]


# -- lines ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LineRestriction:
    line: PlaneCurve
    chart: tuple[str, str]  # (numerator coordinate, denominator coordinate)
    num: upoly.UPoly
    den: upoly.UPoly

    @property
    def degree(self) -> int:
        return max(len(self.num), len(self.den)) - 1

    def __call__(self, z):
        """Exact image of a chart value; None stands for the point at infinity."""
        if z is None:
            if len(self.num) > len(self.den):
                return None
            if len(self.num) < len(self.den):
                return ZERO
            return self.num[-1] / self.den[-1]
        d = _horner(self.den, z)
        n = _horner(self.num, z)
        if _zero(_as_elem(d)):
            return None
        return n / d if isinstance(d, FieldElement) else (n * _c(d).inverse() if isinstance(n, FieldElement) else n / d)

    def compose(self, other: "LineRestriction") -> "LineRestriction":
        """``self o other`` as a rational function in the chart coordinate."""
        # evaluate num/den at other.num/other.den and clear denominators
        d = max(len(self.num), len(self.den)) - 1
        def hom(p):
            acc: upoly.UPoly = ()
            for k, c in enumerate(p):
                term = upoly.scale(upoly.mul(upoly.power(other.num, k), upoly.power(other.den, d - k)), c)
                acc = upoly.add(acc, term)
            return acc
        n, m = hom(self.num), hom(self.den)
        g = upoly.gcd(n, m)
        if len(g) > 1:
            n, m = upoly.exquo(n, g), upoly.exquo(m, g)
        s = m[-1].inverse()
        return LineRestriction(self.line, self.chart, upoly.scale(n, s), upoly.scale(m, s))

    def point(self, z) -> ProjectivePoint:
        """The point of the line with chart coordinate ``z`` (None for infinity)."""
        return line_point(self.line, self.chart, z)

    def is_polynomial(self) -> bool:
        return len(self.den) == 1

    def __str__(self):
        z = "z"
        if self.den == (ONE,):
            return f"{z} -> {upoly.to_str(self.num, z)}"
        return f"{z} -> ({upoly.to_str(self.num, z)})/({upoly.to_str(self.den, z)})"


def _horner(p, z):
    acc = ZERO
    for c in reversed(p):
        acc = acc * z + c
    return acc


def _line_coeffs(L: PlaneCurve) -> dict:
    eq = L.equation
    return {v: eq.terms.get(tuple(1 if w == v else 0 for w in XYZ), ZERO) for v in XYZ}


def line_point(L: PlaneCurve, chart: tuple[str, str], z) -> ProjectivePoint:
    """Point of ``L`` whose coordinate ``num/den`` in ``chart`` is ``z`` (None: den = 0)."""
    num_name, den_name = chart
    coeff = _line_coeffs(L)
    third = next(v for v in XYZ if v not in chart)
    if z is not None and not isinstance(z, (FieldElement, GaussianRational)):
        z = common_field([_c(z) if isinstance(z, (int, complex)) else z])[1][0]
    vals = {num_name: ONE, den_name: ZERO} if z is None else {num_name: z, den_name: ONE}
    vals[third] = (vals[num_name] * coeff[num_name] + vals[den_name] * coeff[den_name]) \
        * (-coeff[third].inverse())
    return ProjectivePoint([vals[v] for v in XYZ])


def restrict_to_line(f: ProjectiveMap, L: PlaneCurve, chart: str) -> LineRestriction:
    """The induced map on an invariant line in the coordinate ``chart`` (e.g. "Z/Y")."""
    num_name, den_name = (s.strip() for s in chart.split("/"))
    if L.degree != 1:
        raise ValueError("restriction needs a line")
    eq = L.equation
    coeff = {v: eq.terms.get(tuple(1 if w == v else 0 for w in XYZ), ZERO) for v in XYZ}
    third = next(v for v in XYZ if v not in (num_name, den_name))
    if coeff[third].is_zero():
        raise ValueError(f"chart {chart} does not parameterize the line {L}")
    t = MPoly.var("t", ("t",))
    param = {num_name: t, den_name: MPoly.const(1, ("t",))}
    param[third] = (t * coeff[num_name] + coeff[den_name]) * (-coeff[third].inverse())
    vals = [param[v] for v in XYZ]
    img = []
    for comp in f.comps:
        v = comp.evaluate(vals)
        img.append(v if isinstance(v, MPoly) else MPoly.const(v, ("t",)))
    on_line = eq.evaluate(img)
    if not (on_line.is_zero() if isinstance(on_line, MPoly) else _c(on_line).is_zero()):
        raise NotInvariant(f"{L} is not invariant")
    n = img[XYZ.index(num_name)].with_vars(("t",)).to_upoly("t")
    m = img[XYZ.index(den_name)].with_vars(("t",)).to_upoly("t")
    if not m:
        raise NotInvariant("the line maps to the point at infinity of the chart")
    g = upoly.gcd(n, m) if n else upoly.monic(m)
    if len(g) > 1:
        n, m = (upoly.exquo(n, g) if n else n), upoly.exquo(m, g)
    s = m[-1].inverse()
    return LineRestriction(L, (num_name, den_name), upoly.scale(n, s), upoly.scale(m, s))


# -- finiteness --------------------------------------------------------------------------


@dataclass
class Finiteness:
    finite: bool
    reason: str

    def __bool__(self):
        return self.finite


_collapsed_cache: dict[int, list] = {}


def _collapsed(f: ProjectiveMap):
    key = id(f)
    if key not in _collapsed_cache:
        _collapsed_cache[key] = (f, collapsed_curves(f))
    return _collapsed_cache[key][1]


def is_finite_at(f, P: ProjectivePoint) -> Finiteness:
    """Whether f is holomorphic at P and collapses no curve through P.

    ``f`` is a map or a sequence of maps applied in order.  For composites
    every atomic step is checked along the orbit; finiteness of each step
    implies finiteness of the composite.
    """
    x = P
    if isinstance(f, ProjectiveMap):
        steps = f.steps
    else:
        steps = tuple(s for g in f for s in g.steps)
    for k, s in enumerate(steps):
        if s.is_indeterminate_at(x):
            if len(steps) > 1:
                return Finiteness(False, f"step {k + 1} ({s.name}) is indeterminate at {x}")
            return Finiteness(False, f"indeterminate at {x}")
        for C, q in _collapsed(s):
            if C.contains(x):
                return Finiteness(False, f"{x} lies on the collapsed curve {C} of step {k + 1}")
        x = s._apply(x)
    return Finiteness(True, f"finite; image {x}")
