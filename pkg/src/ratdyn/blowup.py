"""Chains of point blow-ups over one base point, and lifts of maps to them.

Every chart has two coordinates ``(u, v)`` and records the base local
coordinates ``(a, b)`` as polynomials in ``(u, v)``.  The base chart is the
affine chart where the base point's first nonzero coordinate is 1, translated
so the base point is the origin.  Blowing up ``(u0, v0)`` in a chart gives the
two charts ``(u - u0, k)`` with ``v - v0 = k (u - u0)`` and ``(v - v0, m)``
with ``u - u0 = m (v - v0)``; in both the new exceptional divisor is
``{first coordinate = 0}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .curves import ParamCurve, XYZ, implicitize
from .exact import upoly
from .exact.gaussian import GaussianRational, ZERO
from .exact.roots import gaussian_roots
from .mpoly import MPoly, exquo, gcd_list, substitute
from .projmap import ProjectiveMap, ProjectivePoint, indeterminacy

_c = GaussianRational.coerce


class CenterNotOnSurface(ValueError):
    pass


class LiftIndeterminateOnDivisor(ArithmeticError):
    pass


@dataclass(frozen=True)
class Chart:
    name: str
    coords: tuple[str, str]
    level: int
    subst: tuple[MPoly, MPoly]  # base local coordinates (a, b) in chart coordinates
    divisors: tuple = ()  # (tag, equation in chart coordinates) for visible divisors

    def divisor(self, tag: str) -> MPoly | None:
        return next((eq for t, eq in self.divisors if t == tag), None)

    def describe(self) -> str:
        a, b = self.subst
        return f"{self.name}: ({', '.join(self.coords)}) with a = {a}, b = {b}"


@dataclass(frozen=True)
class BlowupTower:
    base: ProjectivePoint
    base_index: int  # coordinate set to 1 in the base chart
    base_names: tuple[str, str]
    charts: tuple[Chart, ...]
    centers: tuple = ()  # (chart name, (u0, v0), tag) per blow-up
    tags: tuple[str, ...] = ()

    def chart(self, name: str) -> Chart:
        for c in self.charts:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def levels(self) -> int:
        return len(self.tags)

    def punctures(self, name: str) -> list[tuple]:
        return [pt for cname, pt, _ in self.centers if cname == name]

    def projective(self, chart: Chart) -> list[MPoly]:
        """Blow-down ``pi`` in the chart as homogeneous-free coordinates ``[X : Y : Z]``."""
        one = MPoly.const(1, chart.coords)
        k = self.base_index
        others = [j for j in range(3) if j != k]
        base = self.base.elems
        out = [None, None, None]
        out[k] = one
        for s, j in zip(chart.subst, others):
            out[j] = s + base[j]
        return out

    def blow_down(self, chart: Chart, uv) -> ProjectivePoint:
        vals = dict(zip(chart.coords, (_c(x) for x in uv)))
        return ProjectivePoint([_ev(q, vals) for q in self.projective(chart)])

    def describe(self) -> list[str]:
        lines = [f"base point {self.base}, base chart coordinate {XYZ[self.base_index]} = 1, "
                 f"local coordinates ({', '.join(self.base_names)})"]
        for cname, pt, tag in self.centers:
            lines.append(f"{tag}: blow-up of {cname} at ({', '.join(_s(x) for x in pt)})")
        for c in self.charts:
            lines.append(c.describe())
        return lines


def _s(x) -> str:
    from .mpoly import coeff_str
    return coeff_str(_c(x))


def _ev(q: MPoly, vals: dict):
    v = q.evaluate(vals)
    return v.constant_value() if isinstance(v, MPoly) else _c(v)


def base_tower(p: ProjectivePoint, names=("a", "b")) -> BlowupTower:
    if not p.is_rational:
        raise ValueError("blow-up centers must be Gaussian-rational")
    k = p.pivot()
    a, b = (MPoly.var(n, tuple(names)) for n in names)
    chart = Chart("base", tuple(names), 0, (a, b))
    return BlowupTower(p, k, tuple(names), (chart,))


def blow_up(tower: BlowupTower | None, center, names=None, base_names=("a", "b")) -> BlowupTower:
    """Blow up the base point (a ProjectivePoint) or a point ``(chart, (u0, v0))``
    on the latest exceptional divisor."""
    level = 0 if tower is None else tower.levels
    if isinstance(center, ProjectivePoint):
        if tower is not None and tower.levels:
            raise CenterNotOnSurface("the tower already has a base blow-up")
        tower = base_tower(center, base_names)
        chart, pt = tower.chart("base"), (ZERO, ZERO)
    else:
        cname, pt = center
        pt = tuple(_c(x) for x in pt)
        if tower is None:
            raise CenterNotOnSurface("no tower to blow up in")
        chart = tower.chart(cname)
        latest = tower.tags[-1]
        eq = chart.divisor(latest)
        if eq is None or not _ev(eq, dict(zip(chart.coords, pt))).is_zero():
            raise CenterNotOnSurface(f"({', '.join(map(_s, pt))}) is not on {latest} in {cname}")
        if chart.level != level:
            raise CenterNotOnSurface("centers must lie in charts of the latest level")
    tag = f"E{level + 1}"
    n1, n2 = names or (f"s{level + 1}", f"t{level + 1}")
    u, v = chart.coords
    u0, v0 = pt
    new = []
    for k, (first, other, new_name) in enumerate(((u, v, n1), (v, u, n2))):
        f0 = u0 if first == u else v0
        o0 = v0 if first == u else u0
        first_name = first
        coords = (first_name, new_name)
        F = MPoly.var(first_name, coords)
        N = MPoly.var(new_name, coords)
        # old chart coordinates in terms of the new ones
        sub = {first: F + f0, other: N * F + o0}
        subst = tuple(substitute(s, sub).with_vars(coords) for s in chart.subst)
        divs = [(tag, F)]
        for t, eq in chart.divisors:
            strict = _strict(substitute(eq, sub).with_vars(coords), F)
            if not strict.is_constant():
                divs.append((t, strict))
        new.append(Chart(f"{tag}.{k + 1}", coords, level + 1, subst, tuple(divs)))
    return BlowupTower(tower.base, tower.base_index, tower.base_names,
                       tower.charts + tuple(new), tower.centers + ((chart.name, pt, tag),),
                       tower.tags + (tag,))


def _strict(p: MPoly, e: MPoly) -> MPoly:
    while not p.is_zero():
        try:
            p = exquo(p, e)
        except ArithmeticError:
            break
    return p


# -- lifts ---------------------------------------------------------------------------


@dataclass
class LiftedMap:
    name: str
    tower: BlowupTower
    exprs: dict = field(default_factory=dict)  # chart name -> three MPoly

    def at(self, chart: str, uv) -> ProjectivePoint:
        c = self.tower.chart(chart)
        vals = dict(zip(c.coords, (_c(x) for x in uv)))
        return ProjectivePoint([_ev(q, vals) for q in self.exprs[chart]])

    def then(self, g: ProjectiveMap, name: str = "") -> "LiftedMap":
        """``g`` composed after this lift."""
        out = {}
        for cname, comps in self.exprs.items():
            raw = [q.evaluate(list(comps)) for q in g.comps]
            coords = self.tower.chart(cname).coords
            raw = [r if isinstance(r, MPoly) else MPoly.const(r, coords) for r in raw]
            out[cname] = _reduce(raw)
        return LiftedMap(name or f"{g.name}o{self.name}", self.tower, out)

    def affine_form(self, chart: str, target: int | None = None) -> tuple[int, list[str]]:
        """The lift in the chart as two quotients in the affine target chart
        ``target = 1`` (default: the first component not vanishing on the
        chart's newest divisor)."""
        c = self.tower.chart(chart)
        comps = self.exprs[chart]
        if target is None:
            newest = c.divisors[0][1] if c.divisors else None
            target = 0
            for j, q in enumerate(comps):
                r = q if newest is None else _restrict(q, c, newest)[0]
                if not r.is_zero():
                    target = j
                    break
        den = comps[target]
        out = []
        for j, q in enumerate(comps):
            if j == target:
                continue
            g = gcd_list([q, den]) if not q.is_zero() else den
            n, d = (exquo(q, g) if not q.is_zero() else q), exquo(den, g)
            s = d.lc().inverse()
            n, d = n * s, d * s
            out.append(str(n) if d.is_constant() else f"({n})/({d})")
        return target, out


def _reduce(raw: list[MPoly]) -> tuple[MPoly, MPoly, MPoly]:
    live = [r for r in raw if not r.is_zero()]
    if not live:
        raise LiftIndeterminateOnDivisor("all components vanish identically")
    g = gcd_list(live)
    if not g.is_constant():
        raw = [exquo(r, g) if not r.is_zero() else r for r in raw]
    return tuple(raw)


def lift_map(f: ProjectiveMap, tower: BlowupTower, name: str = "") -> LiftedMap:
    """``f o pi`` in every chart of the tower, gcd-reduced."""
    exprs = {}
    for c in tower.charts:
        vals = tower.projective(c)
        raw = [q.evaluate(vals) for q in f.comps]
        raw = [r if isinstance(r, MPoly) else MPoly.const(r, c.coords) for r in raw]
        exprs[c.name] = _reduce([r.with_vars(c.coords) for r in raw])
    return LiftedMap(name or f"{f.name}~", tower, exprs)


def _restrict(q: MPoly, chart: Chart, eq: MPoly) -> tuple[MPoly, str]:
    """``q`` on the divisor ``eq = 0`` (eq linear in one chart coordinate),
    as a polynomial in the remaining coordinate, whose name is returned."""
    used = eq.used_vars()
    if len(used) != 1 or eq.degree_in(next(iter(used))) != 1:
        raise NotImplementedError("divisor is not a coordinate line in this chart")
    var = next(iter(used))
    rest = next(n for n in chart.coords if n != var)
    c1 = eq.coefficients_in(var)
    root = -c1[0].constant_value() / c1[1].constant_value() if len(c1) > 1 and not c1[0].is_zero() else ZERO
    return substitute(q, {var: root}).with_vars(chart.coords), rest


def _divisor_charts(tower: BlowupTower, tag: str) -> list[Chart]:
    return [c for c in tower.charts if c.divisor(tag) is not None]


def exceptional_image(lift: LiftedMap, tag: str, chart: str | None = None):
    """Image of the divisor ``tag``: a ProjectivePoint or a ParamCurve in the
    divisor's chart coordinate."""
    charts = _divisor_charts(lift.tower, tag)
    if chart is not None:
        charts = [lift.tower.chart(chart)]
    if not charts:
        raise KeyError(f"no chart shows {tag}")
    c = charts[0]
    eq = c.divisor(tag)
    restricted = []
    param = None
    for q in lift.exprs[c.name]:
        r, param = _restrict(q, c, eq)
        restricted.append(r)
    if all(r.is_zero() for r in restricted):
        raise LiftIndeterminateOnDivisor(f"lift vanishes identically on {tag}")
    polys = [r.with_vars((param,)).to_upoly(param) if r.used_vars() else
             upoly.make([r.constant_value()]) for r in restricted]
    curve = ParamCurve(tuple(polys), ("image", tag))
    if curve.is_constant():
        return ProjectivePoint(_constant_value(curve))
    return curve


def _constant_value(c: ParamCurve) -> list:
    # proportional coordinates: evaluate at a parameter where they are not all zero
    for t in range(0, 50):
        vals = [upoly.evaluate(p, _c(t)) if p else ZERO for p in c.coords]
        if any(not v.is_zero() for v in vals):
            return vals
    raise ArithmeticError("could not find a defined parameter value")


@dataclass
class ResolutionCertificate:
    resolved: bool
    checked: list[str]
    offending: list[str]
    images: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = list(self.checked)
        out += [f"indeterminate: {o}" for o in self.offending]
        out += self.images
        out.append(f"resolved: {self.resolved}")
        return out


def is_resolved(lift: LiftedMap, downstream: ProjectiveMap | None = None) -> ResolutionCertificate:
    """Checks that the lift has no common zero on any exceptional divisor
    (outside blown-up centers) and, with ``downstream``, that the images of the
    divisors avoid its indeterminacy."""
    tower = lift.tower
    checked, offending, images = [], [], []
    for c in tower.charts:
        holes = tower.punctures(c.name)
        for tag, eq in c.divisors:
            restricted = []
            param = None
            for q in lift.exprs[c.name]:
                r, param = _restrict(q, c, eq)
                restricted.append(r)
            polys = [r.with_vars((param,)).to_upoly(param) if r.used_vars() else
                     upoly.make([r.constant_value()]) for r in restricted]
            g: upoly.UPoly = ()
            for p in polys:
                if p:
                    g = upoly.gcd(g, p) if g else upoly.monic(p)
            if not g:
                offending.append(f"{tag} in chart {c.name}: lift vanishes identically")
                continue
            checked.append(f"{tag} in chart {c.name}: gcd of restricted components has degree {len(g) - 1}")
            if len(g) <= 1:
                continue
            var = next(iter(eq.used_vars()))
            roots = gaussian_roots(g)
            rest = g
            for z in roots:
                rest = upoly.exquo(rest, upoly.make([-z, 1]))
                pt = {var: _divisor_root(eq, var), param: z}
                uv = tuple(pt[n] for n in c.coords)
                if uv in holes:
                    continue
                offending.append(f"{tag} in chart {c.name} at ({', '.join(map(_s, uv))})")
            if len(rest) > 1:
                offending.append(f"{tag} in chart {c.name} at roots of {upoly.to_str(rest, param)} = 0")
    if downstream is not None:
        bad = indeterminacy(downstream)
        for tag in tower.tags:
            img = exceptional_image(lift, tag)
            if isinstance(img, ProjectivePoint):
                hit = any(img == P for P in bad)
                images.append(f"{lift.name}({tag}) = {img}; in indeterminacy of {downstream.name}: {hit}")
            else:
                C = implicitize(img)
                hits = [P for P in bad if C.contains(P)]
                images.append(f"{lift.name}({tag}) = {{{C.equation} = 0}}; meets indeterminacy of "
                              f"{downstream.name} at: {', '.join(map(str, hits)) or 'none'}")
                hit = bool(hits)
            if hit:
                offending.append(f"image of {tag} meets the indeterminacy of {downstream.name}")
    return ResolutionCertificate(not offending, checked, offending, images)


def _divisor_root(eq: MPoly, var: str):
    c1 = eq.coefficients_in(var)
    return -c1[0].constant_value() / c1[1].constant_value() if not c1[0].is_zero() else ZERO


def resolve_at(f: ProjectiveMap, p: ProjectivePoint, max_levels: int = 2,
               base_names=("a", "b"), names=None) -> tuple[BlowupTower, LiftedMap, list[ResolutionCertificate]]:
    """Blow up ``p`` and then, while the lift is indeterminate at a single
    Gaussian-rational point of the newest divisor, that point."""
    names = names or [None] * max_levels
    tower = blow_up(None, p, names[0], base_names)
    certs = []
    for level in range(1, max_levels + 1):
        lift = lift_map(f, tower)
        cert = is_resolved(lift)
        certs.append(cert)
        if cert.resolved or level == max_levels:
            return tower, lift, certs
        tag = tower.tags[-1]
        centers = _indeterminate_points(lift, tag)
        if len(centers) != 1:
            return tower, lift, certs
        tower = blow_up(tower, centers[0], names[level])
    return tower, lift_map(f, tower), certs


def _indeterminate_points(lift: LiftedMap, tag: str) -> list:
    out = []
    tower = lift.tower
    seen = []
    for c in tower.charts:
        eq = c.divisor(tag)
        if eq is None or c.level != tower.levels:
            continue
        polys = []
        param = None
        for q in lift.exprs[c.name]:
            r, param = _restrict(q, c, eq)
            polys.append(r.with_vars((param,)).to_upoly(param) if r.used_vars() else
                         upoly.make([r.constant_value()]))
        g: upoly.UPoly = ()
        for p in polys:
            if p:
                g = upoly.gcd(g, p) if g else upoly.monic(p)
        var = next(iter(eq.used_vars()))
        for z in gaussian_roots(g) if len(g) > 1 else []:
            pt = {var: _divisor_root(eq, var), param: z}
            uv = tuple(pt[n] for n in c.coords)
            # the same point may show in both charts; keep the first
            key = (c.name, uv)
            if any(_same_divisor_point(tower, key, s) for s in seen):
                continue
            seen.append(key)
            out.append(key)
    return out


def _same_divisor_point(tower: BlowupTower, a, b) -> bool:
    # charts of one level overlap where the new coordinates are inverse; a point
    # with new coordinate 0 is only in one chart, so only nonzero ones can repeat
    (ca, pa), (cb, pb) = a, b
    if ca == cb:
        return pa == pb
    if pa[1].is_zero() or pb[1].is_zero():
        return False
    return (pa[1] * pb[1]).is_one()
