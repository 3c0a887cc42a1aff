"""End-to-end verification that no iterate of a map preserves a foliation.

A map ``f`` with an indeterminate point ``p`` qualifies when

1. ``f^k`` blows ``p`` up to a curve ``C`` with a singular point ``s``;
2. ``p`` has an infinite preorbit along which ``f^k`` is finite;
3. ``s`` has an infinite preorbit along which ``f^k`` is finite, witnessed
   by a point ``r`` with ``f^k(r) = s`` and an infinite preorbit of ``r``.

Conditions 2 and 3 are discharged on an invariant line (preorbit trees plus
the forward NF check) or, for maps with an explicit two-branch inverse, by
the branch certificate that a point off a curve always has a preimage off it.

The rotation checks test ``A o f^k`` against finite-depth versions of the
three genericity conditions.  Inequalities are certified by reduction modulo
a prime: two points that differ modulo a prime differ exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import modular
from .blowup import exceptional_image, is_resolved, resolve_at
from .curves import ParamCurve, PlaneCurve, implicitize, line, multiplicity_at
from .exact import upoly
from .exact.algebraic import FieldElement, common_field, extend_sqrt, sqrt_branches
from .exact.gaussian import GaussianRational, ONE, ZERO
from .exact.linalg import det
from .maps import builtin_map
from .modular import BadReduction, PrimeField
from .mpoly import MPoly, coeff_str, linear_factors, substitute
from .orbits import (ExceptionalPoint, NotApplicable, PreorbitHitsNF, both_preimages_on_curve_infeasible,
                     infinite_preorbit_certificate, nf_set, two_branch_inverse)
from .projmap import (Indeterminate, NotInvariant, ProjectiveMap, ProjectivePoint, _collapsed, collapsed_curves,
                      degree_sequence, from_matrix, indeterminacy, is_algebraically_stable_up_to,
                      is_finite_at, iterate, point, preimages, restrict_to_line, topological_degree)

_c = GaussianRational.coerce
XYZ = ("X", "Y", "Z")


# -- pipelines --------------------------------------------------------------------------


@dataclass
class Pipeline:
    """Everything needed to check the three conditions for one map."""

    name: str
    f: ProjectiveMap
    k: int
    p: ProjectivePoint
    line: PlaneCurve  # invariant line carrying p
    chart: tuple[str, str]  # coordinate num/den on that line
    s: ProjectivePoint
    r: ProjectivePoint | None = None  # None: built from s by inverse branches
    branch_curve: PlaneCurve | None = None  # curve avoided by the inverse branches
    test_point: ProjectivePoint | None = None  # hand-picked preimage check
    test_preimages: tuple = ()


def phi_pipeline(k: int = 4) -> Pipeline:
    f = builtin_map("phi")
    root, _ = sqrt_branches(-2)
    _, (w,) = common_field([root])
    return Pipeline("phi", f, k, point(1, 0, 1), line(0, 1, 0), ("Z", "X"), point(1, 0, -9),
                    r=point(1, 0, w - 1), test_point=point(1, 1, -1),
                    test_preimages=(point(1, GaussianRational(0, 1), 0), point(1, GaussianRational(0, -1), 0)))


def psi_pipeline(k: int = 4) -> Pipeline:
    f = builtin_map("psi")
    return Pipeline("psi", f, k, point(1, 1, 0), line(0, 0, 1), ("Y", "X"), point(4, 4, 1),
                    branch_curve=line(2, -1, -3))


PIPELINES = {"phi": phi_pipeline, "psi": psi_pipeline}


# -- reports ----------------------------------------------------------------------------


@dataclass
class ConditionResult:
    name: str
    holds: bool | None  # None: inconclusive
    lines: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return {True: "holds", False: "fails", None: "inconclusive"}[self.holds]


@dataclass
class TheoremReport:
    map_name: str
    k: int
    depth: int
    seed: int
    degree_evidence: list[str] = field(default_factory=list)
    stability: list[str] = field(default_factory=list)
    conditions: list[ConditionResult] = field(default_factory=list)
    extras: list[str] = field(default_factory=list)
    reasons: list[str] = field(default_factory=list)
    verdict: str = "not verified"
    status: str = "inconclusive"  # verified, negative or inconclusive

    def to_dict(self) -> dict:
        return {
            "report": "theorem",
            "map": self.map_name,
            "k": self.k,
            "depth": self.depth,
            "seed": self.seed,
            "degree_evidence": list(self.degree_evidence),
            "stability": list(self.stability),
            "conditions": [{"name": c.name, "status": c.status, "lines": list(c.lines)}
                           for c in self.conditions],
            "extras": list(self.extras),
            "reasons": list(self.reasons),
            "verdict": self.verdict,
            "status": self.status,
        }

    def to_text(self) -> str:
        return _text(self.to_dict())


@dataclass
class RotationCheckReport:
    matrix: list[list[GaussianRational]]
    n: int
    omega1: bool | None
    omega2: bool | None
    omega3: bool | None
    witnesses: dict[str, list[str]] = field(default_factory=dict)

    @property
    def member(self) -> bool:
        return bool(self.omega1 and self.omega2 and self.omega3)

    def to_dict(self) -> dict:
        flag = {True: "member", False: "not member", None: "inconclusive"}
        return {
            "report": "rotation",
            "matrix": [" ".join(coeff_str(x) for x in row) for row in self.matrix],
            "n": self.n,
            "omega1": flag[self.omega1],
            "omega2": flag[self.omega2],
            "omega3": flag[self.omega3],
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
            "scope": f"membership for this matrix up to depth {self.n} only",
        }

    def to_text(self) -> str:
        return _text(self.to_dict())


def _text(d: dict, indent: str = "") -> str:
    out = []
    for key, val in d.items():
        if isinstance(val, dict):
            out.append(f"{indent}{key}:")
            out.append(_text(val, indent + "  "))
        elif isinstance(val, list):
            out.append(f"{indent}{key}:")
            for item in val:
                if isinstance(item, dict):
                    out.append(f"{indent}  -")
                    out.append(_text(item, indent + "    "))
                else:
                    out.append(f"{indent}  - {item}")
        else:
            out.append(f"{indent}{key}: {val}")
    return "\n".join(s for s in out if s)


# -- condition 1 --------------------------------------------------------------------------


def _condition1(f: ProjectiveMap, k: int, p: ProjectivePoint, s: ProjectivePoint) -> ConditionResult:
    res = ConditionResult("condition 1: f^k blows p up to a curve with a singular point", None)
    L = res.lines
    tower, lift, certs = resolve_at(f, p)
    L += tower.describe()
    if not certs[-1].resolved:
        L += certs[-1].lines()
        res.holds = False
        L.append("the lift is not resolved at the last level")
        return res
    L.append(f"lift of {f.name} resolved after {tower.levels} blow-ups")
    composite = lift
    if k > 1:
        down = iterate(f, k - 1)
        rc = is_resolved(lift, down)
        L += rc.images
        if not rc.resolved:
            res.holds = False
            L += [f"unresolved: {o}" for o in rc.offending]
            return res
        composite = lift.then(down)
    for tag in tower.tags[:-1]:
        img = exceptional_image(composite, tag)
        L.append(f"image of {tag}: {img if isinstance(img, ProjectivePoint) else 'a curve'}")
    tag = tower.tags[-1]
    img = exceptional_image(composite, tag)
    if isinstance(img, ProjectivePoint):
        res.holds = False
        L.append(f"{tag} is blown down to the point {img}")
        return res
    C = implicitize(img)
    L.append(f"C = image of {tag}, degree {C.degree}")
    if C.degree == 1:
        res.holds = False
        L.append(f"C = {C} is a line, and lines have no singular points")
        return res
    if not C.contains(s):
        res.holds = False
        L.append(f"s = {s} is not on C")
        return res
    m = multiplicity_at(C, s)
    L.append(f"s = {s} on C with multiplicity {m}")
    res.holds = m >= 2
    return res


# -- conditions 2 and 3 on an invariant line -------------------------------------------------


def chart_value(P: ProjectivePoint, chart):
    num, den = (XYZ.index(v) for v in chart)
    d = P.elems[den]
    if d.is_zero():
        return None
    return P.elems[num] * d.inverse()


def _line_preorbit(name: str, g, a0, nf, depth: int, base_in_nf: bool) -> ConditionResult:
    res = ConditionResult(name, None)
    try:
        cert = infinite_preorbit_certificate(g, a0, nf, depth, base_may_be_in_nf=base_in_nf)
    except PreorbitHitsNF as exc:
        res.holds = False
        res.lines.append(f"preorbit meets NF: {exc}")
        return res
    except ExceptionalPoint as exc:
        res.holds = False
        res.lines.append(f"exceptional point: {exc}")
        return res
    res.lines += cert.lines()
    res.holds = True if cert.accepted else None
    return res


# -- condition 3 through inverse branches ----------------------------------------------------


@dataclass
class BranchChain:
    points: list  # ProjectivePoints, s first
    chart: int
    field_degrees: list[int]
    truncated_reason: str = ""


def _affine_pair(P: ProjectivePoint, k: int, others):
    d = P.elems[k]
    inv = d.inverse()
    return P.elems[others[0]] * inv, P.elems[others[1]] * inv


def _ev(poly: MPoly, a, b):
    v = poly.evaluate({"a": a, "b": b})
    return v.constant_value() if isinstance(v, MPoly) else v


def _degree(x) -> int:
    return x.field.degree if isinstance(x, FieldElement) else 1


def backward_branch_chain(f: ProjectiveMap, s: ProjectivePoint, avoid: PlaneCurve, steps: int,
                          max_field_degree: int = 16) -> BranchChain:
    """Exact preimages ``s = x_0 <- x_1 <- ...`` choosing at each step the
    first inverse branch off ``avoid``."""
    U, V, D, (k, others) = two_branch_inverse(f)
    a, b = _affine_pair(s, k, others)
    chain = BranchChain([s], k, [_degree(a)])
    for step in range(steps):
        Dv = _ev(D, a, b)
        if Dv.is_zero():
            chain.truncated_reason = f"branch radicand vanishes at step {step + 1}"
            break
        root, lift = extend_sqrt(Dv)
        if _degree(root) > max_field_degree:
            chain.truncated_reason = f"field degree {_degree(root)} exceeds {max_field_degree} at step {step + 1}"
            break
        Uv, Vv = lift(_ev(U, a, b)), lift(_ev(V, a, b))
        inv = root.inverse()
        chosen = None
        for eps in (1, -1):
            x, y = inv * Uv * eps, inv * Vv * eps
            coords = [None] * 3
            coords[k], coords[others[0]], coords[others[1]] = ONE, x, y
            P = ProjectivePoint(coords)
            if not avoid.contains(P):
                chosen = (x, y, P)
                break
        if chosen is None:
            chain.truncated_reason = f"both branches on the avoided curve at step {step + 1}"
            break
        a, b, P = chosen
        chain.points.append(P)
        chain.field_degrees.append(_degree(a) if isinstance(a, FieldElement) else _degree(b))
    return chain


def _pairwise_distinct(points: list[ProjectivePoint]) -> bool:
    boxes = []
    for P in points:
        boxes.append([e.enclosure(96) if isinstance(e, FieldElement) else None for e in P.elems])
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if not _certainly_differ(points[i], points[j], boxes[i], boxes[j]):
                if points[i] == points[j]:
                    return False
    return True


def _certainly_differ(P, Q, bp, bq) -> bool:
    from .exact.interval import ComplexInterval
    for a, b, ba, bb in zip(P.elems, Q.elems, bp, bq):
        ia = ba if ba is not None else ComplexInterval.point(a)
        ib = bb if bb is not None else ComplexInterval.point(b)
        if not ia.intersects(ib):
            return True
    return False


def _branch_condition(pl: Pipeline, depth: int, r_steps: int) -> tuple[ConditionResult, ProjectivePoint | None]:
    f, C = pl.f, pl.branch_curve
    res = ConditionResult("condition 3: s has an infinite preorbit along which f^k is finite", None)
    L = res.lines
    try:
        cert = both_preimages_on_curve_infeasible(f, C)
    except NotApplicable as exc:
        L.append(f"branch certificate not applicable: {exc}")
        return res, None
    L += cert.lines()
    U, V, D, (kc, others) = two_branch_inverse(f)
    # D must vanish exactly on the avoided curve, so points off it have two preimages
    names = ("a", "b")
    sub = {XYZ[kc]: 1, XYZ[others[0]]: MPoly.var("a", names), XYZ[others[1]]: MPoly.var("b", names)}
    c_aff = substitute(C.equation, sub).with_vars(names)
    proportional = (c_aff.monic() == D.with_vars(names).monic())
    L.append(f"radicand {D} vanishes exactly on {C}: {proportional}")
    coll = collapsed_curves(f)
    coll_ok = all(C.contains(q) for _, q in coll)
    for Cc, q in coll:
        L.append(f"collapsed curve {Cc} maps to {q}, on {C}: {C.contains(q)}")
    ok = cert.holds and proportional and coll_ok
    chain = backward_branch_chain(f, pl.s, C, r_steps + depth)
    if len(chain.points) <= r_steps:
        L.append(f"could not reach r: {chain.truncated_reason}")
        res.holds = False if ok else None
        return res, None
    r = chain.points[r_steps]
    L.append(f"r = branch preimage of s after {r_steps} steps, field degree {chain.field_degrees[r_steps]}")
    L.append(f"r ~ [{', '.join(f'{z:.6g}' for z in r.approx())}]")
    L.append(f"s off {C}: {not C.contains(pl.s)}; r off {C}: {not C.contains(r)}")
    explored = len(chain.points) - 1 - r_steps
    L.append(f"preorbit of r explored exactly to depth {explored} of {depth}"
             + (f" ({chain.truncated_reason})" if chain.truncated_reason else ""))
    distinct = _pairwise_distinct(chain.points)
    L.append(f"explored preorbit points pairwise distinct: {distinct}")
    if depth <= 0:
        L.append("depth 0: no preorbit evidence")
        res.holds = None if ok else False
        return res, r
    res.holds = bool(ok and distinct and not C.contains(pl.s)) if ok else False
    return res, r


# -- the three conditions ---------------------------------------------------------------------


def verify_prop_conditions(f: ProjectiveMap, k: int, p: ProjectivePoint, s_hint: ProjectivePoint,
                           r: ProjectivePoint | None, depth: int, *, line: PlaneCurve,
                           chart: tuple[str, str], branch_curve: PlaneCurve | None = None,
                           r_steps: int | None = None) -> TheoremReport:
    """Checks the three conditions; negative results are reported, not raised."""
    rep = TheoremReport(f.name, k, depth, 0)
    pl = Pipeline(f.name, f, k, p, line, chart, s_hint, r=r, branch_curve=branch_curve)
    _conditions(rep, pl, depth, r_steps if r_steps is not None else k)
    _finish(rep)
    return rep


def _conditions(rep: TheoremReport, pl: Pipeline, depth: int, r_steps: int) -> None:
    f, k = pl.f, pl.k
    if not f.is_indeterminate_at(pl.p):
        rep.conditions.append(ConditionResult("condition 1", False, [f"{pl.p} is not indeterminate for {f.name}"]))
        return
    rep.conditions.append(_condition1(f, k, pl.p, pl.s))
    fk = iterate(f, k)
    try:
        g = restrict_to_line(fk, pl.line, "/".join(pl.chart))
    except NotInvariant as exc:
        for name in ("condition 2", "condition 3"):
            rep.conditions.append(ConditionResult(name, False, [f"{pl.line} is not invariant: {exc}"]))
        return
    nf = nf_set(f, k, pl.line, pl.chart)
    head = [f"invariant line {pl.line}, coordinate {'/'.join(pl.chart)}",
            f"restriction of {f.name}^{k}: {g}",
            f"NF = {{{', '.join(nf.values())}}}"] + [f"  {x}" for x in nf.reasons]
    c2 = _line_preorbit("condition 2: p has an infinite preorbit along which f^k is finite",
                        g, chart_value(pl.p, pl.chart), nf, depth, base_in_nf=True)
    c2.lines[:0] = head
    rep.conditions.append(c2)
    if pl.r is None:
        c3, r = _branch_condition(pl, depth, r_steps)
        if r is not None:
            _check_r(c3, [f] * k, r, pl.s)
        rep.conditions.append(c3)
        return
    c3 = ConditionResult("condition 3: s has an infinite preorbit along which f^k is finite", None)
    ok = _check_r(c3, [f] * k, pl.r, pl.s)
    if not pl.line.contains(pl.r):
        c3.lines.append(f"r is not on the invariant line {pl.line}")
        c3.holds = False
    else:
        sub = _line_preorbit(c3.name, g, chart_value(pl.r, pl.chart), nf, depth, base_in_nf=False)
        c3.lines += sub.lines
        c3.holds = sub.holds if ok else False
    rep.conditions.append(c3)


def _check_r(res: ConditionResult, steps, r: ProjectivePoint, s: ProjectivePoint) -> bool:
    fin = is_finite_at(steps, r)
    res.lines.append(f"f^k finite at r: {fin.finite} ({fin.reason})")
    image = None
    if fin.finite:
        x = r
        for g in steps:
            x = g(x)
        image = x
    hit = image is not None and image == s
    res.lines.append(f"f^k(r) = {image}; equals s = {s}: {hit}")
    if not (fin.finite and hit):
        res.holds = False
    return fin.finite and hit


def _finish(rep: TheoremReport) -> None:
    states = [c.holds for c in rep.conditions]
    for c in rep.conditions:
        if c.holds is not True:
            rep.reasons.append(f"{c.name}: {c.status}")
    if all(s is True for s in states) and len(states) == 3:
        rep.verdict, rep.status = "verified", "verified"
    elif any(s is False for s in states):
        rep.verdict, rep.status = "not verified", "negative"
    else:
        rep.verdict, rep.status = "not verified", "inconclusive"


# -- the theorem ------------------------------------------------------------------------------


def verify_theorem(pipeline: Pipeline | str, depth: int = 12, seed: int = 0, N: int = 8) -> TheoremReport:
    """Degree evidence, stability and the three conditions for a pipeline."""
    pl = PIPELINES[pipeline]() if isinstance(pipeline, str) else pipeline
    f = pl.f
    rep = TheoremReport(pl.name, pl.k, depth, seed)
    degs = degree_sequence(f, N, seed=seed)
    dtop = topological_degree(f, seed=seed)
    powers = [f.degree ** n for n in range(1, N + 1)]
    rep.degree_evidence.append(f"degree sequence: {' '.join(map(str, degs))}")
    rep.degree_evidence.append(f"degrees are powers of {f.degree}: {degs == powers}")
    rep.degree_evidence.append(f"topological degree: {dtop}")
    rep.degree_evidence.append(f"first and second dynamical degrees agree: {degs == powers and dtop == f.degree}")
    if pl.test_point is not None:
        got = preimages(f, pl.test_point, seed=seed)
        pts = [P for P, _ in got]
        match = len(pts) == len(pl.test_preimages) and all(any(P == Q for P in pts) for Q in pl.test_preimages)
        rep.degree_evidence.append(f"preimages of {pl.test_point}: {', '.join(str(P) for P in pts)}; "
                                   f"as expected: {match}")
    else:
        try:
            U, V, D, _ = two_branch_inverse(f)
            rep.degree_evidence.append(f"two-branch inverse: +-({U}, {V})/sqrt({D})")
        except NotApplicable:
            pass
    stab = is_algebraically_stable_up_to(f, N)
    rep.stability += stab.lines()
    _conditions(rep, pl, depth, pl.k)
    if pl.branch_curve is not None:
        rep.extras += _curve_route_lines(pl)
    _finish(rep)
    if degs != powers or dtop != f.degree:
        rep.reasons.append("degree evidence does not show equal dynamical degrees")
        if rep.status == "verified":
            rep.verdict, rep.status = "not verified", "negative"
    return rep


def _curve_route_lines(pl: Pipeline) -> list[str]:
    """The intermediate curve ``f^(k-2)(C_1)`` and its singular point mapping onto s."""
    f = pl.f
    out = []
    tower, lift, _ = resolve_at(f, pl.p)
    img = exceptional_image(lift, tower.tags[-1])
    if isinstance(img, ProjectivePoint):
        return out
    C1 = implicitize(img)
    out.append(f"C_1 = {C1}")
    param = img
    from .curves import map_image
    for _ in range(pl.k - 2):
        param = map_image(f, param)
    C3 = implicitize(param)
    # the preimage of s on C_3 in the affine chart of s
    sings = [q for q, _m in preimages(f, pl.s) if C3.contains(q)]
    for q in sings:
        m = multiplicity_at(C3, q)
        jac = f.jacobian_at(q)
        out.append(f"C_3 = f^{pl.k - 2}(C_1) has degree {C3.degree}; multiplicity at {q}: {m}")
        out.append(f"Jacobian determinant of {f.name} at {q}: {_fmt_num(jac)}; f({q}) = {f(q)}")
    return out


def _fmt_num(x) -> str:
    return coeff_str(x) if isinstance(x, GaussianRational) else str(x)


# -- rotations ------------------------------------------------------------------------------------


def seeded_rotation(seed: int, bound: int = 3) -> list[list[GaussianRational]]:
    rng = random.Random(seed)
    while True:
        A = [[_c(rng.randint(-bound, bound)) for _ in range(3)] for _ in range(3)]
        if not det(A).is_zero():
            return A


def _is_identity(A) -> bool:
    d = _c(A[0][0])
    return not d.is_zero() and all(_c(A[i][j]) == (d if i == j else ZERO) for i in range(3) for j in range(3))


class _Reduction:
    """Points and maps modulo one prime."""

    def __init__(self, F: PrimeField):
        self.F = F

    def vectors(self, P: ProjectivePoint) -> list[tuple[int, ...]]:
        """The reductions of all conjugates of ``P`` over Q(i)."""
        F = self.F
        if P.field is None:
            return [self.norm([F.reduce(_c(e)) for e in P.elems])]
        m = P.field.modulus
        roots = F.roots(m)
        if len(roots) != len(m) - 1:
            raise BadReduction("the defining polynomial does not split")
        out = []
        for rho in roots:
            v = []
            for e in P.elems:
                if isinstance(e, FieldElement):
                    acc = 0
                    for c in reversed(e.poly):
                        acc = (acc * rho + F.reduce(c)) % F.p
                    v.append(acc)
                else:
                    v.append(F.reduce(_c(e)))
            out.append(self.norm(v))
        return out

    def norm(self, v) -> tuple[int, ...]:
        p = self.F.p
        v = [x % p for x in v]
        k = next((j for j, x in enumerate(v) if x), None)
        if k is None:
            raise BadReduction("zero vector")
        inv = pow(v[k], -1, p)
        return tuple(x * inv % p for x in v)

    def apply(self, g: ProjectiveMap, v) -> tuple[int, ...]:
        F = self.F
        out = []
        for comp in g.comps:
            acc = 0
            for e, c in comp.terms.items():
                t = F.reduce(c)
                for x, a in zip(v, e):
                    if a:
                        t = t * pow(x, a, F.p) % F.p
                acc += t
            out.append(acc % F.p)
        return self.norm(out)


@dataclass
class _Walk:
    ok: bool | None
    lines: list[str]


def _f_steps(f: ProjectiveMap) -> list[ProjectiveMap]:
    return list(f.steps)


def _omega1(A_map, f, k, n, targets, red: _Reduction, a_is_id: bool) -> _Walk:
    """Images of the collapsed curves under ``(A o f^k)^m`` avoid the targets, ``m <= n``."""
    lines = []
    tv = {name: red.vectors(P) for name, P in targets.items()}
    block = _f_steps(f) * k + ([] if a_is_id else [A_map])
    ipts = {g.name: [red.vectors(q) for q in indeterminacy(g)] for g in set(block)}
    for C, q in collapsed_curves(f):
        v = red.vectors(q)[0]
        steps = _f_steps(f) * (k - 1) + ([] if a_is_id else [A_map])
        try:
            v = _walk(red, steps, v, ipts)
        except BadReduction as exc:
            return _Walk(None, lines + [f"{C}: {exc}"])
        for m in range(1, n + 1):
            for name, vs in tv.items():
                if v in vs:
                    return _Walk(None, lines + [f"{C}: image {m} agrees with {name} modulo {red.F.p}"])
            if m < n:
                try:
                    v = _walk(red, block, v, ipts)
                except BadReduction as exc:
                    return _Walk(None, lines + [f"{C}: {exc}"])
        lines.append(f"collapsed curve {C} -> {q}: images 1..{n} differ from {', '.join(targets)} "
                     f"modulo {red.F.p}")
    return _Walk(True, lines)


def _omega1_exact(A_map, f, k, n, targets, a_is_id: bool, max_bits: int = 20000) -> _Walk:
    """Exact orbits of the collapsed values; decides a coincidence the primes could not."""
    block = _f_steps(f) * k + ([] if a_is_id else [A_map])
    lines = []
    for C, q in collapsed_curves(f):
        x = q
        steps = _f_steps(f) * (k - 1) + ([] if a_is_id else [A_map])
        for m in range(1, n + 1):
            for g in steps:
                if g.is_indeterminate_at(x):
                    return _Walk(None, [f"{C}: the orbit meets the indeterminacy of {g.name}"])
                x = g(x)
                if x.is_rational and sum(e.parts[0].bit_length() + e.parts[2].bit_length()
                                         for e in x.elems) > max_bits:
                    return _Walk(None, [f"{C}: exact orbit exceeds {max_bits} bits"])
            for name, T in targets.items():
                if x == T:
                    return _Walk(False, [f"{C}: image {m} of the collapsed value is {name} = {x} (exact)"])
            steps = block
        lines.append(f"collapsed curve {C} -> {q}: images 1..{n} differ from {', '.join(targets)} (exact)")
    return _Walk(True, lines)


def _walk(red: _Reduction, steps, v, ipts):
    for g in steps:
        for conj in ipts.get(g.name, []):
            if v in conj:
                raise BadReduction(f"orbit meets the indeterminacy of {g.name} modulo {red.F.p}")
        v = red.apply(g, v)
    return v


def _omega3(A_map, f, k, n, p, r, red: _Reduction, a_is_id: bool) -> _Walk:
    lines = []
    F_map_steps = _f_steps(f) * k + ([] if a_is_id else [A_map])
    if f.is_indeterminate_at(p) or iterate(f, k).is_indeterminate_at(p):
        lines.append(f"p = {p} is indeterminate for A o f^{k}: no orbit continues through p, "
                     f"so its preimage sets are pairwise disjoint")
    else:
        return _Walk(None, [f"p = {p} is not indeterminate; the criterion does not apply"])
    ipts = {g.name: [red.vectors(q) for q in indeterminacy(g)] for g in set(F_map_steps)}
    conj = red.vectors(r)
    vs = list(conj)
    for m in range(1, n + 1):
        try:
            vs = [_walk(red, F_map_steps, v, ipts) for v in vs]
        except BadReduction as exc:
            return _Walk(None, lines + [f"r: {exc}"])
        if all(a == b for a, b in zip(vs, conj)):
            return _Walk(None, lines + [f"(A o f^{k})^{m}(r) agrees with r modulo {red.F.p}"])
    lines.append(f"(A o f^{k})^m(r) differs from r modulo {red.F.p} for m = 1..{n}, "
                 f"so the preimage sets of r are pairwise disjoint")
    return _Walk(True, lines)


def _base_curves(f: ProjectiveMap) -> list[tuple[str, ParamCurve | ProjectivePoint]]:
    out = []
    for q in indeterminacy(f):
        tower, lift, certs = resolve_at(f, q)
        if not certs[-1].resolved:
            raise Indeterminate(f"lift at {q} is not resolved")
        for tag in tower.tags:
            out.append((f"image of {tag} over {q}", exceptional_image(lift, tag)))
    return out


def _line_through(P: ProjectivePoint, Q: ProjectivePoint) -> PlaneCurve | None:
    _, (a0, a1, a2, b0, b1, b2) = common_field(list(P.elems) + list(Q.elems))
    cr = [a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0]
    k = next((j for j in range(3) if not cr[j].is_zero()), None)
    if k is None:
        return None
    inv = cr[k].inverse()
    cr = [x * inv for x in cr]
    vals = []
    for x in cr:
        if isinstance(x, FieldElement):
            if not x.is_rational():
                return None
            x = x.poly[0] if x.poly else ZERO
        vals.append(_c(x))
    return line(*vals)


def _backward_closure(maps: list[ProjectiveMap], seeds: list[PlaneCurve], max_lines: int = 8):
    U = list(seeds)
    queue = list(seeds)
    while queue:
        L0 = queue.pop(0)
        for g in maps:
            pull = L0.equation.evaluate(list(g.comps))
            lins, rest = linear_factors(pull)
            if rest.total_degree() > 0:
                return None, f"the pullback of {L0} under {g.name} has a nonlinear component"
            coll = _collapsed(g)
            for lin in lins:
                Cl = PlaneCurve(lin)
                if any(Cc.same_as(Cl) for Cc, _ in coll):
                    continue
                if not any(Cl.same_as(M) for M in U):
                    U.append(Cl)
                    queue.append(Cl)
                    if len(U) > max_lines:
                        return None, "too many lines in the backward closure"
    return U, ""


def _curve_points_on(curve, L: PlaneCurve) -> list[ProjectivePoint] | None:
    if isinstance(curve, ProjectivePoint):
        return [curve] if L.contains(curve) else []
    eq = L.equation
    coef = [eq.terms.get(tuple(1 if j == i else 0 for j in range(3)), ZERO) for i in range(3)]
    h: upoly.UPoly = ()
    for c, x in zip(coef, curve.coords):
        if x:
            h = upoly.add(h, upoly.scale(x, c))
    if not h:
        return None
    from .orbits import _all_roots
    out = []
    for t in _all_roots(upoly.squarefree(h)):
        _, (tt,) = common_field([t])
        out.append(curve.at(tt))
    deg = max(len(x) for x in curve.coords) - 1
    if len(h) - 1 < deg:
        out.append(ProjectivePoint([x[deg] if len(x) > deg else ZERO for x in curve.coords]))
    return out


def _omega2(A_map, f, k, n, targets, red: _Reduction, a_is_id: bool, seed: int) -> _Walk:
    """The targets avoid ``(A o f^k)^m`` of the total transform of the indeterminacy, ``m <= n``."""
    base = _base_curves(f)
    maps = _f_steps(f) + ([] if a_is_id else [A_map])
    maps = list({g.name: g for g in maps}.values())
    P, Q = list(targets.values())
    seed_line = _line_through(P, Q)
    U, why = (None, "the targets do not span a rational line")
    if seed_line is not None:
        U, why = _backward_closure(maps, [seed_line])
    if U is not None:
        walk = _omega2_closure(A_map, f, k, n, targets, red, a_is_id, base, U, seed)
        if walk.ok is not None:
            return walk
        why = "; ".join(walk.lines)
    walk = _omega2_pushed(A_map, f, k, n, targets, red, a_is_id, base)
    walk.lines.insert(0, f"line closure unavailable ({why}); using pushed curves modulo {red.F.p}")
    return walk


def _omega2_closure(A_map, f, k, n, targets, red, a_is_id, base, U, seed) -> _Walk:
    """Track the finitely many points of the pushed curves on the backward-invariant lines."""
    lines = [f"backward-invariant lines: {', '.join(str(L) for L in U)}"]
    maps = _f_steps(f) + ([] if a_is_id else [A_map])
    ipts = {}
    for g in maps:
        pts = indeterminacy(g)
        if any(not any(L.contains(x) for L in U) for x in pts):
            return _Walk(None, [f"indeterminacy of {g.name} is not on the invariant lines"])
        ipts[g.name] = [red.vectors(x) for x in pts]
    coll = {g.name: [v for _, q in _collapsed(g) for v in red.vectors(q)] for g in maps}
    tv = {name: red.vectors(T) for name, T in targets.items()}
    block = _f_steps(f) * k + ([] if a_is_id else [A_map])
    rng = random.Random(seed)
    for label, curve in base:
        if isinstance(curve, ProjectivePoint):
            walk = _push_point(A_map, f, k, n, targets, red, a_is_id, label, curve)
            if walk.ok is not True:
                return _Walk(walk.ok, lines + walk.lines)
            lines += walk.lines
            continue
        S = set()
        for L in U:
            pts = _curve_points_on(curve, L)
            if pts is None:
                return _Walk(None, [f"{label} lies on {L}"])
            for x in pts:
                S.update(red.vectors(x))
        probe = _probe_point(curve, U, rng)
        if probe is None:
            return _Walk(None, lines + [f"{label}: no probe point off the invariant lines"])
        for i in range(k):
            chain = _f_steps(f) * i + ([] if a_is_id else [A_map])
            S_i, pr = set(S), probe
            for m in range(n):
                steps = chain if m == 0 else block
                try:
                    S_i, pr = _push_set(red, steps, S_i, pr, ipts, coll, U)
                except BadReduction as exc:
                    return _Walk(None, lines + [f"{label}, f^{i}: {exc}"])
                for name, vs in tv.items():
                    if any(v in S_i for v in vs):
                        return _Walk(None, lines + [f"{label}, f^{i}, block {m}: {name} not excluded "
                                                    f"modulo {red.F.p}"])
        lines.append(f"{label}: pushed by f^i (i < {k}) then by {n - 1} more blocks; "
                     f"points on the invariant lines avoid {', '.join(targets)} modulo {red.F.p}")
    return _Walk(True, lines)


def _probe_point(curve, U, rng) -> tuple | None:
    if isinstance(curve, ProjectivePoint):
        return None
    for _ in range(20):
        t = _c(rng.randint(-50, 50))
        vals = [upoly.evaluate(x, t) if x else ZERO for x in curve.coords]
        if all(v.is_zero() for v in vals):
            continue
        P = ProjectivePoint(vals)
        if not any(L.contains(P) for L in U):
            return P
    return None


def _push_set(red, steps, S, probe, ipts, coll, U):
    p = red.F.p
    pv = None if probe is None else (probe if isinstance(probe, tuple) else red.vectors(probe)[0])
    for g in steps:
        new = set()
        for v in S:
            if any(v in conj for conj in ipts.get(g.name, [])):
                raise BadReduction(f"a tracked point meets the indeterminacy of {g.name}")
            new.add(red.apply(g, v))
        new.update(coll.get(g.name, []))
        S = new
        if pv is not None:
            if any(pv in conj for conj in ipts.get(g.name, [])):
                raise BadReduction("the probe point meets the indeterminacy")
            pv = red.apply(g, pv)
            for L in U:
                val = sum(red.F.reduce(L.equation.terms.get(tuple(1 if j == i else 0 for j in range(3)), ZERO))
                          * pv[i] for i in range(3)) % p
                if val == 0:
                    raise BadReduction("the probe point falls on an invariant line")
    return S, pv


def _omega2_pushed(A_map, f, k, n, targets, red, a_is_id, base, max_degree: int = 1 << 16) -> _Walk:
    lines = []
    F = red.F
    block = _f_steps(f) * k + ([] if a_is_id else [A_map])
    tv = {name: red.vectors(T) for name, T in targets.items()}
    for label, curve in base:
        if isinstance(curve, ProjectivePoint):
            walk = _push_point(A_map, f, k, n, targets, red, a_is_id, label, curve)
            if walk.ok is not True:
                return _Walk(walk.ok, lines + walk.lines)
            lines += walk.lines
            continue
        for i in range(k):
            vals = [F.poly([F.reduce(c) for c in x]) for x in curve.coords]
            deg = max(len(x) for x in curve.coords) - 1
            chain = _f_steps(f) * i + ([] if a_is_id else [A_map])
            for m in range(n):
                steps = chain if m == 0 else block
                for g in steps:
                    vals = [modular.eval_mpoly(c, vals, F) for c in g.comps]
                    deg *= g.degree
                if deg > max_degree:
                    return _Walk(None, lines + [f"pushed curve degree {deg} exceeds {max_degree}"])
                dg = modular.binary_gcd_degree(vals, deg)
                if dg != 0:
                    return _Walk(None, lines + [f"{label}, f^{i}, block {m}: components not coprime "
                                                f"modulo {F.p}"])
                for name, vs in tv.items():
                    for v in vs:
                        minors = [vals[b] * v[a] - vals[a] * v[b] for a in range(3) for b in range(a + 1, 3)]
                        dm = modular.binary_gcd_degree(minors, deg)
                        if dm != 0:
                            return _Walk(None, lines + [f"{label}, f^{i}, block {m}: {name} not excluded "
                                                        f"modulo {F.p}"])
        lines.append(f"{label}: pushed curves of degree up to {deg} avoid {', '.join(targets)} modulo {F.p}")
    return _Walk(True, lines)


def _push_point(A_map, f, k, n, targets, red, a_is_id, label, q) -> _Walk:
    block = _f_steps(f) * k + ([] if a_is_id else [A_map])
    ipts = {g.name: [red.vectors(x) for x in indeterminacy(g)] for g in set(block)}
    tv = {name: red.vectors(T) for name, T in targets.items()}
    for i in range(k):
        chain = _f_steps(f) * i + ([] if a_is_id else [A_map])
        v = red.vectors(q)[0]
        for m in range(n):
            try:
                v = _walk(red, chain if m == 0 else block, v, ipts)
            except BadReduction as exc:
                return _Walk(None, [f"{label}, f^{i}: {exc}"])
            for name, vs in tv.items():
                if v in vs:
                    return _Walk(None, [f"{label}, f^{i}, block {m}: agrees with {name} modulo {red.F.p}"])
    return _Walk(True, [f"{label} is the point {q}; its images avoid {', '.join(targets)} modulo {red.F.p}"])


def rotation_membership(A, f: ProjectiveMap | None = None, n: int = 1, *, k: int = 4,
                        p: ProjectivePoint | None = None, r: ProjectivePoint | None = None,
                        seed: int = 0, primes: int = 3) -> RotationCheckReport:
    """Finite-depth genericity conditions for ``A o f^k``.

    Omega1: the images of the collapsed curves avoid p and r for ``m <= n``.
    Omega2: p and r avoid the pushed total transforms of the indeterminacy.
    Omega3: preimage sets of p (and of r) up to depth n are pairwise disjoint,
    checked through the forward orbit of r.
    """
    if f is None or p is None or r is None:
        pl = phi_pipeline(k)
        f = f or pl.f
        p = p or pl.p
        r = r or pl.r
    A = [[_c(x) for x in row] for row in A]
    A_map = from_matrix(A, "A")
    a_is_id = _is_identity(A)
    targets = {"p": p, "r": r}
    rep = RotationCheckReport(A, n, None, None, None)
    flags = {}
    for name, fn in (("omega1", lambda red: _omega1(A_map, f, k, n, targets, red, a_is_id)),
                     ("omega2", lambda red: _omega2(A_map, f, k, n, targets, red, a_is_id, seed)),
                     ("omega3", lambda red: _omega3(A_map, f, k, n, p, r, red, a_is_id))):
        walk = _Walk(None, [])
        notes = []
        for j in range(primes):
            try:
                red = _Reduction(PrimeField.choose(seed + j))
                walk = fn(red)
            except BadReduction as exc:
                walk = _Walk(None, [str(exc)])
            if walk.ok is not None:
                break
            notes += walk.lines
        if walk.ok is None and name == "omega1":
            exact = _omega1_exact(A_map, f, k, n, targets, a_is_id)
            if exact.ok is not None:
                walk, notes = exact, []
        flags[name] = walk.ok
        rep.witnesses[name] = notes if walk.ok is None else walk.lines
    rep.omega1, rep.omega2, rep.omega3 = flags["omega1"], flags["omega2"], flags["omega3"]
    rep.witnesses["targets"] = [f"p = {p}", f"r = {r}",
                                "the second target is r (the point mapped onto s), not a point named q"]
    return rep
