"""Property suites.

The functions named in CRITERION_SUITES are also run by the acceptance test.
gcd and resultant are compared against sympy, which shares no code with
ratdyn.mpoly.
"""

import random
from fractions import Fraction

import sympy
from hypothesis import HealthCheck, given, settings, strategies as st

from ratdyn.blowup import exceptional_image, resolve_at
from ratdyn.curves import ParamCurve, implicitize, map_image
from ratdyn.exact.gaussian import GaussianRational
from ratdyn.exact.interval import ComplexInterval
from ratdyn.maps import builtin_map
from ratdyn.mpoly import MPoly, divides, exquo, gcd, resultant, substitute
from ratdyn.projmap import indeterminacy
from ratdyn.render import RenderConfig, classify_grid
from ratdyn.verify import rotation_membership, seeded_rotation

CRITERION_SUITES = [
    "test_gcd_properties",
    "test_resultant_matches_sympy",
    "test_resultant_vanishes_at_common_root",
    "test_substitution_commutes_with_evaluation",
    "test_interval_soundness",
    "test_projection_of_lift_phi",
    "test_projection_of_lift_psi",
    "test_implicitization_vanishes_on_samples",
]

VARS = ("x", "y")
many = settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])

gaussian = st.builds(GaussianRational, st.integers(-9, 9), st.integers(-3, 3))
rational_gaussian = st.builds(
    GaussianRational,
    st.fractions(min_value=-20, max_value=20, max_denominator=64),
    st.fractions(min_value=-20, max_value=20, max_denominator=64))


@st.composite
def polys(draw, variables=VARS, max_deg=3, max_terms=4):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in variables)
        terms[e] = draw(gaussian)
    return MPoly(variables, terms)


def nonconstant(p: MPoly) -> bool:
    return not p.is_zero() and not p.is_constant()


def to_sympy(p: MPoly):
    syms = sympy.symbols(p.vars)
    out = sympy.Integer(0)
    for e, c in p.terms.items():
        coef = sympy.Rational(c.re.numerator, c.re.denominator) + \
            sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)
        mono = sympy.Integer(1)
        for s, k in zip(syms, e):
            mono *= s ** k
        out += coef * mono
    return sympy.expand(out)


def from_sympy(expr, variables) -> MPoly:
    syms = sympy.symbols(variables)
    P = sympy.Poly(sympy.expand(expr), *syms)
    terms = {}
    for e, c in P.terms():
        re, im = sympy.re(c), sympy.im(c)
        terms[tuple(e)] = GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    return MPoly(variables, terms)


def proportional(p: MPoly, q: MPoly) -> bool:
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    if set(p.terms) != set(q.terms):
        return False
    e0 = next(iter(p.terms))
    c = p.terms[e0] / q.terms[e0]
    return all(p.terms[e] == c * q.terms[e] for e in p.terms)


# -- mpoly ------------------------------------------------------------------------------


@many
@given(polys(), polys(), polys(max_deg=2, max_terms=3))
def test_gcd_properties(p, q, r):
    if not (nonconstant(p) and nonconstant(q) and not r.is_zero()):
        return
    a, b = p * r, q * r
    g = gcd(a, b)
    assert divides(g, a) and divides(g, b)
    assert divides(r, g)
    sg = from_sympy(sympy.gcd(to_sympy(a), to_sympy(b), gaussian=True), VARS)
    assert proportional(g, sg)


@many
@given(polys(max_deg=2), polys(max_deg=2))
def test_resultant_matches_sympy(p, q):
    if not (p.degree_in("x") > 0 and q.degree_in("x") > 0):
        return
    res = resultant(p, q, "x")
    x, y = sympy.symbols(VARS)
    ref = sympy.resultant(to_sympy(p), to_sympy(q), x)
    assert (to_sympy(res) - sympy.expand(ref)).expand() == 0


@many
@given(gaussian, gaussian, polys(max_deg=2, max_terms=3), polys(max_deg=2, max_terms=3))
def test_resultant_vanishes_at_common_root(a, b, u, v):
    # (x - a) u and (x - a) v share the root x = a; with y = b both vanish there
    lin = MPoly.var("x", VARS) - MPoly.const(a, VARS)
    p, q = lin * u, lin * v
    if p.is_zero() or q.is_zero():
        return
    res = resultant(p, q, "x")
    assert res.is_zero()
    w = MPoly.var("y", VARS) - MPoly.const(b, VARS)
    p2, q2 = lin + w, lin * lin + w * w
    r2 = resultant(p2, q2, "x")
    assert r2.evaluate({"x": GaussianRational(0), "y": b}) == 0


@many
@given(polys(max_deg=3), polys(max_deg=2, max_terms=3), gaussian, gaussian)
def test_substitution_commutes_with_evaluation(p, q, a, b):
    s = substitute(p, {"x": q})
    qv = q.evaluate([a, b])
    lhs = s.evaluate({n: (a if n == "x" else b) for n in s.vars}) if s.vars else s.constant_value()
    rhs = p.evaluate([qv, b])
    lhs = lhs.constant_value() if isinstance(lhs, MPoly) else GaussianRational.coerce(lhs)
    assert lhs == GaussianRational.coerce(rhs)


@many
@given(polys(max_deg=2, max_terms=3), polys(max_deg=2, max_terms=3))
def test_exquo_inverts_multiplication(p, q):
    if q.is_zero():
        return
    assert exquo(p * q, q) == p


# -- intervals ---------------------------------------------------------------------------


def _box(z: GaussianRational, rad: Fraction) -> ComplexInterval:
    return ComplexInterval.around(z, rad)


@many
@given(rational_gaussian, rational_gaussian, rational_gaussian, rational_gaussian,
       st.fractions(0, 1, max_denominator=1024), st.integers(8, 96), st.integers(0, 5))
def test_interval_soundness(a, b, da, db, rad, prec, n):
    # points inside the boxes map into the result boxes
    A, B = _box(a, rad), _box(b, rad)
    a2 = a + GaussianRational(da.re * rad / 40, da.im * rad / 40)
    b2 = b + GaussianRational(db.re * rad / 40, db.im * rad / 40)
    assert A.contains_point(a2) and B.contains_point(b2)
    assert A.add(B, prec).contains_point(a2 + b2)
    assert A.sub(B, prec).contains_point(a2 - b2)
    assert A.mul(B, prec).contains_point(a2 * b2)
    assert A.pow(n, prec).contains_point(a2 ** n)
    if not B.contains_zero():
        assert A.div(B, prec).contains_point(a2 / b2)
    assert ComplexInterval.point(a2, prec).contains_point(a2)


# -- blow-up towers ----------------------------------------------------------------------


def _lift_consistency(name: str, count: int = 50, seed: int = 0):
    f = builtin_map(name)
    p = indeterminacy(f)[0]
    tower, lift, _ = resolve_at(f, p)
    rng = random.Random(seed)
    checked = 0
    while checked < count:
        chart = rng.choice(tower.charts)
        uv = [GaussianRational(rng.randint(-40, 40), rng.randint(-3, 3)) / rng.randint(1, 9)
              for _ in range(2)]
        base = tower.blow_down(chart, uv)
        if f.is_indeterminate_at(base):
            continue
        if any(chart.divisor(t) is not None and chart.divisor(t).evaluate(uv) == 0 for t in tower.tags):
            continue
        assert lift.at(chart.name, uv) == f(base)
        checked += 1


def test_projection_of_lift_phi():
    _lift_consistency("phi")


def test_projection_of_lift_psi():
    _lift_consistency("psi")


# -- implicitization -------------------------------------------------------------------------


def _curves_in_scope():
    out = []
    for name, k in (("phi", 4), ("psi", 4)):
        f = builtin_map(name)
        tower, lift, _ = resolve_at(f, indeterminacy(f)[0])
        img = exceptional_image(lift, tower.tags[-1])
        out.append((f"{name} C1", img))
        for j in range(2, k + 1):
            img = map_image(f, img)
            out.append((f"{name} C{j}", img))
    out.append(("generic-line example", ParamCurve.affine([0, 0, 4, 4, 1], [-5, 0, 1], [3, 0, -1], [1])))
    psi = builtin_map("psi")
    c1 = ParamCurve.affine([0, 1], [1], [-3, 2], [1], at=2)
    out.append(("psi^2 of (t, 2t-3)", map_image(psi, map_image(psi, c1))))
    return out


def test_implicitization_vanishes_on_samples():
    rng = random.Random(1)
    for label, c in _curves_in_scope():
        C = implicitize(c)
        for _ in range(20):
            t = GaussianRational(rng.randint(-30, 30), rng.randint(-5, 5)) / rng.randint(1, 7)
            assert C.equation.evaluate(c.at(t).elems) == 0, label


# -- rotations and rendering -------------------------------------------------------------------


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 10_000))
def test_rotation_sets_are_antitone(seed):
    A = seeded_rotation(seed)
    prev = None
    for n in range(1, 4):
        rep = rotation_membership(A, n=n, seed=seed)
        flags = (rep.omega1, rep.omega2, rep.omega3)
        if prev is not None:
            for before, now in zip(prev, flags):
                if now is True:
                    assert before is True
        prev = flags


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 2), st.floats(-3, 2), st.floats(0.1, 1.0), st.integers(1, 4), st.integers(0, 99))
def test_render_is_deterministic(x0, y0, size, threads, seed):
    f = builtin_map("phi")
    cfg = RenderConfig(window=(x0, x0 + size, y0, y0 + size), width=24, height=20,
                       max_iterations=60, threads=threads, tile_rows=7, seed=seed)
    a = classify_grid(f, cfg)
    cfg.threads = 1
    b = classify_grid(f, cfg)
    assert (a == b).all()
