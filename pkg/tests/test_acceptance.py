"""End-to-end acceptance checks, one test per criterion.

Each test prints ``criterion N ...: PASS|FAIL`` and the run ends with a
summary of all criteria (see conftest.py).
"""

import random
import time

from ratdyn.blowup import exceptional_image, resolve_at
from ratdyn.curves import (ParamCurve, implicitize, line, line_vanishing_order, local_equation,
                           map_image, multiplicity_at)
from ratdyn.exact.gaussian import GaussianRational
from ratdyn.maps import builtin_map, parse_poly
from ratdyn.mpoly import MPoly, lowest_degree_form
from ratdyn.orbits import both_preimages_on_curve_infeasible
from ratdyn.projmap import degree_sequence, indeterminacy, iterate, point, preimages, topological_degree
from ratdyn.render import RenderConfig, classify_point, classify_point_certified, render, UNDECIDED
from ratdyn.verify import rotation_membership, seeded_rotation, verify_theorem

from conftest import criterion

I = GaussianRational(0, 1)


def proportional(p: MPoly, q: MPoly) -> bool:
    """p = c q for a nonzero constant c (same variable order assumed)."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    if set(p.terms) != set(q.terms):
        return False
    e0 = next(iter(p.terms))
    c = p.terms[e0] / q.terms[e0]
    return all(p.terms[e] == c * q.terms[e] for e in p.terms)


def test_criterion_1_degree_resonance_phi():
    with criterion(1, "degree resonance (phi)", 60):
        f = builtin_map("phi")
        assert degree_sequence(f, 8) == [2 ** n for n in range(1, 9)]
        assert topological_degree(f) == 2
        pre = preimages(f, point(1, 1, -1))
        assert {P for P, _ in pre} == {point(1, I, 0), point(1, -I, 0)}
        assert len(pre) == 2


def test_criterion_2_degree_resonance_psi():
    with criterion(2, "degree resonance (psi)", 60):
        g = builtin_map("psi")
        assert degree_sequence(g, 8) == [2 ** n for n in range(1, 9)]
        assert topological_degree(g) == 2


def test_criterion_3_blowup_pipeline_phi():
    with criterion(3, "blow-up pipeline (phi)", 300):
        f = builtin_map("phi")
        p = indeterminacy(f)[0]
        assert p == point(1, 0, 1)
        tower, lift, certs = resolve_at(f, p)
        assert certs[-1].resolved
        e1, e2 = tower.tags
        assert exceptional_image(lift, e1) == point(0, 1, -2)
        C1 = implicitize(exceptional_image(lift, e2))
        assert C1.same_as(line(0, 2, 1))  # Z = -2Y
        lift4 = lift.then(iterate(f, 3))
        s = point(1, 0, -9)
        assert exceptional_image(lift4, e1) == s
        C4 = implicitize(exceptional_image(lift4, e2))
        assert C4.degree == 8
        assert multiplicity_at(C4, s) == 2
        # local coordinates at s: a = Y/X = y, b = Z/X + 9 = u
        d, form = lowest_degree_form(local_equation(C4, s))
        expected = parse_poly("2624400*a^2 + 2099520*b*a + 419904*b^2", ("a", "b"))
        assert d == 2
        assert proportional(form, expected)


def test_criterion_4_generic_line_double_zero():
    with criterion(4, "generic-line double zero", 10):
        # t -> (t^2 (t+2)^2 / (t^2 - 5), 3 - t^2) in the (x, zeta) chart
        c = ParamCurve.affine([0, 0, 4, 4, 1], [-5, 0, 1], [3, 0, -1], [1], chart=("x", "zeta"))
        assert line_vanishing_order(c, (0, 3), 0) == 2


def test_criterion_5_psi_curve_pipeline():
    with criterion(5, "psi curve pipeline", 120):
        g = builtin_map("psi")
        # C1 = {2X - Y - 3Z = 0} as t -> (t, 2t - 3) in (x, y) = (X/Z, Y/Z)
        c1 = ParamCurve.affine([0, 1], [1], [-3, 2], [1], chart=("x", "y"), at=2)
        c3 = map_image(g, map_image(g, c1))
        C3 = implicitize(c3)
        quartic = parse_poly(
            "256*u^4 - 256*u^3*v + 96*u^2*v^2 - 16*u*v^3 + v^4 - 5650*u^3 + 6253*u^2*v"
            " - 2228*u*v^2 + 257*v^3 + 10816*u^2 - 10816*u*v + 2704*v^2", ("u", "v"))
        loc = local_equation(C3, point(2, 1, 1), names=("u", "v"), chart=2)
        assert proportional(loc, quartic)
        assert multiplicity_at(C3, point(2, 1, 1)) == 2
        # affine Jacobian of (x(x-y)+2, (x+y)(x-y)+1) at (2, 1), written out by hand
        x, y = 2, 1
        jac = (2 * x - y) * (-2 * y) - (-x) * (2 * x)
        assert jac != 0
        assert not g.jacobian_at(point(2, 1, 1)).is_zero()
        assert g(point(2, 1, 1)) == point(4, 4, 1)
        cert = both_preimages_on_curve_infeasible(g, line(2, -1, -3))
        assert cert.holds and cert.kind == "symbolic"
        assert cert.constant == GaussianRational(-6)


def _condition(rep, number):
    return next(c for c in rep.conditions if c.name.startswith(f"condition {number}"))


def test_criterion_6_verdicts():
    with criterion(6, "verification verdicts (phi, psi)", 600):
        phi = verify_theorem("phi", depth=12)
        assert phi.status == "verified", phi.to_text()
        c2 = _condition(phi, 2)
        nf_line = next(s for s in c2.lines if s.startswith("NF = "))
        members = {m.strip() for m in nf_line[len("NF = {"):-1].split(",")}
        assert members == {"1", "-1", "0", "-2", "(-1+i)", "(-1-i)"}
        for n in (2, 3):
            cond = _condition(phi, n)
            assert cond.holds
            assert any(s.startswith("non-exceptional:") for s in cond.lines)
            assert sum(s.startswith("NF orbit:") for s in cond.lines) == 6
        psi = verify_theorem("psi", depth=12)
        assert psi.status == "verified", psi.to_text()
        for n in (2, 3):
            assert _condition(psi, n).holds


def test_criterion_7_rotations():
    with criterion(7, "rotation checks", 600):
        ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        for n in range(1, 7):
            rep = rotation_membership(ident, n=n)
            assert rep.omega1 and rep.omega2, rep.to_text()
            if n <= 4:
                assert rep.omega3, rep.to_text()
        A = seeded_rotation(0)
        assert all(c.is_real() and c.im == 0 for row in A for c in row)
        for n in range(1, 5):
            rep = rotation_membership(A, n=n)
            assert rep.member, rep.to_text()


def test_criterion_8_property_suites():
    import test_properties as tp
    with criterion(8, "property suites", 1800):
        for name in tp.CRITERION_SUITES:
            getattr(tp, name)()


def test_criterion_9_render(tmp_path):
    with criterion(9, "render", 30):
        f = builtin_map("phi")
        cfg = RenderConfig(threads=8)
        t0 = time.perf_counter()
        res = render(f, cfg, tmp_path / "a.ppm")
        assert time.perf_counter() - t0 < 30
        assert res.classes.shape == (800, 800)
        assert res.classified_fraction >= 0.95, res.lines()
        rng = random.Random(0)
        agree = 0
        for _ in range(100):
            u = rng.randint(-3072, 3072) / 1024
            v = rng.randint(-3072, 3072) / 1024
            exact = classify_point_certified(f, (u, v), cfg)
            if exact != UNDECIDED and exact == classify_point(f, (u, v), cfg):
                agree += 1
        print(f"oracle agreement {agree}/100")
        assert agree >= 99
        again = render(f, cfg, tmp_path / "b.ppm")
        assert (tmp_path / "a.ppm").read_bytes() == (tmp_path / "b.ppm").read_bytes()
        assert (again.classes == res.classes).all()
