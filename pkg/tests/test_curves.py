import pytest

from ratdyn.curves import (ConstantParameterization, ParamCurve, PlaneCurve, PointMismatch, implicitize,
                           intersect_with_line, line, line_vanishing_order, local_equation, map_image,
                           multiplicity_at, singular_by_gradient)
from ratdyn.maps import builtin_map, parse_poly
from ratdyn.projmap import point


def curve(text):
    return PlaneCurve.from_equation(parse_poly(text))


def test_node_and_cusp_multiplicities():
    node = curve("Y^2*Z - X^2*(X + Z)")
    cusp = curve("Y^2*Z - X^3")
    origin = point(0, 0, 1)
    assert multiplicity_at(node, origin) == 2
    assert multiplicity_at(cusp, origin) == 2
    assert singular_by_gradient(node, origin) and singular_by_gradient(cusp, origin)
    smooth = point(-1, 0, 1)
    assert multiplicity_at(node, smooth) == 1
    assert not singular_by_gradient(node, smooth)
    assert multiplicity_at(node, point(1, 1, 1)) == 0


def test_local_equation_translates():
    c = curve("X^2 + Y^2 - Z^2")
    loc = local_equation(c, point(1, 0, 1), names=("a", "b"), chart=2)
    assert loc == parse_poly("a^2 + 2*a + b^2", ("a", "b"))


def test_implicitize_conic():
    c = ParamCurve.affine([0, 1], [1], [0, 0, 1], [1], chart=("x", "y"), at=2)  # (t, t^2)
    C = implicitize(c)
    assert C.same_as(curve("X^2 - Y*Z"))


def test_implicitize_constant_raises():
    with pytest.raises(ConstantParameterization):
        implicitize(ParamCurve(((1,), (2,), (3,))))


def test_line_image_under_phi():
    f = builtin_map("phi")
    L = line(1, 1, 1)
    img = implicitize(map_image(f, ParamCurve.of_line(L)))
    assert img.degree == 2
    for t in range(-3, 4):
        P = ParamCurve.of_line(L).at(t)
        if not f.is_indeterminate_at(P):
            assert img.contains(f(P))


def test_line_vanishing_order_specific_and_generic():
    c = ParamCurve.affine([0, 1], [1], [0, 0, 1], [1], at=2)  # (t, t^2)
    assert line_vanishing_order(c, (0, 0), 0, line=(0, 1)) == 2  # the tangent y = 0
    assert line_vanishing_order(c, (0, 0), 0, line=(1, 0)) == 1
    assert line_vanishing_order(c, (0, 0), 0) == 1
    with pytest.raises(PointMismatch):
        line_vanishing_order(c, (1, 0), 0)


def test_intersections_with_line():
    c = curve("Y*Z - X^2")
    pts = dict((str(P), m) for P, m in intersect_with_line(c, line(0, 1, 0)))
    assert pts == {str(point(0, 0, 1)): 2}
    pts = dict((str(P), m) for P, m in intersect_with_line(c, line(0, 1, -1)))
    assert pts == {str(point(1, 1, 1)): 1, str(point(-1, 1, 1)): 1}
