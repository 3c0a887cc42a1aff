import pytest

from ratdyn.exact.gaussian import GaussianRational
from ratdyn.maps import parse_poly
from ratdyn.mpoly import (InexactDivision, ZeroInput, divides, exquo, gcd, linear_factors,
                          lowest_degree_form, resultant, squarefree, squarefree_decomposition, substitute,
                          to_str)

V = ("x", "y")


def P(text):
    return parse_poly(text, V)


def test_arithmetic_and_degrees():
    p = P("(x + y)^3")
    assert p.total_degree() == 3 and p.degree_in("x") == 3
    assert p.is_homogeneous()
    assert (p - p).is_zero()
    assert P("x*y").derivative("x") == P("y")
    assert P("x^2 + y").evaluate([GaussianRational(2), GaussianRational(1)]) == 5


def test_homogenize():
    h = P("x^2 + y + 1").homogenize("z")
    assert h == parse_poly("x^2 + y*z + z^2", ("x", "y", "z")).with_vars(h.vars)


def test_gcd_known():
    g = gcd(P("(x - y)*(x + 1)"), P("(x - y)*(y + 2)"))
    assert g == P("x - y")
    assert gcd(P("x^2 + 1"), P("x + 3")) == P("1")


def test_gcd_gaussian_factor():
    # x^2 + 1 = (x - i)(x + i)
    g = gcd(P("x^2 + 1"), P("(x - i)*(y + 1)"))
    assert g == P("x - i")


def test_exquo_and_divides():
    assert exquo(P("x^2 - y^2"), P("x - y")) == P("x + y")
    assert divides(P("x + y"), P("x^2 - y^2"))
    with pytest.raises(InexactDivision):
        exquo(P("x^2 + y"), P("x + 1"))


def test_resultant_known_values():
    # Res_x(x^2 - y, x - 1) = 1 - y
    assert resultant(P("x^2 - y"), P("x - 1"), "x") == P("1 - y")
    # Res_x(x^2 + 1, x^2 - 1) = 4
    assert resultant(P("x^2 + 1"), P("x^2 - 1"), "x") == P("4")
    assert resultant(P("x*y - 1"), P("x - y"), "x").evaluate({"y": GaussianRational(1)}) == 0


def test_squarefree():
    p = P("x^2*(x + y)^3*(y - 1)")
    assert squarefree(p) == P("x*(x + y)*(y - 1)").monic()
    dec = dict((m, f) for f, m in squarefree_decomposition(p))
    assert dec[2] == P("x")
    assert dec[3] == P("x + y")
    assert dec[1] == P("y - 1")
    with pytest.raises(ZeroInput):
        squarefree(P("0"))


def test_lowest_degree_form():
    d, form = lowest_degree_form(P("x^2 - y^2 + x^3"))
    assert d == 2 and form == P("x^2 - y^2")


def test_substitute_variable_and_constant():
    p = P("x^2 + x*y")
    assert substitute(p, {"x": P("y + 1")}).with_vars(V) == P("(y + 1)^2 + (y + 1)*y")
    assert substitute(p, {"y": 2}).with_vars(V) == P("x^2 + 2*x")


def test_linear_factors():
    lins, rest = linear_factors(P("(x - 2*y)*(x + i*y)*(x^2 + x*y + 3*y^2)"))
    found = {str(l.monic()) for l in lins}
    assert found == {str(P("x - 2*y").monic()), str(P("x + i*y").monic())}
    assert rest.total_degree() == 2


def test_to_str_round_trip():
    p = P("(1 + 2*i)*x^2*y - y^3/3 + 7")
    assert parse_poly(to_str(p), V) == p
