from fractions import Fraction

import pytest

from ratdyn.exact import upoly
from ratdyn.exact.algebraic import alg_equals, common_field, rational_number, sqrt_branches
from ratdyn.exact.gaussian import GaussianRational, gr
from ratdyn.exact.interval import ComplexInterval
from ratdyn.exact.linalg import det, inverse, solve
from ratdyn.exact.roots import gaussian_roots, isolate_roots

I = GaussianRational(0, 1)


def test_gaussian_arithmetic():
    a = GaussianRational(1, 1)
    assert a * a.conjugate() == 2
    assert a.inverse() == GaussianRational(Fraction(1, 2), Fraction(-1, 2))
    assert I * I == -1
    assert gr(3, 4).norm() == 25
    assert GaussianRational(Fraction(2, 4), 0) == Fraction(1, 2)
    assert GaussianRational(2, 0).is_real() and not I.is_real()


def test_gaussian_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0).inverse()


def test_upoly_basics():
    p = upoly.make([-1, 0, 1])  # t^2 - 1
    q = upoly.make([1, 1])
    assert upoly.exquo(p, q) == upoly.make([-1, 1])
    assert upoly.degree(p) == 2
    assert upoly.evaluate(p, GaussianRational(3)) == 8
    assert upoly.gcd(p, upoly.make([1, 2, 1])) == upoly.make([1, 1])
    assert upoly.squarefree(upoly.mul(q, q)) == upoly.make([1, 1])


def test_isolate_roots_of_x2_plus_1():
    boxes = isolate_roots(upoly.make([1, 0, 1]))
    assert len(boxes) == 2
    assert not boxes[0].intersects(boxes[1])
    assert any(b.contains_point(I) for b in boxes)
    assert any(b.contains_point(-I) for b in boxes)


def test_gaussian_roots_are_exact():
    # (t - 1/2)(t - i)(t^2 + 2)
    p = upoly.mul(upoly.mul(upoly.make([Fraction(-1, 2), 1]), upoly.make([-I, 1])), upoly.make([2, 0, 1]))
    assert set(gaussian_roots(p)) == {GaussianRational(Fraction(1, 2)), I}


def test_sqrt_branches_square_back():
    for a in (-2, 5, GaussianRational(0, 2)):
        s1, s2 = sqrt_branches(a)
        _, (e1, e2) = common_field([s1, s2])
        sq = e1 * e1
        assert (sq.value() if hasattr(sq, "value") else sq) == GaussianRational.coerce(a)
        assert (e1 + e2).is_zero()


def test_sqrt_of_a_square_is_rational():
    s1, s2 = sqrt_branches(GaussianRational(0, 2))  # (1 + i)^2
    vals = {complex(s1), complex(s2)}
    assert any(abs(v - (1 + 1j)) < 1e-9 for v in vals)


def test_alg_equals_distinguishes_conjugates():
    s1, s2 = sqrt_branches(-2)
    assert alg_equals(s1, s1)
    assert not alg_equals(s1, s2)
    assert alg_equals(rational_number(3), rational_number(GaussianRational(3)))


def test_interval_inverse_of_box_with_zero():
    with pytest.raises(ZeroDivisionError):
        ComplexInterval.around(0, Fraction(1, 8)).inverse(64)


def test_interval_width_and_hull():
    a = ComplexInterval.around(1, Fraction(1, 4))
    b = ComplexInterval.around(2, Fraction(1, 4))
    h = a.hull(b)
    assert h.contains(a) and h.contains(b)
    assert a.width == Fraction(1, 2)
    assert not a.intersects(b)


def test_linalg():
    m = [[GaussianRational(2), GaussianRational(1)], [GaussianRational(1), GaussianRational(1)]]
    assert det(m) == 1
    inv = inverse(m)
    assert inv == [[1, -1], [-1, 2]]
    x = solve([[GaussianRational(2), GaussianRational(1)], [GaussianRational(1), GaussianRational(1)]],
              [GaussianRational(3), GaussianRational(2)])
    # columns (2,1) and (1,1): 2 x0 + x1 = 3, x0 + x1 = 2
    assert x == [1, 1]
