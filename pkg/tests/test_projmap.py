import pytest

from ratdyn.curves import line
from ratdyn.exact.gaussian import GaussianRational
from ratdyn.maps import builtin_map, parse_poly
from ratdyn.projmap import (Indeterminate, NotHomogeneous, NotInvariant, OrbitHitsIndeterminacy, UnequalDegrees,
                            collapsed_curves, compose, critical_locus, degree_sequence, from_matrix,
                            identity, indeterminacy, is_algebraically_stable_up_to, is_finite_at, iterate,
                            normalize, point, preimages, restrict_to_line, topological_degree)

I = GaussianRational(0, 1)


@pytest.fixture(scope="module")
def phi():
    return builtin_map("phi")


@pytest.fixture(scope="module")
def psi():
    return builtin_map("psi")


def test_points_are_normalized():
    assert point(2, 4, 6) == point(1, 2, 3)
    assert str(point(0, 3, -3)) == "[0:1:-1]"
    with pytest.raises(ValueError):
        point(0, 0, 0)


def test_indeterminacy(phi, psi):
    assert indeterminacy(phi) == [point(1, 0, 1)]
    assert indeterminacy(psi) == [point(1, 1, 0)]
    with pytest.raises(Indeterminate):
        phi(point(1, 0, 1))


def test_four_cycle_and_fixed_point(phi):
    q1 = point(1, 0, 0)
    orbit = [q1]
    for _ in range(4):
        orbit.append(phi(orbit[-1]))
    assert orbit == [q1, point(0, 1, -1), point(1, 0, -1), point(0, 1, 0), q1]
    assert phi(point(0, 0, 1)) == point(0, 0, 1)


def test_iterate_matches_repeated_application(phi):
    f3 = iterate(phi, 3)
    assert f3.degree == 8
    P = point(2, 3, 5)
    assert f3(P) == phi(phi(phi(P)))
    assert compose(phi, identity())(P) == phi(P)


def test_degree_sequences(phi, psi):
    assert degree_sequence(phi, 6) == [2, 4, 8, 16, 32, 64]
    assert degree_sequence(psi, 6) == [2, 4, 8, 16, 32, 64]


def test_unstable_quadratic_involution():
    sigma = normalize([parse_poly("Y*Z"), parse_poly("X*Z"), parse_poly("X*Y")], "sigma")
    assert degree_sequence(sigma, 3) == [2, 1, 2]
    with pytest.raises(OrbitHitsIndeterminacy):
        is_algebraically_stable_up_to(sigma, 3)


def test_stability_certificate(phi):
    cert = is_algebraically_stable_up_to(phi, 6)
    assert cert.stable
    assert cert.degrees == [2, 4, 8, 16, 32, 64]


def test_critical_and_collapsed(phi, psi):
    crit = {str(C): m for C, m in critical_locus(phi)}
    assert crit == {str(line(0, 1, 0)): 1, str(line(1, 0, -1)): 2}
    coll = collapsed_curves(phi)
    assert len(coll) == 1 and coll[0][1] == point(1, 0, 0)
    crit = {str(C): m for C, m in critical_locus(psi)}
    assert crit == {str(line(0, 0, 1)): 1, str(line(1, -1, 0)): 2}


def test_preimages_and_topological_degree(phi, psi):
    pre = preimages(phi, point(1, 1, -1))
    assert sorted(str(P) for P, _ in pre) == sorted([str(point(1, I, 0)), str(point(1, -I, 0))])
    for P, _ in pre:
        assert phi(P) == point(1, 1, -1)
    assert topological_degree(phi) == 2
    assert topological_degree(psi) == 2


def test_restriction_to_invariant_line(phi):
    g = restrict_to_line(iterate(phi, 4), line(0, 1, 0), "Z/X")
    assert str(g) == "z -> -z^4 - 4*z^3 - 4*z^2"
    with pytest.raises(NotInvariant):
        restrict_to_line(phi, line(0, 1, 0), "Z/X")


def test_finiteness(phi):
    assert not is_finite_at(phi, point(1, 0, 1)).finite
    assert not is_finite_at(phi, point(0, 1, 0)).finite  # on the collapsed line X = Z
    assert is_finite_at(phi, point(1, 2, 3)).finite


def test_invalid_maps():
    with pytest.raises(NotHomogeneous):
        normalize([parse_poly("X^2 + Y"), parse_poly("Y^2"), parse_poly("Z^2")])
    with pytest.raises(UnequalDegrees):
        normalize([parse_poly("X^2"), parse_poly("Y"), parse_poly("Z^2")])


def test_from_matrix():
    A = from_matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert A(point(1, 2, 3)) == point(2, 3, 1)
