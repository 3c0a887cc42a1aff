import pytest

from ratdyn.curves import line
from ratdyn.exact.algebraic import common_field, sqrt_branches
from ratdyn.exact.gaussian import GaussianRational
from ratdyn.maps import builtin_map
from ratdyn.orbits import (ExceptionalPoint, PreorbitHitsNF, both_preimages_on_curve_infeasible,
                           escape_radius, first_hit, forward_orbit, infinite_preorbit_certificate, nf_set,
                           non_exceptional_reason, preorbit_tree, two_branch_inverse)
from ratdyn.projmap import iterate, restrict_to_line

C = GaussianRational
Y0 = line(0, 1, 0)


@pytest.fixture(scope="module")
def g():
    return restrict_to_line(iterate(builtin_map("phi"), 4), Y0, "Z/X")


@pytest.fixture(scope="module")
def nf():
    return nf_set(builtin_map("phi"), 4, Y0, ("Z", "X"))


def test_nf_set(nf):
    assert set(nf.values()) == {"1", "-1", "0", "-2", "(-1+i)", "(-1-i)"}
    assert nf.contains(C(-1, 1)) and not nf.contains(C(5))


def test_forward_orbits(g):
    orb = forward_orbit(g, C(-2))
    assert orb.disposition == "periodic" and orb.preperiod == 1 and orb.period == 1
    orb = forward_orbit(g, C(1))
    assert orb.disposition == "escaping"
    assert escape_radius(g) == 10


def test_first_hit(g):
    step, _ = first_hit(g, C(-2), C(0))
    assert step == 1
    step, orbit = first_hit(g, C(1), C(0))
    assert step is None and orbit.disposition == "escaping"


def test_preorbit_tree_sizes(g):
    tree = preorbit_tree(g, C(1), 2)
    assert tree.sizes() == [1, 4, 16]


def test_preorbit_tree_stops_at_degree_cap(g):
    tree = preorbit_tree(g, C(1), 12, max_level_degree=16)
    assert tree.depth < 12


def test_certificate_for_p(g, nf):
    cert = infinite_preorbit_certificate(g, C(1), nf, 2, base_may_be_in_nf=True)
    assert cert.accepted and cert.base_in_nf
    with pytest.raises(PreorbitHitsNF):
        infinite_preorbit_certificate(g, C(1), nf, 2)


def test_certificate_for_r(g, nf):
    w, _ = sqrt_branches(-2)
    _, (r,) = common_field([w])
    r = r - 1  # -1 + sqrt(-2)
    cert = infinite_preorbit_certificate(g, r, nf, 2)
    assert cert.accepted and not cert.base_in_nf


def test_depth_zero_is_not_accepted(g, nf):
    cert = infinite_preorbit_certificate(g, C(3), nf, 0)
    assert not cert.accepted


def test_critical_points_are_rejected(g):
    # g'(z) = -4 z (z + 1)(z + 2)
    for z in (0, -1, -2):
        with pytest.raises(ExceptionalPoint):
            non_exceptional_reason(g, C(z))
    assert "not a critical point" in non_exceptional_reason(g, C(3))


def test_psi_branch_certificate():
    psi = builtin_map("psi")
    U, V, D, _ = two_branch_inverse(psi)
    assert str(D) == "2*a - b - 3"
    cert = both_preimages_on_curve_infeasible(psi, line(2, -1, -3))
    assert cert.holds and cert.constant == -6


def test_psi_translation_on_infinity():
    psi = builtin_map("psi")
    h = restrict_to_line(psi, line(0, 0, 1), "Y/X")
    # [1:w:0] -> [1:w+1:0] up to the chart
    orb = forward_orbit(h, C(1), 4)
    assert orb.disposition == "escaping"
    assert "translation" in non_exceptional_reason(h, C(1))
