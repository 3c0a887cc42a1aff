import json

import pytest

from ratdyn.verify import (PIPELINES, TheoremReport, phi_pipeline, rotation_membership, seeded_rotation,
                           verify_theorem)


@pytest.fixture(scope="module")
def phi_report():
    return verify_theorem("phi", depth=2)


def test_phi_verified_at_small_depth(phi_report):
    assert phi_report.status == "verified"
    assert [c.status for c in phi_report.conditions] == ["holds"] * 3


def test_report_is_deterministic(phi_report):
    again = verify_theorem("phi", depth=2)
    assert again.to_text() == phi_report.to_text()
    json.dumps(phi_report.to_dict())


def test_report_text_layout(phi_report):
    text = phi_report.to_text()
    assert text.startswith("report: theorem\nmap: phi\n")
    assert "status: verified" in text.splitlines()[-1]


def test_first_iterate_is_negative():
    rep = verify_theorem(phi_pipeline(1), depth=2)
    assert rep.status == "negative"
    assert rep.conditions[0].holds is False


def test_depth_zero_is_inconclusive():
    rep = verify_theorem("phi", depth=0)
    assert rep.status == "inconclusive"


def test_pipelines_registry():
    assert set(PIPELINES) == {"phi", "psi"}
    pl = PIPELINES["phi"](4)
    assert str(pl.p) == "[1:0:1]" and str(pl.s) == "[1:0:-9]"
    assert isinstance(TheoremReport("x", 1, 1, 0).to_text(), str)


def test_seeded_rotation_is_deterministic_and_invertible():
    from ratdyn.exact.linalg import det
    A = seeded_rotation(7)
    assert A == seeded_rotation(7)
    assert not det(A).is_zero()


def test_identity_membership():
    rep = rotation_membership([[1, 0, 0], [0, 1, 0], [0, 0, 1]], n=3)
    assert rep.member
    d = rep.to_dict()
    assert d["omega1"] == d["omega2"] == d["omega3"] == "member"
    assert "scope" in d


def test_planted_bad_matrix_fails_first_set():
    rep = rotation_membership([[1, 1, 0], [0, 0, 1], [0, 1, 1]], n=2)
    assert rep.omega1 is False
    assert not rep.member
    assert rep.witnesses
