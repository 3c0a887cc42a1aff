import pytest

from ratdyn.blowup import base_tower, blow_up, exceptional_image, is_resolved, lift_map, resolve_at
from ratdyn.curves import ParamCurve, implicitize, line
from ratdyn.maps import builtin_map
from ratdyn.projmap import iterate, point


@pytest.fixture(scope="module")
def phi_resolution():
    f = builtin_map("phi")
    return f, resolve_at(f, point(1, 0, 1))


def test_phi_needs_two_blowups(phi_resolution):
    f, (tower, lift, certs) = phi_resolution
    assert tower.levels == 2
    assert [c.resolved for c in certs] == [False, True]


def test_phi_divisor_images(phi_resolution):
    f, (tower, lift, _) = phi_resolution
    e1, e2 = tower.tags
    assert exceptional_image(lift, e1) == point(0, 1, -2)
    img = exceptional_image(lift, e2)
    assert isinstance(img, ParamCurve)
    assert implicitize(img).same_as(line(0, 2, 1))


def test_psi_divisor_images():
    g = builtin_map("psi")
    tower, lift, certs = resolve_at(g, point(1, 1, 0))
    assert certs[-1].resolved
    e1, e2 = tower.tags
    assert exceptional_image(lift, e1) == point(1, 2, 0)
    assert implicitize(exceptional_image(lift, e2)).same_as(line(2, -1, -3))


def test_fourth_iterate_sends_e1_to_s(phi_resolution):
    f, (tower, lift, _) = phi_resolution
    lift4 = lift.then(iterate(f, 3))
    assert exceptional_image(lift4, tower.tags[0]) == point(1, 0, -9)
    assert implicitize(exceptional_image(lift4, tower.tags[1])).degree == 8


def test_single_blowup_is_not_enough():
    f = builtin_map("phi")
    tower = blow_up(None, point(1, 0, 1))
    cert = is_resolved(lift_map(f, tower))
    assert not cert.resolved


def test_blow_down_of_base_chart():
    tower = base_tower(point(1, 0, 1))
    chart = tower.chart("base")
    assert tower.blow_down(chart, (0, 0)) == point(1, 0, 1)
    assert tower.blow_down(chart, (2, 3)) == point(1, 2, 4)


def test_blow_down_of_first_chart():
    tower = blow_up(None, point(1, 0, 1))
    for chart in tower.charts:
        if chart.level == 1:
            # the exceptional divisor blows down to the center
            eq = chart.divisor(tower.tags[0])
            var = eq.used_vars()[0]
            uv = [0 if n == var else 5 for n in chart.coords]
            assert tower.blow_down(chart, uv) == point(1, 0, 1)


def test_description_mentions_every_chart(phi_resolution):
    _, (tower, _, _) = phi_resolution
    text = "\n".join(tower.describe())
    for chart in tower.charts:
        assert chart.name in text
