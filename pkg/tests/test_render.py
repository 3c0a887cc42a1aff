import numpy as np
import pytest
from PIL import Image

from ratdyn.curves import PlaneCurve
from ratdyn.maps import builtin_map, parse_map_text, parse_poly
from ratdyn.render import (ESCAPE, UNDECIDED, UNRESOLVED, EmptyWindow, NotApplicable, RenderConfig,
                           classify_point, classify_point_certified, read_ppm, render, render_curve)


@pytest.fixture(scope="module")
def phi():
    return builtin_map("phi")


def small(**kw):
    base = dict(width=40, height=30, max_iterations=200, threads=2, tile_rows=8)
    base.update(kw)
    return RenderConfig(**base)


def test_classify_known_points(phi):
    cfg = RenderConfig()
    assert classify_point(phi, (0.0005, 0.0005), cfg) == 0  # near [1:0:0]
    assert classify_point(phi, (0.0005, 0.0005, 1), cfg) == 4  # near the fixed point [0:0:1]
    assert classify_point(phi, (0.0, 0.0), cfg) == 0
    assert classify_point(phi, (0.0, -1.0), cfg) == 2  # [1:0:-1]
    assert classify_point(phi, (0, 0, 1), cfg) == 4
    assert classify_point(phi, (0, 1, 0), cfg) == 3
    assert classify_point(phi, (0, 1, -1), cfg) == 1


def test_indeterminate_point_is_unresolved(phi):
    # (y, z) = (0, 1) is [1:0:1]
    assert classify_point(phi, (0.0, 1.0), RenderConfig()) == UNRESOLVED
    assert classify_point_certified(phi, (0, 1), RenderConfig()) == UNDECIDED


def test_certified_oracle_agrees_on_grid(phi):
    cfg = RenderConfig()
    for u in (-2.5, -1.25, 0.5, 1.75):
        for v in (-2.0, -0.75, 0.25, 2.5):
            exact = classify_point_certified(phi, (u, v), cfg)
            if exact != UNDECIDED:
                assert exact == classify_point(phi, (u, v), cfg)


def test_certified_oracle_rejects_complex_maps():
    f = parse_map_text("name=c\nvars=X,Y,Z\nP0=X^2\nP1=i*Y^2\nP2=Z^2\n").to_map()
    with pytest.raises(NotApplicable):
        classify_point_certified(f, (0.5, 0.5), RenderConfig())


def test_empty_window():
    with pytest.raises(EmptyWindow):
        small(window=(1, 1, 0, 1)).validate()
    with pytest.raises(ValueError):
        small(chart=("X", "X", "Y")).validate()


def test_ppm_layout(phi, tmp_path):
    cfg = small()
    res = render(phi, cfg, tmp_path / "b.ppm")
    raw = (tmp_path / "b.ppm").read_bytes()
    header = b"P6\n40 30\n255\n"
    assert raw.startswith(header)
    assert len(raw) == len(header) + 40 * 30 * 3
    img = read_ppm(tmp_path / "b.ppm")
    assert img.shape == (30, 40, 3)
    assert sum(res.counts.values()) == 40 * 30


def test_png_matches_ppm(phi, tmp_path):
    cfg = small()
    render(phi, cfg, tmp_path / "b.ppm")
    render(phi, cfg, tmp_path / "b.png")
    png = np.asarray(Image.open(tmp_path / "b.png").convert("RGB"))
    assert (png == read_ppm(tmp_path / "b.ppm")).all()


def test_rows_run_top_down(phi):
    cfg = small(width=4, height=4, window=(-1, 1, -1, 1))
    assert cfg.pixel_center(0, 0) == (-0.75, 0.75)
    assert cfg.pixel_center(3, 3) == (0.75, -0.75)


def test_thread_count_does_not_change_output(phi):
    a = render(phi, small(threads=1)).classes
    b = render(phi, small(threads=4)).classes
    assert (a == b).all()


def test_escape_is_used_when_attractors_are_finite():
    # z -> z^2 on the chart X = 1 with attractor at the origin only
    f = parse_map_text("name=sq\nvars=X,Y,Z\nP0=X^2\nP1=Y^2\nP2=Z^2\n").to_map()
    from ratdyn.render import Attractor
    cfg = small(chart=("Y", "Z", "X"), window=(-3, 3, -3, 3), period=1,
                attractors=(Attractor("origin", (1, 0, 0), (0, 0, 0)),))
    assert classify_point(f, (0.5, 0.25), cfg) == 0
    assert classify_point(f, (2.0, 0.0), cfg) == ESCAPE


def test_curve_plot_marks(tmp_path):
    C = PlaneCurve.from_equation(parse_poly("Y^2 - X*Z"))  # z = y^2 in (Y/X, Z/X)
    cfg = small(width=60, height=60)
    res = render_curve(C, cfg, tmp_path / "c.ppm", marks=[(0.0, 0.0)])
    assert res.counts["curve"] > 0
    img = read_ppm(tmp_path / "c.ppm")
    assert tuple(img[30, 30]) == (220, 0, 0)
