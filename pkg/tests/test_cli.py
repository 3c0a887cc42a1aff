import json
from pathlib import Path

import pytest

from ratdyn.cli import main

MAPS = Path(__file__).resolve().parent.parent / "maps"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_degrees(capsys):
    code, out, _ = run(capsys, "degrees", "--map", "psi", "-n", "6")
    assert code == 0 and out.strip() == "2 4 8 16 32 64"


def test_map_file_matches_builtin(capsys):
    for name in ("phi", "psi"):
        code, out, _ = run(capsys, "degrees", "--map", str(MAPS / f"{name}.map"), "-n", "4")
        assert code == 0 and out.strip() == "2 4 8 16"


def test_indeterminacy_and_critical(capsys):
    code, out, _ = run(capsys, "indeterminacy")
    assert code == 0 and out.strip() == "[1:0:1]"
    code, out, _ = run(capsys, "critical", "--map", "psi")
    assert code == 0 and "topological degree: 2" in out


def test_stability(capsys):
    code, out, _ = run(capsys, "stability", "-n", "5")
    assert code == 0 and "stable: True" in out


def test_blowup_reports_images(capsys):
    code, out, _ = run(capsys, "blowup", "-k", "4")
    assert code == 0
    assert "image of E1 under the lift of phi^4: [1:0:-9]" in out
    assert "(degree 8)" in out


def test_blowup_at_a_regular_point_is_negative(capsys):
    code, _, _ = run(capsys, "blowup", "--at", "[1:2:3]")
    assert code == 1


def test_singular_with_lowest_form(capsys):
    code, out, _ = run(capsys, "singular", "--curve", "C4", "--at", "[1:0:-9]", "--lowest")
    assert code == 0
    assert "multiplicity at [1:0:-9]: 2" in out
    assert "lowest-degree form (degree 2)" in out


def test_curve_image(capsys):
    code, out, _ = run(capsys, "curve-image", "--map", "psi", "--curve", "C1", "--times", "2")
    assert code == 0 and "degree: 4" in out


def test_preorbit(capsys):
    code, out, _ = run(capsys, "preorbit", "--depth", "2")
    assert code == 0 and "accepted: True" in out
    code, out, _ = run(capsys, "preorbit", "--depth", "2", "--strict-base")
    assert code == 1 and "after 0 steps" in out


def test_verify_exit_codes(capsys, tmp_path):
    report = tmp_path / "v.json"
    code, out, _ = run(capsys, "verify", "--depth", "2", "--report", str(report))
    assert code == 0 and out.rstrip().endswith("status: verified")
    data = json.loads(report.read_text())
    assert data["status"] == "verified" and data["exit_code"] == 0
    code, _, _ = run(capsys, "verify", "-k", "1", "--depth", "2")
    assert code == 1
    code, _, _ = run(capsys, "verify", "--depth", "0")
    assert code == 2


def test_report_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("RATDYN_REPORT_DIR", str(tmp_path))
    code, _, _ = run(capsys, "degrees", "-n", "3")
    assert code == 0
    data = json.loads((tmp_path / "degrees-phi.json").read_text())
    assert data["degrees"] == [2, 4, 8]


def test_rotate_check(capsys):
    code, out, _ = run(capsys, "rotate-check", "--matrix", "1,0,0;0,1,0;0,0,1", "-n", "2")
    assert code == 0 and "omega1: member" in out
    code, out, _ = run(capsys, "rotate-check", "--matrix", "1,1,0;0,0,1;0,1,1", "-n", "2")
    assert code == 1 and "omega1: not member" in out


def test_render_basins(capsys, tmp_path):
    out_path = tmp_path / "b.ppm"
    code, out, _ = run(capsys, "render", "--out", str(out_path), "--width", "32", "--height", "24")
    assert code == 0 and out_path.read_bytes().startswith(b"P6\n32 24\n255\n")
    assert "classified fraction" in out


def test_render_config_file(capsys, tmp_path):
    cfg = tmp_path / "r.cfg"
    cfg.write_text("# small\nwidth=16\nheight=16\nwindow=-1,1,-1,1\nmax_iterations=50\n")
    code, _, _ = run(capsys, "render", "--out", str(tmp_path / "c.png"), "--config", str(cfg))
    assert code == 0 and (tmp_path / "c.png").exists()
    cfg.write_text("bogus=1\n")
    code, _, err = run(capsys, "render", "--out", str(tmp_path / "d.png"), "--config", str(cfg))
    assert code == 3 and "unknown key" in err


def test_render_curve(capsys, tmp_path):
    code, out, _ = run(capsys, "render", "--out", str(tmp_path / "c4.ppm"), "--curve", "C4",
                       "--width", "40", "--height", "40", "--window=-1,1,-10,-8", "--mark", "0,-9")
    assert code == 0 and "curve:" in out


@pytest.mark.parametrize("argv", [
    ["degrees", "--map", "nope"],
    ["degrees", "-n", "x"],
    ["render", "--out", "x.ppm", "--window", "1,1,0,1"],
    ["singular", "--curve", "X+", "--at", "[1:0:0]"],
    ["singular", "--curve", "C1", "--at", "[1:0]"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3 and err.startswith("error:")
