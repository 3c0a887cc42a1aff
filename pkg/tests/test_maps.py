import pytest

from ratdyn.maps import (MapFileError, ParseError, UnknownVariable, builtin_map, load_map_file,
                         parse_map_text, parse_poly, resolve_map)
from ratdyn.mpoly import MPoly
from ratdyn.projmap import point


def test_parse_precedence():
    assert parse_poly("X + Y*Z^2") == parse_poly("X + (Y*(Z^2))")
    assert parse_poly("-X^2") == -(parse_poly("X") ** 2)
    assert parse_poly("2*(X - Y)") == parse_poly("2*X - 2*Y")


def test_trailing_operator_position():
    with pytest.raises(ParseError) as exc:
        parse_poly("X+")
    assert exc.value.position == 2


def test_unknown_variable():
    with pytest.raises(UnknownVariable) as exc:
        parse_poly("X + W")
    assert exc.value.name == "W" and exc.value.position == 4


def test_bad_character_and_division():
    with pytest.raises(ParseError):
        parse_poly("X $ Y")
    with pytest.raises(ParseError):
        parse_poly("X / Y")
    with pytest.raises(ParseError):
        parse_poly("X / 0")
    assert parse_poly("X/2") * 2 == parse_poly("X")


def test_imaginary_unit():
    p = parse_poly("i*X")
    assert p.evaluate([1, 0, 0]) == parse_poly("i").constant_value()


def test_builtin_maps():
    f = builtin_map("phi")
    assert f.degree == 2
    assert f(point(1, 0, 0)) == point(0, 1, -1)
    g = builtin_map("psi")
    assert g(point(2, 1, 1)) == point(4, 4, 1)
    with pytest.raises(KeyError):
        builtin_map("nope")


def test_map_file_round_trip(tmp_path):
    d = parse_map_text(open_builtin_text())
    path = tmp_path / "m.map"
    path.write_text(d.text(), encoding="utf-8")
    again = load_map_file(path)
    assert again == d
    assert resolve_map(str(path)).comps == builtin_map("phi").comps


def open_builtin_text():
    from ratdyn.maps import BUILTIN_MAPS
    return BUILTIN_MAPS["phi"]


def test_affine_map_file():
    d = parse_map_text("name=psi_affine\nvars=x,y\nP0=x*(x-y)+2\nP1=(x+y)*(x-y)+1\n")
    f = d.to_map()
    assert f.comps == builtin_map("psi").comps


def test_map_file_errors():
    with pytest.raises(MapFileError):
        parse_map_text("name=a\nvars=X,Y,Z\nP0=X\n")
    with pytest.raises(MapFileError):
        parse_map_text("name=a\nname=b\nvars=X,Y,Z\nP0=X\nP1=Y\nP2=Z\n")
    with pytest.raises(MapFileError):
        parse_map_text("name=a\nvars=X,Y,Z\nP0=X\nP1=Y\nP2=Z\nfield=R\n")
    with pytest.raises(MapFileError):
        parse_map_text("just text\n")


def test_comments_and_blank_lines():
    d = parse_map_text("# a comment\n\nname=lin\nvars=X,Y,Z\nP0=Y\nP1=Z\nP2=X\n")
    f = d.to_map()
    assert f.degree == 1
    assert isinstance(f.comps[0], MPoly)
