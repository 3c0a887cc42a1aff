"""Polynomial parsing and the map-file format.

Grammar (whitespace-insensitive, explicit ``*`` required)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*     # "/" only by nonzero constants
    unary  := ("-" | "+") unary | power
    power  := atom ("^" INT)?
    atom   := INT | "i" | VAR | "(" expr ")"

Map files are UTF-8 ``key=value`` lines::

    name=phi
    vars=X,Y,Z
    P0=-Y^2
    P1=X*(X-Z)
    P2=-(X+Z)*(X-Z)
    field=Qi

With two variables the components ``P0, P1`` describe an affine map
``(x, y) -> (P0, P1)``, extended to the plane with a third coordinate ``Z``.
With three variables, inhomogeneous components are homogenized with the
third variable.  Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .exact.gaussian import I
from .mpoly import MPoly
from .projmap import ProjectiveMap, normalize

XYZ = ("X", "Y", "Z")


class ParseError(SyntaxError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position


class UnknownVariable(ValueError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown variable {name!r} at position {position}")
        self.name = name
        self.position = position


class MapFileError(ValueError):
    pass


def _tokens(text: str):
    out = []
    k = 0
    while k < len(text):
        ch = text[k]
        if ch.isspace():
            k += 1
        elif ch.isdigit():
            j = k
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(("int", text[k:j], k))
            k = j
        elif ch.isalpha() or ch == "_":
            j = k
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("name", text[k:j], k))
            k = j
        elif ch in "+-*/^()":
            out.append((ch, ch, k))
            k += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", text, k)
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.text = text
        self.vars = variables
        self.toks = _tokens(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self, kind=None):
        tok = self.toks[self.k]
        if kind is not None and tok[0] != kind:
            self.fail(f"expected {kind!r}", tok)
        self.k += 1
        return tok

    def fail(self, message, tok):
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ParseError(f"{message}, found {what}", self.text, tok[2])

    def parse(self) -> MPoly:
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected token", self.peek())
        return p

    def expr(self) -> MPoly:
        acc = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> MPoly:
        acc = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.unary()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError("division only by nonzero constants", self.text, pos)
                acc = acc.scale(rhs.constant_value().inverse())
        return acc

    def unary(self) -> MPoly:
        if self.peek()[0] in ("-", "+"):
            op = self.take()[0]
            p = self.unary()
            return -p if op == "-" else p
        return self.power()

    def power(self) -> MPoly:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("int")
            base = base ** int(tok[1])
        return base

    def atom(self) -> MPoly:
        tok = self.peek()
        kind, val, pos = tok
        if kind == "int":
            self.take()
            return MPoly.const(int(val), self.vars)
        if kind == "name":
            self.take()
            if val == "i":
                return MPoly.const(I, self.vars)
            if val not in self.vars:
                raise UnknownVariable(val, pos)
            return MPoly.var(val, self.vars)
        if kind == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        self.fail("expected a number, variable or '('", tok)


def parse_poly(text: str, variables=XYZ) -> MPoly:
    """Exact polynomial from text in the grammar above."""
    return _Parser(text, tuple(variables)).parse()


@dataclass(frozen=True)
class MapDefinition:
    name: str
    variables: tuple[str, ...]
    components: tuple[str, ...]
    field: str = "Qi"

    def polys(self) -> list[MPoly]:
        """Homogeneous components in X, Y, Z (or the given three variables)."""
        polys = [parse_poly(c, self.variables) for c in self.components]
        if len(self.variables) == 2:
            if len(polys) != 2:
                raise MapFileError("an affine map needs P0 and P1")
            third = next(n for n in ("Z", "W", "T") if n not in self.variables)
            names = tuple(self.variables) + (third,)
            polys = [p.with_vars(names) for p in polys] + [MPoly.const(1, names)]
            d = max(p.total_degree() for p in polys)
            polys = [_homogenize_to(p, third, d) for p in polys]
            return [p.with_vars(names) for p in polys]
        if len(self.variables) != 3 or len(polys) != 3:
            raise MapFileError("a map needs three variables and P0, P1, P2")
        d = max(p.total_degree() for p in polys)
        return [_homogenize_to(p, self.variables[2], d) for p in polys]

    def to_map(self) -> ProjectiveMap:
        polys = self.polys()
        if polys[0].vars != XYZ:
            names = polys[0].vars
            polys = [p.with_vars(names) for p in polys]
            # rename the three variables positionally to X, Y, Z
            polys = [MPoly(XYZ, p.terms) for p in polys]
        return normalize(polys, self.name)

    def text(self) -> str:
        lines = [f"name={self.name}", f"vars={','.join(self.variables)}"]
        lines += [f"P{k}={c}" for k, c in enumerate(self.components)]
        lines.append(f"field={self.field}")
        return "\n".join(lines) + "\n"


def _homogenize_to(p: MPoly, name: str, d: int) -> MPoly:
    h = p.homogenize(name)
    if p.total_degree() < d:
        h = h * MPoly.var(name, h.vars) ** (d - p.total_degree())
    return h


def parse_map_text(text: str) -> MapDefinition:
    fields: dict[str, str] = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise MapFileError(f"line {n}: expected key=value")
        key, val = line.split("=", 1)
        key = key.strip()
        if key in fields:
            raise MapFileError(f"line {n}: duplicate key {key}")
        fields[key] = val.strip()
    for key in ("name", "vars", "P0", "P1"):
        if key not in fields:
            raise MapFileError(f"missing key {key}")
    variables = tuple(v.strip() for v in fields["vars"].split(","))
    comps = [fields["P0"], fields["P1"]]
    if "P2" in fields:
        comps.append(fields["P2"])
    field = fields.get("field", "Qi")
    if field != "Qi":
        raise MapFileError(f"unsupported coefficient field {field}")
    return MapDefinition(fields["name"], variables, tuple(comps), field)


def load_map_file(path) -> MapDefinition:
    return parse_map_text(Path(path).read_text(encoding="utf-8"))


BUILTIN_MAPS = {
    "phi": "name=phi\nvars=X,Y,Z\nP0=-Y^2\nP1=X*(X-Z)\nP2=-(X+Z)*(X-Z)\nfield=Qi\n",
    "psi": "name=psi\nvars=X,Y,Z\nP0=X*(X-Y)+2*Z^2\nP1=(X+Y)*(X-Y)+Z^2\nP2=Z^2\nfield=Qi\n",
}

_cache: dict[str, ProjectiveMap] = {}


def builtin_map(name: str) -> ProjectiveMap:
    if name not in BUILTIN_MAPS:
        raise KeyError(f"no built-in map {name!r}; known: {', '.join(sorted(BUILTIN_MAPS))}")
    if name not in _cache:
        _cache[name] = parse_map_text(BUILTIN_MAPS[name]).to_map()
    return _cache[name]


def resolve_map(spec: str) -> ProjectiveMap:
    """A built-in name or a path to a map file."""
    if spec in BUILTIN_MAPS:
        return builtin_map(spec)
    return load_map_file(spec).to_map()
