"""Command-line interface.

Every subcommand prints a human-readable report.  ``--report FILE`` also
writes a JSON report; ``--report-dir DIR`` (or the ``RATDYN_REPORT_DIR``
environment variable) writes it as ``DIR/<subcommand>-<map>.json``.

Exit codes: 0 computed or verified, 1 negative result, 2 inconclusive,
3 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import render as rmod
from .blowup import exceptional_image, resolve_at
from .curves import ParamCurve, PlaneCurve, implicitize, local_equation, map_image, multiplicity_at
from .exact.gaussian import GaussianRational
from .maps import MapFileError, ParseError, UnknownVariable, parse_poly, resolve_map
from .mpoly import lowest_degree_form
from .orbits import ExceptionalPoint, PreorbitHitsNF, infinite_preorbit_certificate, nf_set
from .projmap import (OrbitHitsIndeterminacy, ProjectiveMap, ProjectivePoint, collapsed_curves,
                      critical_locus, degree_sequence, indeterminacy, is_algebraically_stable_up_to,
                      iterate, point, restrict_to_line, topological_degree)
from .verify import PIPELINES, chart_value, rotation_membership, seeded_rotation, verify_theorem

__all__ = ["main", "parse_poly", "parse_point", "named_curve"]

REPORT_DIR_ENV = "RATDYN_REPORT_DIR"
EXIT_OK, EXIT_NEGATIVE, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    lines: list[str]
    data: dict = field(default_factory=dict)
    code: int = EXIT_OK


# -- argument parsing -------------------------------------------------------------------


def parse_point(text: str) -> ProjectivePoint:
    """``"[1:0:-9]"`` or ``"1:0:-9"``; coordinates are constant expressions."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    parts = body.split(":")
    if len(parts) != 3:
        raise UsageError(f"expected a point [x:y:z], got {text!r}")
    vals = []
    for part in parts:
        p = parse_poly(part, ())
        vals.append(p.constant_value())
    try:
        return point(*vals)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _parse_matrix(text: str) -> list[list[GaussianRational]]:
    rows = [r for r in text.split(";") if r.strip()]
    A = [[parse_poly(x, ()).constant_value() for x in r.split(",")] for r in rows]
    if len(A) != 3 or any(len(r) != 3 for r in A):
        raise UsageError("a matrix is three rows of three entries: a,b,c;d,e,f;g,h,i")
    return A


def _parse_line(text: str) -> PlaneCurve:
    eq = parse_poly(text)
    if eq.total_degree() != 1 or not eq.is_homogeneous():
        raise UsageError(f"{text!r} is not a linear form in X, Y, Z")
    return PlaneCurve.from_equation(eq)


def _parse_floats(text: str, n: int) -> tuple[float, ...]:
    vals = tuple(float(x) for x in text.split(","))
    if len(vals) != n:
        raise UsageError(f"expected {n} comma-separated numbers, got {text!r}")
    return vals


def named_curve(f: ProjectiveMap, name: str) -> tuple[PlaneCurve, ParamCurve | None]:
    """``C<j>``: the image of the last exceptional divisor over the first
    indeterminate point under the lift of ``f^j``.  Anything else is read as
    an equation in X, Y, Z."""
    if len(name) >= 2 and name[0] == "C" and name[1:].isdigit():
        j = int(name[1:])
        if j < 1:
            raise UsageError("curve index starts at 1")
        pts = indeterminacy(f)
        if not pts:
            raise UsageError(f"{f.name} has no indeterminate points")
        tower, lift, _ = resolve_at(f, pts[0])
        composite = lift if j == 1 else lift.then(iterate(f, j - 1))
        img = exceptional_image(composite, tower.tags[-1])
        if isinstance(img, ProjectivePoint):
            raise UsageError(f"{name} is the point {img}, not a curve")
        return implicitize(img), img
    eq = parse_poly(name)
    return PlaneCurve.from_equation(eq), None


# -- subcommands ------------------------------------------------------------------------


def cmd_degrees(args) -> Outcome:
    f = resolve_map(args.map)
    degs = degree_sequence(f, args.n, seed=args.seed)
    return Outcome([" ".join(map(str, degs))], {"map": f.name, "degrees": degs})


def cmd_indeterminacy(args) -> Outcome:
    f = resolve_map(args.map)
    pts = indeterminacy(f, seed=args.seed)
    return Outcome([str(P) for P in pts] or ["none"], {"map": f.name, "points": [str(P) for P in pts]})


def cmd_critical(args) -> Outcome:
    f = resolve_map(args.map)
    crit = critical_locus(f)
    coll = {str(C): q for C, q in collapsed_curves(f)}
    lines, items = [], []
    for C, m in crit:
        img = coll.get(str(C))
        tail = f"; collapsed to {img}" if img is not None else ""
        lines.append(f"{C} multiplicity {m}{tail}")
        items.append({"curve": str(C), "multiplicity": m, "collapsed_to": str(img) if img else None})
    lines.append(f"topological degree: {topological_degree(f, seed=args.seed)}")
    return Outcome(lines, {"map": f.name, "critical": items})


def cmd_stability(args) -> Outcome:
    f = resolve_map(args.map)
    try:
        cert = is_algebraically_stable_up_to(f, args.n)
    except OrbitHitsIndeterminacy as exc:
        cert = exc.certificate
        lines = cert.lines() if cert is not None else []
        lines.append(f"a collapsed curve's orbit meets the indeterminacy at step {exc.step}: {exc.point}")
        return Outcome(lines, {"map": f.name, "stable": False}, EXIT_NEGATIVE)
    code = EXIT_OK if cert.stable else EXIT_NEGATIVE
    return Outcome(cert.lines(), {"map": f.name, "stable": cert.stable, "degrees": cert.degrees}, code)


def cmd_blowup(args) -> Outcome:
    f = resolve_map(args.map)
    p = parse_point(args.at) if args.at else indeterminacy(f)[0]
    if not f.is_indeterminate_at(p):
        return Outcome([f"{p} is not an indeterminate point of {f.name}"], {"map": f.name}, EXIT_NEGATIVE)
    tower, lift, certs = resolve_at(f, p)
    lines = tower.describe()
    for c in certs:
        lines += c.lines()
    data = {"map": f.name, "point": str(p), "levels": tower.levels, "images": {}}
    composite = lift if args.k == 1 else lift.then(iterate(f, args.k - 1))
    for tag in tower.tags:
        img = exceptional_image(composite, tag)
        if isinstance(img, ProjectivePoint):
            text = str(img)
        else:
            C = implicitize(img)
            text = f"{C} (degree {C.degree})"
        lines.append(f"image of {tag} under the lift of {f.name}^{args.k}: {text}")
        data["images"][tag] = text
    code = EXIT_OK if certs[-1].resolved else EXIT_INCONCLUSIVE
    return Outcome(lines, data, code)


def cmd_curve_image(args) -> Outcome:
    f = resolve_map(args.map)
    C, param = named_curve(f, args.curve)
    if param is None:
        if C.degree != 1:
            raise UsageError("images are computed for lines and named curves")
        param = ParamCurve.of_line(C)
    for _ in range(args.times):
        param = map_image(f, param)
    img = implicitize(param)
    lines = [f"image of {args.curve} under {f.name}^{args.times}: {img}", f"degree: {img.degree}"]
    return Outcome(lines, {"map": f.name, "curve": args.curve, "times": args.times,
                           "image": str(img), "degree": img.degree})


def cmd_singular(args) -> Outcome:
    f = resolve_map(args.map)
    C, _ = named_curve(f, args.curve)
    P = parse_point(args.at)
    if not C.contains(P):
        return Outcome([f"{P} is not on the curve"], {"curve": args.curve, "point": str(P)}, EXIT_NEGATIVE)
    m = multiplicity_at(C, P)
    lines = [f"curve {args.curve}: degree {C.degree}", f"multiplicity at {P}: {m}",
             f"singular: {m >= 2}"]
    data = {"curve": args.curve, "point": str(P), "degree": C.degree, "multiplicity": m}
    if args.lowest:
        d, form = lowest_degree_form(local_equation(C, P))
        lines.append(f"lowest-degree form (degree {d}): {form}")
        data["lowest_form"] = str(form)
    return Outcome(lines, data)


def cmd_preorbit(args) -> Outcome:
    pl = PIPELINES[args.map](args.k) if args.map in PIPELINES else None
    f = resolve_map(args.map)
    L = _parse_line(args.line) if args.line else (pl.line if pl else None)
    chart = tuple(args.chart.split("/")) if args.chart else (pl.chart if pl else None)
    if L is None or chart is None:
        raise UsageError("--line and --chart are required for maps without a built-in pipeline")
    if args.base is not None:
        a0 = parse_poly(args.base, ()).constant_value()
    elif pl is not None:
        a0 = chart_value(pl.p, chart)
    else:
        raise UsageError("--base is required for maps without a built-in pipeline")
    g = restrict_to_line(iterate(f, args.k), L, "/".join(chart))
    nf = nf_set(f, args.k, L, chart)
    head = [f"NF = {{{', '.join(nf.values())}}}"]
    try:
        cert = infinite_preorbit_certificate(g, a0, nf, args.depth, base_may_be_in_nf=not args.strict_base)
    except (PreorbitHitsNF, ExceptionalPoint) as exc:
        lines = head + [str(exc), "accepted: False"]
        return Outcome(lines, {"map": f.name, "k": args.k, "depth": args.depth, "accepted": False,
                               "lines": lines}, EXIT_NEGATIVE)
    lines = head + cert.lines()
    code = EXIT_OK if cert.accepted else EXIT_INCONCLUSIVE
    return Outcome(lines, {"map": f.name, "k": args.k, "depth": args.depth, "accepted": cert.accepted,
                           "lines": lines}, code)


def cmd_verify(args) -> Outcome:
    if args.map not in PIPELINES:
        return Outcome([f"no verification pipeline for {args.map}; known: {', '.join(PIPELINES)}"],
                       {"map": args.map, "status": "inconclusive"}, EXIT_INCONCLUSIVE)
    rep = verify_theorem(PIPELINES[args.map](args.k), depth=args.depth, seed=args.seed)
    code = {"verified": EXIT_OK, "negative": EXIT_NEGATIVE}.get(rep.status, EXIT_INCONCLUSIVE)
    return Outcome(rep.to_text().splitlines(), rep.to_dict(), code)


def cmd_rotate_check(args) -> Outcome:
    A = _parse_matrix(args.matrix) if args.matrix else seeded_rotation(args.seed)
    f = resolve_map(args.map)
    pl = PIPELINES[args.map](args.k) if args.map in PIPELINES else None
    if pl is None or pl.r is None:
        raise UsageError("rotation checks need a pipeline with an explicit r (phi)")
    rep = rotation_membership(A, f, args.n, k=args.k, p=pl.p, r=pl.r, seed=args.seed)
    flags = (rep.omega1, rep.omega2, rep.omega3)
    code = EXIT_OK if all(flags) else (EXIT_NEGATIVE if False in flags else EXIT_INCONCLUSIVE)
    return Outcome(rep.to_text().splitlines(), rep.to_dict(), code)


def load_render_config(path) -> rmod.RenderConfig:
    """``key=value`` lines: width, height, window (four numbers), chart (three
    letters), period, max_iterations, attraction_radius, escape_radius, seed, threads."""
    cfg = rmod.RenderConfig()
    for n, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line_ = raw.strip()
        if not line_ or line_.startswith("#"):
            continue
        if "=" not in line_:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, val = (s.strip() for s in line_.split("=", 1))
        if key == "window":
            cfg.window = _parse_floats(val, 4)
        elif key == "chart":
            cfg.chart = tuple(s.strip() for s in val.split(","))
        elif key in ("width", "height", "period", "max_iterations", "seed", "threads", "tile_rows"):
            setattr(cfg, key, int(val))
        elif key in ("attraction_radius", "escape_radius"):
            setattr(cfg, key, float(val))
        else:
            raise UsageError(f"{path}:{n}: unknown key {key}")
    return cfg


def cmd_render(args) -> Outcome:
    cfg = load_render_config(args.config) if args.config else rmod.RenderConfig()
    if args.width:
        cfg.width = args.width
    if args.height:
        cfg.height = args.height
    if args.window:
        cfg.window = _parse_floats(args.window, 4)
    if args.max_iterations:
        cfg.max_iterations = args.max_iterations
    if args.threads:
        cfg.threads = args.threads
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    f = resolve_map(args.map)
    if args.curve:
        C, _ = named_curve(f, args.curve)
        marks = [_parse_floats(m, 2) for m in args.mark]
        res = rmod.render_curve(C, cfg, args.out, marks)
    else:
        res = rmod.render(f, cfg, args.out)
    return Outcome(res.lines(), {"map": f.name, "out": str(args.out), "counts": res.counts})


COMMANDS = {
    "degrees": cmd_degrees,
    "indeterminacy": cmd_indeterminacy,
    "critical": cmd_critical,
    "stability": cmd_stability,
    "blowup": cmd_blowup,
    "curve-image": cmd_curve_image,
    "singular": cmd_singular,
    "preorbit": cmd_preorbit,
    "verify": cmd_verify,
    "rotate-check": cmd_rotate_check,
    "render": cmd_render,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ratdyn", description="Dynamics of rational maps of the projective plane.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--map", default="phi", help="built-in map name or map file (default phi)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--report", help="write a JSON report to this file")
        p.add_argument("--report-dir", help=f"write a JSON report into this directory (default ${REPORT_DIR_ENV})")
        return p

    add("degrees", "degree sequence").add_argument("-n", type=int, default=8)
    add("indeterminacy", "indeterminate points")
    add("critical", "critical locus and collapsed curves")
    add("stability", "algebraic stability up to n").add_argument("-n", type=int, default=8)
    p = add("blowup", "resolve the indeterminacy at a point")
    p.add_argument("--at", help="indeterminate point, default the first one")
    p.add_argument("-k", type=int, default=1, help="report images under the lift of f^k")
    p = add("curve-image", "image of a curve under f^times")
    p.add_argument("--curve", required=True, help="C<j> or a line equation")
    p.add_argument("--times", type=int, default=1)
    p = add("singular", "multiplicity of a curve at a point")
    p.add_argument("--curve", required=True, help="C<j> or an equation in X, Y, Z")
    p.add_argument("--at", required=True)
    p.add_argument("--lowest", action="store_true", help="also print the lowest-degree form")
    p = add("preorbit", "infinite preorbit certificate on an invariant line")
    p.add_argument("-k", type=int, default=4)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--line", help="linear form, e.g. Y")
    p.add_argument("--chart", help="coordinate on the line, e.g. Z/X")
    p.add_argument("--base", help="base value in the chart coordinate")
    p.add_argument("--strict-base", action="store_true", help="reject a base point that lies in NF")
    p = add("verify", "verify the three conditions for a built-in pipeline")
    p.add_argument("-k", type=int, default=4)
    p.add_argument("--depth", type=int, default=12)
    p = add("rotate-check", "finite-depth genericity checks for A o f^k")
    p.add_argument("--matrix", help="a,b,c;d,e,f;g,h,i (default: seeded random)")
    p.add_argument("-n", type=int, default=4)
    p.add_argument("-k", type=int, default=4)
    p = add("render", "basin picture or curve plot")
    p.add_argument("--out", required=True, help="output .ppm or .png")
    p.add_argument("--config", help="render config file (key=value lines)")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--window", help="xmin,xmax,ymin,ymax")
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--curve", help="plot this curve instead of basins")
    p.add_argument("--mark", action="append", default=[], help="u,v point to mark on a curve plot")
    return parser


def _write_report(args, out: Outcome) -> None:
    data = {"command": args.command, "exit_code": out.code, **out.data}
    target = None
    if args.report:
        target = Path(args.report)
    else:
        folder = args.report_dir or os.environ.get(REPORT_DIR_ENV)
        if folder:
            target = Path(folder) / f"{args.command}-{Path(str(args.map)).stem}.json"
    if target is not None:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(data, indent=2, default=str) + "\n", encoding="utf-8")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        out = COMMANDS[args.command](args)
    except (UsageError, ParseError, UnknownVariable, MapFileError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except rmod.EmptyWindow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for ln in out.lines:
        print(ln)
    _write_report(args, out)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
