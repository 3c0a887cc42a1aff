"""Real-slice basin pictures and real curve plots.

Basin mode iterates ``f^period`` in double precision on normalized
homogeneous coordinates.  A pixel belongs to an attractor when its orbit
comes within ``attraction_radius`` of it (measured in the attractor's own
affine chart) while the distance is not increasing; it escapes when the
chart coordinates exceed ``escape_radius``; otherwise it is unresolved.
When an attractor lies on the chart's line at infinity, leaving the chart
is not a separate fate and the escape test is off.
Orbits through an indeterminate point are unresolved.

``classify_point_certified`` repeats the same test with outward-rounded
interval arithmetic at high precision and is used as an oracle.

PPM layout: ``b"P6\\n<width> <height>\\n255\\n"`` followed by ``width*height``
RGB triples, rows from the top of the window (largest second coordinate)
down, pixels left to right.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .curves import PlaneCurve
from .exact.gaussian import GaussianRational
from .projmap import ProjectiveMap

XYZ = ("X", "Y", "Z")
ESCAPE = -1
UNRESOLVED = -2

ESCAPE_COLOR = (255, 255, 255)
UNRESOLVED_COLOR = (128, 128, 128)
CURVE_COLOR = (0, 0, 0)
MARK_COLOR = (220, 0, 0)


class EmptyWindow(ValueError):
    pass


@dataclass(frozen=True)
class Attractor:
    name: str
    point: tuple  # homogeneous coordinates
    color: tuple[int, int, int]


PHI_ATTRACTORS = (
    Attractor("q1", (1, 0, 0), (0, 160, 0)),
    Attractor("q2", (0, 1, -1), (0, 0, 0)),
    Attractor("q3", (1, 0, -1), (128, 0, 160)),
    Attractor("q4", (0, 1, 0), (0, 64, 224)),
    Attractor("q5", (0, 0, 1), (255, 140, 0)),
)


@dataclass
class RenderConfig:
    chart: tuple[str, str, str] = ("Y", "Z", "X")  # horizontal, vertical, denominator
    window: tuple[float, float, float, float] = (-3.0, 3.0, -3.0, 3.0)  # xmin, xmax, ymin, ymax
    width: int = 800
    height: int = 800
    period: int = 4  # classify under f^period
    max_iterations: int = 500
    attraction_radius: float = 1e-6
    escape_radius: float = 1e6
    attractors: tuple[Attractor, ...] = PHI_ATTRACTORS
    seed: int = 0
    threads: int = field(default_factory=lambda: min(8, os.cpu_count() or 1))
    tile_rows: int = 100

    def validate(self) -> None:
        x0, x1, y0, y1 = self.window
        if not (x1 > x0 and y1 > y0):
            raise EmptyWindow(f"window {self.window} has zero area")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("resolution must be positive")
        if not (0 < self.attraction_radius < 1) or self.escape_radius <= 0:
            raise ValueError("radii must be positive with attraction_radius < 1")
        if sorted(self.chart) != sorted(XYZ):
            raise ValueError(f"chart must be a permutation of {XYZ}")

    def pixel_center(self, i: int, j: int) -> tuple[float, float]:
        """Chart coordinates of pixel (column i, row j), row 0 at the top."""
        x0, x1, y0, y1 = self.window
        return (x0 + (i + 0.5) * (x1 - x0) / self.width, y1 - (j + 0.5) * (y1 - y0) / self.height)

    def homogeneous(self, u, v):
        out = [None] * 3
        out[XYZ.index(self.chart[0])] = u
        out[XYZ.index(self.chart[1])] = v
        out[XYZ.index(self.chart[2])] = 1.0
        return out


# -- double precision ------------------------------------------------------------------------


def _compile(f: ProjectiveMap):
    comps = []
    real = True
    for comp in f.comps:
        terms = []
        for e, c in comp.terms.items():
            z = complex(c)
            real = real and z.imag == 0
            terms.append((e, z))
        comps.append(terms)
    if real:
        comps = [[(e, z.real) for e, z in terms] for terms in comps]
    return comps, real


def _apply(compiled, X, Y, Z):
    cache = {}

    def pw(k, a, base):
        key = (k, a)
        if key not in cache:
            cache[key] = base ** a
        return cache[key]

    bases = (X, Y, Z)
    out = []
    for terms in compiled:
        acc = None
        for e, c in terms:
            t = c
            for k, a in enumerate(e):
                if a:
                    t = t * pw(k, a, bases[k])
            acc = t if acc is None else acc + t
        out.append(acc)
    return out


def _attractor_charts(cfg: RenderConfig):
    out = []
    for a in cfg.attractors:
        q = [complex(x) for x in a.point]
        k = max(range(3), key=lambda j: abs(q[j]))
        others = [j for j in range(3) if j != k]
        out.append((k, others, [q[j] / q[k] for j in others]))
    return out


def _classify_arrays(f: ProjectiveMap, cfg: RenderConfig, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    compiled, real = _compile(f)
    dtype = np.float64 if real else np.complex128
    n = U.size
    coords = cfg.homogeneous(U.astype(dtype).ravel(), V.astype(dtype).ravel())
    X, Y, Z = (np.broadcast_to(np.asarray(c, dtype=dtype), (n,)).copy() for c in coords)
    result = np.full(n, UNRESOLVED, dtype=np.int16)
    idx = np.arange(n)
    charts = _attractor_charts(cfg)
    prev = np.full((len(charts), n), np.inf)
    kn, kv, kd = (XYZ.index(c) for c in cfg.chart)
    escape_on = not any(complex(a.point[kd]) == 0 for a in cfg.attractors)
    with np.errstate(all="ignore"):
        for it in range(cfg.max_iterations + 1):
            if it > 0:
                for _ in range(cfg.period):
                    X, Y, Z = _apply(compiled, X, Y, Z)
                    m = np.maximum(np.maximum(np.abs(X), np.abs(Y)), np.abs(Z))
                    X, Y, Z = X / m, Y / m, Z / m
                bad = ~(np.isfinite(X) & np.isfinite(Y) & np.isfinite(Z))
                if bad.any():
                    keep = ~bad
                    X, Y, Z, idx, prev = X[keep], Y[keep], Z[keep], idx[keep], prev[:, keep]
            vec = (X, Y, Z)
            done = np.zeros(idx.size, dtype=bool)
            for a, (k, others, target) in enumerate(charts):
                den = vec[k]
                ok = np.abs(den) > 1e-300
                d = np.maximum(np.abs(vec[others[0]] / den - target[0]), np.abs(vec[others[1]] / den - target[1]))
                d = np.where(ok, d, np.inf)
                hit = (d < cfg.attraction_radius) & (d <= prev[a]) & ~done
                result[idx[hit]] = a
                done |= hit
                prev[a] = d
            esc = ~done & escape_on & ((np.abs(vec[kn]) > cfg.escape_radius * np.abs(vec[kd]))
                                       | (np.abs(vec[kv]) > cfg.escape_radius * np.abs(vec[kd])))
            result[idx[esc]] = ESCAPE
            done |= esc
            if done.any():
                keep = ~done
                X, Y, Z, idx, prev = X[keep], Y[keep], Z[keep], idx[keep], prev[:, keep]
            if idx.size == 0:
                break
    return result.reshape(U.shape)


def classify_point(f: ProjectiveMap, x, cfg: RenderConfig | None = None) -> int:
    """Attractor index, ESCAPE or UNRESOLVED for a chart point ``(u, v)``
    or a homogeneous triple."""
    cfg = cfg or RenderConfig()
    if len(x) == 3:
        # express the triple in the chart when possible, else iterate it directly
        return int(_classify_triple(f, [complex(c) for c in x], cfg))
    U = np.array([[float(x[0])]])
    V = np.array([[float(x[1])]])
    return int(_classify_arrays(f, cfg, U, V)[0, 0])


def _classify_triple(f, x, cfg):
    kd = XYZ.index(cfg.chart[2])
    if x[kd] != 0:
        kn, kv = XYZ.index(cfg.chart[0]), XYZ.index(cfg.chart[1])
        u, v = x[kn] / x[kd], x[kv] / x[kd]
        if u.imag == 0 and v.imag == 0:
            return _classify_arrays(f, cfg, np.array([[u.real]]), np.array([[v.real]]))[0, 0]
    # off the chart: start one iteration in, classifying the image of the triple
    shifted = RenderConfig(**{**cfg.__dict__, "chart": _chart_for(x)})
    k = XYZ.index(shifted.chart[2])
    kn, kv = XYZ.index(shifted.chart[0]), XYZ.index(shifted.chart[1])
    u, v = x[kn] / x[k], x[kv] / x[k]
    return _classify_arrays(f, shifted, np.array([[u.real]]), np.array([[v.real]]))[0, 0]


def _chart_for(x) -> tuple[str, str, str]:
    k = max(range(3), key=lambda j: abs(x[j]))
    others = [XYZ[j] for j in range(3) if j != k]
    return (others[0], others[1], XYZ[k])


def classify_grid(f: ProjectiveMap, cfg: RenderConfig) -> np.ndarray:
    """Classification of every pixel center, shape (height, width)."""
    cfg.validate()
    x0, x1, y0, y1 = cfg.window
    us = x0 + (np.arange(cfg.width) + 0.5) * ((x1 - x0) / cfg.width)
    vs = y1 - (np.arange(cfg.height) + 0.5) * ((y1 - y0) / cfg.height)
    tiles = [(r, min(r + cfg.tile_rows, cfg.height)) for r in range(0, cfg.height, cfg.tile_rows)]

    def run(tile):
        r0, r1 = tile
        U, V = np.meshgrid(us, vs[r0:r1])
        return _classify_arrays(f, cfg, U, V)

    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            parts = list(pool.map(run, tiles))
    else:
        parts = [run(t) for t in tiles]
    return np.vstack(parts)


def _palette(cfg: RenderConfig) -> np.ndarray:
    pal = np.zeros((len(cfg.attractors) + 2, 3), dtype=np.uint8)
    for k, a in enumerate(cfg.attractors):
        pal[k] = a.color
    pal[ESCAPE] = ESCAPE_COLOR
    pal[UNRESOLVED] = UNRESOLVED_COLOR
    return pal


@dataclass
class RenderResult:
    path: Path | None
    classes: np.ndarray
    counts: dict[str, int]

    @property
    def classified_fraction(self) -> float:
        total = self.classes.size
        return 1.0 - self.counts.get("unresolved", 0) / total if total else 0.0

    def lines(self) -> list[str]:
        out = [f"{k}: {v}" for k, v in self.counts.items()]
        if "unresolved" in self.counts:
            out.append(f"classified fraction: {self.classified_fraction:.4f}")
        if self.path is not None:
            out.append(f"written: {self.path}")
        return out


def _counts(classes: np.ndarray, cfg: RenderConfig) -> dict[str, int]:
    out = {a.name: int((classes == k).sum()) for k, a in enumerate(cfg.attractors)}
    out["escape"] = int((classes == ESCAPE).sum())
    out["unresolved"] = int((classes == UNRESOLVED).sum())
    return out


def render(f: ProjectiveMap, cfg: RenderConfig, path=None) -> RenderResult:
    """Basin picture of ``f^period``; writes PPM or PNG by file suffix."""
    classes = classify_grid(f, cfg)
    rgb = _palette(cfg)[classes]
    if path is not None:
        write_image(rgb, path)
    return RenderResult(Path(path) if path is not None else None, classes, _counts(classes, cfg))


def render_curve(curve: PlaneCurve, cfg: RenderConfig, path=None, marks=()) -> RenderResult:
    """Pixels where the curve's equation changes sign across the pixel corners,
    plus small squares at the chart points ``marks``."""
    cfg.validate()
    x0, x1, y0, y1 = cfg.window
    us = x0 + np.arange(cfg.width + 1) * ((x1 - x0) / cfg.width)
    vs = y1 - np.arange(cfg.height + 1) * ((y1 - y0) / cfg.height)
    U, V = np.meshgrid(us, vs)
    scale = max(abs(complex(c)) for c in curve.equation.terms.values())
    values = np.zeros(U.shape)
    coords = cfg.homogeneous(U, V)
    coords = [np.asarray(c, dtype=np.float64) * np.ones_like(U) for c in coords]
    for e, c in curve.equation.terms.items():
        z = complex(c) / scale
        t = z.real
        for k, a in enumerate(e):
            if a:
                t = t * coords[k] ** a
        values = values + t
    sign = np.sign(values)
    corners = np.stack([sign[:-1, :-1], sign[1:, :-1], sign[:-1, 1:], sign[1:, 1:]])
    on = (corners.min(axis=0) <= 0) & (corners.max(axis=0) >= 0)
    rgb = np.full((cfg.height, cfg.width, 3), 255, dtype=np.uint8)
    rgb[on] = CURVE_COLOR
    for mu, mv in marks:
        i = int(math.floor((mu - x0) / (x1 - x0) * cfg.width))
        j = int(math.floor((y1 - mv) / (y1 - y0) * cfg.height))
        rgb[max(0, j - 2):j + 3, max(0, i - 2):i + 3] = MARK_COLOR
    if path is not None:
        write_image(rgb, path)
    classes = np.where(on, 0, ESCAPE).astype(np.int16)
    return RenderResult(Path(path) if path is not None else None, classes,
                        {"curve": int(on.sum()), "background": int((~on).sum())})


def write_image(rgb: np.ndarray, path) -> None:
    path = Path(path)
    h, w, _ = rgb.shape
    data = np.ascontiguousarray(rgb, dtype=np.uint8).tobytes()
    if path.suffix.lower() == ".png":
        from PIL import Image
        Image.frombytes("RGB", (w, h), data).save(path, format="PNG")
    else:
        with open(path, "wb") as fh:
            fh.write(f"P6\n{w} {h}\n255\n".encode("ascii") + data)


def read_ppm(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    parts = raw.split(b"\n", 3)
    if parts[0] != b"P6" or parts[2] != b"255":
        raise ValueError("not a binary PPM written by this module")
    w, h = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w, 3)


# -- certified oracle ----------------------------------------------------------------------
#
# Real intervals as integer pairs (lo, hi) meaning [lo, hi] * 2^-P, with every
# operation rounded outward.  This is the certified counterpart of the double
# precision classifier for real maps on the real slice.


UNDECIDED = -3


class NotApplicable(ValueError):
    pass


def _iv(q, P):
    from fractions import Fraction
    q = Fraction(q)
    n, d = q.numerator << P, q.denominator
    return (n // d, -((-n) // d))


def _iadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _imul(a, b, P):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps) >> P, -((-max(ps)) >> P))


def _idiv(a, b, P):
    if b[0] <= 0 <= b[1]:
        raise ZeroDivisionError
    qs = []
    for x in a:
        for y in b:
            qs.append(((x << P) // y, -((-(x << P)) // y)))
    return (min(q[0] for q in qs), max(q[1] for q in qs))


def _iabs(a):
    lo, hi = a
    if lo >= 0:
        return (lo, hi)
    if hi <= 0:
        return (-hi, -lo)
    return (0, max(-lo, hi))


def classify_point_certified(f: ProjectiveMap, x, cfg: RenderConfig | None = None, prec: int = 512,
                             max_width: float = 1e-30) -> int:
    """The same classification with outward-rounded intervals from an exact start.

    Returns UNDECIDED when the enclosure gets too wide to separate the tests
    or the normalizing coordinate may vanish (as at an indeterminate point).
    """
    from fractions import Fraction
    cfg = cfg or RenderConfig()
    P = prec
    comps = []
    for comp in f.comps:
        terms = []
        for e, c in comp.terms.items():
            c = GaussianRational.coerce(c)
            if not c.is_real():
                raise NotApplicable("the certified classifier handles real maps only")
            terms.append((e, _iv(c.re, P)))
        comps.append(terms)
    box = [_iv(Fraction(v), P) for v in cfg.homogeneous(x[0], x[1])]
    charts = []
    for a in cfg.attractors:
        q = [Fraction(c) for c in a.point]
        k = max(range(3), key=lambda j: abs(q[j]))
        others = [j for j in range(3) if j != k]
        charts.append((k, others, [_iv(q[j] / q[k], P) for j in others]))
    kn, kv, kd = (XYZ.index(c) for c in cfg.chart)
    escape_on = not any(Fraction(a.point[kd]) == 0 for a in cfg.attractors)
    rad = _iv(Fraction(cfg.attraction_radius), P)[1]
    big = _iv(Fraction(cfg.escape_radius), P)[0]
    wmax = _iv(Fraction(max_width), P)[0]
    prev = [None] * len(charts)
    for it in range(cfg.max_iterations + 1):
        if it > 0:
            for _ in range(cfg.period):
                box = [_ieval(terms, box, P) for terms in comps]
                piv = max(range(3), key=lambda j: abs(box[j][0] + box[j][1]))
                try:
                    box = [_idiv(b, box[piv], P) for b in box]
                except ZeroDivisionError:
                    return UNDECIDED
                if max(b[1] - b[0] for b in box) > wmax:
                    return UNDECIDED
        for a, (k, others, target) in enumerate(charts):
            try:
                ds = [_iabs(_iadd(_idiv(box[j], box[k], P), (-t[1], -t[0]))) for j, t in zip(others, target)]
            except ZeroDivisionError:
                prev[a] = None
                continue
            d_lo, d_hi = max(d[0] for d in ds), max(d[1] for d in ds)
            p_lo = prev[a][0] if prev[a] is not None else None
            if d_hi < rad and (p_lo is None or d_hi <= p_lo):
                return a
            if d_lo < rad and (d_hi >= rad or (p_lo is not None and d_lo <= p_lo < d_hi)):
                return UNDECIDED
            prev[a] = (d_lo, d_hi)
        if escape_on:
            try:
                m = max(_iabs(_idiv(box[kn], box[kd], P))[0], _iabs(_idiv(box[kv], box[kd], P))[0])
            except ZeroDivisionError:
                continue
            if m > big:
                return ESCAPE
    return UNRESOLVED


def _ieval(terms, box, P):
    acc = (0, 0)
    for e, c in terms:
        t = c
        for k, a in enumerate(e):
            for _ in range(a):
                t = _imul(t, box[k], P)
        acc = _iadd(acc, t)
    return acc
