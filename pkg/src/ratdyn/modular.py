"""Reductions modulo a word-size prime, on top of ``flint.nmod_poly``.

Used where exact composition is out of reach (degrees in the thousands to
millions): raw iterates of a map restricted to a line are computed modulo a
prime ``p = 1 mod 8`` so that ``i`` and small square roots exist in ``F_p``.

Soundness: restricting a common factor ``h`` of the raw components to a line
and reducing it mod ``p`` keeps it a nonzero binary form of full degree unless
every restricted component vanishes identically mod ``p``, which we detect.
So a constant gcd of the reductions proves the raw components are coprime.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import flint

from .exact import upoly
from .exact.gaussian import GaussianRational
from .mpoly import MPoly


class BadReduction(ArithmeticError):
    pass


def _is_prime(n: int) -> bool:
    return bool(flint.fmpz(n).is_prime())


@dataclass(frozen=True)
class PrimeField:
    p: int
    i: int  # a square root of -1 mod p

    @classmethod
    def choose(cls, seed: int = 0, bits: int = 62) -> "PrimeField":
        rng = random.Random(seed)
        while True:
            n = rng.getrandbits(bits) | (1 << (bits - 1))
            n -= n % 8
            n += 1
            if _is_prime(n):
                return cls(n, _sqrt_minus_one(n, rng))

    def reduce(self, c: GaussianRational) -> int:
        a, b, d = c.parts
        if d % self.p == 0:
            raise BadReduction("denominator divisible by the prime")
        return (a + b * self.i) * pow(d, -1, self.p) % self.p

    def poly(self, coeffs) -> flint.nmod_poly:
        return flint.nmod_poly([int(c) % self.p for c in coeffs], self.p)

    def roots(self, p: upoly.UPoly) -> list[int]:
        """All roots in F_p of the reduction of ``p`` (empty if it does not split)."""
        f = flint.nmod_poly([self.reduce(c) for c in p], self.p)
        out = []
        for fac, _ in f.factor()[1]:
            if fac.degree() != 1:
                return []
            out.append(int(-fac[0] * fac[1] ** -1))
        return out


def _sqrt_minus_one(p: int, rng: random.Random) -> int:
    while True:
        g = rng.randrange(2, p - 1)
        x = pow(g, (p - 1) // 4, p)
        if x * x % p == p - 1:
            return x


def eval_mpoly(f: MPoly, values: list, field: PrimeField):
    """Evaluate ``f`` at nmod_poly (or int) values, in variable order."""
    acc = None
    powers: list[dict] = [dict() for _ in f.vars]
    for e, c in f.terms.items():
        term = None
        for k, a in enumerate(e):
            if a:
                pw = powers[k].get(a)
                if pw is None:
                    pw = values[k] ** a
                    powers[k][a] = pw
                term = pw if term is None else term * pw
        cm = field.reduce(c)
        term = field.poly([cm]) if term is None else term * cm
        acc = term if acc is None else acc + term
    return acc if acc is not None else field.poly([])


def line_values(base, direction, field: PrimeField) -> list[flint.nmod_poly]:
    return [field.poly([field.reduce(GaussianRational.coerce(b)), field.reduce(GaussianRational.coerce(d))])
            for b, d in zip(base, direction)]


def push_line(steps: list[tuple[MPoly, MPoly, MPoly]], base, direction,
              field: PrimeField) -> tuple[list[flint.nmod_poly], int]:
    """Raw components of ``steps[-1] o ... o steps[0]`` along ``base + t*direction``.

    Returns the components and the formal degree (product of step degrees).
    """
    vals = line_values(base, direction, field)
    deg = 1
    for comps in steps:
        vals = [eval_mpoly(c, vals, field) for c in comps]
        deg *= max(c.total_degree() for c in comps)
    return vals, deg


def binary_gcd_degree(polys: list[flint.nmod_poly], formal_degree: int) -> int | None:
    """Degree of the gcd of binary forms given by their dehomogenizations.

    Returns None when every form vanishes identically.
    """
    live = [q for q in polys if q.degree() >= 0]
    if not live:
        return None
    g = live[0]
    for q in live[1:]:
        g = g.gcd(q)
    at_infinity = formal_degree - max(q.degree() for q in live)
    return g.degree() + at_infinity


def coprime_on_line(steps, base, direction, field: PrimeField) -> bool | None:
    """True if the raw iterate is certified coprime; None if the reduction degenerates."""
    vals, deg = push_line(steps, base, direction, field)
    d = binary_gcd_degree(vals, deg)
    if d is None:
        return None
    return d == 0


def point_off_pushed_line(steps, base, direction, point_mod: list[int],
                          field: PrimeField) -> bool | None:
    """Whether a point (coordinates mod p) is certified off the image of a line.

    The image curve is ``steps`` applied to the line ``base + t*direction``.
    Returns True when the raw components have no common zero mod p and the
    2x2 minors against the point have none either; None if inconclusive.
    """
    vals, deg = push_line(steps, base, direction, field)
    dg = binary_gcd_degree(vals, deg)
    if dg is None or dg != 0:
        return None
    P = [x % field.p for x in point_mod]
    minors = []
    for a in range(3):
        for b in range(a + 1, 3):
            minors.append(vals[b] * P[a] - vals[a] * P[b])
    dm = binary_gcd_degree(minors, deg)
    if dm is None:
        # the whole image would be the point itself
        return False
    return dm == 0
