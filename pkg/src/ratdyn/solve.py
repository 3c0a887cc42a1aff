"""Exact solving of zero-dimensional systems of ternary forms.

After a random integral change of coordinates ``(X, Y, Z) = M (u, v, w)``
that puts no solution on ``w = 0`` and separates the ``u``-coordinates, the
``u``-values of the affine solutions are roots of the gcd of two resultants
in ``v``.  For each root ``theta`` the matching ``v`` is the unique root of
the gcd over ``Q(i)(theta)`` of the equations specialised at ``theta``; the
arithmetic there uses dynamic evaluation (zero tests decide which factor of
the modulus ``theta`` is a root of).  Every returned point is checked by
exact substitution.
"""

from __future__ import annotations

import random

from .exact import upoly
from .exact.algebraic import AlgebraicNumber, FieldElement, NumberField
from .exact.gaussian import GaussianRational, ZERO, ONE
from .exact.linalg import det
from .exact.roots import gaussian_roots, isolate_roots, START_BITS
from .mpoly import MPoly, gcd_list, resultant, substitute

_c = GaussianRational.coerce


class PositiveDimensionalIntersection(ArithmeticError):
    pass


class SolverFailure(ArithmeticError):
    pass


# -- univariate polynomials over a number field (lists, low degree first) --------


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, FieldElement) else _c(x).is_zero()


def ftrim(p: list) -> list:
    p = list(p)
    while p and _is_zero(p[-1]):
        p.pop()
    return p


def fdivmod(a: list, b: list) -> tuple[list, list]:
    b = ftrim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    r = ftrim(a)
    inv = 1 / b[-1] if isinstance(b[-1], FieldElement) else _c(b[-1]).inverse()
    db = len(b) - 1
    q = [ZERO] * max(0, len(r) - db)
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        f = r[-1] * inv
        q[k] = f
        for j in range(db + 1):
            r[k + j] = r[k + j] - f * b[j]
        r.pop()
        r = ftrim(r)
    return q, r


def fgcd(a: list, b: list) -> list:
    a, b = ftrim(a), ftrim(b)
    while b:
        a, b = b, fdivmod(a, b)[1]
    if not a:
        return a
    inv = 1 / a[-1] if isinstance(a[-1], FieldElement) else _c(a[-1]).inverse()
    return [c * inv for c in a]


def fderiv(a: list) -> list:
    return ftrim([a[k] * k for k in range(1, len(a))])


def fsquarefree(a: list) -> list:
    a = fgcd(a, a)
    if len(a) <= 2:
        return a
    d = fgcd(a, fderiv(a))
    if len(d) <= 1:
        return a
    return fgcd(fdivmod(a, d)[0], [])


# -- the solver --------------------------------------------------------------------


def _random_matrix(rng: random.Random) -> list[list[int]]:
    while True:
        m = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)]
        if not det(m).is_zero():
            return m


def _coefficient_list(p: MPoly, name: str, theta) -> list:
    """Coefficients in ``name`` of ``p(u=theta)`` (p is bivariate in u and name)."""
    out = []
    for c in p.coefficients_in(name):
        if c.is_zero():
            out.append(ZERO)
            continue
        cu = c.to_upoly("u") if c.used_vars() else upoly.make([c.constant_value()])
        if isinstance(theta, FieldElement):
            acc = theta.field.element(())
            for k in reversed(cu):
                acc = acc * theta + k
            out.append(acc)
        else:
            out.append(upoly.evaluate(cu, theta))
    return out


def _has_root_at_infinity(forms: list[MPoly]) -> bool:
    # common zero of the binary forms h(u, v, 0)
    binary = [substitute(f, {"w": 0}) for f in forms]
    binary = [b for b in binary if not b.is_zero()]
    if not binary:
        return True
    # [1:0:0]
    if all(b.evaluate({"u": ONE, "v": ZERO}).is_zero() for b in binary):
        return True
    g: upoly.UPoly = ()
    for b in binary:
        bu = substitute(b, {"v": 1})
        q = bu.to_upoly("u") if bu.used_vars() else upoly.make([bu.constant_value()])
        g = upoly.gcd(g, q) if g else upoly.monic(q)
        if len(g) == 1:
            return False
    return len(g) > 1


def solve_projective(eqs: list[MPoly], seed: int = 0, max_tries: int = 12) -> list:
    """All common zeros in P^2 of ternary forms in X, Y, Z, as ProjectivePoints."""
    return [P for P, _ in solve_with_multiplicity(eqs, seed, max_tries)]


def solve_with_multiplicity(eqs: list[MPoly], seed: int = 0, max_tries: int = 12) -> list:
    """Like :func:`solve_projective`, paired with the multiplicity of each solution's
    coordinate as a root of the eliminant (1 for a simple solution)."""
    from .projmap import ProjectivePoint  # circular at import time

    eqs = [e.with_vars(("X", "Y", "Z")) for e in eqs if not e.is_zero()]
    if not eqs:
        raise PositiveDimensionalIntersection("all equations vanish")
    if len(eqs) == 1:
        if eqs[0].is_constant():
            return []
        raise PositiveDimensionalIntersection("a single equation defines a curve")
    g = gcd_list(eqs)
    if not g.is_constant():
        raise PositiveDimensionalIntersection(f"equations share the factor {g}")
    rng = random.Random(seed)
    U, V, W = (MPoly.var(n, ("u", "v", "w")) for n in ("u", "v", "w"))
    for _ in range(max_tries):
        M = _random_matrix(rng)
        sub = {"X": U * M[0][0] + V * M[0][1] + W * M[0][2],
               "Y": U * M[1][0] + V * M[1][1] + W * M[1][2],
               "Z": U * M[2][0] + V * M[2][1] + W * M[2][2]}
        G = [substitute(e, sub).with_vars(("u", "v", "w")) for e in eqs]
        if len(G) == 2:
            H = G
        else:
            H = []
            for _k in range(3):
                acc = G[0] * rng.randint(1, 9)
                for gk in G[1:]:
                    acc = acc + gk * rng.randint(-9, 9)
                H.append(acc)
        if _has_root_at_infinity(H):
            continue
        h = [substitute(x, {"w": 1}).with_vars(("u", "v")) for x in H]
        if any(x.degree_in("v") <= 0 for x in h):
            continue
        R: upoly.UPoly = ()
        degenerate = False
        for a, b in ((0, 1), (0, 2)) if len(h) > 2 else ((0, 1),):
            r = resultant(h[a], h[b], "v")
            if r.is_zero():
                degenerate = True
                break
            ru = r.to_upoly("u") if r.used_vars() else upoly.make([r.constant_value()])
            R = upoly.gcd(R, ru) if R else upoly.monic(ru)
        if degenerate:
            continue
        if len(R) == 1:
            return []
        full = R
        R = upoly.squarefree(R)
        points = _solve_over_roots(R, h)
        if points is None:
            continue
        out = []
        for (uu, vv) in points:
            xyz = [uu * M[k][0] + vv * M[k][1] + M[k][2] for k in range(3)]
            P = ProjectivePoint(xyz)
            if not all(_is_zero(v) for v in P.evaluate_forms(eqs)):
                raise SolverFailure("back-substitution failed")
            out.append((P, _root_multiplicity(full, uu)))
        return out
    raise SolverFailure("no generic coordinate change found")


def _solve_over_roots(R: upoly.UPoly, h: list[MPoly]):
    """``[(u, v)]`` for each root u of R carrying a solution, or None to reseed."""
    out = []
    rational = gaussian_roots(R)
    rest = R
    for r in rational:
        rest = upoly.exquo(rest, upoly.make([-r, 1]))
    thetas: list = list(rational)
    if len(rest) > 1:
        for box in isolate_roots(rest, START_BITS):
            field = NumberField(AlgebraicNumber(rest, box, START_BITS))
            thetas.append(field.theta)
    for theta in thetas:
        g: list = []
        for x in h:
            cl = ftrim(_coefficient_list(x, "v", theta))
            g = fgcd(g, cl) if g else fgcd(cl, cl)
            if len(g) == 1:
                break
        if len(g) <= 1:
            continue  # spurious u-value
        g = fsquarefree(g)
        if len(g) != 2:
            return None
        v = -g[0]  # g is monic
        out.append((theta, v))
    return out


def _root_multiplicity(R: upoly.UPoly, theta) -> int:
    m = 0
    while len(R) > 1:
        if isinstance(theta, FieldElement):
            acc = theta.field.element(())
            for k in reversed(R):
                acc = acc * theta + k
            zero = acc.is_zero()
        else:
            zero = upoly.evaluate(R, theta).is_zero()
        if not zero:
            break
        m += 1
        R = upoly.deriv(R)
    return max(m, 1)
