"""Sparse multivariate polynomials over Q(i).

An :class:`MPoly` is a tuple of variable names and a dict from exponent
tuples to nonzero :class:`GaussianRational` coefficients.  Operations on two
polynomials first unify their variables by name, so ``X + Y`` works without
declaring a ring up front.

The gcd is the classical recursive one (contents plus primitive pseudo
remainder sequences).  Before running it we try a cheap certificate of
coprimality: restrict both polynomials to a random line whose direction does
not kill the top form of ``p``.  A common factor ``h`` would survive that
restriction with its full degree, so a constant univariate gcd proves
``gcd(p, q) = 1``.
"""

from __future__ import annotations

import random
from typing import Iterable, Mapping

from .exact import upoly
from .exact.gaussian import GaussianRational, ZERO, ONE
from .exact.roots import gaussian_roots

_c = GaussianRational.coerce

Exp = tuple  # tuple[int, ...]


class DegenerateInput(ValueError):
    pass


class ZeroInput(ValueError):
    pass


class InexactDivision(ArithmeticError):
    pass


def _grlex(e: Exp):
    return (sum(e), e)


class MPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, variables: Iterable[str], terms: Mapping[Exp, object] | None = None):
        self.vars = tuple(variables)
        clean = {}
        if terms:
            n = len(self.vars)
            for e, c in terms.items():
                c = _c(c)
                if c.is_zero():
                    continue
                e = tuple(e)
                if len(e) != n:
                    raise ValueError("exponent length does not match variables")
                clean[e] = c
        self.terms = clean

    # -- construction ----------------------------------------------------
    @classmethod
    def _make(cls, variables: tuple, terms: dict) -> "MPoly":
        # trusted: terms already clean
        obj = object.__new__(cls)
        obj.vars = variables
        obj.terms = terms
        return obj

    @classmethod
    def const(cls, c, variables: Iterable[str] = ()) -> "MPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Iterable[str] | None = None) -> "MPoly":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            variables = variables + (name,)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls._make(variables, {tuple(e): ONE})

    @classmethod
    def coerce(cls, x, variables: tuple = ()) -> "MPoly":
        if isinstance(x, MPoly):
            return x
        return cls.const(x, variables)

    # -- basic queries ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), ZERO)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if name not in self.vars:
            return 0 if self.terms else -1
        k = self.vars.index(name)
        if not self.terms:
            return -1
        return max(e[k] for e in self.terms)

    def used_vars(self) -> tuple[str, ...]:
        used = set()
        for e in self.terms:
            for k, a in enumerate(e):
                if a:
                    used.add(k)
        return tuple(self.vars[k] for k in sorted(used))

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def leading_term(self) -> tuple[Exp, GaussianRational]:
        if not self.terms:
            raise ZeroInput("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex)
        return e, self.terms[e]

    def lc(self) -> GaussianRational:
        return self.leading_term()[1]

    def sorted_terms(self) -> list[tuple[Exp, GaussianRational]]:
        return sorted(self.terms.items(), key=lambda t: _grlex(t[0]), reverse=True)

    # -- variable management -----------------------------------------------
    def with_vars(self, variables: Iterable[str]) -> "MPoly":
        """Re-express over ``variables`` (a superset of the used variables)."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        idx = []
        for k, v in enumerate(self.vars):
            if v in variables:
                idx.append(variables.index(v))
            else:
                idx.append(None)
        n = len(variables)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for k, a in enumerate(e):
                if a:
                    j = idx[k]
                    if j is None:
                        raise ValueError(f"variable {self.vars[k]} is used but not kept")
                    ne[j] = a
            out[tuple(ne)] = c
        return MPoly._make(variables, out)

    def drop_unused(self) -> "MPoly":
        used = set(self.used_vars())
        return self.with_vars(v for v in self.vars if v in used)

    # -- arithmetic ------------------------------------------------------
    def _pair(self, other) -> tuple["MPoly", "MPoly"]:
        if not isinstance(other, MPoly):
            other = MPoly.const(other, self.vars)
        if other.vars == self.vars:
            return self, other
        merged = self.vars + tuple(v for v in other.vars if v not in self.vars)
        return self.with_vars(merged), other.with_vars(merged)

    def __add__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return MPoly._make(a.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._make(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            try:
                c = _c(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        a, b = self._pair(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out: dict = {}
        bt = list(b.terms.items())
        for e1, c1 in a.terms.items():
            for e2, c2 in bt:
                e = tuple(x + y for x, y in zip(e1, e2))
                prod = c1 * c2
                s = out.get(e)
                out[e] = prod if s is None else s + prod
        return MPoly._make(a.vars, {e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def scale(self, c) -> "MPoly":
        c = _c(c)
        if c.is_zero():
            return MPoly._make(self.vars, {})
        if c.is_one():
            return self
        return MPoly._make(self.vars, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, MPoly):
            if other.is_constant():
                return self.scale(other.constant_value().inverse())
            return exquo(self, other)
        return self.scale(_c(other).inverse())

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            try:
                other = MPoly.const(other, self.vars)
            except TypeError:
                return NotImplemented
        a, b = self._pair(other)
        return a.terms == b.terms

    def __hash__(self):
        p = self.drop_unused()
        return hash((p.vars, frozenset(p.terms.items())))

    # -- calculus and evaluation --------------------------------------------
    def derivative(self, name: str) -> "MPoly":
        if name not in self.vars:
            return MPoly._make(self.vars, {})
        k = self.vars.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = c * e[k]
        return MPoly._make(self.vars, out)

    def evaluate(self, values):
        """Evaluate at ``values`` (a mapping by name or a sequence in variable order).

        Values may be any ring elements that multiply and add with
        GaussianRational (field elements, MPoly, intervals wrapped suitably).
        """
        vals = self._value_list(values)
        powers = [dict() for _ in self.vars]
        acc = None
        for e, c in self.terms.items():
            term = c
            for k, a in enumerate(e):
                if a:
                    pw = powers[k].get(a)
                    if pw is None:
                        pw = vals[k] ** a if a > 1 else vals[k]
                        powers[k][a] = pw
                    term = pw * term
            acc = term if acc is None else acc + term
        if acc is None:
            return ZERO
        return acc

    def _value_list(self, values):
        if isinstance(values, Mapping):
            return [values[v] if v in values else None for v in self.vars]
        vals = list(values)
        if len(vals) != len(self.vars):
            raise ValueError("wrong number of values")
        return vals

    def to_upoly(self, name: str | None = None) -> upoly.UPoly:
        """Coefficients in the single used variable (or ``name``), low degree first."""
        used = self.used_vars()
        if name is None:
            if len(used) > 1:
                raise ValueError("polynomial is not univariate")
            name = used[0] if used else (self.vars[0] if self.vars else "x")
        elif any(v != name for v in used):
            raise ValueError("polynomial involves other variables")
        if not self.terms:
            return ()
        if name not in self.vars:
            return upoly.make([self.constant_value()])
        k = self.vars.index(name)
        coeffs = [ZERO] * (self.degree_in(name) + 1)
        for e, c in self.terms.items():
            coeffs[e[k]] = c
        return upoly.make(coeffs)

    @classmethod
    def from_upoly(cls, p: upoly.UPoly, name: str, variables: Iterable[str] | None = None) -> "MPoly":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            variables = variables + (name,)
        k = variables.index(name)
        out = {}
        for d, c in enumerate(p):
            if not c.is_zero():
                e = [0] * len(variables)
                e[k] = d
                out[tuple(e)] = c
        return cls._make(variables, out)

    def coefficients_in(self, name: str) -> list["MPoly"]:
        """Coefficients as polynomials in the other variables, low degree first."""
        if name not in self.vars:
            return [self] if self.terms else []
        k = self.vars.index(name)
        d = self.degree_in(name)
        buckets: list[dict] = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            ne = list(e)
            ne[k] = 0
            buckets[e[k]][tuple(ne)] = c
        return [MPoly._make(self.vars, b) for b in buckets]

    def monic(self) -> "MPoly":
        if not self.terms:
            return self
        return self.scale(self.lc().inverse())

    def homogenize(self, name: str) -> "MPoly":
        d = self.total_degree()
        p = self if name in self.vars else self.with_vars(self.vars + (name,))
        k = p.vars.index(name)
        out = {}
        for e, c in p.terms.items():
            ne = list(e)
            ne[k] += d - sum(e)
            out[tuple(ne)] = c
        return MPoly._make(p.vars, out)

    # -- text --------------------------------------------------------------
    def __str__(self):
        return to_str(self)

    def __repr__(self):
        return f"MPoly({to_str(self)!r}, vars={self.vars})"


def const_like(p: MPoly, c) -> MPoly:
    return MPoly.const(c, p.vars)


def variables(names: str | Iterable[str]) -> list[MPoly]:
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    names = tuple(names)
    return [MPoly.var(n, names) for n in names]


# -- serialization -----------------------------------------------------------


def coeff_str(c: GaussianRational) -> str:
    a, b, d = c.parts
    if b == 0:
        body = str(a)
    elif a == 0:
        body = "i" if b == 1 else "-i" if b == -1 else f"{b}*i"
    else:
        ib = "i" if abs(b) == 1 else f"{abs(b)}*i"
        body = f"({a}{'+' if b > 0 else '-'}{ib})"
    if d != 1:
        if b != 0 and a == 0:
            body = f"({body})"
        return f"{body}/{d}"
    return body


def monomial_str(e: Exp, names: tuple) -> str:
    parts = []
    for v, a in zip(names, e):
        if a == 1:
            parts.append(v)
        elif a > 1:
            parts.append(f"{v}^{a}")
    return "*".join(parts)


def to_str(p: MPoly) -> str:
    """Canonical text (terms in decreasing graded-lex order); reparses exactly."""
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms():
        m = monomial_str(e, p.vars)
        if not m:
            s = coeff_str(c)
        elif c.is_one():
            s = m
        elif c == -ONE:
            s = "-" + m
        else:
            s = f"{coeff_str(c)}*{m}"
        if out:
            out.append(f" - {s[1:]}" if s.startswith("-") else f" + {s}")
        else:
            out.append(s)
    return "".join(out)


# -- division ----------------------------------------------------------------


def exquo(p: MPoly, q: MPoly) -> MPoly:
    """Exact quotient ``p / q``; raises InexactDivision if ``q`` does not divide ``p``."""
    p, q = p._pair(q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if q.is_constant():
        return p.scale(q.constant_value().inverse())
    # divide recursively in the leading variable of q: keeps remainders small
    name = next(v for v in p.vars if q.degree_in(v) > 0)
    return _exquo_rec(p, q, name)


def _exquo_rec(p: MPoly, q: MPoly, name: str) -> MPoly:
    if p.is_zero():
        return p
    dq = q.degree_in(name)
    qc = q.coefficients_in(name)
    lq = qc[-1]
    k = p.vars.index(name)
    xpow = lambda j: MPoly._make(p.vars, {tuple(j if i == k else 0 for i in range(len(p.vars))): ONE})
    quot = MPoly._make(p.vars, {})
    r = p
    while not r.is_zero():
        dr = r.degree_in(name)
        if dr < dq:
            raise InexactDivision("polynomial does not divide")
        lr = r.coefficients_in(name)[-1]
        if lq.is_constant():
            t = lr.scale(lq.constant_value().inverse())
        else:
            rest = next((v for v in p.vars if v != name and lq.degree_in(v) > 0), None)
            t = _exquo_rec(lr, lq, rest)
        t = t * xpow(dr - dq)
        quot = quot + t
        r = r - t * q
    return quot


def divides(q: MPoly, p: MPoly) -> bool:
    try:
        exquo(p, q)
        return True
    except InexactDivision:
        return False


def prem(a: MPoly, b: MPoly, name: str) -> MPoly:
    """Pseudo-remainder of ``a`` by ``b`` in ``name``: lc(b)^(da-db+1) a mod b."""
    a, b = a._pair(b)
    db = b.degree_in(name)
    da = a.degree_in(name)
    if db < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    if da < db:
        return a
    bc = b.coefficients_in(name)
    lb = bc[-1]
    k = a.vars.index(name) if name in a.vars else None
    r = a
    e = da - db + 1
    while not r.is_zero() and r.degree_in(name) >= db:
        dr = r.degree_in(name)
        lr = r.coefficients_in(name)[-1]
        shift = [0] * len(a.vars)
        if k is not None:
            shift[k] = dr - db
        xs = MPoly._make(a.vars, {tuple(shift): ONE})
        r = r * lb - lr * xs * b
        e -= 1
    return r * (lb ** e) if e > 0 else r


# -- gcd -----------------------------------------------------------------------


_rng = random.Random(20240611)


def _line_restriction(p: MPoly, base, direction) -> upoly.UPoly:
    # p(base + t * direction) as a univariate polynomial in t
    vals = [upoly.make([b, d]) for b, d in zip(base, direction)]
    acc: upoly.UPoly = ()
    powers: list[dict] = [dict() for _ in p.vars]
    for e, c in p.terms.items():
        term: upoly.UPoly = (c,)
        for k, a in enumerate(e):
            if a:
                pw = powers[k].get(a)
                if pw is None:
                    pw = upoly.power(vals[k], a)
                    powers[k][a] = pw
                term = upoly.mul(term, pw)
        acc = upoly.add(acc, term)
    return acc


def _top_form(p: MPoly) -> MPoly:
    d = p.total_degree()
    return MPoly._make(p.vars, {e: c for e, c in p.terms.items() if sum(e) == d})


def coprime_certificate(p: MPoly, q: MPoly, tries: int = 3) -> bool:
    """True only if ``gcd(p, q) = 1`` is proven by a line restriction."""
    p, q = p._pair(q)
    n = len(p.vars)
    top = _top_form(p)
    for _ in range(tries):
        direction = [_c(_rng.randint(-97, 97)) for _ in range(n)]
        if top.evaluate(direction).is_zero():
            continue
        base = [_c(_rng.randint(-97, 97)) for _ in range(n)]
        rp = _line_restriction(p, base, direction)
        rq = _line_restriction(q, base, direction)
        if not rq:
            continue
        if len(upoly.gcd(rp, rq)) == 1:
            return True
    return False


def gcd(p: MPoly, q: MPoly) -> MPoly:
    """Greatest common divisor, normalized to graded-lex leading coefficient 1."""
    p, q = p._pair(q)
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    if p.is_constant() or q.is_constant():
        return MPoly.const(1, p.vars)
    used_p, used_q = set(p.used_vars()), set(q.used_vars())
    common = [v for v in p.vars if v in used_p and v in used_q]
    if not common:
        # a common factor would involve only shared variables
        return MPoly.const(1, p.vars)
    if len(used_p | used_q) == 1:
        name = common[0]
        return MPoly.from_upoly(upoly.gcd(p.to_upoly(name), q.to_upoly(name)), name, p.vars)
    if coprime_certificate(p, q):
        return MPoly.const(1, p.vars)
    name = min(common, key=lambda v: (max(p.degree_in(v), q.degree_in(v)), p.vars.index(v)))
    return _gcd_rec(p, q, name).monic()


def content(p: MPoly, name: str) -> MPoly:
    g = None
    for c in reversed(p.coefficients_in(name)):
        if c.is_zero():
            continue
        g = c.monic() if g is None else gcd(g, c)
        if g.is_constant():
            return MPoly.const(1, p.vars)
    return g if g is not None else MPoly.const(1, p.vars)


def primitive_part(p: MPoly, name: str) -> MPoly:
    c = content(p, name)
    return p if c.is_constant() else exquo(p, c)


def _gcd_rec(p: MPoly, q: MPoly, name: str) -> MPoly:
    cp, cq = content(p, name), content(q, name)
    c = gcd(cp, cq)
    a = p if cp.is_constant() else exquo(p, cp)
    b = q if cq.is_constant() else exquo(q, cq)
    if a.degree_in(name) == 0 or b.degree_in(name) == 0:
        return c
    if a.degree_in(name) < b.degree_in(name):
        a, b = b, a
    while True:
        r = prem(a, b, name)
        if r.is_zero():
            g = primitive_part(b, name)
            break
        if r.degree_in(name) == 0:
            g = MPoly.const(1, p.vars)
            break
        a, b = b, primitive_part(r, name)
    return c * g


def gcd_list(polys: Iterable[MPoly]) -> MPoly:
    g = None
    for p in polys:
        g = p if g is None else gcd(g, p)
        if g is not None and g.is_constant() and not g.is_zero():
            return g.monic()
    if g is None:
        raise ZeroInput("gcd of an empty list")
    return g.monic()


# -- resultants ----------------------------------------------------------------


def resultant(p: MPoly, q: MPoly, name: str) -> MPoly:
    """Sylvester resultant in ``name`` via the subresultant PRS."""
    a, b = p._pair(q)
    if a.is_zero() or b.is_zero():
        raise DegenerateInput("resultant with the zero polynomial")
    if name not in a.vars:
        a = a.with_vars(a.vars + (name,))
        b = b.with_vars(a.vars)
    da, db = a.degree_in(name), b.degree_in(name)
    s = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 and db % 2:
            s = -s
    if db == 0:
        return b ** da
    g = MPoly.const(1, a.vars)
    h = MPoly.const(1, a.vars)
    while True:
        da, db = a.degree_in(name), b.degree_in(name)
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = prem(a, b, name)
        if r.is_zero():
            return MPoly._make(a.vars, {})
        a = b
        b = exquo(r, g * h ** delta)
        g = a.coefficients_in(name)[-1]
        if delta > 0:
            h = exquo(g ** delta, h ** (delta - 1)) if delta > 1 else g
        if b.degree_in(name) == 0:
            dA = a.degree_in(name)
            if dA == 0:
                return b.scale(s)
            res = exquo(b ** dA, h ** (dA - 1)) if dA > 1 else b
            return res.scale(s)


# -- factor structure ------------------------------------------------------------


def squarefree(p: MPoly) -> MPoly:
    """Product of the distinct irreducible factors, graded-lex monic."""
    if p.is_zero():
        raise ZeroInput("squarefree part of zero")
    if p.is_constant():
        return MPoly.const(1, p.vars)
    g = p
    for v in p.used_vars():
        g = gcd(g, p.derivative(v))
        if g.is_constant():
            return p.monic()
    return exquo(p, g).monic()


def squarefree_decomposition(p: MPoly) -> list[tuple[MPoly, int]]:
    """``[(s_k, k)]`` with ``p = c * prod s_k^k`` and the ``s_k`` squarefree, coprime."""
    if p.is_zero():
        raise ZeroInput("squarefree decomposition of zero")
    out = []
    k = 1
    rest = p
    while not rest.is_constant():
        s = squarefree(rest)
        rest = exquo(rest, s)
        # factors of multiplicity exactly k are those of s not dividing rest
        exact = exquo(s, gcd(s, rest))
        if not exact.is_constant():
            out.append((exact.monic(), k))
        k += 1
    return out


def lowest_degree_form(p: MPoly) -> tuple[int, MPoly]:
    if p.is_zero():
        raise ZeroInput("lowest degree form of zero")
    d = min(sum(e) for e in p.terms)
    return d, MPoly._make(p.vars, {e: c for e, c in p.terms.items() if sum(e) == d})


def substitute(p: MPoly, bindings: Mapping[str, object]) -> MPoly:
    """Replace variables by polynomials or scalars; other variables stay."""
    extra = []
    for v in bindings.values():
        if isinstance(v, MPoly):
            extra.extend(x for x in v.vars if x not in extra)
    keep = [v for v in p.vars if v not in bindings]
    names = tuple(keep + [x for x in extra if x not in keep])
    vals = []
    for v in p.vars:
        if v in bindings:
            b = bindings[v]
            vals.append(b.with_vars(names) if isinstance(b, MPoly) else MPoly.const(b, names))
        else:
            vals.append(MPoly.var(v, names))
    if not p.terms:
        return MPoly._make(names, {})
    r = p.evaluate(vals)
    return r if isinstance(r, MPoly) else MPoly.const(r, names)


def _binary_linear_factors(f: MPoly, x: str, y: str) -> list[tuple[GaussianRational, GaussianRational]]:
    """Distinct linear factors ``a*x + b*y`` of a binary form over Q(i), as (a, b)."""
    fx = substitute(f, {y: 1}).to_upoly(x) if f.degree_in(x) > 0 else upoly.make([f.lc()])
    out = []
    if len(fx) - 1 < f.total_degree():
        out.append((ZERO, ONE))  # y divides f
    for r in gaussian_roots(fx):
        out.append((ONE, -r))
    return out


def linear_factors(p: MPoly) -> tuple[list[MPoly], MPoly]:
    """All linear forms over Q(i) dividing homogeneous ``p`` (with multiplicity) and the cofactor.

    Linear forms are graded-lex monic.  Only two or three variables are
    supported, which covers every plane curve in scope.
    """
    if not p.is_homogeneous():
        raise ValueError("linear_factors needs a homogeneous polynomial")
    if p.is_zero():
        raise ZeroInput("linear factors of zero")
    names = p.vars
    if len(names) not in (2, 3):
        raise ValueError("linear_factors supports binary and ternary forms")
    found: list[MPoly] = []
    rest = p

    def strip(lin: MPoly):
        nonlocal rest
        lin = lin.monic()
        while rest.total_degree() > 0:
            try:
                rest = exquo(rest, lin)
            except InexactDivision:
                break
            found.append(lin)

    if len(names) == 2:
        x, y = names
        for a, b in _binary_linear_factors(rest, x, y):
            strip(MPoly.var(x, names) * a + MPoly.var(y, names) * b)
        return found, rest
    x, y, z = names
    X, Y, Z = (MPoly.var(n, names) for n in names)
    strip(Z)
    if rest.total_degree() <= 0:
        return found, rest
    base = substitute(rest, {z: 0}).with_vars(names)
    for a, b in _binary_linear_factors(base, x, y):
        # candidate a*x + b*y + c*z; on it, solve for c by forcing p to vanish
        c = MPoly.var("_c")
        if a.is_zero():
            sub = {y: -c * MPoly.var(z), x: 1}
        else:
            sub = {x: (-c * MPoly.var(z) - b) * a.inverse(), y: 1}
        q = substitute(rest, sub)
        coeffs = [k for k in q.coefficients_in(z) if not k.is_zero()]
        h: upoly.UPoly = ()
        for k in coeffs:
            h = upoly.gcd(h, k.to_upoly("_c")) if h else upoly.monic(k.to_upoly("_c"))
        if len(h) < 2:
            continue
        for cv in gaussian_roots(h):
            strip(X * a + Y * b + Z * cv)
    return found, rest
