"""Sparse multivariate polynomials with exact rational coefficients.

Coefficients are gmpy2.mpq throughout (arbitrary precision, always reduced,
positive denominator).  A polynomial lives in a VarContext, an ordered list
of variable names optionally split into blocks (used by the block
elimination orders).  Monomials are exponent tuples, one entry per context
variable; the zero polynomial is the empty term dict.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Mapping

from gmpy2 import mpq, mpz

QZERO = mpq(0)
QONE = mpq(1)


MPQ_TYPE = type(mpq(0))


def Q(x) -> mpq:
    """Coerce ints, strings like '3/4' or mpq to mpq."""
    if isinstance(x, MPQ_TYPE):
        return x
    return mpq(x)


class PolyError(Exception):
    pass


class ContextMismatch(PolyError):
    pass


class NotAFactor(PolyError):
    """Raised by exact division when the remainder is nonzero."""


class VarContext:
    """An ordered set of variable names, partitioned into contiguous blocks."""

    __slots__ = ("names", "blocks", "_index")

    def __init__(self, names: Iterable[str], blocks: Iterable[int] | None = None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise PolyError("duplicate variable names: %r" % (self.names,))
        if blocks is None:
            self.blocks = (len(self.names),)
        else:
            self.blocks = tuple(blocks)
            if sum(self.blocks) != len(self.names) or any(b <= 0 for b in self.blocks):
                raise PolyError("blocks %r do not partition %d names" % (self.blocks, len(self.names)))
        self._index = {n: i for i, n in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VarContext) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return "VarContext(%s)" % ",".join(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PolyError("unknown variable %r in context %r" % (name, self.names))

    def __contains__(self, name):
        return name in self._index

    def extend(self, names: Iterable[str], position: int | None = None) -> "VarContext":
        """New context with extra names inserted at `position` (default: end)."""
        names = tuple(names)
        if position is None:
            position = len(self.names)
        new = self.names[:position] + names + self.names[position:]
        return VarContext(new)

    def drop(self, names: Iterable[str]) -> "VarContext":
        gone = set(names)
        return VarContext(n for n in self.names if n not in gone)

    def variable(self, name: str) -> "MultiPoly":
        e = [0] * len(self.names)
        e[self.index(name)] = 1
        return MultiPoly(self, {tuple(e): QONE})

    def variables(self) -> list["MultiPoly"]:
        return [self.variable(n) for n in self.names]

    def constant(self, c) -> "MultiPoly":
        c = Q(c)
        if c == 0:
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * len(self.names): c})

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.constant(1)


# ---------------------------------------------------------------------------
# monomial orders


class MonomialOrder:
    """Total multiplicative order on exponent tuples, exposed as a sort key.

    Larger key = larger monomial.  kind is one of 'lex', 'grevlex' or
    'block'; block orders compare block by block (eliminated block first).
    """

    def __init__(self, kind: str, key, describe: str):
        self.kind = kind
        self.key = key
        self.describe = describe

    def __repr__(self):
        return "MonomialOrder(%s)" % self.describe


def lex_order() -> MonomialOrder:
    return MonomialOrder("lex", lambda e: e, "lex")


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def grevlex_order() -> MonomialOrder:
    return MonomialOrder("grevlex", _grevlex_key, "grevlex")


def block_order(split: int, inner_first: MonomialOrder | None = None,
                inner_second: MonomialOrder | None = None) -> MonomialOrder:
    """Elimination order: variables before `split` dominate the rest."""
    k1 = (inner_first or grevlex_order()).key
    k2 = (inner_second or grevlex_order()).key

    def key(e):
        return (k1(e[:split]), k2(e[split:]))

    return MonomialOrder("block", key, "block(%d)" % split)


# ---------------------------------------------------------------------------
# polynomials


class MultiPoly:
    """Immutable sparse polynomial: dict {exponent tuple: nonzero mpq}."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: VarContext, terms: Mapping[tuple, mpq]):
        self.ctx = ctx
        self.terms = {m: c for m, c in terms.items() if c != 0}

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self) -> mpq:
        if self.is_zero():
            return QZERO
        if not self.is_constant():
            raise PolyError("not a constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.ctx.index(name)
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def support_names(self) -> set:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.ctx.names[i])
        return used

    def num_terms(self) -> int:
        return len(self.terms)

    def sorted_terms(self, order: MonomialOrder | None = None):
        """Terms as [(monomial, coeff)] strictly decreasing under `order`."""
        key = (order or lex_order()).key
        return [(m, self.terms[m]) for m in sorted(self.terms, key=key, reverse=True)]

    def leading_term(self, order: MonomialOrder | None = None):
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        key = (order or lex_order()).key
        m = max(self.terms, key=key)
        return m, self.terms[m]

    # -- ring operations ----------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.ctx != other.ctx:
            raise ContextMismatch("%r vs %r" % (self.ctx, other.ctx))

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, (int, type(QONE))):
            other = self.ctx.constant(other)
        self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m)
            if v is None:
                t[m] = c
            else:
                v = v + c
                if v:
                    t[m] = v
                else:
                    del t[m]
        return MultiPoly(self.ctx, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, type(QONE))):
            other = self.ctx.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, type(QONE))):
            c = Q(other)
            if c == 0:
                return self.ctx.zero()
            return MultiPoly(self.ctx, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                v = out.get(m)
                if v is None:
                    out[m] = c1 * c2
                else:
                    v = v + c1 * c2
                    if v:
                        out[m] = v
                    else:
                        del out[m]
        return MultiPoly(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise PolyError("negative power")
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def scale(self, c) -> "MultiPoly":
        return self * Q(c)

    # -- division -----------------------------------------------------------

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient self/other; raises NotAFactor if remainder nonzero."""
        self._check(other)
        if other.is_zero():
            raise PolyError("division by zero polynomial")
        if other.is_constant():
            return self * (QONE / other.constant_value())
        order = grevlex_order()
        key = order.key
        lm, lc = other.leading_term(order)
        rem = dict(self.terms)
        quo = {}
        while rem:
            m = max(rem, key=key)
            c = rem[m]
            d = tuple(x - y for x, y in zip(m, lm))
            if any(x < 0 for x in d):
                raise NotAFactor("division left a nonzero remainder")
            q = c / lc
            quo[d] = quo.get(d, QZERO) + q
            for m2, c2 in other.terms.items():
                mm = tuple(x + y for x, y in zip(d, m2))
                v = rem.get(mm, QZERO) - q * c2
                if v:
                    rem[mm] = v
                else:
                    rem.pop(mm, None)
        return MultiPoly(self.ctx, quo)

    def divides(self, other: "MultiPoly") -> bool:
        try:
            other.exact_div(self)
            return True
        except NotAFactor:
            return False

    def pseudo_divmod(self, other: "MultiPoly", name: str):
        """Pseudo-division in the variable `name`: lc(g)^k * f = q*g + r."""
        self._check(other)
        i = self.ctx.index(name)
        dg = other.degree_in(name)
        if dg < 0:
            raise PolyError("pseudo-division by zero")
        lc_g = other.coefficient_in(name, dg)
        q = self.ctx.zero()
        r = self
        x = self.ctx.variable(name)
        while not r.is_zero() and r.degree_in(name) >= dg:
            dr = r.degree_in(name)
            lc_r = r.coefficient_in(name, dr)
            t = lc_r * x ** (dr - dg)
            q = q * lc_g + t
            r = r * lc_g - t * other
        return q, r

    def coefficient_in(self, name: str, power: int) -> "MultiPoly":
        """Coefficient of name**power, a polynomial in the other variables
        (kept in the same context with exponent 0 at `name`)."""
        i = self.ctx.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[i] == power:
                mm = m[:i] + (0,) + m[i + 1:]
                out[mm] = out.get(mm, QZERO) + c
        return MultiPoly(self.ctx, out)

    # -- calculus / substitution -------------------------------------------

    def diff(self, name: str) -> "MultiPoly":
        i = self.ctx.index(name)
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1:]
                out[mm] = out.get(mm, QZERO) + c * e
        return MultiPoly(self.ctx, out)

    def specialize(self, assignment: Mapping[str, object]) -> "MultiPoly":
        """Substitute rational values for some variables; the context shrinks
        to the remaining variables."""
        idx = {self.ctx.index(n): Q(v) for n, v in assignment.items()}
        keep = [i for i in range(len(self.ctx)) if i not in idx]
        newctx = VarContext(self.ctx.names[i] for i in keep)
        out = {}
        for m, c in self.terms.items():
            for i, v in idx.items():
                e = m[i]
                if e:
                    c = c * v ** e
            if c == 0:
                continue
            mm = tuple(m[i] for i in keep)
            out[mm] = out.get(mm, QZERO) + c
        return MultiPoly(newctx, out)

    def eval(self, assignment: Mapping[str, object]) -> mpq:
        """Full evaluation at a rational point."""
        r = self.specialize({n: assignment[n] for n in self.ctx.names})
        return r.constant_value()

    def subs_poly(self, name: str, value: "MultiPoly") -> "MultiPoly":
        """Substitute a polynomial (same context) for one variable."""
        self._check(value)
        i = self.ctx.index(name)
        d = self.degree_in(name)
        if d <= 0:
            return self
        # Horner in the substituted variable
        coeffs = [self.coefficient_in(name, k) for k in range(d + 1)]
        acc = coeffs[d]
        for k in range(d - 1, -1, -1):
            acc = acc * value + coeffs[k]
        return acc

    def in_context(self, newctx: VarContext) -> "MultiPoly":
        """Re-express in a context that contains all used variables."""
        mapping = []
        for i, n in enumerate(self.ctx.names):
            if n in newctx:
                mapping.append(newctx.index(n))
            else:
                mapping.append(None)
        out = {}
        width = len(newctx)
        for m, c in self.terms.items():
            mm = [0] * width
            for i, e in enumerate(m):
                if e:
                    j = mapping[i]
                    if j is None:
                        raise PolyError("variable %r not in target context" % self.ctx.names[i])
                    mm[j] = e
            mm = tuple(mm)
            out[mm] = out.get(mm, QZERO) + c
        return MultiPoly(newctx, out)

    # -- normal forms -------------------------------------------------------

    def content(self) -> mpq:
        """Rational content: positive c with self/c primitive over ZZ."""
        if not self.terms:
            return QZERO
        num = mpz(0)
        den = mpz(1)
        for c in self.terms.values():
            num = math.gcd(int(num), int(c.numerator))
            den = den * c.denominator // math.gcd(int(den), int(c.denominator))
        return mpq(num, den)

    def primitive(self) -> "MultiPoly":
        """Primitive part with positive leading coefficient under lex."""
        if self.is_zero():
            return self
        c = self.content()
        p = self * (QONE / c)
        _, lc = p.leading_term(lex_order())
        if lc < 0:
            p = -p
        return p

    def equals_up_to_constant(self, other: "MultiPoly") -> bool:
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.primitive() == other.primitive()

    # -- text grammar -------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return "MultiPoly(%s)" % format_poly(self)


# ---------------------------------------------------------------------------
# text grammar: terms joined by +/-, term = coefficient and '*'-separated
# var^exp factors, e.g. "3*y1^2*G2 - 1/2".


def format_poly(p: MultiPoly, order: MonomialOrder | None = None) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i, (m, c) in enumerate(p.sorted_terms(order)):
        factors = []
        for j, e in enumerate(m):
            if e == 1:
                factors.append(p.ctx.names[j])
            elif e > 1:
                factors.append("%s^%d" % (p.ctx.names[j], e))
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if not factors:
            body = str(c)
        elif c == 1:
            body = "*".join(factors)
        else:
            body = str(c) + "*" + "*".join(factors)
        if i == 0:
            parts.append(body if sign == "+" else "-" + body)
        else:
            parts.append(" %s %s" % (sign, body))
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
                    r"|(?P<op>[\^*+-]))")


def parse_poly(text: str, ctx: VarContext) -> MultiPoly:
    """Parse the polynomial text grammar; round-trips format_poly bit-exactly."""
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise PolyError("parse error at position %d in %r" % (pos, text))
        pos = m.end()
        if m.group("num") is not None:
            tokens.append(("num", mpq(m.group("num"))))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))

    result = ctx.zero()
    i = 0
    n = len(tokens)
    while i < n:
        sign = QONE
        while i < n and tokens[i] == ("op", "+") or i < n and tokens[i] == ("op", "-"):
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise PolyError("dangling sign in %r" % text)
        coeff = QONE
        exps = [0] * len(ctx)
        expect_factor = True
        while i < n and expect_factor:
            kind, val = tokens[i]
            if kind == "num":
                coeff *= val
                i += 1
            elif kind == "name":
                j = ctx.index(val)
                i += 1
                e = 1
                if i < n and tokens[i] == ("op", "^"):
                    i += 1
                    if i >= n or tokens[i][0] != "num" or tokens[i][1].denominator != 1:
                        raise PolyError("bad exponent in %r" % text)
                    e = int(tokens[i][1])
                    i += 1
                exps[j] += e
            else:
                raise PolyError("unexpected token in %r" % text)
            if i < n and tokens[i] == ("op", "*"):
                i += 1
                expect_factor = True
            else:
                expect_factor = False
        result = result + MultiPoly(ctx, {tuple(exps): sign * coeff})
    return result


# ---------------------------------------------------------------------------
# gcd and squarefree part


def _poly_gcd_univ(f: MultiPoly, g: MultiPoly, name: str) -> MultiPoly:
    """gcd of two polynomials, both nonzero, recursing on variable `name`
    via the primitive subresultant-style PRS."""
    cf, pf = _content_primitive(f, name)
    cg, pg = _content_primitive(g, name)
    cont = poly_gcd(cf, cg)
    if pf.degree_in(name) < pg.degree_in(name):
        pf, pg = pg, pf
    while True:
        if pg.is_zero():
            res = pf
            break
        if pg.degree_in(name) == 0:
            res = f.ctx.one()
            break
        _, r = pf.pseudo_divmod(pg, name)
        pf, pg = pg, (r if r.is_zero() else _content_primitive(r, name)[1])
    res = _content_primitive(res, name)[1] if not res.is_constant() else f.ctx.one()
    return (cont * res).primitive()


def _content_primitive(f: MultiPoly, name: str):
    """Split f = content * primitive w.r.t. the variable `name`; content is
    the gcd of the coefficients (polynomials in the other variables)."""
    d = f.degree_in(name)
    coeffs = [f.coefficient_in(name, k) for k in range(d + 1)]
    coeffs = [c for c in coeffs if not c.is_zero()]
    cont = coeffs[0]
    for c in coeffs[1:]:
        if cont.is_constant():
            break
        cont = poly_gcd(cont, c)
    cont = cont.primitive()
    return cont, f.exact_div(cont)


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Multivariate gcd over QQ, normalized primitive with positive lex lc."""
    if f.is_zero():
        return g.primitive()
    if g.is_zero():
        return f.primitive()
    if f.is_constant() or g.is_constant():
        return f.ctx.one()
    used = f.support_names() & g.support_names()
    if not used:
        return f.ctx.one()
    # recurse on the used variable of smallest combined degree
    name = min(used, key=lambda n: f.degree_in(n) + g.degree_in(n))
    return _poly_gcd_univ(f, g, name)


def squarefree_part(p: MultiPoly) -> MultiPoly:
    """Product of the distinct irreducible factors of p, normalized primitive
    with positive lex leading coefficient."""
    if p.is_zero():
        raise PolyError("squarefree part of zero")
    p = p.primitive()
    if p.is_constant():
        return p.ctx.one()
    g = p
    for n in sorted(p.support_names()):
        d = p.diff(n)
        if not d.is_zero():
            g = poly_gcd(g, d)
        if g.is_constant():
            break
    return p.exact_div(g).primitive()


# resultant() lives in matrix.py (Sylvester matrix + fraction-free Bareiss).
