"""Buchberger Groebner engine with elimination orders and saturation.

The engine works on term lists sorted under an additive order key (a flat
integer tuple; key(m1*m2) = key(m1) + key(m2) componentwise), with monic
reducers, Gebauer-Moller pair elimination and sugar pair selection.  Every
public entry point takes and returns MultiPoly.

eliminate() first applies a linear presolve: generators of the form
c*v + r with c a nonzero rational and v an eliminated variable absent from
r are used to substitute v away.  This is an ideal-preserving change of
generators (a triangular ring isomorphism), so elimination ideals in the
kept variables are unchanged; it is what makes the 12-variable incidence
systems tractable without an F4/F5 engine.
"""

from __future__ import annotations

import heapq
from collections import Counter
from math import gcd as igcd, isqrt
from typing import Iterable, Sequence

from gmpy2 import gcd as _zgcd, lcm as _zlcm, mpq, mpz, next_prime

from .poly import (MultiPoly, MonomialOrder, PolyError, Q, QONE, QZERO,
                   VarContext, grevlex_order, lex_order, poly_gcd)

DEFAULT_BUDGET = 10 ** 7


class BudgetExceeded(PolyError):
    """A Groebner run exceeded its reduction-step budget."""

    def __init__(self, steps, context=""):
        super().__init__("budget of %d reduction steps exceeded %s" % (steps, context))
        self.steps = steps


# ---------------------------------------------------------------------------
# order keys (flat additive integer tuples)


def _lex_key_fn(n):
    return lambda e: e


def _grevlex_key_fn(n):
    def key(e):
        return (sum(e),) + tuple(-x for x in reversed(e))
    return key


def order_key_fn(ctx: VarContext, order: MonomialOrder):
    """Additive flat key for the supported order kinds."""
    n = len(ctx)
    if order.kind == "lex":
        return _lex_key_fn(n)
    if order.kind == "grevlex":
        return _grevlex_key_fn(n)
    return order.key  # block orders built by elimination_key are additive


def elimination_key(ctx: VarContext, elim_names: Iterable[str]):
    """Additive key for the block order: grevlex on the eliminated variables,
    then grevlex on the kept ones."""
    elim = sorted(ctx.index(v) for v in elim_names)
    keep = [i for i in range(len(ctx)) if i not in set(elim)]

    def key(e):
        a = tuple(e[i] for i in elim)
        b = tuple(e[i] for i in keep)
        return ((sum(a),) + tuple(-x for x in reversed(a))
                + (sum(b),) + tuple(-x for x in reversed(b)))

    return key


def elimination_order(ctx: VarContext, elim_names: Iterable[str]) -> MonomialOrder:
    return MonomialOrder("block", elimination_key(ctx, elim_names),
                         "elim(%s)" % ",".join(sorted(elim_names)))


# ---------------------------------------------------------------------------
# term-list helpers; a term is (key, monomial, coeff), lists sorted by key desc


def _to_terms(p: MultiPoly, key):
    ts = [(key(m), m, c) for m, c in p.terms.items()]
    ts.sort(key=lambda t: t[0], reverse=True)
    return ts


def _from_terms(ctx, terms) -> MultiPoly:
    return MultiPoly(ctx, {m: c for _, m, c in terms})


class _Coeffs:
    """Coefficient arithmetic for the term engine: exact rationals, or a
    prime field for the modular elimination pipeline."""

    __slots__ = ("p", "one", "mul", "add", "neg", "inv", "rescale")

    def __init__(self, p=None):
        self.p = p
        if p is None:
            self.one = QONE
            self.mul = lambda a, b: a * b
            self.add = lambda a, b: a + b
            self.neg = lambda a: -a
            self.inv = lambda a: QONE / a
            self.rescale = True
        else:
            self.one = 1
            self.mul = lambda a, b: a * b % p
            self.add = lambda a, b: (a + b) % p
            self.neg = lambda a: -a % p
            self.inv = lambda a: pow(a, -1, p)
            self.rescale = False


_QQ = _Coeffs()


def _monic(terms, F=_QQ):
    if not terms:
        return terms
    lc = terms[0][2]
    if lc == F.one:
        return terms
    inv = F.inv(lc)
    mul = F.mul
    return [(k, m, mul(c, inv)) for k, m, c in terms]


def _content_scale(*lists):
    """Positive rational s such that s * (all coefficients) are coprime
    integers, or None when they already are."""
    den = mpz(1)
    num = mpz(0)
    for terms in lists:
        for _, _, c in terms:
            den = _zlcm(den, c.denominator)
    for terms in lists:
        for _, _, c in terms:
            num = _zgcd(num, c.numerator * (den // c.denominator))
            if num == 1 and den == 1:
                return None
    if not num:
        return None
    s = mpq(den, num)
    return None if s == 1 else s


def _primitive_rescale(terms):
    """Scale a term list by a positive rational so the coefficients become
    coprime integers.

    Monic reduction accumulates rational scalings whose numerators and
    denominators mostly cancel; without this the coefficient bit sizes grow
    linearly in the number of reduction steps and dominate the runtime.
    Only sound where the result is needed up to a nonzero scalar (s-poly
    normal forms, basis interreduction) -- not in the public normal form.
    """
    s = _content_scale(terms)
    if s is None:
        return terms
    return [(k, m, c * s) for k, m, c in terms]


def _mon_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _key_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mon_divides(a, b):
    """a | b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def _mon_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _axpy(f, fi, g, gi, coeff, dmon, dkey, F=_QQ):
    """Merge f[fi:] + coeff * x^dmon * g[gi:], both inputs sorted desc."""
    mul, add = F.mul, F.add
    out = []
    i, j = fi, gi
    nf, ng = len(f), len(g)
    while i < nf and j < ng:
        kf = f[i][0]
        kg = _key_add(g[j][0], dkey)
        if kf > kg:
            out.append(f[i])
            i += 1
        elif kf < kg:
            out.append((kg, _mon_mul(g[j][1], dmon), mul(coeff, g[j][2])))
            j += 1
        else:
            c = add(f[i][2], mul(coeff, g[j][2]))
            if c:
                out.append((kf, f[i][1], c))
            i += 1
            j += 1
    out.extend(f[i:])
    for k in range(j, ng):
        out.append((_key_add(g[k][0], dkey), _mon_mul(g[k][1], dmon),
                    mul(coeff, g[k][2])))
    return out


class _Budget:
    __slots__ = ("left", "total")

    def __init__(self, total):
        self.total = total
        self.left = total

    def tick(self, n=1):
        self.left -= n
        if self.left < 0:
            raise BudgetExceeded(self.total)


def _normal_form_terms(f, basis, budget, sugar=None, basis_sugar=None,
                       rescale=False, F=_QQ):
    """Full normal form of term list f modulo the monic basis entries.

    basis: list of (lm, terms).  Returns (reduced term list, sugar).
    With rescale=True the result (and intermediates) are kept primitive,
    i.e. correct only up to a positive rational factor.
    """
    out = []
    work = f
    wi = 0
    steps = 0
    while wi < len(work):
        k0, m0, c0 = work[wi]
        hit = None
        for bi, (lm, terms) in enumerate(basis):
            if _mon_divides(lm, m0):
                hit = bi
                break
        if hit is None:
            out.append(work[wi])
            wi += 1
            continue
        budget.tick()
        lm, terms = basis[hit]
        dmon = tuple(x - y for x, y in zip(m0, lm))
        dkey = tuple(x - y for x, y in zip(k0, terms[0][0]))
        if sugar is not None and basis_sugar is not None:
            sugar = max(sugar, basis_sugar[hit] + sum(dmon))
        work = _axpy(work, wi + 1, terms, 1, F.neg(c0), dmon, dkey, F)
        steps += 1
        if rescale and steps % 8 == 0 and work:
            s = _content_scale(out, work)
            if s is not None:
                out = [(k, m, c * s) for k, m, c in out]
                work = [(k, m, c * s) for k, m, c in work]
        wi = 0
    if rescale:
        out = _primitive_rescale(out)
    return out, sugar


def _spoly(e1, e2, key, F=_QQ):
    lm1, t1, s1 = e1
    lm2, t2, s2 = e2
    lcm = _mon_lcm(lm1, lm2)
    d1 = tuple(x - y for x, y in zip(lcm, lm1))
    d2 = tuple(x - y for x, y in zip(lcm, lm2))
    k1 = key(d1)
    k2 = key(d2)
    # monic inputs: spoly = x^d1 f1 - x^d2 f2; heads cancel
    shifted1 = [(_key_add(k, k1), _mon_mul(m, d1), c) for k, m, c in t1[1:]]
    shifted2 = [(_key_add(k, k2), _mon_mul(m, d2), c) for k, m, c in t2[1:]]
    s = _axpy(shifted1, 0, [(None, None, None)] + shifted2, 1, F.neg(F.one),
              (0,) * len(lm1), (0,) * len(k1), F)
    sugar = max(s1 + sum(d1), s2 + sum(d2))
    return s, sugar


def _buchberger_terms(inputs, key, budget, F=_QQ):
    """Reduced Groebner basis of the monic term lists `inputs`.

    Returns list of term lists, monic, sorted by leading key ascending.
    """
    width = None
    polys = []
    for t in inputs:
        if t:
            polys.append(_monic(t, F))
            width = len(t[0][1])
    if not polys:
        return []
    # entries: (lm, terms, sugar)
    entries = []
    pair_heap = []
    pairs = set()

    def lcm_of(i, j):
        return _mon_lcm(entries[i][0], entries[j][0])

    def add_pair(i, j, sugar_hint=None):
        if i > j:
            i, j = j, i
        lcm = lcm_of(i, j)
        s = max(entries[i][2] + sum(x - y for x, y in zip(lcm, entries[i][0])),
                entries[j][2] + sum(x - y for x, y in zip(lcm, entries[j][0])))
        heapq.heappush(pair_heap, (s, key(lcm), i, j))
        pairs.add((i, j))

    alive = []  # indices of current basis elements used as reducers

    def update(h_terms, h_sugar):
        """Gebauer-Moller update with the new element h."""
        h_idx = len(entries)
        lm_h = h_terms[0][1]
        # criterion pruning for new pairs
        cand = [g for g in alive]
        keep_new = []
        for g in cand:
            lcm_hg = _mon_lcm(lm_h, entries[g][0])
            keep_new.append((g, lcm_hg))
        # B-criterion: drop old pairs whose lcm is a proper multiple of lm_h
        dead_pairs = []
        for (i, j) in pairs:
            lcm_ij = lcm_of(i, j)
            if (_mon_divides(lm_h, lcm_ij)
                    and lcm_ij != _mon_lcm(entries[i][0], lm_h)
                    and lcm_ij != _mon_lcm(entries[j][0], lm_h)):
                dead_pairs.append((i, j))
        for p in dead_pairs:
            pairs.discard(p)
        # M-criterion among the new pairs: keep minimal lcms only
        keep_new.sort(key=lambda t: sum(t[1]))
        minimal = []
        for g, lcm_hg in keep_new:
            if any(_mon_divides(l2, lcm_hg) and l2 != lcm_hg for _, l2 in minimal):
                continue
            minimal.append((g, lcm_hg))
        # F-criterion: among equal lcms keep one
        seen = {}
        for g, lcm_hg in minimal:
            seen.setdefault(lcm_hg, g)
        # coprimality (product) criterion
        entries.append((lm_h, h_terms, h_sugar))
        for lcm_hg, g in sorted(seen.items(), key=lambda kv: (kv[1],)):
            if _mon_mul(lm_h, entries[g][0]) == lcm_hg:
                continue
            add_pair(g, h_idx)
        # drop reducers with leading monomial divisible by lm_h
        alive[:] = [g for g in alive if not _mon_divides(lm_h, entries[g][0])]
        alive.append(h_idx)

    for t in sorted(polys, key=lambda t: t[0][0]):
        basis = [(entries[g][0], entries[g][1]) for g in alive]
        red, _ = _normal_form_terms(t, basis, budget, rescale=F.rescale, F=F)
        if red:
            update(_monic(red, F), sum(red[0][1]))

    while pairs:
        while True:
            s, lk, i, j = heapq.heappop(pair_heap)
            if (i, j) in pairs:
                break
        pairs.discard((i, j))
        sp, sp_sugar = _spoly((entries[i][0], entries[i][1], entries[i][2]),
                              (entries[j][0], entries[j][1], entries[j][2]),
                              key, F)
        if not sp:
            continue
        basis = [(entries[g][0], entries[g][1]) for g in alive]
        sugars = [entries[g][2] for g in alive]
        red, red_sugar = _normal_form_terms(sp, basis, budget, sp_sugar, sugars,
                                            rescale=F.rescale, F=F)
        if red:
            update(_monic(red, F), red_sugar)

    # inter-reduce the final basis
    final = [entries[g][1] for g in alive]
    final.sort(key=lambda t: t[0][0])
    reduced = []
    for idx, t in enumerate(final):
        others = [(u[0][1], u) for k, u in enumerate(final) if k != idx and u]
        red, _ = _normal_form_terms(t, others, budget, rescale=F.rescale, F=F)
        final[idx] = _monic(red, F) if red else []
    return sorted([t for t in final if t], key=lambda t: t[0][0])


# ---------------------------------------------------------------------------
# public API


class IdealBasis:
    """A generator set for an ideal, optionally a certified Groebner basis."""

    def __init__(self, generators: Sequence[MultiPoly], order: MonomialOrder,
                 is_groebner: bool = False):
        self.generators = list(generators)
        self.order = order
        self.is_groebner = is_groebner

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def is_trivial(self) -> bool:
        """True when the basis is {1} (the whole ring)."""
        return len(self.generators) == 1 and self.generators[0].is_constant() \
            and not self.generators[0].is_zero()


def groebner_basis(polys: Sequence[MultiPoly], order: MonomialOrder | None = None,
                   budget: int = DEFAULT_BUDGET) -> IdealBasis:
    """Reduced Groebner basis; deterministic for fixed input and order."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        raise PolyError("empty generator list")
    ctx = polys[0].ctx
    order = order or grevlex_order()
    key = order_key_fn(ctx, order)
    b = _Budget(budget)
    basis_terms = _buchberger_terms([_to_terms(p, key) for p in polys], key, b)
    gens = [_from_terms(ctx, t).primitive() for t in basis_terms]
    if not gens:
        gens = [ctx.zero()]
    return IdealBasis(gens, order, is_groebner=True)


def is_zero_dimensional(basis: IdealBasis) -> bool:
    """Finite staircase test: for every variable some leading monomial of the
    Groebner basis is a pure power of it."""
    if not basis.is_groebner:
        raise PolyError("needs a certified Groebner basis")
    if basis.is_trivial():
        return True
    ctx = basis.generators[0].ctx
    key = order_key_fn(ctx, basis.order)
    lms = [max(g.terms, key=key) for g in basis.generators if not g.is_zero()]
    for i in range(len(ctx)):
        if not any(m[i] > 0 and all(e == 0 for j, e in enumerate(m) if j != i)
                   for m in lms):
            return False
    return True


def normal_form(p: MultiPoly, basis: IdealBasis, budget: int = DEFAULT_BUDGET) -> MultiPoly:
    if not basis.is_groebner:
        raise PolyError("normal form needs a certified Groebner basis")
    ctx = p.ctx
    key = order_key_fn(ctx, basis.order)
    reducers = []
    for g in basis.generators:
        t = _monic(_to_terms(g, key))
        reducers.append((t[0][1], t))
    red, _ = _normal_form_terms(_to_terms(p, key), reducers, _Budget(budget))
    return _from_terms(ctx, red)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    key = order_key_fn(f.ctx, order)
    tf = _monic(_to_terms(f, key))
    tg = _monic(_to_terms(g, key))
    s, _ = _spoly((tf[0][1], tf, 0), (tg[0][1], tg, 0), key)
    return _from_terms(f.ctx, s)


def presolve_linear(polys: Sequence[MultiPoly], elim_names: Iterable[str]):
    """Substitute away eliminated variables that occur linearly with a
    nonzero rational coefficient in some generator.

    Returns (remaining generators, substitutions) where substitutions maps a
    variable name to the polynomial it was replaced with.
    """
    gens = [p for p in polys if not p.is_zero()]
    elim = set(elim_names)
    subs = {}
    changed = True
    while changed:
        changed = False
        for gi, g in enumerate(gens):
            for v in sorted(g.support_names() & elim):
                if g.degree_in(v) != 1:
                    continue
                cv = g.coefficient_in(v, 1)
                if not cv.is_constant():
                    continue
                c = cv.constant_value()
                rest = g - g.ctx.variable(v) * c
                value = rest * (-QONE / c)
                new = []
                for gj, h in enumerate(gens):
                    if gj == gi:
                        continue
                    h2 = h.subs_poly(v, value)
                    if not h2.is_zero():
                        new.append(h2)
                for name in list(subs):
                    subs[name] = subs[name].subs_poly(v, value)
                subs[v] = value
                elim.discard(v)
                gens = new
                changed = True
                break
            if changed:
                break
    return gens, subs


def eliminate(polys: Sequence[MultiPoly], keep: Iterable[str],
              budget: int = DEFAULT_BUDGET, presolve: bool = True) -> list:
    """Generators of <polys> intersected with QQ[keep], via a block
    elimination order.  Output polynomials live in the keep-only context."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    ctx = polys[0].ctx
    keep = list(keep)
    for v in keep:
        ctx.index(v)
    elim = [n for n in ctx.names if n not in set(keep)]
    if presolve:
        polys, _ = presolve_linear(polys, elim)
        if not polys:
            return []
    if len(keep) == 1:
        # the elimination ideal is principal: find its generator as the
        # first linear dependence among normal forms of powers of the kept
        # variable (no elimination order needed)
        q = univariate_eliminant(polys, keep[0], budget=budget, presolve=False)
        if q is not None:
            out_ctx = VarContext(keep)
            return [] if q.is_zero() else [q.in_context(out_ctx)]
    order = elimination_order(ctx, elim)
    basis = groebner_basis(polys, order, budget=budget)
    keep_set = set(keep)
    out_ctx = VarContext([n for n in ctx.names if n in keep_set])
    out = []
    for g in basis.generators:
        if g.support_names() <= keep_set:
            out.append(g.in_context(out_ctx))
    return out


def univariate_eliminant(polys: Sequence[MultiPoly], var: str,
                         budget: int = DEFAULT_BUDGET, max_power: int = 64,
                         presolve: bool = True):
    """Generator of <polys> intersected with QQ[var], in the one-variable
    context.

    A univariate p(var) lies in the ideal iff the normal forms of
    1, var, var^2, ... against any Groebner basis are linearly dependent
    with p's coefficients; the first dependence gives the minimal-degree
    generator.  No elimination order and no zero-dimensionality needed.

    Returns the one() polynomial when the ideal is trivial, the zero
    polynomial when the elimination ideal is provably zero, and None when
    undecided within max_power Krylov steps (caller should fall back to a
    block-order elimination).
    """
    polys = [p for p in polys if not p.is_zero()]
    out_ctx = VarContext([var])
    if not polys:
        return out_ctx.zero()
    ctx = polys[0].ctx
    ctx.index(var)
    if presolve:
        polys, _ = presolve_linear(polys, [n for n in ctx.names if n != var])
        if not polys:
            return out_ctx.zero()
    try:
        return _univariate_eliminant_modular(polys, var, budget=budget,
                                             max_power=max_power)
    except InconsistentSpecialization:
        # prime images unstable: fall through to the exact computation, with
        # a tighter budget (exact reduction steps are orders of magnitude
        # more expensive than the modular ones)
        budget = min(budget, 50000)
    basis = groebner_basis(polys, grevlex_order(), budget=budget)
    if basis.is_trivial():
        return out_ctx.one()
    key = order_key_fn(ctx, basis.order)
    vi = ctx.index(var)
    # nonzero elimination ideal iff some leading monomial is a pure power
    # of var (the leading monomial of any univariate polynomial in var)
    if not any((lambda lm: lm[vi] > 0
                and all(e == 0 for j, e in enumerate(lm) if j != vi))(
                    max(g.terms, key=key))
               for g in basis.generators):
        return out_ctx.zero()
    x = ctx.variable(var)
    rows = []              # (pivot monomial, reduced row, power combination)
    cur = ctx.one()
    for k in range(max_power + 1):
        curnf = normal_form(cur, basis, budget=budget)
        v = dict(curnf.terms)
        combo = {k: QONE}
        for pm, rd, cb in rows:
            c = v.get(pm)
            if c:
                for m2, c2 in rd.items():
                    nv = v.get(m2, QZERO) - c * c2
                    if nv:
                        v[m2] = nv
                    else:
                        v.pop(m2, None)
                for d2, c2 in cb.items():
                    combo[d2] = combo.get(d2, QZERO) - c * c2
        if not v:
            acc = out_ctx.zero()
            xo = out_ctx.variable(var)
            for d, c in sorted(combo.items()):
                if c:
                    acc = acc + xo ** d * c
            return acc.primitive()
        pm = max(v, key=key)
        c = v[pm]
        rows.append((pm, {m: cc / c for m, cc in v.items()},
                     {d: cc / c for d, cc in combo.items()}))
        cur = curnf * x
    return None


# ---------------------------------------------------------------------------
# modular elimination: the same Krylov construction over word-size prime
# fields, glued back together by CRT and rational reconstruction.  This is
# what makes the saturated rank-stratum systems feasible: their Groebner
# runs over QQ hit intermediate coefficients of 10^5..10^6 bits, while the
# mod-p runs stay word-size throughout.


def _prime_stream():
    """Deterministic stream of 62-bit primes."""
    p = mpz(2) ** 62
    while True:
        p = next_prime(p)
        yield int(p)


def _terms_mod_p(poly, key, prime):
    """Term list of poly with coefficients in GF(prime), or None when a
    denominator vanishes mod prime (the prime is unusable)."""
    ts = []
    for m, c in poly.terms.items():
        d = int(c.denominator) % prime
        if d == 0:
            return None
        v = int(c.numerator) % prime * pow(d, -1, prime) % prime
        if v:
            ts.append((key(m), m, v))
    ts.sort(key=lambda t: t[0], reverse=True)
    return ts


def _eliminant_mod_p(polys, var, prime, budget, max_power):
    """Monic dense coefficient vector (low to high) of the generator of
    <polys mod prime> intersected with GF(prime)[var].

    Returns "one" for the trivial ideal, "zero" when the elimination ideal
    vanishes, "bad" when the prime is unusable, and None when no linear
    dependence shows up within max_power Krylov steps.
    """
    ctx = polys[0].ctx
    F = _Coeffs(prime)
    key = _grevlex_key_fn(len(ctx))
    inputs = []
    for p0 in polys:
        t = _terms_mod_p(p0, key, prime)
        if t is None:
            return "bad"
        if t:
            inputs.append(t)
    if len(inputs) < len(polys):
        return "bad"  # a generator collapsed mod prime
    gens = _buchberger_terms(inputs, key, _Budget(budget), F)
    if gens and all(e == 0 for e in gens[0][0][1]):
        return "one"
    vi = ctx.index(var)
    # the elimination ideal in GF(prime)[var] is nonzero iff some leading
    # monomial is a pure power of var (a univariate polynomial's leading
    # monomial is its top power under every order)
    if not any(g[0][1][vi] > 0
               and all(e == 0 for j, e in enumerate(g[0][1]) if j != vi)
               for g in gens):
        return "zero"
    basis = [(g[0][1], g) for g in gens]
    bud = _Budget(budget)
    nvars = len(ctx)
    evar = tuple(1 if i == vi else 0 for i in range(nvars))
    kvar = key(evar)
    rows = []               # (pivot monomial, reduced row, power combination)
    one_mon = (0,) * nvars
    cur = [(key(one_mon), one_mon, 1)]
    for k in range(max_power + 1):
        nf, _ = _normal_form_terms(cur, basis, bud, F=F)
        v = {m: c for _, m, c in nf}
        combo = {k: 1}
        for pm, rd, cb in rows:
            c = v.get(pm)
            if c:
                for m2, c2 in rd.items():
                    nv = (v.get(m2, 0) - c * c2) % prime
                    if nv:
                        v[m2] = nv
                    else:
                        v.pop(m2, None)
                for d2, c2 in cb.items():
                    combo[d2] = (combo.get(d2, 0) - c * c2) % prime
        if not v:
            deg = max(d for d, c in combo.items() if c)
            inv = pow(combo[deg], -1, prime)
            return [combo.get(d, 0) * inv % prime for d in range(deg + 1)]
        pm = max(v, key=key)
        cinv = pow(v[pm], -1, prime)
        rows.append((pm, {m: c * cinv % prime for m, c in v.items()},
                     {d: c * cinv % prime for d, c in combo.items()}))
        cur = [(_key_add(kk, kvar), _mon_mul(m, evar), c) for kk, m, c in nf]
    return None


def _rational_reconstruct(a, m):
    """The unique n/d with a*d = n (mod m), |n|, |d| <= sqrt(m/2), d > 0,
    gcd(n, d) = 1; None when no such pair exists."""
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or igcd(r1, s1) != 1:
        return None
    return mpq(r1, s1)


def _crt_merge(a1, m1, a2, m2):
    """x mod m1*m2 with x = a1 (m1), x = a2 (m2); m1, m2 coprime."""
    t = (a2 - a1) * pow(m1, -1, m2) % m2
    return a1 + m1 * t


def _univariate_eliminant_modular(polys, var, budget=DEFAULT_BUDGET,
                                  max_power=64, max_primes=32):
    """Multi-prime version of the Krylov eliminant.

    The monic eliminant is computed mod successive 62-bit primes; the
    rational coefficients are recovered by CRT plus rational reconstruction
    and accepted once an independent prime confirms them.  Returns the
    primitive generator, one()/zero() as in univariate_eliminant, None when
    the Krylov cap is hit, or raises InconsistentSpecialization when the
    prime images never stabilize.
    """
    out_ctx = VarContext([var])
    stream = _prime_stream()
    trivial_votes = {"one": 0, "zero": 0}
    acc = {}                # degree -> (modulus, residue vector)
    pending = None          # (degree, [mpq]) awaiting confirmation
    for _ in range(max_primes):
        prime = next(stream)
        res = _eliminant_mod_p(polys, var, prime, budget, max_power)
        if res == "bad":
            continue
        if res is None:
            return None
        if res in ("one", "zero"):
            trivial_votes[res] += 1
            if trivial_votes[res] >= 2:
                return out_ctx.one() if res == "one" else out_ctx.zero()
            continue
        d = len(res) - 1
        if pending is not None and pending[0] == d:
            cand = pending[1]
            if all(int(c.numerator) % prime
                   == r * (int(c.denominator) % prime) % prime
                   for c, r in zip(cand, res)):
                x = out_ctx.variable(var)
                accp = out_ctx.zero()
                for j, c in enumerate(cand):
                    if c:
                        accp = accp + x ** j * c
                return accp.primitive()
            pending = None
        if d in acc:
            m_old, v_old = acc[d]
            merged = [_crt_merge(a, m_old, b, prime)
                      for a, b in zip(v_old, res)]
            acc[d] = (m_old * prime, merged)
        else:
            acc[d] = (prime, list(res))
        m_new, v_new = acc[d]
        cand = [_rational_reconstruct(a, m_new) for a in v_new]
        if all(c is not None for c in cand):
            pending = (d, cand)
    raise InconsistentSpecialization(
        "modular eliminant did not stabilize for %s" % var)


def is_trivial_mod(polys: Sequence[MultiPoly], primes: int = 3,
                   budget: int = DEFAULT_BUDGET) -> bool:
    """Whether <polys> contains 1, certified modulo `primes` distinct
    62-bit primes (triviality mod a good prime transfers to QQ)."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return False
    if any(p.is_constant() for p in polys):
        return True
    ctx = polys[0].ctx
    key = _grevlex_key_fn(len(ctx))
    stream = _prime_stream()
    seen = 0
    while seen < primes:
        prime = next(stream)
        F = _Coeffs(prime)
        inputs = []
        for p0 in polys:
            t = _terms_mod_p(p0, key, prime)
            if t is None:
                inputs = None
                break
            if t:
                inputs.append(t)
        if inputs is None or len(inputs) < len(polys):
            continue
        gens = _buchberger_terms(inputs, key, _Budget(budget), F)
        if not (gens and all(e == 0 for e in gens[0][0][1])):
            return False
        seen += 1
    return True


def radical_membership_mod(f: MultiPoly, polys: Sequence[MultiPoly],
                           primes: int = 3,
                           budget: int = DEFAULT_BUDGET) -> bool:
    """Modular certificate that f vanishes on the variety of <polys>:
    the Rabinowitsch system polys + {u*f - 1} is trivial mod `primes`
    distinct 62-bit primes.  One-sided: a True answer can be wrong only if
    every sampled prime is bad for the saturated ideal."""
    if f.is_zero():
        return True
    lifted, _ = saturate_rabinowitsch(list(polys), f)
    return is_trivial_mod(lifted, primes=primes, budget=budget)


def fresh_var_name(ctx: VarContext, stem: str) -> str:
    i = 0
    while True:
        name = "%s%d" % (stem, i)
        if name not in ctx:
            return name
        i += 1


def saturate_rabinowitsch(polys: Sequence[MultiPoly], g: MultiPoly):
    """Adjoin u*g - 1 with a fresh inverse variable.

    Returns (generators in the extended context, fresh variable name);
    eliminating the fresh variable afterwards realizes saturation by g != 0.
    """
    if g.is_zero():
        raise PolyError("cannot saturate by zero")
    ctx = polys[0].ctx if polys else g.ctx
    uname = fresh_var_name(ctx, "_u")
    newctx = ctx.extend((uname,))
    lifted = [p.in_context(newctx) for p in polys]
    gl = g.in_context(newctx)
    lifted.append(newctx.variable(uname) * gl - newctx.one())
    return lifted, uname


def radical_membership(f: MultiPoly, polys: Sequence[MultiPoly],
                       budget: int = DEFAULT_BUDGET) -> bool:
    """True iff f vanishes on the whole variety of <polys>
    (Rabinowitsch: the GB of polys + {u*f - 1} is {1})."""
    if f.is_zero():
        return True
    lifted, uname = saturate_rabinowitsch(list(polys), f)
    ctx = lifted[0].ctx
    gens, _ = presolve_linear(lifted, ctx.names)
    if not gens:
        # everything substituted away: ideal collapsed to 0
        return False
    if any(p.is_constant() and not p.is_zero() for p in gens):
        return True
    basis = groebner_basis(gens, grevlex_order(), budget=budget)
    return basis.is_trivial()


class InconsistentSpecialization(PolyError):
    pass


def eliminate_by_interpolation(polys: Sequence[MultiPoly], keep: Iterable[str],
                               pivot: str, degree_bound: int,
                               budget: int = DEFAULT_BUDGET,
                               max_retries: int = 2, verify: bool = True,
                               progress=None) -> list:
    """Eliminate by specializing `pivot` at sample rationals, eliminating
    each specialization, and reconstructing the pivot dependence of a
    generator by interpolation.

    Each specialized eliminant is only known up to a scalar, so the
    coefficients relative to a reference monomial are rational functions of
    the pivot; they are reconstructed by rational (Cauchy) interpolation
    with numerator and denominator degrees <= degree_bound, which needs
    2*degree_bound+2 sample points plus spares.  Points where the eliminant
    shape disagrees with the majority (the specialized ideal "jumps") are
    discarded; points where no eliminant exists at all witness components
    lying over a single pivot value and contribute linear content factors.
    The result is verified against freshly specialized eliminants at pivot
    values off the sampling stream before being returned.
    """
    keep = list(keep)
    if pivot not in keep:
        raise PolyError("pivot %r must be kept" % pivot)
    sub_keep = [v for v in keep if v != pivot]
    if not sub_keep:
        raise PolyError("interpolation needs a kept variable besides the pivot")
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    ctx = polys[0].ctx
    full_ctx = VarContext([n for n in ctx.names if n in set(keep)])

    bound = degree_bound
    results = {}            # point -> eliminant (primitive, sub context) or
                            # None (no eliminant) or "skip"
    for attempt in range(max_retries + 1):
        need = 2 * bound + 4
        stream = _point_stream()
        tried = 0

        def majority():
            """Most common support shape among the usable points (ties
            toward higher degree) and the points carrying it."""
            usable = {c: g for c, g in results.items()
                      if isinstance(g, MultiPoly)}
            if not usable:
                return None, {}
            shapes = Counter(frozenset(g.terms.keys())
                             for g in usable.values())
            top = max(shapes.values())
            shape = max((s for s, n in shapes.items() if n == top),
                        key=lambda s: (max(sum(m) for m in s), sorted(s)))
            return shape, {c: g for c, g in usable.items()
                           if frozenset(g.terms.keys()) == shape}

        while tried < 6 * need + 30:
            shape, good = majority()
            if len(good) >= need:
                break
            c = next(stream)
            tried += 1
            if c in results:
                continue
            results[c] = _point_eliminant(polys, pivot, c, sub_keep, budget)
            if progress is not None:
                progress(c, results[c])
        shape, good = majority()
        verticals = sorted(c for c, g in results.items() if g is None)
        if not good:
            if verticals:
                raise InconsistentSpecialization(
                    "no specialization admits an eliminant (projection dominant?)")
            raise InconsistentSpecialization("no usable specialization points")
        if len(shape) == 1 and all(e == 0 for e in next(iter(shape))):
            # eliminant is 1 at the sampled points: the branch is empty off
            # the vertical components
            cand = full_ctx.one()
            for c in verticals:
                cand = cand * (full_ctx.variable(pivot) - c)
            if cand.is_constant():
                if is_trivial_mod(polys, budget=budget):
                    return [full_ctx.one()]
                raise InconsistentSpecialization(
                    "pointwise-trivial eliminants but the ideal is not trivial")
            if not verify:
                return [cand]
            try:
                if radical_membership_mod(cand.in_context(ctx), polys,
                                          budget=budget):
                    return [cand]
            except BudgetExceeded:
                pass
            raise InconsistentSpecialization(
                "vertical-only eliminant failed the membership check")
        if len(good) < 2 * bound + 2:
            bound = 2 * bound + 1
            continue
        pts = sorted(good)[:2 * bound + 2]
        extra = [c for c in sorted(good) if c not in set(pts)]
        ref = max(shape)
        sub_ctx = good[pts[0]].ctx
        piv_ctx = VarContext([pivot])
        ok = True
        parts = {}          # monomial -> (numerator, denominator) in piv_ctx
        for mono in shape:
            if mono == ref:
                parts[mono] = (piv_ctx.one(), piv_ctx.one())
                continue
            samples = [(Q(c), good[c].terms.get(mono, QZERO) / good[c].terms[ref])
                       for c in pts]
            nd = _cauchy_interpolate(samples, bound, piv_ctx, pivot)
            if nd is None:
                ok = False
                break
            num, den = nd
            for c in extra:
                r = good[c].terms.get(mono, QZERO) / good[c].terms[ref]
                if num.eval({pivot: Q(c)}) != r * den.eval({pivot: Q(c)}):
                    ok = False
                    break
            if not ok:
                break
            parts[mono] = (num, den)
        if ok:
            # common denominator = lcm of the reduced denominators; since the
            # primitive generator has unit content in QQ[pivot], this lcm is
            # exactly its leading coefficient (up to a constant)
            lead = piv_ctx.one()
            for num, den in parts.values():
                g = poly_gcd(lead, den)
                lead = lead.exact_div(g) * den
            acc = full_ctx.zero()
            for mono, (num, den) in parts.items():
                coef = num * lead.exact_div(den)
                lifted = [0] * len(full_ctx)
                for i, e in enumerate(mono):
                    lifted[full_ctx.index(sub_ctx.names[i])] = e
                acc = acc + coef.in_context(full_ctx) * MultiPoly(
                    full_ctx, {tuple(lifted): QONE})
            acc = acc.primitive()
            for c in verticals:
                acc = acc * (full_ctx.variable(pivot) - c)
            if not acc.is_zero():
                if not verify or _fresh_point_check(acc, polys, pivot,
                                                    sub_keep, budget):
                    return [acc]
        bound = 2 * bound + 1
    raise InconsistentSpecialization(
        "interpolation failed up to pivot degree bound %d" % bound)


def _point_eliminant(polys, pivot, c, sub_keep, budget):
    """Eliminant of the specialization pivot=c, primitive, in the sub
    context; None when no eliminant exists within the Krylov cap; "skip"
    when the specialized system degenerates to nothing."""
    spec = [p.specialize({pivot: c}) for p in polys]
    spec = [p for p in spec if not p.is_zero()]
    if not spec:
        return None     # the whole system dies: fiber is everything
    if any(p.is_constant() for p in spec):
        sub_ctx = VarContext(sub_keep)
        return sub_ctx.one()
    try:
        if len(sub_keep) == 1:
            q = univariate_eliminant(spec, sub_keep[0], budget=budget)
            if q is None:
                return "skip"   # Krylov cap hit: unusable point
            if q.is_zero():
                return None     # dominant projection: vertical component
            return q.primitive()
        out = eliminate(spec, sub_keep, budget=budget)
    except BudgetExceeded:
        return "skip"
    out = [g for g in out if not g.is_zero()]
    if not out:
        return None
    g = min(out, key=lambda p: (p.total_degree(), sorted(p.terms, reverse=True)))
    return g.primitive()


def _fresh_point_check(P, polys, pivot, sub_keep, budget, needed=2,
                       max_tries=8):
    """Specialize the candidate eliminant P at pivot values outside the
    sampling stream and compare with independently computed specialized
    eliminants.  A wrong reconstruction survives only if every fresh value
    happens to be a bad specialization point."""
    ctx = P.ctx
    sub_ctx = VarContext(sub_keep)
    good = 0
    for k in range(max_tries):
        c = mpq(3 * k + 1, 3)    # non-integers: disjoint from the stream
        q = _point_eliminant(polys, pivot, c, sub_keep, budget)
        if not isinstance(q, MultiPoly) or q.is_constant():
            continue
        pc = P.specialize({pivot: c})
        if pc.is_zero():
            return False
        pc = pc.in_context(sub_ctx).primitive()
        if pc != q and pc != q * Q(-1):
            return False
        good += 1
        if good >= needed:
            return True
    # every fresh value was degenerate; fall back to accepting the
    # interpolation's own extra-point consistency
    return True


def _cauchy_interpolate(samples, bound, ctx, var):
    """Rational function num/den (degrees <= bound, den nonzero at the
    sample points) through the (x, value) samples, reduced to lowest terms;
    None when the linear system only has solutions with den vanishing at a
    sample point."""
    m = bound + 1
    rows = []
    for x, r in samples:
        rows.append([x ** j for j in range(m)] + [-r * x ** j for j in range(m)])
    sol = _nullspace_vector(rows, 2 * m)
    if sol is None:
        return None
    num = _dense_to_poly(sol[:m], ctx, var)
    den = _dense_to_poly(sol[m:], ctx, var)
    if den.is_zero() or num.is_zero():
        return None
    g = poly_gcd(num, den)
    num, den = num.exact_div(g), den.exact_div(g)
    for x, r in samples:
        dv = den.eval({var: Q(x)})
        if dv == 0:
            return None
        if num.eval({var: Q(x)}) != r * dv:
            return None
    # note: num and den must keep a common scale (their ratio is the data),
    # so they are not made primitive individually
    return num, den


def _dense_to_poly(coeffs, ctx, var):
    acc = ctx.zero()
    x = ctx.variable(var)
    for j, c in enumerate(coeffs):
        if c:
            acc = acc + x ** j * c
    return acc


def _nullspace_vector(rows, ncols):
    """One nonzero rational solution of the homogeneous system, or None."""
    mat = [list(map(Q, r)) for r in rows]
    pivots = {}
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = QONE / mat[r][col]
        mat[r] = [a * inv for a in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots[col] = r
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    sol = [QZERO] * ncols
    sol[free[0]] = QONE
    for col, row in pivots.items():
        sol[col] = -mat[row][free[0]]
    return sol


def _point_stream():
    yield mpq(0)
    k = 1
    while True:
        yield mpq(k)
        yield mpq(-k)
        k += 1
