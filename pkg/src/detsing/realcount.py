"""Exact real-root machinery.

Univariate polynomials are handled as dense mpq coefficient lists (index =
degree).  Zero-dimensional systems are solved through a rational univariate
parametrization: a random separating form t = sum c_i x_i, the squarefree
minimal polynomial of t, and per-coordinate expressions x_i = g_i(t) mod
that minimal polynomial.  Real roots are isolated by Sturm bisection, and
constraint signs at algebraic numbers are decided exactly (gcd for the zero
case, interval refinement otherwise).
"""

from __future__ import annotations

import csv
import io
import json
import random
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .poly import (MultiPoly, PolyError, Q, QONE, QZERO, VarContext,
                   format_poly, grevlex_order, lex_order, squarefree_part,
                   poly_gcd)
from .groebner import (DEFAULT_BUDGET, eliminate, groebner_basis,
                       is_zero_dimensional, fresh_var_name)

# ---------------------------------------------------------------------------
# dense univariate layer


def to_dense(p: MultiPoly, name: str | None = None) -> list:
    """Coefficient list (constant first) of a univariate polynomial."""
    used = p.support_names()
    if name is None:
        if len(used) > 1:
            raise PolyError("polynomial is not univariate: %s" % sorted(used))
        name = next(iter(used)) if used else p.ctx.names[0]
    if used - {name}:
        raise PolyError("polynomial involves %s besides %s" % (used - {name}, name))
    d = max(p.degree_in(name), 0)
    out = [QZERO] * (d + 1)
    i = p.ctx.index(name)
    for m, c in p.terms.items():
        out[m[i]] += c
    return trim(out)


def from_dense(coeffs, ctx: VarContext, name: str) -> MultiPoly:
    i = ctx.index(name)
    width = len(ctx)
    terms = {}
    for e, c in enumerate(coeffs):
        if c:
            m = [0] * width
            m[i] = e
            terms[tuple(m)] = Q(c)
    return MultiPoly(ctx, terms)


def trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def deg(c):
    return len(c) - 1


def ueval(c, x):
    acc = QZERO
    for a in reversed(c):
        acc = acc * x + a
    return acc


def uderiv(c):
    return trim([c[i] * i for i in range(1, len(c))])


def uneg(c):
    return [-a for a in c]


def uscale(c, s):
    return [a * s for a in c]


def urem(a, b):
    """Remainder of a by b over QQ."""
    a = list(a)
    db = deg(b)
    lb = b[db]
    while deg(a) >= db:
        da = deg(a)
        f = a[da] / lb
        for i in range(db + 1):
            a[da - db + i] -= f * b[i]
        a = trim(a)
        if not a:
            break
    return a


def uquo(a, b):
    a = list(a)
    db = deg(b)
    lb = b[db]
    q = [QZERO] * max(deg(a) - db + 1, 0)
    while deg(a) >= db:
        da = deg(a)
        f = a[da] / lb
        q[da - db] = f
        for i in range(db + 1):
            a[da - db + i] -= f * b[i]
        a = trim(a)
        if not a:
            break
    return q


def umul(a, b):
    out = [QZERO] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return trim(out)


def uadd(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else QZERO) + (b[i] if i < len(b) else QZERO)
                 for i in range(n)])


def ugcd(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, urem(a, b)
    if a:
        a = uscale(a, QONE / a[-1])
    return a


def usquarefree(c):
    d = uderiv(c)
    if not d:
        return [QONE]
    g = ugcd(c, d)
    if deg(g) == 0:
        return uscale(c, QONE / c[-1])
    q = uquo(c, g)
    return uscale(q, QONE / q[-1])


def uinvert_mod(a, m):
    """Inverse of a modulo m over QQ; raises if gcd(a, m) != 1."""
    r0, r1 = trim(m), urem(a, m)
    s0, s1 = [], [QONE]
    while r1:
        q = uquo(r0, r1)
        r0, r1 = r1, trim(uadd(r0, uneg(umul(q, r1))))
        s0, s1 = s1, trim(uadd(s0, uneg(umul(q, s1))))
    if deg(r0) != 0:
        raise PolyError("element not invertible modulo the minimal polynomial")
    return urem(uscale(s0, QONE / r0[0]), m)


# ---------------------------------------------------------------------------
# Sturm sequences and isolation


class SturmSequence:
    """Signed remainder chain of p and p'."""

    def __init__(self, coeffs):
        p0 = trim(coeffs)
        if not p0:
            raise PolyError("Sturm sequence of the zero polynomial")
        chain = [p0]
        p1 = uderiv(p0)
        if p1:
            chain.append(p1)
            while True:
                r = uneg(urem(chain[-2], chain[-1]))
                if not r:
                    break
                chain.append(r)
        self.chain = chain

    def variations_at(self, x) -> int:
        signs = []
        for c in self.chain:
            v = ueval(c, x)
            if v:
                signs.append(1 if v > 0 else -1)
        return _variations(signs)

    def variations_at_inf(self, positive: bool) -> int:
        signs = []
        for c in self.chain:
            lc = c[-1]
            s = 1 if lc > 0 else -1
            if not positive and deg(c) % 2 == 1:
                s = -s
            signs.append(s)
        return _variations(signs)

    def count(self, a=None, b=None) -> int:
        """Distinct real roots in (a, b]; whole line when both are None."""
        va = self.variations_at(Q(a)) if a is not None else self.variations_at_inf(False)
        vb = self.variations_at(Q(b)) if b is not None else self.variations_at_inf(True)
        return va - vb


def _variations(signs):
    n = 0
    for x, y in zip(signs, signs[1:]):
        if x * y < 0:
            n += 1
    return n


def sturm_count(p, a=None, b=None, name=None) -> int:
    """Distinct real roots of p in (a, b] (whole line by default)."""
    coeffs = to_dense(p, name) if isinstance(p, MultiPoly) else trim(p)
    if not coeffs:
        raise PolyError("zero polynomial")
    if deg(coeffs) == 0:
        return 0
    return SturmSequence(coeffs).count(a, b)


def root_bound(c) -> mpq:
    """Cauchy bound: all real roots lie in (-B, B)."""
    lc = abs(c[-1])
    return 1 + max((abs(a) for a in c[:-1]), default=QZERO) / lc


def isolate_roots(p, name=None) -> list:
    """Disjoint open rational intervals, one per distinct real root.

    Interval endpoints are never roots.  Input need not be squarefree."""
    coeffs = to_dense(p, name) if isinstance(p, MultiPoly) else trim(p)
    if not coeffs:
        raise PolyError("zero polynomial")
    coeffs = usquarefree(coeffs)
    if deg(coeffs) == 0:
        return []
    st = SturmSequence(coeffs)
    b = root_bound(coeffs)
    out = []

    def rec(lo, hi, vlo, vhi):
        n = vlo - vhi
        if n == 0:
            return
        if n == 1:
            # shrink endpoints off roots (they are not roots by construction)
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        while ueval(coeffs, mid) == 0:
            mid = (lo + mid) / 2
        vm = st.variations_at(mid)
        rec(lo, mid, vlo, vm)
        rec(mid, hi, vm, vhi)

    lo, hi = -b, b
    rec(lo, hi, st.variations_at(lo), st.variations_at(hi))
    out.sort()
    return out


def refine(coeffs, lo, hi, width) -> tuple:
    """Shrink an isolating interval of squarefree coeffs below `width`."""
    flo = ueval(coeffs, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = ueval(coeffs, mid)
        if fm == 0:
            eps = (hi - lo) / 4
            return (mid - eps, mid + eps) if hi - lo <= width * 4 \
                else refine(coeffs, mid - eps, mid + eps, width)
        if (flo > 0) != (fm > 0):
            hi = mid
        else:
            lo, flo = mid, fm
    return lo, hi


# ---------------------------------------------------------------------------
# zero-dimensional solving


class RootBox:
    def __init__(self, intervals, signs, t_interval):
        self.intervals = intervals      # {var: (lo, hi)}
        self.signs = signs              # [-1|0|1 per constraint]
        self.t_interval = t_interval

    def to_doc(self):
        return {"box": {v: [str(a), str(b)] for v, (a, b) in self.intervals.items()},
                "constraint_signs": self.signs}

    def contains_point(self, pt: dict) -> bool:
        return all(lo < Q(pt[v]) < hi or lo == Q(pt[v]) == hi
                   for v, (lo, hi) in self.intervals.items())


class RootCount:
    def __init__(self, total, inside, interior, degenerate=False, boxes=None,
                 note=""):
        self.total = total
        self.inside = inside
        self.interior = interior
        self.degenerate = degenerate
        self.boxes = boxes or []
        self.note = note

    def to_doc(self):
        return {"count_total": self.total, "count_in_B": self.inside,
                "count_interior": self.interior, "degenerate": self.degenerate,
                "boxes": [b.to_doc() for b in self.boxes]}


SEP_COEFF_POOL = [1, 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                  53, 59, 61, 67, 71, 73, 79, 83, 89, 97]


def _draw_sep(rng, n):
    return [rng.choice([-1, 1]) * rng.choice(SEP_COEFF_POOL) for _ in range(n)]


class ShapeFailure(PolyError):
    pass


def _parametrize(F, seed, budget, retries=5):
    """Rational parametrization of a zero-dimensional system.

    Returns (minpoly squarefree dense, {var: g_i dense}, sep coeffs) with
    x_i = g_i(t) mod minpoly at every root, t = sum c_i x_i."""
    ctx = F[0].ctx
    names = list(ctx.names)
    rng = random.Random(seed)
    last = None
    for attempt in range(retries):
        coeffs = _draw_sep(rng, len(names)) if (attempt or len(names) > 1) else [1] * len(names)
        tname = fresh_var_name(ctx, "_t")
        ectx = ctx.extend((tname,))
        sep = ectx.zero()
        for c, n in zip(coeffs, names):
            sep = sep + ectx.variable(n) * c
        sys_t = [p.in_context(ectx) for p in F] + [ectx.variable(tname) - sep]
        mins = eliminate(sys_t, [tname], budget=budget)
        if not mins:
            raise ShapeFailure("no univariate eliminant (system not zero-dimensional?)")
        q = to_dense(min(mins, key=lambda p: p.total_degree()).in_context(VarContext([tname])), tname)
        q = usquarefree(q)
        params = {}
        ok = True
        for v in names:
            pair = eliminate(sys_t, [tname, v], budget=budget)
            vctx = VarContext([tname, v])
            expr = None
            for g in pair:
                g2 = g.in_context(vctx)
                if g2.degree_in(v) != 1:
                    continue
                A = to_dense(g2.coefficient_in(v, 1), tname)
                B = to_dense(g2.coefficient_in(v, 0) * -1, tname)
                try:
                    inv = uinvert_mod(A, q)
                except PolyError:
                    continue    # leading coeff vanishes at some root of q
                expr = urem(umul(B, inv), q)
                break
            if expr is None:
                ok = False
                break
            params[v] = expr
        if ok:
            # verify: each input polynomial vanishes at the parametrization
            for p in F:
                comp = _compose_multi(p, params, q)
                if comp:
                    ok = False
                    break
        if ok:
            return q, params, coeffs
        last = "separating form %r not in shape position" % (coeffs,)
    raise ShapeFailure(last or "no separating form found")


def _compose_multi(p: MultiPoly, params: dict, q) -> list:
    """p(g_1(t), ..., g_n(t)) mod q as a dense polynomial in t."""
    acc = []
    for m, c in p.terms.items():
        term = [Q(c)]
        for i, e in enumerate(m):
            if e:
                g = params[p.ctx.names[i]]
                for _ in range(e):
                    term = urem(umul(term, g), q)
        acc = uadd(acc, term)
    return urem(acc, q)


def _sign_at_root(h, q, lo, hi) -> int:
    """Sign of dense poly h at the unique root of squarefree q in (lo, hi)."""
    h = trim(h)
    if not h:
        return 0
    g = ugcd(h, q)
    if deg(g) > 0 and SturmSequence(g).count(lo, hi) > 0:
        return 0
    sh = SturmSequence(h)
    qlo, qhi = lo, hi
    while sh.count(qlo, qhi) > 0:
        qlo, qhi = refine(q, qlo, qhi, (qhi - qlo) / 4)
    v = ueval(h, (qlo + qhi) / 2)
    return 1 if v > 0 else -1


def solve_zero_dim(F: Sequence[MultiPoly], H: Sequence[MultiPoly] = (),
                   seed=0, budget: int = DEFAULT_BUDGET,
                   box_width=mpq(1, 1024)) -> RootCount:
    """Count and isolate the real solutions of F, classifying each against
    the constraints h <= 0 (boundary h = 0 counts as inside; the interior
    count requires all h < 0)."""
    F = [p for p in F if not p.is_zero()]
    if not F:
        return RootCount(0, 0, 0, degenerate=True, note="empty system")
    ctx = F[0].ctx
    gb = groebner_basis(F, grevlex_order(), budget=budget)
    if gb.is_trivial():
        return RootCount(0, 0, 0)
    if not is_zero_dimensional(gb):
        return RootCount(0, 0, 0, degenerate=True, note="positive-dimensional")
    q, params, sep = _parametrize(list(gb.generators), seed, budget)
    hs = [_compose_multi(h.in_context(ctx), params, q) for h in H]
    boxes = []
    total = inside = interior = 0
    for lo, hi in _isolate_dense(q):
        total += 1
        signs = [_sign_at_root(h, q, lo, hi) for h in hs]
        if all(s <= 0 for s in signs):
            inside += 1
        if all(s < 0 for s in signs):
            interior += 1
        tlo, thi = refine(q, lo, hi, box_width)
        intervals = {}
        for v in ctx.names:
            g = params.get(v, [])
            a, b = _interval_eval(g, tlo, thi)
            intervals[v] = (a, b)
        boxes.append(RootBox(intervals, signs, (tlo, thi)))
    return RootCount(total, inside, interior, boxes=boxes)


def _isolate_dense(q):
    return isolate_roots(q) if isinstance(q, MultiPoly) else _isolate_coeffs(q)


def _isolate_coeffs(q):
    ctx = VarContext(["_t"])
    return isolate_roots(from_dense(q, ctx, "_t"), "_t")


def _interval_eval(c, lo, hi):
    """Interval Horner evaluation of dense poly c over [lo, hi]."""
    alo = ahi = QZERO
    for a in reversed(c):
        p1, p2, p3, p4 = alo * lo, alo * hi, ahi * lo, ahi * hi
        alo = min(p1, p2, p3, p4) + a
        ahi = max(p1, p2, p3, p4) + a
    return alo, ahi


# ---------------------------------------------------------------------------
# simplest rationals (Stern-Brocot) and 2-parameter open-CAD sampling


def simplest_between(lo, hi):
    """Rational with smallest denominator strictly inside (lo, hi)."""
    lo, hi = Fraction(int(Q(lo).numerator), int(Q(lo).denominator)), \
        Fraction(int(Q(hi).numerator), int(Q(hi).denominator))
    if not lo < hi:
        raise PolyError("empty interval")

    def rec(lo, hi):
        fl = lo.numerator // lo.denominator
        if fl + 1 < hi or (fl + 1 == hi and hi.denominator != 1):
            # an integer strictly inside, or fl+1 works when hi > fl+1
            pass
        cand = fl + 1
        if lo < cand < hi:
            return Fraction(cand)
        if lo.denominator == 1:
            cand = lo + 1
            if cand < hi:
                return Fraction(cand)
        # shift to fractional part and recurse on the inverse
        frac_lo = lo - fl
        frac_hi = hi - fl
        if frac_lo == 0:
            # lo is an integer: answer has form fl + 1/k
            k = (1 / frac_hi).numerator // (1 / frac_hi).denominator + 1
            return fl + Fraction(1, k)
        inner = rec(1 / frac_hi, 1 / frac_lo)
        return fl + 1 / inner

    r = rec(lo, hi)
    return mpq(r.numerator, r.denominator)


class CellSample:
    def __init__(self, point, cell_index, signs):
        self.point = point          # {param: mpq}
        self.cell_index = cell_index
        self.signs = signs          # {poly label: -1|1}

    def to_doc(self):
        return {"sample": [str(self.point[k]) for k in sorted(self.point)],
                "cell": list(self.cell_index),
                "signs": self.signs}


def cad2_samples(P, domain=(), labels=None, abscissa=None, section=None):
    """Open-CAD sample points for a nonzero polynomial (or factor list) in
    two parameters.

    P: MultiPoly or list of factors sharing one 2-variable context.
    domain: polynomials whose sign must be > 0 at retained samples (strict
    domain constraints); they also contribute projection/section factors.
    Returns a list of CellSample with the sign vector of every factor and
    domain polynomial.
    """
    from .matrix import resultant, discriminant
    factors = list(P) if isinstance(P, (list, tuple)) else [P]
    if not factors:
        raise PolyError("no separating polynomials")
    ctx = factors[0].ctx
    if len(ctx) != 2:
        raise PolyError("open CAD here is 2-parameter only")
    if any(f.is_zero() or f.is_constant() for f in factors):
        raise PolyError("separating polynomials must be nonconstant")
    a = abscissa or ctx.names[1]
    s = section or ctx.names[0]
    domain = list(domain)
    section_polys = []
    seen = set()
    for f in factors + domain:
        f = squarefree_part(f)
        if frozenset(f.terms.items()) not in seen:
            seen.add(frozenset(f.terms.items()))
            section_polys.append(f)
    # projection in the abscissa variable
    proj = []
    for f in section_polys:
        d = f.degree_in(s)
        if d == 0:
            proj.append(f)
            continue
        lc = f.coefficient_in(s, d)
        if not lc.is_constant():
            proj.append(lc)
        if d >= 2:
            proj.append(discriminant(f, s))
    for i in range(len(section_polys)):
        for j in range(i + 1, len(section_polys)):
            fi, fj = section_polys[i], section_polys[j]
            if fi.degree_in(s) > 0 and fj.degree_in(s) > 0:
                proj.append(resultant(fi, fj, s))
    actx = VarContext([a])
    proj_dense = []
    for p in proj:
        if p.is_zero() or p.is_constant():
            continue
        p = p.in_context(actx) if p.support_names() <= {a} else None
        if p is None:
            raise PolyError("projection produced a polynomial not in %s" % a)
        proj_dense.append(to_dense(p, a))
    # real roots of the projection product
    roots = []
    acc = [QONE]
    for pd in proj_dense:
        acc = umul(acc, pd)
    if deg(acc) >= 1:
        roots = _isolate_coeffs(usquarefree(acc))
    # abscissa sample values: simplest rationals between consecutive roots
    cuts = []
    for lo, hi in roots:
        # refine so intervals are disjoint from one another's midpoints
        cuts.append(refine(usquarefree(acc), lo, hi, mpq(1, 64)))
    xs = []
    if not cuts:
        xs = [mpq(1)]
    else:
        lo0 = cuts[0][0]
        xs.append(simplest_between(lo0 - 2, lo0))
        for (al, ah), (bl, bh) in zip(cuts, cuts[1:]):
            if ah < bl:
                xs.append(simplest_between(ah, bl))
            else:
                xs.append((ah + bl) / 2)
        hiN = cuts[-1][1]
        xs.append(simplest_between(hiN, hiN + 2))
    samples = []
    labels = labels or ["p%d" % i for i in range(len(section_polys))]
    for ci, xv in enumerate(xs):
        spec = []
        for f in section_polys:
            u = f.specialize({a: xv})
            spec.append(u)
        prod = [QONE]
        any_sec = False
        for u in spec:
            if u.support_names():
                prod = umul(prod, to_dense(u, s))
                any_sec = True
        ys = []
        if any_sec and deg(trim(prod)) >= 1:
            iso = _isolate_with(usquarefree(trim(prod)))
            if iso:
                lo0 = iso[0][0]
                ys.append(simplest_between(lo0 - 2, lo0))
                for (al, ah), (bl, bh) in zip(iso, iso[1:]):
                    ys.append(simplest_between(ah, bl) if ah < bl else (ah + bl) / 2)
                ys.append(simplest_between(iso[-1][1], iso[-1][1] + 2))
            else:
                ys = [mpq(1)]
        else:
            ys = [mpq(1)]
        for ri, yv in enumerate(ys):
            pt = {a: xv, s: yv}
            vals = {}
            okpt = True
            for f, lbl in zip(section_polys, labels):
                v = f.eval(pt)
                if v == 0:
                    okpt = False
                    break
                vals[lbl] = 1 if v > 0 else -1
            if not okpt:
                continue
            if any(d.eval(pt) <= 0 for d in domain):
                continue
            samples.append(CellSample(pt, (ci, ri), vals))
    return samples


def _isolate_with(coeffs):
    iso = _isolate_coeffs(coeffs)
    # shrink so that neighbouring intervals do not overlap
    out = []
    for lo, hi in iso:
        out.append(refine(coeffs, lo, hi, mpq(1, 64)))
    return out


# ---------------------------------------------------------------------------
# region labeling and report emitters


def label_regions(fiber_system, constraints, samples, param_names, seed=0,
                  budget: int = DEFAULT_BUDGET, extra_checks=0, rng=None):
    """Solve the fiber system at every sample and label cells with counts.

    fiber_system: polynomials in X and parameters; constraints likewise.
    Returns (labels, conflicts): labels maps cell_index -> RootCount, and
    conflicts lists (cell, sample_a, sample_b) count disagreements.
    """
    labels = {}
    witness = {}
    conflicts = []
    for smp in samples:
        assign = {k: v for k, v in smp.point.items()}
        F = [p.specialize(assign) for p in fiber_system]
        H = [h.specialize(assign) for h in constraints]
        rc = solve_zero_dim(F, H, seed=seed, budget=budget)
        key = tuple(sorted(smp.signs.items()))
        if key in labels:
            old = labels[key]
            if (old.total, old.inside) != (rc.total, rc.inside):
                conflicts.append((key, witness[key], smp, old, rc))
        else:
            labels[key] = rc
            witness[key] = smp
    return labels, conflicts


def region_report_doc(samples, counts):
    cells = []
    for smp, rc in zip(samples, counts):
        doc = smp.to_doc()
        doc.update(rc.to_doc())
        cells.append(doc)
    return {"cells": cells}


def region_report_csv(samples, counts) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["x", "y", "cell", "count_total", "count_in_B", "count_interior",
                "degenerate"])
    for smp, rc in zip(samples, counts):
        pt = [str(smp.point[k]) for k in sorted(smp.point)]
        w.writerow(pt + ["%d/%d" % smp.cell_index, rc.total, rc.inside,
                         rc.interior, rc.degenerate])
    return buf.getvalue()


def region_report_svg(samples, counts, polys=(), width=480, height=480,
                      window=None) -> str:
    """Illustrative scatter of sample points colored by inside-B count,
    with zero-set point clouds of the separating polynomials."""
    pts = [smp.point for smp in samples]
    keys = sorted(pts[0]) if pts else []
    if window is None:
        xs = [float(p[keys[0]]) for p in pts] or [0.0, 1.0]
        ys = [float(p[keys[1]]) for p in pts] or [0.0, 1.0]
        window = (min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1)
    x0, x1, y0, y1 = window

    def sx(x):
        return (float(x) - x0) / (x1 - x0) * width

    def sy(y):
        return height - (float(y) - y0) / (y1 - y0) * height

    colors = {0: "#888888", 1: "#1f77b4", 2: "#2ca02c", 3: "#d62728"}
    parts = ['<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d">'
             % (width, height),
             '<!-- illustrative only: point clouds, no numeric claims -->',
             '<rect width="100%" height="100%" fill="white"/>']
    for p in polys:
        ctx = p.ctx
        n = 120
        for i in range(n + 1):
            xv = mpq(Fraction(x0 + (x1 - x0) * i / n).limit_denominator(10 ** 6))
            u = p.specialize({keys[0]: xv})
            if not u.support_names():
                continue
            try:
                for lo, hi in isolate_roots(u, keys[1]):
                    yv = (lo + hi) / 2
                    if y0 <= yv <= y1:
                        parts.append('<circle cx="%.1f" cy="%.1f" r="0.8" fill="#bbbbbb"/>'
                                     % (sx(xv), sy(yv)))
            except PolyError:
                continue
    for smp, rc in zip(samples, counts):
        c = colors.get(rc.inside, "#000000")
        parts.append('<circle cx="%.1f" cy="%.1f" r="3" fill="%s"/>'
                     % (sx(smp.point[keys[0]]), sy(smp.point[keys[1]]), c))
    parts.append("</svg>")
    return "\n".join(parts)
