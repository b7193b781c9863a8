"""Polynomial matrices: determinants, minors, Jacobians, Lie brackets.

Determinants of symbolic matrices use fraction-free Bareiss elimination
with dynamic pivoting (sparsest pivot first, constant rows early); a
memoized cofactor expansion is used for very sparse matrices.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from gmpy2 import mpq

from .poly import MultiPoly, NotAFactor, PolyError, Q, QONE, VarContext


class PolyMatrix:
    """Rectangular matrix of MultiPoly sharing one context."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[MultiPoly]]):
        if not entries or not entries[0]:
            raise PolyError("empty matrix")
        self.rows = len(entries)
        self.cols = len(entries[0])
        if any(len(r) != self.cols for r in entries):
            raise PolyError("ragged matrix")
        self.ctx = entries[0][0].ctx
        for r in entries:
            for e in r:
                if e.ctx != self.ctx:
                    raise PolyError("matrix entries in different contexts")
        self.entries = [list(r) for r in entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_square(self):
        return self.rows == self.cols

    def submatrix(self, row_idx, col_idx) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for j in col_idx] for i in row_idx])

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for i in range(self.rows)]
                           for j in range(self.cols)])

    def mul_vector(self, vec: Sequence[MultiPoly]) -> list:
        if len(vec) != self.cols:
            raise PolyError("dimension mismatch")
        out = []
        for i in range(self.rows):
            acc = self.ctx.zero()
            for j in range(self.cols):
                acc = acc + self.entries[i][j] * vec[j]
            out.append(acc)
        return out

    def map_entries(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in row] for row in self.entries])

    def det(self) -> MultiPoly:
        """Exact determinant; Bareiss by default, memoized cofactor expansion
        when the matrix is mostly zeros."""
        if not self.is_square():
            raise PolyError("determinant of non-square matrix")
        n = self.rows
        if n == 1:
            return self.entries[0][0]
        nonzero = sum(1 for r in self.entries for e in r if not e.is_zero())
        if nonzero <= 2 * n:
            return _det_cofactor(self.entries)
        return _det_bareiss(self.entries)

    def minors(self, s: int) -> list:
        """All s x s minors with their index sets, enumerated lexicographically.

        Returns [(row_tuple, col_tuple, det)].
        """
        if s < 1 or s > min(self.rows, self.cols):
            raise PolyError("minor size %d out of range" % s)
        out = []
        for ri in combinations(range(self.rows), s):
            for ci in combinations(range(self.cols), s):
                out.append((ri, ci, self.submatrix(ri, ci).det()))
        return out

    def minor_polys(self, s: int) -> list:
        return [d for _, _, d in self.minors(s)]


def _det_bareiss(m) -> MultiPoly:
    n = len(m)
    ctx = m[0][0].ctx
    a = [row[:] for row in m]
    sign = 1
    prev = ctx.one()
    for k in range(n - 1):
        # pivot: fewest terms among nonzero candidates in the remaining block
        piv = None
        best = None
        for i in range(k, n):
            for j in range(k, n):
                e = a[i][j]
                if not e.is_zero():
                    w = (e.num_terms(), e.total_degree())
                    if best is None or w < best:
                        best, piv = w, (i, j)
        if piv is None:
            return ctx.zero()
        pi, pj = piv
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            sign = -sign
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = pivot * a[i][j] - aik * a[k][j]
                a[i][j] = num.exact_div(prev)
            a[i][k] = ctx.zero()
        prev = pivot
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def _det_cofactor(m) -> MultiPoly:
    n = len(m)
    ctx = m[0][0].ctx
    cols = tuple(range(n))
    memo = {}

    def rec(rows, cols):
        if len(rows) == 1:
            return m[rows[0]][cols[0]]
        key = (rows, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        # expand along the sparsest row
        best_r = min(rows, key=lambda i: sum(0 if m[i][j].is_zero() else 1 for j in cols))
        acc = ctx.zero()
        r_pos = rows.index(best_r)
        sub_rows = tuple(i for i in rows if i != best_r)
        for c_pos, j in enumerate(cols):
            e = m[best_r][j]
            if e.is_zero():
                continue
            sub_cols = tuple(c for c in cols if c != j)
            term = e * rec(sub_rows, sub_cols)
            if (r_pos + c_pos) % 2:
                term = -term
            acc = acc + term
        memo[key] = acc
        return acc

    return rec(tuple(range(n)), cols)


def jacobian(polys: Sequence[MultiPoly], var_names: Sequence[str]) -> PolyMatrix:
    """Matrix of partials: rows follow the input order, columns follow the
    context order of the given variables."""
    if not polys:
        raise PolyError("jacobian of empty system")
    ctx = polys[0].ctx
    names = sorted(var_names, key=ctx.index)
    return PolyMatrix([[p.diff(v) for v in names] for p in polys])


class VectorField:
    """Polynomial vector field: one component per state variable."""

    __slots__ = ("ctx", "components", "state_vars")

    def __init__(self, components: Sequence[MultiPoly], state_vars: Sequence[str]):
        if len(components) != len(state_vars):
            raise PolyError("component/state count mismatch")
        self.components = list(components)
        self.ctx = components[0].ctx
        self.state_vars = list(state_vars)

    def __eq__(self, other):
        return (isinstance(other, VectorField) and self.components == other.components
                and self.state_vars == other.state_vars)


def lie_bracket(a: VectorField, b: VectorField) -> VectorField:
    """[a, b] = Jac(a)*b - Jac(b)*a.

    Sign convention fixed so that assembling (F, G, [G,F], [[G,F],G]) as
    columns reproduces the contrast matrix entrywise; the common
    differential-geometry convention is the negative of this one.
    """
    if a.state_vars != b.state_vars or a.ctx != b.ctx:
        raise PolyError("vector fields on different spaces")
    ja = jacobian(a.components, a.state_vars)
    jb = jacobian(b.components, b.state_vars)
    v1 = ja.mul_vector(b.components)
    v2 = jb.mul_vector(a.components)
    return VectorField([x - y for x, y in zip(v1, v2)], a.state_vars)


def resultant(f: MultiPoly, g: MultiPoly, name: str) -> MultiPoly:
    """Resultant of f and g with respect to `name` (Sylvester determinant,
    computed fraction-free)."""
    df, dg = f.degree_in(name), g.degree_in(name)
    if df < 0 or dg < 0:
        raise PolyError("resultant with zero polynomial")
    if df == 0:
        return f ** dg
    if dg == 0:
        return g ** df
    fc = [f.coefficient_in(name, df - i) for i in range(df + 1)]
    gc = [g.coefficient_in(name, dg - i) for i in range(dg + 1)]
    n = df + dg
    zero = f.ctx.zero()
    rows = []
    for i in range(dg):
        rows.append([zero] * i + fc + [zero] * (n - df - 1 - i))
    for i in range(df):
        rows.append([zero] * i + gc + [zero] * (n - dg - 1 - i))
    return PolyMatrix(rows).det()


def discriminant(f: MultiPoly, name: str) -> MultiPoly:
    """Resultant of f and df/dname (up to the usual constant factor)."""
    d = f.diff(name)
    if d.is_zero():
        raise PolyError("discriminant of polynomial constant in %s" % name)
    return resultant(f, d, name)


# ---------------------------------------------------------------------------
# exact rational linear algebra (used to lift points onto incidence varieties)


class LinearSolveError(PolyError):
    pass


def solve_rational_linear(a: Sequence[Sequence[mpq]], b: Sequence[mpq]) -> list:
    """Solve A x = b exactly over QQ.  Raises LinearSolveError when the
    system is inconsistent or underdetermined."""
    m = len(a)
    if m == 0:
        raise LinearSolveError("empty system")
    n = len(a[0])
    aug = [[Q(x) for x in row] + [Q(b[i])] for i, row in enumerate(a)]
    row = 0
    pivots = []
    for col in range(n):
        p = next((r for r in range(row, m) if aug[r][col] != 0), None)
        if p is None:
            continue
        aug[row], aug[p] = aug[p], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for r in range(m):
            if r != row and aug[r][col] != 0:
                fac = aug[r][col]
                aug[r] = [x - fac * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if aug[r][n] != 0:
            raise LinearSolveError("inconsistent linear system")
    if len(pivots) < n:
        raise LinearSolveError("underdetermined linear system")
    x = [mpq(0)] * n
    for r, col in enumerate(pivots):
        x[col] = aug[r][n]
    return x
