"""Classification of parametric determinantal varieties via incidence systems.

Given a k x k polynomial matrix M in variables X and parameters G, a target
rank r0 and constraints H (each h <= 0), the three routines here produce
nonzero polynomials in the parameters only:

  * rank_exactly     covers the projection of V cap {rank M = r0}
  * critical_values  covers the critical values of the parameter projection
  * boundary_values  covers the projection of V cap {some h = 0}

where V is the variety of the (r0+1)-minors of M together with the maximal
minors of their truncated Jacobian in X.  The zero set of the product splits
the parameter space into open cells with locally constant real fiber counts.

Rank conditions are modelled by incidence systems: M.Y = 0 for a k x (k-r)
kernel matrix Y of fresh variables, affinized by U.Y = Id for a random
rational U.  Before any elimination we run the linear presolve of the
Groebner module; substituting kernel variables that occur linearly with
constant coefficients is an ideal isomorphism, and for the critical-value
Jacobian it is sound to take the determinant of the presolved system
instead of the full one (the two systems differ by multiplication with a
matrix of constant determinant, so the saturated ideals coincide).
"""

from __future__ import annotations

import json
import random
from typing import Sequence

from gmpy2 import mpq

from .poly import (MultiPoly, PolyError, Q, VarContext, format_poly,
                   squarefree_part)
from .matrix import PolyMatrix, jacobian, solve_rational_linear
from .groebner import (DEFAULT_BUDGET, BudgetExceeded, eliminate,
                       eliminate_by_interpolation, InconsistentSpecialization,
                       fresh_var_name, presolve_linear, saturate_rabinowitsch)

U_BOUND = 2 ** 15

# initial pivot-degree guess for interpolation-based parameter elimination;
# the routine doubles it on failure
INTERP_DEGREE = 5


def _eliminate_params(system, param_names, budget):
    """Parameter elimination for branch systems.

    Two parameters: interpolation in the last parameter (each specialized
    system needs no elimination order, only a grevlex basis), falling back
    to a direct block-order elimination.  Other arities go direct.
    """
    params = list(param_names)
    if len(params) == 2:
        try:
            return eliminate_by_interpolation(
                system, params, pivot=params[-1], degree_bound=INTERP_DEGREE,
                budget=budget)
        except InconsistentSpecialization:
            pass
    return eliminate(system, params, budget=budget)


class DetProblem:
    """A parametric determinantal classification problem."""

    def __init__(self, M: PolyMatrix, r0: int, x_names: Sequence[str],
                 param_names: Sequence[str], constraints: Sequence[MultiPoly],
                 name: str = ""):
        if not M.is_square():
            raise PolyError("M must be square")
        k = M.rows
        if not 1 <= r0 <= k - 1:
            raise PolyError("r0=%d out of range for k=%d" % (r0, k))
        n = len(x_names)
        if n != (k - r0 + 1) ** 2:
            raise PolyError("need n = (k-r0+1)^2 variables, got n=%d for k=%d, r0=%d"
                            % (n, k, r0))
        ctx = M.ctx
        for v in list(x_names) + list(param_names):
            ctx.index(v)
        if set(x_names) & set(param_names):
            raise PolyError("variables and parameters overlap")
        allowed = set(x_names) | set(param_names)
        for row in M.entries:
            for e in row:
                if not e.support_names() <= allowed:
                    raise PolyError("matrix entry uses symbols outside X, G")
        self.M = M
        self.k = k
        self.r0 = r0
        self.x_names = list(x_names)
        self.param_names = list(param_names)
        self.constraints = list(constraints)
        self.name = name

    @property
    def ctx(self):
        return self.M.ctx

    def minor_system(self):
        """F_{V,0}: the (r0+1)-minors of M (for r0 = k-1, just det M)."""
        return self.M.minor_polys(self.r0 + 1)

    def singular_equations(self):
        """F_{V,1}: the minors plus the (k-r0)^2-minors of their truncated
        Jacobian in X.  This is the system defining V."""
        f0 = self.minor_system()
        j = jacobian(f0, self.x_names)
        s = (self.k - self.r0) ** 2
        return f0 + [m for m in j.minor_polys(s) if not m.is_zero()]


class IncidenceSystem:
    """M.Y = 0, U.Y = Id over the context extended with kernel variables."""

    def __init__(self, M: PolyMatrix, r: int, u):
        k = M.rows
        if not 0 <= r <= k - 1:
            raise PolyError("rank %d out of range" % r)
        c = k - r
        if len(u) != c or any(len(row) != k for row in u):
            raise PolyError("u must have shape %d x %d" % (c, k))
        self.r = r
        self.u = [[Q(x) for x in row] for row in u]
        base = M.ctx
        self.y_names = [["_k%d_%d" % (i, j) for j in range(c)] for i in range(k)]
        flat = [n for row in self.y_names for n in row]
        for nm in flat:
            if nm in base:
                raise PolyError("kernel variable name %s collides" % nm)
        ctx = base.extend(flat)
        self.ctx = ctx
        m_ext = M.map_entries(lambda e: e.in_context(ctx))
        yv = [[ctx.variable(self.y_names[i][j]) for j in range(c)] for i in range(k)]
        gens = []
        for i in range(k):
            for j in range(c):
                acc = ctx.zero()
                for l in range(k):
                    acc = acc + m_ext.entries[i][l] * yv[l][j]
                gens.append(acc)
        for i in range(c):
            for j in range(c):
                acc = ctx.zero()
                for l in range(k):
                    acc = acc + yv[l][j] * self.u[i][l]
                gens.append(acc - (1 if i == j else 0))
        self.generators = gens
        self.kernel_vars = flat

    def __len__(self):
        return len(self.generators)


def incidence_system(M: PolyMatrix, r: int, u) -> IncidenceSystem:
    return IncidenceSystem(M, r, u)


def draw_u(k: int, r: int, seed) -> list:
    """(k-r) x k rational matrix, entries uniform in [-2^15, 2^15] minus 0."""
    rng = random.Random(seed)
    rows = []
    while len(rows) < k - r:
        row = []
        for _ in range(k):
            v = 0
            while v == 0:
                v = rng.randint(-U_BOUND, U_BOUND)
            row.append(mpq(v))
        if all(x == 0 for x in row):
            continue
        rows.append(row)
    return rows


def _pick_generator(gens):
    """Deterministic choice of one generator from an elimination output:
    minimal by (total degree, number of terms, term support)."""
    return min(gens, key=lambda p: (p.total_degree(), p.num_terms(),
                                    sorted(p.terms, reverse=True)))


def _branch_factor(gens, ctx_params):
    """Turn an elimination output into a branch factor.

    Empty output means the branch projects dominantly (or the branch system
    was consumed entirely); a constant means the branch is empty.  Both
    contribute 1.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return ctx_params.one(), "dominant-or-empty"
    if any(g.is_constant() for g in gens):
        return ctx_params.one(), "empty"
    return _pick_generator(gens).primitive(), "factor"


class ClassifyOutput:
    def __init__(self, P1, Pc, Pb, product, squarefree, branches, seed, u_draws):
        self.P1 = P1
        self.Pc = Pc
        self.Pb = Pb
        self.product = product
        self.squarefree = squarefree
        self.branches = branches  # [{"id":…, "poly":…, "status":…}]
        self.seed = seed
        self.u_draws = u_draws

    def to_json(self):
        doc = {
            "P1": format_poly(self.P1),
            "Pc": format_poly(self.Pc),
            "Pb": format_poly(self.Pb),
            "product": format_poly(self.product),
            "squarefree": format_poly(self.squarefree),
            "branches": self.branches,
            "seed": self.seed,
            "u": {key: [[str(x) for x in row] for row in mat]
                  for key, mat in self.u_draws.items()},
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def _param_ctx(problem: DetProblem) -> VarContext:
    return VarContext([n for n in problem.ctx.names if n in set(problem.param_names)])


def rank_exactly(problem: DetProblem, seed=0, budget: int = DEFAULT_BUDGET,
                 log=None):
    """Cover of the projection of V cap {rank M = r0}.

    One saturation branch per r0-minor of M (lexicographic index order):
    the previous minors vanish, the current one is invertible.
    """
    pctx = _param_ctx(problem)
    u = draw_u(problem.k, problem.r0, seed)
    inc = IncidenceSystem(problem.M, problem.r0, u)
    ctx = inc.ctx
    fv1 = [p.in_context(ctx) for p in problem.singular_equations()]
    minors = [(ri, ci, d.in_context(ctx))
              for ri, ci, d in problem.M.minors(problem.r0)]
    res = pctx.one()
    for i, (ri, ci, mi) in enumerate(minors):
        branch_id = "rank_exactly/minor%d_r%s_c%s" % (
            i, "".join(map(str, ri)), "".join(map(str, ci)))
        if mi.is_zero():
            if log is not None:
                log.append({"id": branch_id, "status": "zero-minor", "poly": "1"})
            continue
        system = inc.generators + fv1 + [m for _, _, m in minors[:i] if not m.is_zero()]
        sat, _ = saturate_rabinowitsch(system, mi)
        try:
            out = _eliminate_params(sat, problem.param_names, budget)
        except BudgetExceeded as e:
            raise BudgetExceeded(e.steps, "in branch %s" % branch_id)
        factor, status = _branch_factor(out, pctx)
        res = res * factor
        if log is not None:
            log.append({"id": branch_id, "status": status,
                        "poly": format_poly(factor)})
    if res.is_zero():
        raise PolyError("rank_exactly produced the zero polynomial")
    return res, u


def _critical_branch(problem: DetProblem, seed, budget, log=None):
    """Elimination of the critical locus of the corank-(k-r0+1) incidence
    system, after linear presolve (see module docstring for soundness)."""
    pctx = _param_ctx(problem)
    r1 = problem.r0 - 1
    u = draw_u(problem.k, r1, seed + 1 if isinstance(seed, int) else seed)
    inc = IncidenceSystem(problem.M, r1, u)
    elim_vars = problem.x_names + inc.kernel_vars
    reduced, _ = presolve_linear(inc.generators, elim_vars)
    live = sorted({v for p in reduced for v in p.support_names()
                   if v in set(elim_vars)},
                  key=inc.ctx.index)
    if not reduced:
        # the incidence system substituted away entirely: the corank locus
        # imposes no condition, the branch contributes 1
        if log is not None:
            log.append({"id": "critical", "status": "dominant-or-empty",
                        "poly": "1"})
        return pctx.one(), u
    if not live:
        crit = []
    elif len(reduced) != len(live):
        # the truncated Jacobian is not square: take all maximal minors
        j = jacobian(reduced, live)
        s = min(len(reduced), len(live))
        crit = [m for m in j.minor_polys(s) if not m.is_zero()]
    else:
        crit = [jacobian(reduced, live).det()]
    system = reduced + crit
    try:
        out = _eliminate_params(system, problem.param_names, budget)
    except BudgetExceeded as e:
        raise BudgetExceeded(e.steps, "in critical branch")
    factor, status = _branch_factor(out, pctx)
    if log is not None:
        log.append({"id": "critical", "status": status, "poly": format_poly(factor)})
    return factor, u


def _boundary_branches(problem: DetProblem, seed, budget, log=None):
    pctx = _param_ctx(problem)
    if not problem.constraints:
        raise PolyError("boundary_values needs a nonempty constraint list")
    r1 = problem.r0 - 1
    u = draw_u(problem.k, r1, seed + 2 if isinstance(seed, int) else seed)
    inc = IncidenceSystem(problem.M, r1, u)
    res = pctx.one()
    for hi, h in enumerate(problem.constraints):
        branch_id = "boundary/h%d" % (hi + 1)
        system = inc.generators + [h.in_context(inc.ctx)]
        try:
            out = _eliminate_params(system, problem.param_names, budget)
        except BudgetExceeded as e:
            raise BudgetExceeded(e.steps, "in branch %s" % branch_id)
        factor, status = _branch_factor(out, pctx)
        res = res * factor
        if log is not None:
            log.append({"id": branch_id, "status": status,
                        "poly": format_poly(factor)})
    return res, u


def critical_values(problem: DetProblem, seed=0, budget: int = DEFAULT_BUDGET,
                    with_rank=True, log=None):
    factor, _ = _critical_branch(problem, seed, budget, log=log)
    if with_rank:
        p1, _ = rank_exactly(problem, seed, budget, log=log)
        factor = factor * p1
    return factor


def boundary_values(problem: DetProblem, seed=0, budget: int = DEFAULT_BUDGET,
                    with_rank=True, log=None):
    factor, _ = _boundary_branches(problem, seed, budget, log=log)
    if with_rank:
        p1, _ = rank_exactly(problem, seed, budget, log=log)
        factor = factor * p1
    return factor


def classify(problem: DetProblem, seed=0, budget: int = DEFAULT_BUDGET) -> ClassifyOutput:
    """Run all three algorithms, sharing the rank_exactly factor (the paper
    remark: skip the repeated call and fold its output in once)."""
    log = []
    p1, u_rank = rank_exactly(problem, seed, budget, log=log)
    crit, u_crit = _critical_branch(problem, seed, budget, log=log)
    bnd, u_bnd = _boundary_branches(problem, seed, budget, log=log)
    pc = (crit * p1).primitive()
    pb = (bnd * p1).primitive()
    product = (p1 * crit * bnd).primitive()
    sqf = squarefree_part(product)
    return ClassifyOutput(p1.primitive(), pc, pb, product, sqf, log, seed,
                          {"rank": u_rank, "corank2_critical": u_crit,
                           "corank2_boundary": u_bnd})


def lift_to_incidence(M: PolyMatrix, r: int, u, x_assign: dict, g_assign: dict):
    """Kernel matrix Y at a rational point with rank(M) = r: solves the
    stacked linear system [M; U] . y_j = e_j exactly, column by column."""
    assign = dict(x_assign)
    assign.update(g_assign)
    k = M.rows
    c = k - r
    m_num = [[Q(e.eval(assign)) for e in row] for row in M.entries]
    cols = []
    for j in range(c):
        a = [row[:] for row in m_num] + [[Q(x) for x in row] for row in u]
        b = [Q(0)] * k + [Q(1) if i == j else Q(0) for i in range(c)]
        cols.append(solve_rational_linear(a, b))
    # Y as k x c
    return [[cols[j][i] for j in range(c)] for i in range(k)]


def sanity_warnings(problem: DetProblem, seed=0, budget: int = DEFAULT_BUDGET):
    """Probabilistic spot checks of the genericity hypotheses the algorithms
    assume; returns warning strings, never raises."""
    from .groebner import grevlex_order, groebner_basis, is_zero_dimensional
    warnings = []
    rng = random.Random(seed)
    eqs = problem.singular_equations()
    for trial in range(3):
        assign = {g: mpq(rng.randint(1, 40), rng.randint(1, 7)) for g in problem.param_names}
        spec = [p.specialize(assign) for p in eqs]
        spec = [p for p in spec if not p.is_zero()]
        if not spec:
            warnings.append("fiber at %s is the whole space" % (assign,))
            continue
        try:
            gb = groebner_basis(spec, grevlex_order(), budget=budget)
        except BudgetExceeded:
            warnings.append("fiber finiteness check at %s exceeded budget" % (assign,))
            continue
        if not is_zero_dimensional(gb):
            warnings.append("fiber at %s is not finite (hypothesis of finite "
                            "generic fibers may fail)" % (assign,))
    return warnings
