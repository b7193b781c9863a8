"""The NMR contrast application: Bloch vector fields, the determinant
matrix, the water specialization, the nine classification polynomials and
region predicates, and the rational-surface identity checks.

Conventions: state variables (y1, z1, y2, z2) live in the frame shifted so
the north-pole equilibrium is the origin; the Bloch-ball center is then
O = (0, -1, 0, -1).  Parameters are G1, g1 (first matter) and G2, g2
(second matter), with gi the longitudinal and Gi the transverse rate.  The
Lie bracket convention is [a, b] = Jac(a).b - Jac(b).a, which makes the
assembled matrix match the reference entries with d_i = g_i - G_i.
"""

from __future__ import annotations

from gmpy2 import mpq

from .poly import (MultiPoly, PolyError, Q, VarContext, parse_poly,
                   squarefree_part, poly_gcd)
from .matrix import PolyMatrix, VectorField, lie_bracket
from .detclass import DetProblem

STATE_VARS = ("y1", "z1", "y2", "z2")
ALL_PARAMS = ("G1", "g1", "G2", "g2")


def full_context() -> VarContext:
    return VarContext(STATE_VARS + ALL_PARAMS)


def build_bloch_fields():
    """Drift F and control field G of the two-spin system in the shifted
    frame: ydot_i = -Gi yi - u (zi+1), zdot_i = -gi zi + u yi."""
    ctx = full_context()
    y1, z1, y2, z2 = (ctx.variable(v) for v in STATE_VARS)
    G1, g1, G2, g2 = (ctx.variable(v) for v in ALL_PARAMS)
    F = VectorField([-G1 * y1, -g1 * z1, -G2 * y2, -g2 * z2], list(STATE_VARS))
    G = VectorField([-z1 - ctx.one(), y1, -z2 - ctx.one(), y2], list(STATE_VARS))
    return F, G


def build_M_and_D():
    """M with columns (F, G, [G,F], [[G,F],G]); D = det M; D' uses
    [[G,F],F] as the fourth column."""
    F, G = build_bloch_fields()
    gf = lie_bracket(G, F)
    ggf = lie_bracket(gf, G)
    fgf = lie_bracket(gf, F)
    cols = [F.components, G.components, gf.components, ggf.components]
    M = PolyMatrix([[cols[j][i] for j in range(4)] for i in range(4)])
    cols2 = [F.components, G.components, gf.components, fgf.components]
    M2 = PolyMatrix([[cols2[j][i] for j in range(4)] for i in range(4)])
    return M, M.det(), M2.det()


def build_Mprime():
    """The alternate matrix whose determinant is D'."""
    F, G = build_bloch_fields()
    gf = lie_bracket(G, F)
    fgf = lie_bracket(gf, F)
    cols = [F.components, G.components, gf.components, fgf.components]
    return PolyMatrix([[cols[j][i] for j in range(4)] for i in range(4)])


def reference_matrix() -> PolyMatrix:
    """Literal entrywise transcription of the determinant matrix, with
    d_i = g_i - G_i substituted; used to cross-check the bracket pipeline."""
    ctx = full_context()

    def p(s):
        return parse_poly(s, ctx)

    rows = [
        ["-G1*y1", "-z1 - 1", "g1*z1 - G1*z1 - G1", "2*g1*y1 - 2*G1*y1"],
        ["-g1*z1", "y1", "g1*y1 - G1*y1",
         "-2*g1*z1 + 2*G1*z1 + 2*G1 - g1"],
        ["-G2*y2", "-z2 - 1", "g2*z2 - G2*z2 - G2", "2*g2*y2 - 2*G2*y2"],
        ["-g2*z2", "y2", "g2*y2 - G2*y2",
         "-2*g2*z2 + 2*G2*z2 + 2*G2 - g2"],
    ]
    return PolyMatrix([[p(s) for s in row] for row in rows])


def bloch_constraints(ctx: VarContext):
    """h_i = y_i^2 + (z_i+1)^2 - 1 <= 0 (inside the Bloch ball)."""
    out = []
    for y, z in (("y1", "z1"), ("y2", "z2")):
        yv = ctx.variable(y)
        zv = ctx.variable(z)
        out.append(yv * yv + (zv + ctx.one()) * (zv + ctx.one()) - ctx.one())
    return out


def singular_system(water: bool = True) -> DetProblem:
    """The determinantal problem for the singularities of {D = 0}.

    The equations are homogeneous in the four rates, so g1 is normalized
    to 1; the water case additionally sets G1 = 1, leaving (G2, g2).
    """
    M, _, _ = build_M_and_D()
    assign = {"g1": 1, "G1": 1} if water else {"g1": 1}
    M_spec = M.map_entries(lambda e: e.specialize(assign))
    ctx = M_spec.entries[0][0].ctx
    params = [n for n in ctx.names if n not in STATE_VARS]
    return DetProblem(M_spec, 3, list(STATE_VARS), params,
                      bloch_constraints(ctx),
                      name="water" if water else "general")


def param_context() -> VarContext:
    return VarContext(["G2", "g2"])


# literal transcription of the nine classification polynomials (G2 = Gamma_2,
# g2 = gamma_2)
F_TABLE_TEXT = {
    "f1": "G2 - 1",
    "f2": "3*G2 - 2*g2 - 1",
    "f3": "3*G2^2 - 5*G2*g2 + g2^2 + 2*G2 - 2*g2 + 1",
    "f4": "2*G2^2 - 5*G2*g2 + 2*g2^2 - 2*G2 + 3*g2",
    "f5": "2*g2^3 - 3*G2*g2^2 - 11*g2^2 - 3*G2^2*g2 + 9*G2*g2 + 6*g2"
          " + 2*G2^3 + 2*G2^2 - 4*G2",
    "f6": "G2 - 2*g2 + 1",
    "f7": "2*G2 - g2 - 1",
    "f8": "g2 - 2 + G2",
    "f9": "2*G2^2 - 5*G2*g2 + 2*g2^2 + 1",
}


def f_table(ctx: VarContext | None = None) -> dict:
    """The nine classification polynomials in (g2, G2)."""
    ctx = ctx or param_context()
    return {k: parse_poly(s, ctx) for k, s in F_TABLE_TEXT.items()}


def xi_product(ctx: VarContext | None = None) -> MultiPoly:
    """g2 * G2 * (g2 - 2*G2) * f1 * ... * f9: its zero set carries all the
    walls between constant-count regions."""
    ctx = ctx or param_context()
    ft = f_table(ctx)
    acc = ctx.variable("g2") * ctx.variable("G2") \
        * (ctx.variable("g2") - 2 * ctx.variable("G2"))
    for i in range(1, 10):
        acc = acc * ft["f%d" % i]
    return acc


def in_domain(g2, G2) -> bool:
    g2, G2 = Q(g2), Q(G2)
    return 0 < g2 < 2 * G2


def region_predicate(g2, G2) -> str:
    """Tag of the parameter point: one of G1-, G1+, G2-, G2+, outside, or
    boundary when a defining polynomial vanishes."""
    g2, G2 = Q(g2), Q(G2)
    if not in_domain(g2, G2):
        raise PolyError("point (%s, %s) outside the domain 0 < g2 < 2*G2" % (g2, G2))
    ft = f_table()
    vals = {nm: p.eval({"g2": g2, "G2": G2}) for nm, p in ft.items()}
    walls = [g2, 2 * G2 - g2, G2] + list(vals.values())
    if any(w == 0 for w in walls):
        return "boundary"
    if G2 < 1 and vals["f2"] > 0:
        return "G1-"
    if G2 > 1 and vals["f2"] < 0 and vals["f4"] > 0:
        return "G1+"
    if 0 < G2 < 1 and vals["f6"] > 0 and vals["f3"] < 0:
        return "G2-"
    if G2 > 1 and vals["f6"] < 0 and vals["f5"] > 0:
        return "G2+"
    return "outside"


def expected_count(tag: str) -> int:
    """Singularity count inside the Bloch ball per region class."""
    if tag in ("G1-", "G1+"):
        return 2
    if tag in ("G2-", "G2+"):
        return 3
    if tag == "outside":
        return 1
    raise PolyError("no count for tag %r" % tag)


def expected_branch_products(ctx: VarContext | None = None) -> dict:
    """Squarefree parts of the reference per-branch projections."""
    ctx = ctx or param_context()
    ft = f_table(ctx)
    g2 = ctx.variable("g2")
    G2 = ctx.variable("G2")
    dom = 2 * G2 - g2
    return {
        "boundary/h1": squarefree_part(g2 * ft["f1"] * ft["f2"] * ft["f3"]),
        "boundary/h2": squarefree_part(dom * ft["f1"] * ft["f4"] * ft["f5"]),
        "critical": squarefree_part(dom * (G2 + 1) * ft["f1"] * ft["f6"] * ft["f7"]),
        "rank_exactly": squarefree_part(dom * ft["f8"] * ft["f9"]),
    }


# ---------------------------------------------------------------------------
# rational parametrization of {D=0} n {D'=0} (water): transcription and check


def surface_context() -> VarContext:
    return VarContext(["y2", "z2", "G2", "g2"])


def surface_polys(ctx: VarContext | None = None) -> dict:
    """The building blocks of the two rational surfaces, in (y2, z2, G2, g2).

    Written with y2 entering through y2^2 only, as in the source formulas.
    """
    ctx = ctx or surface_context()

    def p(s):
        return parse_poly(s, ctx)

    d = p("G2 - g2")           # G2 - g2 (note: d2 = g2 - G2 = -this)
    y2sq = p("y2^2")
    z2 = p("z2")
    G2 = p("G2")
    g2 = p("g2")
    one = ctx.one()

    P1y = 2 * (g2 - G2) * z2 - 2 * G2 + g2
    P1z = g2 * (g2 - G2) * z2 ** 2 - G2 * g2 * z2 + G2 * (G2 - g2) * y2sq
    Q1z = g2 * (G2 - g2 - one) * z2 ** 2 + g2 * (G2 - one) * z2 \
        + G2 * (g2 - G2 - one) * y2sq
    R1 = (g2 ** 2 * d ** 2 * z2 ** 4
          + 2 * G2 * g2 ** 2 * d * z2 ** 3
          + (2 * (2 * one - G2 * g2) * d ** 2 * y2sq + G2 ** 2 * g2 ** 2) * z2 ** 2
          - 2 * (G2 ** 2 * g2 - 4 * G2 + 2 * g2) * d * y2sq * z2
          + G2 ** 2 * d ** 2 * y2sq ** 2
          + (2 * G2 - g2) ** 2 * y2sq)

    big = p("12*G2^4 - 28*G2^3*g2 + 25*G2^2*g2^2 - 11*G2*g2^3 + 2*g2^4"
            " - 12*G2^3 + 24*G2^2*g2 - 17*G2*g2^2 + 4*g2^3"
            " - 12*G2^2 + 8*G2*g2 - 2*g2^2 + 12*G2 - 4*g2")
    sext = p("6*G2^3 - 10*G2^2*g2 + 6*G2*g2^2 - g2^3 + 2*G2*g2 - 6*G2 + g2")
    P2z = (2 * (d - one) * (2 * G2 ** 2 - 3 * G2 * g2 + g2 ** 2 - 2 * one) * d ** 3 * z2 ** 3
           + big * d ** 2 * z2 ** 2
           + (-2 * (d + one) * (G2 ** 2 - 3 * G2 * g2 + 2 * g2 ** 2 - 2 * one) * d ** 3 * y2sq
              + (G2 - one) * d * (2 * G2 - g2) * sext) * z2
           - (G2 ** 2 - 2 * G2 * g2 + 2 * g2 - 2 * one) * (d + one) * (2 * G2 - g2) * d ** 2 * y2sq
           + G2 * (G2 - one) ** 2 * (d + one) * (2 * G2 - g2) ** 2)

    R2 = (4 * (d - one) ** 2 * d ** 4 * z2 ** 4
          + 4 * (d - one) * (4 * G2 ** 2 - 3 * G2 * g2 + g2 ** 2 - 4 * G2 + g2) * d ** 3 * z2 ** 3
          + (-4 * (G2 ** 2 - 2 * G2 * g2 + g2 ** 2 - 2 * one) * d ** 4 * y2sq
             + p("24*G2^4 - 36*G2^3*g2 + 21*G2^2*g2^2 - 6*G2*g2^3 + g2^4"
                 " - 48*G2^3 + 48*G2^2*g2 - 18*G2*g2^2 + 2*g2^3"
                 " + 24*G2^2 - 12*G2*g2 + g2^2") * d ** 2) * z2 ** 2
          + (-4 * p("2*G2^3 - 4*G2^2*g2 + 3*G2*g2^2 - g2^3 + 2*G2*g2 - 4*G2 + g2")
             * d ** 3 * y2sq
             + 2 * G2 * (G2 - one) * d * (2 * G2 - g2)
             * (4 * G2 ** 2 - 3 * G2 * g2 + g2 ** 2 - 4 * G2 + g2)) * z2
          + 4 * (d + one) ** 2 * d ** 4 * y2sq ** 2
          - G2 * (2 * G2 ** 2 - 3 * G2 * g2 + 4 * g2 - 4 * one) * (2 * G2 - g2) * d ** 2 * y2sq
          + G2 ** 2 * (G2 - one) ** 2 * (2 * G2 - g2) ** 2)

    # The source prints one formula under both second-surface labels.  The
    # identity checks show it is the y1-numerator (degree 3 in z2, matching
    # the stated degrees); the z1-numerator is recovered in
    # derive_second_surface() from the resultant factorization.
    P2y = P2z

    return {"P1y": P1y, "P1z": P1z, "Q1z": Q1z, "R1": R1,
            "P2z": P2z, "P2y": P2y, "R2": R2}


def derive_second_surface(ctx: VarContext | None = None):
    """Recover the z1-numerator of the second surface directly.

    res_{y1}(D, D') factors as (R1*z1 - P1z*Q1z) * (C1*z1 + C0) with
    C1 = R2; the second factor gives z1 = -C0/R2.  Returns (P2z, scale)
    where scale is the constant with C1 = scale * R2 (a self-check)."""
    from .matrix import resultant
    ctx = ctx or surface_context()
    D, Dp = water_D_Dprime()
    S = surface_polys(ctx)
    R = resultant(D, Dp, "y1")
    big = R.ctx
    z1 = big.variable("z1")
    A = S["R1"].in_context(big) * z1 - (S["P1z"] * S["Q1z"]).in_context(big)
    quot = R.exact_div(A)
    C1 = quot.coefficient_in("z1", 1)
    C0 = quot.coefficient_in("z1", 0)
    R2b = S["R2"].in_context(big)
    if not C1.equals_up_to_constant(R2b):
        raise PolyError("second resultant factor does not match R2")
    m = next(iter(R2b.terms))
    scale = C1.terms[m] / R2b.terms[m]
    p2z = (-C0) * (Q(1) / scale)
    return p2z.in_context(ctx), scale


def compose_rational(p: MultiPoly, subs: dict) -> MultiPoly:
    """Numerator of p after substituting variable -> (num, den) pairs
    (all dens equal); clears the common denominator exactly."""
    ctx = next(iter(subs.values()))[0].ctx
    dens = {den for _, den in subs.values()}
    if len(dens) != 1:
        raise PolyError("substitutions must share one denominator")
    den = dens.pop()
    names = list(subs)
    idx = [p.ctx.index(n) for n in names]
    d = max((sum(m[i] for i in idx) for m in p.terms), default=0)
    acc = ctx.zero()
    for m, c in p.terms.items():
        term = ctx.constant(c)
        used = 0
        for pos, e in enumerate(m):
            if e == 0:
                continue
            nm = p.ctx.names[pos]
            if nm in subs:
                term = term * subs[nm][0] ** e
                used += e
            else:
                term = term * ctx.variable(nm) ** e
        acc = acc + term * den ** (d - used)
    return acc


def water_D_Dprime():
    """D and D' specialized to the water case (G1 = g1 = 1)."""
    _, D, Dp = build_M_and_D()
    return (D.specialize({"G1": 1, "g1": 1}),
            Dp.specialize({"G1": 1, "g1": 1}))


def verify_intersection_parametrization() -> dict:
    """Check that both rational surfaces lie on {D=0} n {D'=0}: the
    numerators of D and D' after substituting each parametrization must
    vanish identically.  Returns a report with one boolean per identity.

    The second surface's z1-numerator is misprinted in the source (the
    y1-numerator appears under both labels); xi2 uses the printed formula
    for y1 and the resultant-derived z1-numerator, and the report records
    both the misprint detection and the derived identity."""
    D, Dp = water_D_Dprime()
    ctx = surface_context()
    S = surface_polys(ctx)
    y2 = ctx.variable("y2")
    p2z, scale = derive_second_surface(ctx)

    report = {"printed_P2z_is_P2y_duplicate": S["P2z"] == S["P2y"],
              "printed_P2z_matches_derived": S["P2z"].equals_up_to_constant(p2z),
              "R2_scale": str(scale)}
    xi1 = {"z1": (S["P1z"] * S["Q1z"], S["R1"]),
           "y1": (S["P1y"] * S["Q1z"] * y2, S["R1"])}
    xi2 = {"z1": (p2z, S["R2"]),
           "y1": (S["P2y"] * y2, S["R2"])}
    for tag, xi in (("xi1", xi1), ("xi2", xi2)):
        for pname, poly in (("D", D), ("Dprime", Dp)):
            num = compose_rational(poly, xi)
            report["%s_%s" % (pname, tag)] = num.is_zero()
    report["ok"] = all(report[k] for k in
                       ("D_xi1", "Dprime_xi1", "D_xi2", "Dprime_xi2"))
    return report
