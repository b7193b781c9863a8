"""Contrast application layer: matrix assembly, classification polynomials,
region predicates, and the rational-surface identities."""

import pytest
from gmpy2 import mpq

from detsing.matrix import jacobian, lie_bracket
from detsing.poly import PolyError, Q, VarContext, parse_poly, squarefree_part
from detsing import contrast
from detsing.contrast import (F_TABLE_TEXT, bloch_constraints, build_M_and_D,
                              build_bloch_fields, compose_rational,
                              derive_second_surface, expected_branch_products,
                              expected_count, f_table, full_context,
                              in_domain, param_context, reference_matrix,
                              region_predicate, singular_system,
                              surface_polys, verify_intersection_parametrization,
                              water_D_Dprime, xi_product)

STATE = ["y1", "z1", "y2", "z2"]
O_POINT = {"y1": mpq(0), "z1": mpq(-1), "y2": mpq(0), "z2": mpq(-1)}

# frozen transcription of the nine classification polynomials; the module
# copy must match character for character
F_TABLE_ORACLE = {
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


def _psi(p):
    ctx = p.ctx
    return p.subs_poly("y1", ctx.variable("y1") * -1) \
            .subs_poly("y2", ctx.variable("y2") * -1)


def test_matrix_reconstruction():
    """The bracket pipeline reproduces the literal reference matrix
    entry by entry."""
    M, D, Dp = build_M_and_D()
    R = reference_matrix()
    for i in range(4):
        for j in range(4):
            assert M.entries[i][j] == R.entries[i][j], (i, j)
    assert D == R.det()


def test_bracket_antisymmetry_of_fields():
    F, G = build_bloch_fields()
    lhs = lie_bracket(F, G)
    rhs = lie_bracket(G, F)
    for a, b in zip(lhs.components, rhs.components):
        assert a == b * -1


def test_D_parameter_homogeneity():
    """Every term of D has total degree exactly 3 in the four rates (D' has
    degree 4): scaling all rates scales the surfaces, so g1 can be
    normalized to 1."""
    _, D, Dp = build_M_and_D()
    ctx = D.ctx
    pidx = [ctx.index(n) for n in ("G1", "g1", "G2", "g2")]
    assert {sum(m[i] for i in pidx) for m in D.terms} == {3}
    assert {sum(m[i] for i in pidx) for m in Dp.terms} == {4}


def test_center_is_singular_symbolically():
    """D and its state gradient vanish at the ball center identically in
    the parameters; the same holds for D'."""
    _, D, Dp = build_M_and_D()
    assert D.specialize(O_POINT).is_zero()
    assert Dp.specialize(O_POINT).is_zero()
    for e in jacobian([D], STATE).entries[0]:
        assert e.specialize(O_POINT).is_zero()


def test_psi_equivariance():
    """(y1, y2) -> (-y1, -y2) fixes D and negates D', so both zero sets are
    mirror symmetric."""
    _, D, Dp = build_M_and_D()
    assert _psi(D) == D
    assert _psi(Dp) == Dp * -1


def test_constraints_and_domain():
    ctx = full_context()
    hs = bloch_constraints(ctx)
    assert len(hs) == 2
    vals = dict(O_POINT, G1=1, g1=1, G2=1, g2=1)
    for h in hs:
        assert h.eval(vals) == -1    # the center is strictly interior
        assert h.eval(dict(vals, y1=0, z1=0, y2=0, z2=0)) == 0   # north pole
    assert in_domain(mpq(1), mpq(2))
    assert not in_domain(mpq(0), mpq(2))
    assert not in_domain(mpq(5), mpq(2))


def test_f_table_transcription():
    assert F_TABLE_TEXT == F_TABLE_ORACLE
    ft = f_table()
    assert set(ft) == {"f%d" % i for i in range(1, 10)}
    for p in ft.values():
        assert not p.is_zero()
        assert p.support_names() <= {"g2", "G2"}


def test_xi_product_structure():
    xi = xi_product()
    assert not xi.is_zero()
    assert xi.support_names() == {"g2", "G2"}
    # vanishes on each wall it is built from
    assert xi.eval({"g2": mpq(0), "G2": mpq(5)}) == 0
    assert xi.eval({"g2": mpq(4), "G2": mpq(2)}) == 0     # g2 = 2*G2
    assert xi.eval({"g2": mpq(3), "G2": mpq(1)}) == 0     # f1
    assert xi.eval({"g2": mpq(1), "G2": mpq(1)}) == 0     # f2
    # nonzero at an interior sample
    assert xi.eval({"g2": mpq(1, 2), "G2": mpq(2)}) != 0


def test_region_predicate_and_counts():
    cases = [((mpq(1, 2), mpq(2)), "outside", 1),
             ((mpq(3), mpq(7, 4)), "G1+", 2),
             ((mpq(1, 10), mpq(4, 5)), "G1-", 2),
             ((mpq(5, 4), mpq(17, 12)), "G2+", 3)]
    for (g2v, G2v), tag, count in cases:
        assert region_predicate(g2v, G2v) == tag
        assert expected_count(tag) == count
    assert region_predicate(mpq(1, 2), mpq(1)) == "boundary"   # f1 = 0
    with pytest.raises(PolyError):
        region_predicate(mpq(5), mpq(2))                    # outside domain
    with pytest.raises(PolyError):
        expected_count("boundary")


def test_expected_branch_products():
    prods = expected_branch_products()
    assert set(prods) == {"boundary/h1", "boundary/h2", "critical",
                          "rank_exactly"}
    for p in prods.values():
        assert squarefree_part(p).equals_up_to_constant(p)
        assert p.support_names() <= {"g2", "G2"}
    # spot degrees of the assembled products
    assert prods["boundary/h1"].total_degree() == 5
    assert prods["rank_exactly"].total_degree() == 4


def test_water_problem_shape():
    prob = singular_system(water=True)
    assert prob.k == 4 and prob.r0 == 3
    assert prob.x_names == STATE
    assert sorted(prob.param_names) == ["G2", "g2"]
    eqs = prob.singular_equations()
    assert len(eqs) == 5    # det + four partials
    for p in eqs:
        assert p.specialize(O_POINT).support_names() <= {"G2", "g2"}
        assert p.specialize(O_POINT).is_zero()


def test_compose_rational_small():
    ctx = VarContext(["x", "t"])
    p = parse_poly("x^2 - t", ctx)
    num = parse_poly("t + 1", ctx)
    den = parse_poly("t - 1", ctx)
    out = compose_rational(p, {"x": (num, den)})
    # (t+1)^2 - t (t-1)^2
    want = (num * num) - ctx.variable("t") * den * den
    assert out == want


def test_surface_identities():
    """Both rational surfaces lie on {D = 0} n {D' = 0}; the printed second
    z1-numerator is a duplicate of the y1 one and the derived replacement
    works."""
    rep = verify_intersection_parametrization()
    assert rep["ok"]
    assert rep["D_xi1"] and rep["Dprime_xi1"]
    assert rep["D_xi2"] and rep["Dprime_xi2"]
    assert rep["printed_P2z_is_P2y_duplicate"]
    assert not rep["printed_P2z_matches_derived"]


def test_derive_second_surface_scale():
    _, scale = derive_second_surface()
    assert scale == 1
