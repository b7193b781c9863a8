"""Polynomial matrices: determinants, minors, Jacobians, Lie brackets,
resultants and exact linear algebra."""

import random

import pytest
from gmpy2 import mpq

from detsing.poly import MultiPoly, Q, VarContext, parse_poly
from detsing.matrix import (LinearSolveError, PolyMatrix, VectorField,
                            _det_cofactor, discriminant, jacobian,
                            lie_bracket, resultant, solve_rational_linear)

from conftest import rand_coeff, rand_poly


def rand_matrix(rng, ctx, n, max_deg=2):
    return PolyMatrix([[rand_poly(rng, ctx, max_deg=max_deg, max_terms=2)
                        for _ in range(n)] for _ in range(n)])


def test_bareiss_equals_cofactor():
    rng = random.Random(201)
    ctx = VarContext(["x", "y"])
    for trial in range(200):
        n = rng.choice([2, 2, 3, 3, 3, 4, 4, 5])
        deg = 2 if n <= 3 else 1
        m = rand_matrix(rng, ctx, n, max_deg=deg)
        assert m.det() == _det_cofactor(m.entries)


def test_minor_counts():
    ctx = VarContext(["x"])
    m = PolyMatrix([[ctx.variable("x") ** (i + j) for j in range(4)]
                    for i in range(4)])
    assert len(m.minors(2)) == 36      # C(4,2)^2
    assert len(m.minors(4)) == 1
    assert m.minors(4)[0][2] == m.det()


def test_jacobian_entries():
    ctx = VarContext(["x", "y"])
    x, y = ctx.variable("x"), ctx.variable("y")
    j = jacobian([x ** 2 * y, x + y], ["x", "y"])
    assert j.entries[0][0] == x * y * 2
    assert j.entries[0][1] == x ** 2
    assert j.entries[1][0] == ctx.one()


def test_lie_bracket_bilinear_antisymmetric():
    rng = random.Random(202)
    ctx = VarContext(["x", "y"])
    sv = ["x", "y"]
    for _ in range(200):
        a = VectorField([rand_poly(rng, ctx, max_deg=2, max_terms=3)
                         for _ in sv], sv)
        b = VectorField([rand_poly(rng, ctx, max_deg=2, max_terms=3)
                         for _ in sv], sv)
        c = VectorField([rand_poly(rng, ctx, max_deg=2, max_terms=3)
                         for _ in sv], sv)
        ab = lie_bracket(a, b)
        ba = lie_bracket(b, a)
        assert all(p == -q for p, q in zip(ab.components, ba.components))
        lam = rand_coeff(rng)
        scaled = VectorField([p.scale(lam) for p in a.components], sv)
        lhs = lie_bracket(scaled, b)
        rhs = lie_bracket(a, b)
        assert all(p == q.scale(lam) for p, q in zip(lhs.components,
                                                     rhs.components))
        summed = VectorField([p + q for p, q in zip(a.components, c.components)], sv)
        lhs2 = lie_bracket(summed, b)
        assert all(p == q + r for p, q, r in zip(
            lhs2.components, lie_bracket(a, b).components,
            lie_bracket(c, b).components))


def test_low_rank_point_kills_minor_derivatives():
    """At a point where the matrix has rank <= r-1, every partial derivative
    of every (r+1)-minor vanishes (the rank stratum V_{r-1} sits inside the
    singular locus of V_r)."""
    rng = random.Random(203)
    k = 4
    names = ["m%d%d" % (i, j) for i in range(k) for j in range(k)]
    ctx = VarContext(names)
    M = PolyMatrix([[ctx.variable("m%d%d" % (i, j)) for j in range(k)]
                    for i in range(k)])
    for trial in range(200):
        r = rng.choice([1, 2, 3])
        a = [[rand_coeff(rng, 5) for _ in range(r - 1)] for _ in range(k)]
        b = [[rand_coeff(rng, 5) for _ in range(k)] for _ in range(r - 1)]
        point = {}
        for i in range(k):
            for j in range(k):
                point["m%d%d" % (i, j)] = sum(
                    (a[i][l] * b[l][j] for l in range(r - 1)), mpq(0))
        minors = M.minor_polys(r + 1)
        for mp in minors[:6]:
            for v in rng.sample(names, 4):
                assert mp.diff(v).eval(point) == 0


def test_resultant_roots_and_discriminant():
    ctx = VarContext(["x", "a", "b"])
    x, a, b = (ctx.variable(n) for n in ("x", "a", "b"))
    # res_x((x-a)(x-b), x-a) = 0;  res_x(x-a, x-b) = +-(a-b)
    f = (x - a) * (x - b)
    assert resultant(f, x - a, "x").is_zero()
    r = resultant(x - a, x - b, "x")
    assert r.equals_up_to_constant(a - b)
    # discriminant of a monic quadratic x^2 + a x + b is a^2 - 4b
    disc = discriminant(x ** 2 + a * x + b, "x")
    assert disc.equals_up_to_constant(a ** 2 - b * 4)


def test_resultant_vanishes_iff_common_factor():
    rng = random.Random(204)
    ctx = VarContext(["x", "t"])
    x, t = ctx.variable("x"), ctx.variable("t")
    for _ in range(50):
        c1, c2, c3 = (rand_coeff(rng, 6) for _ in range(3))
        common = x - t * c1 if c1 else x - t
        f = common * (x - ctx.constant(c2))
        g = common * (x + ctx.constant(c3) * t)
        assert resultant(f, g, "x").is_zero()


def test_solve_rational_linear():
    rng = random.Random(205)
    for _ in range(100):
        n = rng.choice([2, 3, 4])
        a = [[rand_coeff(rng, 9) for _ in range(n)] for _ in range(n)]
        x_true = [rand_coeff(rng, 9) for _ in range(n)]
        bvec = [sum((a[i][j] * x_true[j] for j in range(n)), mpq(0))
                for i in range(n)]
        try:
            x = solve_rational_linear(a, bvec)
        except LinearSolveError:
            continue  # singular draw
        assert x == x_true


def test_solve_rational_linear_singular():
    with pytest.raises(LinearSolveError):
        solve_rational_linear([[mpq(1), mpq(2)], [mpq(2), mpq(4)]],
                              [mpq(0), mpq(1)])
