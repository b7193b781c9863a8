import random

import pytest
from gmpy2 import mpq

from detsing.poly import MultiPoly, VarContext


def rand_coeff(rng, bound=20):
    num = rng.randint(-bound, bound)
    den = rng.randint(1, 6)
    return mpq(num, den)


def rand_poly(rng, ctx, max_deg=3, max_terms=5, cbound=20, allow_zero=True):
    n = len(ctx)
    terms = {}
    for _ in range(rng.randint(0 if allow_zero else 1, max_terms)):
        mono = [0] * n
        budget = rng.randint(0, max_deg)
        for _ in range(budget):
            mono[rng.randrange(n)] += 1
        c = rand_coeff(rng, cbound)
        if c:
            key = tuple(mono)
            terms[key] = terms.get(key, mpq(0)) + c
    terms = {m: c for m, c in terms.items() if c}
    return MultiPoly(ctx, terms)


def rand_nonzero_poly(rng, ctx, **kw):
    kw["allow_zero"] = False
    while True:
        p = rand_poly(rng, ctx, **kw)
        if not p.is_zero():
            return p


@pytest.fixture
def rng():
    return random.Random(0xDE75)
