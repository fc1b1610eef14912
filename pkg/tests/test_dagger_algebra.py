import random

from conftest import random_curve
from quartic_zeta.curve_model import lift_curve
from quartic_zeta.dagger_algebra import (AlgebraContext, DifferentialForm, multiply,
                                         normalize_to_dx, total_differential)

R, CUT = 12, 60


def setup(F7, case=4, seed=1):
    c = random_curve(F7, case, random.Random(seed))
    lc = lift_curve(c, R)
    return AlgebraContext.from_lifted(lc, R, CUT)


def dense_product_mod_f(actx, u: dict, v: dict) -> dict:
    """Independent oracle: schoolbook product, then y^4 -> -(g y^2 + h), x truncated."""
    mod = actx.mod
    prod: dict = {}
    for (i1, j1), c1 in u.items():
        for (i2, j2), c2 in v.items():
            key = (i1 + i2, j1 + j2)
            prod[key] = (prod.get(key, 0) + c1 * c2) % mod
    while True:
        high = [(i, j) for (i, j), c in prod.items() if i >= 4 and c]
        if not high:
            break
        i, j = max(high)
        c = prod.pop((i, j))
        for d, gd in enumerate(actx.g):
            key = (i - 2, j + d)
            prod[key] = (prod.get(key, 0) - c * gd) % mod
        for d, hd in enumerate(actx.h):
            key = (i - 4, j + d)
            prod[key] = (prod.get(key, 0) - c * hd) % mod
    return {k: c for k, c in prod.items() if c and k[1] < actx.cut}


def test_unit_is_neutral(F7):
    actx = setup(F7)
    u = actx.from_monomials({(1, 3): 5, (3, 0): 2, (2, 7): 11})
    assert u * actx.one() == u


def test_y2_squared_uses_curve_equation(F7):
    actx = setup(F7)
    y2 = actx.monomial(2, 0)
    got = (y2 * y2).to_dict()
    want = {}
    for d, c in enumerate(actx.g):
        if (-c) % actx.mod:
            want[(2, d)] = (-c) % actx.mod
    for d, c in enumerate(actx.h):
        if (-c) % actx.mod:
            want[(0, d)] = (-c) % actx.mod
    assert got == want


def test_y3_squared_against_remainder_oracle(F7):
    actx = setup(F7)
    y3 = actx.monomial(3, 0)
    assert (y3 * y3).to_dict() == dense_product_mod_f(actx, {(3, 0): 1}, {(3, 0): 1})


def test_random_products_against_remainder_oracle(F7):
    rng = random.Random(4)
    for case in (1, 2, 3, 4):
        actx = setup(F7, case, case)
        for _ in range(5):
            u = {(rng.randrange(4), rng.randrange(25)): rng.randrange(actx.mod) for _ in range(8)}
            v = {(rng.randrange(4), rng.randrange(25)): rng.randrange(actx.mod) for _ in range(8)}
            got = multiply(actx.from_monomials(u), actx.from_monomials(v)).to_dict()
            assert got == dense_product_mod_f(actx, u, v)


def test_product_is_cut_at_truncation(F7):
    actx = setup(F7)
    u = actx.monomial(1, CUT - 5)
    assert (u * u).length <= CUT


def test_differentials(F7):
    actx = setup(F7)
    d = total_differential(actx.monomial(0, 1))
    assert d.A.to_dict() == {(0, 0): 1} and d.B.is_zero()
    d = total_differential(actx.monomial(3, 2))
    assert d.A.to_dict() == {(3, 1): 2} and d.B.to_dict() == {(2, 2): 3}
    d = total_differential(actx.scalar(17))
    assert d.A.is_zero() and d.B.is_zero()


def test_normalize_x2y_dy(F7):
    actx = setup(F7)
    form = normalize_to_dx(DifferentialForm(actx.zero(), actx.monomial(1, 2), 0))
    assert form.den == 0
    assert form.A.to_dict() == {(2, 1): (-1) % actx.mod}


def test_normalize_y3_dy_is_zero(F7):
    actx = setup(F7)
    form = normalize_to_dx(DifferentialForm(actx.zero(), actx.monomial(3, 0), 0))
    assert form.A.is_zero()


def test_parity_of_products(F7):
    actx = setup(F7)
    odd = actx.from_monomials({(1, 2): 3, (3, 5): 4})
    even = actx.from_monomials({(0, 1): 2, (2, 3): 6})
    assert (odd * even).is_odd()
    assert (odd * odd).is_even()
    assert (even * even).is_even()
