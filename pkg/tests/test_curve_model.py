import random

import pytest

from conftest import random_curve
from quartic_zeta import oracle
from quartic_zeta.curve_model import (CaseTag, CurveInput, SingularCurveError, check_smoothness,
                                      classify, infinity_data, lift_curve, require_smooth)
from quartic_zeta.padic_core import build_context


def curve(ctx, g, h):
    return CurveInput.from_ints(ctx, g, h)


@pytest.mark.parametrize("g,h,case", [
    ([1, 1, 0], [1, 1, 1, 1, 0], CaseTag.CASE1),
    ([1, 1, 3], [1, 1, 1, 1, 0], CaseTag.CASE2),
    ([1, 1, 4], [1, 1, 1, 1, 4], CaseTag.CASE3),  # 16 - 16 = 0 over F_7
    ([1, 1, 0], [1, 1, 1, 1, 1], CaseTag.CASE4),  # discriminant -4
])
def test_classify(F7, g, h, case):
    assert classify(curve(F7, g, h)) == case


def test_y4_plus_x4_is_singular(F7):
    c = curve(F7, [0, 0, 0], [0, 0, 0, 0, 1])
    rep = check_smoothness(c)
    assert rep is not None
    assert oracle.singular_points_scan(c, 1) >= 1
    with pytest.raises(SingularCurveError):
        require_smooth(c)


def test_case1_needs_b3(F7):
    rep = check_smoothness(curve(F7, [1, 2, 0], [1, 2, 3, 0, 0]))
    assert rep is not None and rep.condition == "b3 != 0"


@pytest.mark.parametrize("case", [1, 2, 3, 4])
def test_accepted_curves_have_no_singular_points(F7, case):
    rng = random.Random(case)
    c = random_curve(F7, case, rng)
    # affine points over F_{q^3}; the points at infinity are covered by the case conditions
    assert oracle.singular_points_scan(c, 3) == 0


def test_smoothness_agrees_with_scan(F7):
    # random (g, h): a singular point found by scanning F_q and F_{q^2} must be
    # reported, and an accepted curve must show none
    rng = random.Random(99)
    checked = 0
    while checked < 25:
        g = [rng.randrange(7) for _ in range(3)]
        h = [rng.randrange(7) for _ in range(4)] + [rng.choice([0, 1, 2])]
        c = curve(F7, g, h)
        rep = check_smoothness(c)
        if rep is not None and rep.reason != "singular affine point":
            continue
        affine_sing = any(oracle.singular_points_scan(c, r) for r in (1, 2))
        if affine_sing:
            assert rep is not None
        if rep is None:
            assert not affine_sing
        checked += 1


def test_lift_case1_exact_zeros(F7):
    c = random_curve(F7, 1, random.Random(1))
    lc = lift_curve(c, 20)
    assert lc.a[2].is_exact_zero() and lc.b[4].is_exact_zero()


def test_lift_case3_discriminant_vanishes(F7):
    c = curve(F7, [1, 2, 4], [3, 1, 1, 1, 4])
    assert classify(c) == CaseTag.CASE3
    lc = lift_curve(c, 30)
    d = lc.a[2] * lc.a[2] - lc.b[4] * 4
    assert d.is_zero() and d.absprec >= 30


def test_lift_case4_discriminant_unit(F7):
    c = random_curve(F7, 4, random.Random(2))
    lc = lift_curve(c, 20)
    assert (lc.a[2] * lc.a[2] - lc.b[4] * 4).val == 0


def test_infinity_case1_and_case2(F7):
    c1 = random_curve(F7, 1, random.Random(5))
    inf = infinity_data(c1)
    assert inf.delta_C == 1 and list(inf.R_C) == [1]
    c2 = random_curve(F7, 2, random.Random(6))
    inf2 = infinity_data(c2)
    assert inf2.delta_C == 3
    assert inf2.delta_E == 2 and inf2.orbits_E == (1, 1)


def test_infinity_irreducible_quartic(F7):
    # phi = w^4 + w^2 + 3: no root in F_49, so no linear or quadratic factor over F_7
    K = build_context(7, 2)
    assert not any((w ** 4 + w * w + K.from_int(3)).is_zero() for w in K.elements())
    c = curve(F7, [1, 1, 1], [2, 1, 0, 1, 3])
    inf = infinity_data(c)
    assert inf.orbits_C == (4,)
    q = 7
    # (X^4 - q^4) / (X - q) = X^3 + q X^2 + q^2 X + q^3
    assert list(inf.R_C) == [q ** 3, q ** 2, q, 1]


def test_infinity_matches_oracle_point_count():
    ctx = build_context(7, 2)
    rng = random.Random(8)
    for case in (1, 2, 3, 4):
        c = random_curve(ctx, case, rng)
        inf = infinity_data(c)
        rational = sum(1 for s in inf.orbits_C if s == 1)
        if case == 1:
            assert rational == 1
        els = list(ctx.elements())
        phi = lambda w: w ** 4 + c.gbar[2] * w * w + c.hbar[4]  # noqa: E731
        assert rational == sum(1 for w in els if phi(w).is_zero())
