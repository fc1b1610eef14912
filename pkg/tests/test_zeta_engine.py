import random

import numpy as np
import pytest

from conftest import random_curve
from quartic_zeta import oracle
from quartic_zeta.curve_model import CaseTag, CurveInput, infinity_data
from quartic_zeta.padic_core import ZqScaled, build_context, fast_profile, teichmuller
from quartic_zeta.pipeline import compute
from quartic_zeta.frobenius_lift import frobenius_form
from quartic_zeta.reduction_engine import CurveCoefficients, RuleTable, basis_for_case, reduce_form
from quartic_zeta.zeta_engine import (FrobeniusMatrix, charpoly_berkowitz, counts_from_P,
                                      functional_equation_ok, reduction_loss, twisted_norm,
                                      twisted_norm_direct, weil_bounds_ok, _exact_div_monic,
                                      _polymul)


def random_matrix(ctx, rng, N=20, case=CaseTag.CASE4):
    basis = basis_for_case(case)
    d = len(basis)
    entries = []
    for _ in range(d):
        row = []
        for _ in range(d):
            u = teichmuller(ctx.random(rng), N) + ZqScaled.from_int(ctx, rng.randrange(ctx.p ** N), N)
            row.append(u)
        entries.append(row)
    return FrobeniusMatrix(entries, basis)


def same(A, B):
    return all((x - y).is_zero() for ra, rb in zip(A.entries, B.entries) for x, y in zip(ra, rb))


def test_twisted_norm_n1_is_identity():
    ctx = build_context(7, 1)
    M = random_matrix(ctx, random.Random(1))
    assert twisted_norm(M, 1) is M


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_binary_twisted_norm_matches_direct(n):
    ctx = build_context(3, n)
    M = random_matrix(ctx, random.Random(n), N=12)
    assert same(twisted_norm(M, n), twisted_norm_direct(M, n))


def test_twisted_norm_n2_formula():
    ctx = build_context(5, 2)
    M = random_matrix(ctx, random.Random(7), N=10)
    N = twisted_norm(M, 2)
    S = M.sigma(1)
    d = len(M.entries)
    for r in range(d):
        for c in range(d):
            acc = ZqScaled.exact_zero(ctx)
            for k in range(d):
                acc = acc + M.entries[r][k] * S.entries[k][c]
            assert (acc - N.entries[r][c]).is_zero()


def test_berkowitz_against_numpy():
    rng = np.random.default_rng(5)
    for d in (1, 2, 3, 5, 6):
        A = rng.integers(-9, 10, size=(d, d))
        got = charpoly_berkowitz(A.tolist(), 0, 1)
        want = [int(round(c)) for c in np.poly(A)]
        assert got == want


def test_functional_equation_and_bounds():
    q = 7
    P = [1, 0, 0, 20, 0, 0, 343]
    assert functional_equation_ok(P, q) and weil_bounds_ok(P, q)
    assert not functional_equation_ok([1, 1, 0, 20, 0, 0, 343], q)
    assert not weil_bounds_ok([1, 100, 0, 0, 0, 4900, 343], q)


def test_counts_from_P_agrees_with_oracle_newton():
    P = [1, -3, 10, -20, 70, -147, 343]
    assert counts_from_P(P, 7, 5) == oracle.counts_from_weil(P, 7, 5)


def test_rational_infinity_gives_power_of_x_minus_q():
    # w^4 - 5 w^2 + 4 = (w-1)(w+1)(w-2)(w+2) over F_7
    ctx = build_context(7, 1)
    c = CurveInput.from_ints(ctx, [1, 1, 2], [1, 2, 3, 1, 4])
    inf = infinity_data(c)
    assert inf.orbits_C == (1, 1, 1, 1)
    q = 7
    ratio = _exact_div_monic(list(reversed(inf.R_C)), list(reversed(inf.R_E)), None)
    want = [1]
    for _ in range(inf.delta_C - inf.delta_E):
        want = _polymul(want, [1, -q])
    assert ratio == want


@pytest.fixture(scope="module", params=[1, 2, 3, 4])
def full_run(request):
    ctx = build_context(7, 1)
    c = random_curve(ctx, request.param, random.Random(500 + request.param))
    return compute(c, fast_profile(7, 1), mode="full", keep_frobenius=True)


def test_full_mode_blocks(full_run):
    Mp = full_run.Mp
    assert Mp.coupling_zero()
    assert full_run.stats.full_check_digits >= 1
    d = len(Mp.basis)
    assert len(Mp.entries) == d and len(Mp.block(Mp.basis.odd)) == len(Mp.basis.odd)
    if full_run.case == CaseTag.CASE1:
        assert (len(Mp.basis.odd), len(Mp.basis.even)) == (4, 2)


def test_first_column_is_reduced_pullback_of_y_dx(full_run):
    res = full_run
    table = RuleTable(CurveCoefficients.from_lifted(res.frob.lifted))
    form = frobenius_form(0, 1, res.frob)
    prof = res.profile
    coords = reduce_form(form, table, E=prof.N5 - prof.N4, R=prof.N5,
                         loss=reduction_loss(prof, 7)).coords
    col = res.Mp.basis.index(1, 0)
    assert all((coords[r] - res.Mp.entries[r][col]).is_zero() for r in range(len(coords)))


def test_full_run_matches_oracle(full_run):
    c = full_run.curve
    counts = [oracle.count_C(c, r) for r in (1, 2, 3)]
    assert full_run.weil.P == oracle.zeta_from_counts(counts, 7)
    a = 7 + 1 - oracle.count_E(c, 1)
    assert full_run.weil.P_E == [1, -a, 7]
    assert functional_equation_ok(full_run.weil.P, 7)
