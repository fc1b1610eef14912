import random

import pytest
from hypothesis import given, settings, strategies as st

from quartic_zeta.padic_core import (ZqScaled, build_context, extension_field, fast_profile,
                                     floor_log, precision_profile, recovery_digits, sigma, tau,
                                     teichmuller, ConvergenceSchedule)


def test_prime_field_context():
    ctx = build_context(7, 1, [0, 1])
    assert ctx.q == 7 and ctx.n == 1


def test_f49_modulus_t2_plus_1_accepted():
    # -1 is not a square mod 7
    assert all((x * x) % 7 != 6 for x in range(7))
    ctx = build_context(7, 2, [1, 0, 1])
    assert ctx.q == 49


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        build_context(5, 2, [1, 0, 1])  # t^2 + 1 = (t - 2)(t + 2) mod 5


@pytest.mark.parametrize("p", [2, 9, 1])
def test_bad_characteristic(p):
    with pytest.raises(ValueError):
        build_context(p, 1)


def test_inverse_and_fermat():
    ctx = build_context(7, 2, [1, 0, 1])
    assert ctx.one.inv() == ctx.one
    rng = random.Random(3)
    for _ in range(20):
        a = ctx.random(rng)
        if a.is_zero():
            continue
        assert a ** (ctx.q - 1) == ctx.one
        assert a * a.inv() == ctx.one


def test_frobenius_of_t_in_f49():
    ctx = build_context(7, 2, [1, 0, 1])
    t = ctx.gen()
    assert t * t == -ctx.one
    assert t.frobenius() == -t
    assert t ** 7 == -t


def test_extension_embedding():
    ctx = build_context(7, 1)
    K, emb = extension_field(ctx, 1)
    assert K.q == 7 and emb(ctx.from_int(3)) == ctx.from_int(3)
    K2, emb2 = extension_field(ctx, 2)
    assert K2.q == 49
    assert emb2(ctx.from_int(3)) == K2.from_int(3)


def test_embedding_is_multiplicative():
    ctx = build_context(5, 2)
    K, emb = extension_field(ctx, 3)
    rng = random.Random(11)
    for _ in range(25):
        a, b = ctx.random(rng), ctx.random(rng)
        assert emb(a * b) == emb(a) * emb(b)
        assert emb(a + b) == emb(a) + emb(b)


def test_sum_renormalises_valuation():
    ctx = build_context(7, 1)
    N = 5
    x = ZqScaled.from_int(ctx, 1, N) + ZqScaled.from_int(ctx, 7 ** N - 1, N)
    assert x.val >= 1


def test_inverse_of_p_times_unit():
    ctx = build_context(7, 1)
    x = ZqScaled.from_int(ctx, 7 * 3, 6)
    assert x.inverse().val == -1


def test_scaled_product():
    ctx = build_context(7, 1)
    a = ZqScaled(ctx, -2, 3, 3)
    b = ZqScaled(ctx, 2, 5, 3)
    c = a * b
    assert c.val == 0 and c.unit % 7 ** 3 == 15


def test_teichmuller_small_values():
    ctx = build_context(7, 1)
    assert teichmuller(ctx.zero, 4).is_zero()
    assert teichmuller(ctx.one, 4).residue_mod(4) == 1


def test_teichmuller_of_two_mod_49():
    ctx = build_context(7, 1)
    # independent search: the unique z = 2 mod 7 with z^6 = 1 mod 49
    want = [z for z in range(49) if z % 7 == 2 and pow(z, 6, 49) == 1]
    assert want == [30]
    assert teichmuller(ctx.from_int(2), 2).residue_mod(2) == 30


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 48))
def test_teichmuller_commutes_with_frobenius(k):
    ctx = build_context(7, 2)
    a = list(ctx.elements())[k]
    N = 6
    lhs = teichmuller(a, N) ** 7
    rhs = teichmuller(a ** 7, N)
    assert (lhs - rhs).is_zero()
    # sigma acts on Teichmuller lifts as the p-th power
    assert (sigma(teichmuller(a, N)) - rhs).is_zero()


def test_sigma_identity_for_prime_field():
    ctx = build_context(11, 1)
    z = ZqScaled.from_int(ctx, 1234567, 8)
    assert (sigma(z) - z).is_zero()


@pytest.mark.parametrize("n", [2, 3])
def test_sigma_has_order_n(n):
    ctx = build_context(5, n)
    rng = random.Random(n)
    a = teichmuller(ctx.random(rng), 10) + ZqScaled.from_int(ctx, 5, 10)
    assert (sigma(a, n) - a).is_zero()


def test_tau_and_delta():
    assert tau(3) == 5 and tau(5) == 3
    assert tau(7) == tau(11) == tau(13) == 1
    assert tau(17) == 0
    assert floor_log(63, 7) == 2
    assert precision_profile(7, 1).Delta == 33


def test_n1_for_p7():
    assert precision_profile(7, 1).N1 == 4


def test_rigorous_profile_ordering():
    for p, n in [(3, 1), (7, 1), (7, 2), (13, 1)]:
        pr = precision_profile(p, n)
        assert pr.N1 < pr.N2 < pr.N4 <= pr.N5
        assert pr.N3 > 16 * p


def test_fast_profile_recovers_weil_coefficients():
    for p, n in [(7, 1), (7, 2), (11, 1), (13, 1)]:
        q = p ** n
        k = recovery_digits(p, n)
        assert p ** k > 12 * q + 1 >= p ** (k - 1)
        assert fast_profile(p, n).N1 == k


def test_convergence_schedule_conditions():
    for p in (3, 7, 13):
        flags = ConvergenceSchedule.for_prime(p).check_conditions()
        assert all(flags.values()), flags
