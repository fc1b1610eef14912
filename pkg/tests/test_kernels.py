import copy
import random

import pytest

from quartic_zeta import _kernels_py, kernels

compiled = pytest.importorskip("quartic_zeta._kernels", reason="extension not built")

P = 7
CASES = [(1, (1,)), (2, (1, 0, 1)), (3, (2, 1, 0, 1))]  # (n, monic modulus low-first)


def rand_zq(rng, n, mod, zero_bias=0.0):
    if rng.random() < zero_bias:
        return 0 if n == 1 else (0,) * n
    if n == 1:
        return rng.randrange(mod)
    return tuple(rng.randrange(mod) for _ in range(n))


def outcome(fn, *args):
    try:
        return ("ok", fn(*args))
    except ArithmeticError as exc:
        return ("err", str(exc))


def test_backend_selection():
    assert set(kernels.available_backends()) == {"cython", "python"}
    kernels.use_backend("python")
    try:
        assert kernels.BACKEND == "python" and kernels.active() is _kernels_py
    finally:
        kernels.use_backend("auto")
    assert kernels.BACKEND == "cython"


@pytest.mark.parametrize("n,M", CASES)
def test_zq_mul_agrees(n, M):
    rng = random.Random(n)
    mod = P ** 40
    for _ in range(200):
        a, b = rand_zq(rng, n, mod), rand_zq(rng, n, mod)
        assert compiled.zq_mul(a, b, n, M, mod) == _kernels_py.zq_mul(a, b, n, M, mod)


def test_unpack_and_gather_agree():
    rng = random.Random(4)
    w, count = 9, 60
    buf = bytes(rng.randrange(256) for _ in range(w * count))
    vals = _kernels_py.unpack_slots(buf, w, count)
    assert compiled.unpack_slots(buf, w, count) == vals
    assert vals[1] == int.from_bytes(buf[w:2 * w], "little")
    for n, M in CASES:
        rows, L = 4, count // (4 * (2 * n - 1))
        mod = P ** 10
        assert compiled.gather_rows(vals, rows, L, n, M, mod) == \
            _kernels_py.gather_rows(vals, rows, L, n, M, mod)


@pytest.mark.parametrize("n,M", CASES)
def test_fold_y_agrees(n, M):
    rng = random.Random(10 + n)
    mod = P ** 30
    L, cut = 25, 22
    cols = [[rand_zq(rng, n, mod, 0.3) for _ in range(L)] for _ in range(7)]
    g = [rand_zq(rng, n, mod) for _ in range(3)]
    h = [rand_zq(rng, n, mod) for _ in range(5)]
    a = compiled.fold_y(copy.deepcopy(cols), g, h, cut, mod, n, M)
    b = _kernels_py.fold_y(copy.deepcopy(cols), g, h, cut, mod, n, M)
    assert a == b


@pytest.mark.parametrize("n,M", CASES)
@pytest.mark.parametrize("seed", range(3))
def test_sweep_agrees(n, M, seed):
    rng = random.Random(100 * n + seed)
    mod = P ** 25
    L = 30
    rows = (1, 2, 3)
    table = [[None] * L for _ in range(4)]
    for i in rows:
        for j in range(3, L):
            # a pivot divisible by p now and then, terms strictly lower in x
            v = 1 if rng.random() < 0.2 else 0
            terms = [(rng.choice(rows), rng.randrange(j), rand_zq(rng, n, mod)) for _ in range(4)]
            table[i][j] = (v, rand_zq(rng, n, mod), terms)
    W = [[0 if n == 1 else (0,) * n] * L] + \
        [[rand_zq(rng, n, mod, 0.2) for _ in range(L)] for _ in rows]
    if seed == 0:
        # everything divisible by a high power of p, so no step runs out of precision
        W = [[x * P ** 12 % mod if n == 1 else tuple(c * P ** 12 % mod for c in x) for x in row]
             for row in W]
    Wa, Wb = copy.deepcopy(W), copy.deepcopy(W)
    ra = outcome(compiled.sweep, Wa, table, rows, P, mod, n, M)
    rb = outcome(_kernels_py.sweep, Wb, table, rows, P, mod, n, M)
    assert ra == rb
    if ra[0] == "ok":
        assert Wa == Wb
