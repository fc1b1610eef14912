"""Exhaustive point counting for C and for the quotient curve E.

Field elements of F_{q^r} are encoded as integers (base-p digit vectors) and
all arithmetic is done on numpy arrays through log/antilog tables.  Nothing
here touches the p-adic machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .curve_model import CurveInput
from .padic_core import FieldContext, FqElement, _prime_factors, extension_field

MAX_FIELD_BITS = 21


class BudgetExceeded(RuntimeError):
    pass


class FieldTable:
    """Vectorised arithmetic on F_Q with elements encoded as ints in [0, Q)."""

    def __init__(self, big: FieldContext):
        self.ctx = big
        self.p = big.p
        self.Q = big.q
        self.width = big.n
        Q, p = self.Q, self.p
        codes = np.arange(Q, dtype=np.int64)
        self.digits = np.stack([(codes // p ** i) % p for i in range(self.width)], axis=1)
        self.powers = np.array([p ** i for i in range(self.width)], dtype=np.int64)
        gen = self._primitive_element()
        exp = np.empty(Q - 1, dtype=np.int64)
        x = big.one
        for k in range(Q - 1):
            exp[k] = x.to_int()
            x = x * gen
        self.exp = exp
        self.log = np.full(Q, -1, dtype=np.int64)
        self.log[exp] = np.arange(Q - 1, dtype=np.int64)
        ys = codes
        sq = self.mul(ys, ys)
        self.sq_count = np.bincount(sq, minlength=Q)

    def _primitive_element(self) -> FqElement:
        big = self.ctx
        order = self.Q - 1
        factors = _prime_factors(order) if order > 1 else []
        for cand in big.elements():
            if cand.is_zero():
                continue
            if all(cand ** (order // l) != big.one for l in factors):
                return cand
        raise ArithmeticError("no primitive element found")

    def encode(self, a: FqElement) -> int:
        return a.to_int()

    def add(self, a, b):
        d = (self.digits[a] + self.digits[b]) % self.p
        return d @ self.powers

    def neg(self, a):
        d = (-self.digits[a]) % self.p
        return d @ self.powers

    def sub(self, a, b):
        d = (self.digits[a] - self.digits[b]) % self.p
        return d @ self.powers

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        out[nz] = self.exp[(self.log[a[nz]] + self.log[b[nz]]) % (self.Q - 1)]
        return out

    def poly_eval(self, coeffs: Sequence[int], x):
        """Horner evaluation of a polynomial with encoded coefficients (low first)."""
        acc = np.full(np.shape(x), coeffs[-1], dtype=np.int64)
        for c in reversed(coeffs[:-1]):
            acc = self.add(self.mul(acc, x), np.full(np.shape(x), c, dtype=np.int64))
        return acc


@lru_cache(maxsize=16)
def _table_and_embedding(ctx: FieldContext, r: int):
    if r * ctx.n * math.log2(ctx.p) > MAX_FIELD_BITS:
        raise BudgetExceeded(f"F_(q^{r}) exceeds the enumeration budget")
    big, emb = extension_field(ctx, r)
    return FieldTable(big), emb


def _encoded_coeffs(curve: CurveInput, r: int):
    table, emb = _table_and_embedding(curve.ctx, r)
    g = [emb(c).to_int() for c in curve.gbar]
    h = [emb(c).to_int() for c in curve.hbar]
    return table, g, h


def count_C(curve: CurveInput, r: int) -> int:
    """#C(F_{q^r}) for the projective curve Y^4 + G Y^2 + H = 0."""
    table, g, h = _encoded_coeffs(curve, r)
    xs = np.arange(table.Q, dtype=np.int64)
    gx = table.poly_eval(g, xs)
    hx = table.poly_eval(h, xs)
    two_inv = (table.p + 1) // 2
    four = 4 % table.p
    disc = table.sub(table.mul(gx, gx), table.mul(hx, four))
    sqrt_of = np.zeros(table.Q, dtype=np.int64)
    sq = table.mul(xs, xs)
    sqrt_of[sq] = xs
    minus_g = table.neg(gx)
    root = sqrt_of[disc]
    s1 = table.mul(table.add(minus_g, root), two_inv)
    s2 = table.mul(table.sub(minus_g, root), two_inv)
    has = table.sq_count[disc] > 0
    double = disc == 0
    affine = np.where(has, table.sq_count[s1] + np.where(double, 0, table.sq_count[s2]), 0)
    ws = xs
    phi = [h[4], 0, g[2], 0, 1]
    at_inf = int(np.count_nonzero(table.poly_eval(phi, ws) == 0))
    return int(affine.sum()) + at_inf


def count_E(curve: CurveInput, r: int) -> int:
    """#E(F_{q^r}) for the smooth model of v^2 + g(u) v + h(u) = 0."""
    table, g, h = _encoded_coeffs(curve, r)
    us = np.arange(table.Q, dtype=np.int64)
    gu = table.poly_eval(g, us)
    hu = table.poly_eval(h, us)
    disc = table.sub(table.mul(gu, gu), table.mul(hu, 4 % table.p))
    affine = int(table.sq_count[disc].sum())
    a2, b4 = curve.gbar[2], curve.hbar[4]
    if (a2 * a2 - b4 * 4).is_zero():
        at_inf = 1
    else:
        psi = [h[4], g[2], 1]
        at_inf = int(np.count_nonzero(table.poly_eval(psi, us) == 0))
    return affine + at_inf


def count_C_projective_naive(curve: CurveInput) -> int:
    """Direct loop over the points of P^2(F_q); only for tiny q."""
    ctx = curve.ctx
    if ctx.q > 31:
        raise BudgetExceeded("naive projective count is for q <= 31")
    a0, a1, a2 = curve.gbar
    b0, b1, b2, b3, b4 = curve.hbar

    def F(X, Y, Z):
        G = a0 * Z * Z + a1 * X * Z + a2 * X * X
        H = (b0 * Z ** 4 + b1 * X * Z ** 3 + b2 * X * X * Z * Z + b3 * X ** 3 * Z
             + b4 * X ** 4)
        return Y ** 4 + G * Y * Y + H

    els = list(ctx.elements())
    one, zero = ctx.one, ctx.zero
    total = sum(1 for x in els for y in els if F(x, y, one).is_zero())
    total += sum(1 for x in els if F(x, one, zero).is_zero())
    total += 1 if F(one, zero, zero).is_zero() else 0
    return total


def singular_points_scan(curve: CurveInput, r: int) -> int:
    """Number of affine points over F_{q^r} where f, f_x and f_y all vanish."""
    table, g, h = _encoded_coeffs(curve, r)
    p = table.p
    xs = np.arange(table.Q, dtype=np.int64)
    gx, hx = table.poly_eval(g, xs), table.poly_eval(h, xs)
    dg = [table.mul(np.int64(g[1]), 1), table.mul(np.int64(g[2]), 2 % p)]
    dh = [table.mul(np.int64(h[k]), k % p) for k in range(1, 5)]
    gpx = table.poly_eval([int(c) for c in dg], xs)
    hpx = table.poly_eval([int(c) for c in dh], xs)
    count = 0
    ys = xs
    y2 = table.mul(ys, ys)
    y3 = table.mul(y2, ys)
    y4 = table.mul(y2, y2)
    for k in range(table.Q):
        f = table.add(table.add(y4, table.mul(y2, gx[k])), np.full(table.Q, hx[k]))
        fx = table.add(table.mul(y2, gpx[k]), np.full(table.Q, hpx[k]))
        fy = table.add(table.mul(y3, 4 % p), table.mul(ys, table.mul(np.int64(gx[k]), 2 % p)))
        count += int(np.count_nonzero((f == 0) & (fx == 0) & (fy == 0)))
    return count


@dataclass(frozen=True)
class CountVector:
    counts: tuple[int, ...]
    target: str  # "C" or "E"


def counts_C(curve: CurveInput, R: int) -> CountVector:
    return CountVector(tuple(count_C(curve, r) for r in range(1, R + 1)), "C")


def zeta_from_counts(counts: Sequence[int], q: int) -> list[int]:
    """Weil sextic (descending coefficients) from #C(F_{q^r}), r = 1..3."""
    if len(counts) < 3:
        raise ValueError("need three counts")
    s = [q ** r + 1 - counts[r - 1] for r in (1, 2, 3)]
    e1 = s[0]
    e2 = (e1 * s[0] - s[1]) // 2
    e3 = (e2 * s[0] - e1 * s[1] + s[2]) // 3
    return [1, -e1, e2, -e3, q * e2, -q * q * e1, q ** 3]


def power_sums(P: Sequence[int], R: int) -> list[int]:
    """Newton power sums s_1..s_R of the roots of a monic polynomial (descending)."""
    d = len(P) - 1
    e = [(-1) ** k * P[k] for k in range(d + 1)]  # elementary symmetric
    s = []
    for k in range(1, R + 1):
        acc = (-1) ** (k - 1) * k * e[k] if k <= d else 0
        for i in range(1, k):
            if i <= d:
                acc += (-1) ** (i - 1) * e[i] * s[k - i - 1]
        s.append(acc)
    return s


def counts_from_weil(P: Sequence[int], q: int, R: int) -> list[int]:
    return [q ** r + 1 - s for r, s in enumerate(power_sums(P, R), start=1)]
