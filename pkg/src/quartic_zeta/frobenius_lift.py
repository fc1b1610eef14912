"""Lift of the p-power Frobenius to the truncated dagger algebra.

F(x) = x^p + delta_x Z and F(y) = y^p + delta_y Z where delta_x = beta^p,
delta_y = alpha^p come from a Bezout identity alpha f_y + beta f_x = 1 mod p
and Z solves G(Z) = f^sigma(F(x), F(y)) = 0 by Newton iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .curve_model import CurveInput, LiftedCurve
from .dagger_algebra import (AlgebraContext, DifferentialForm, TruncatedAlgebraElement,
                             normalize_to_dx, total_differential)
from .padic_core import FieldContext, FqElement, PrecisionProfile

BiPoly = dict  # {(y-degree, x-degree): FqElement}


class BezoutError(ArithmeticError):
    pass


# --- Bezout identity over F_q -----------------------------------------------------------

def _bi_mul(a: BiPoly, b: BiPoly) -> BiPoly:
    out: BiPoly = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out[key] + c1 * c2 if key in out else c1 * c2
    return {k: v for k, v in out.items() if not v.is_zero()}


def _bi_add(a: BiPoly, b: BiPoly) -> BiPoly:
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if not v.is_zero()}


def _curve_bipolys(curve: CurveInput) -> tuple[BiPoly, BiPoly, BiPoly]:
    ctx = curve.ctx
    g, h = curve.gbar, curve.hbar
    f = {(4, 0): ctx.one}
    fx: BiPoly = {}
    fy = {(3, 0): ctx.from_int(4)}
    for j, c in enumerate(g):
        f[(2, j)] = c
        fy[(1, j)] = c * 2
        if j:
            fx[(2, j - 1)] = c * j
    for j, c in enumerate(h):
        f[(0, j)] = c
        if j:
            fx[(0, j - 1)] = c * j
    clean = lambda d: {k: v for k, v in d.items() if not v.is_zero()}  # noqa: E731
    return clean(f), clean(fx), clean(fy)


def reduce_mod_f(a: BiPoly, curve: CurveInput) -> BiPoly:
    """Remainder of a modulo y^4 + g y^2 + h (as a polynomial in y)."""
    g, h = curve.gbar, curve.hbar
    out = dict(a)
    for i in sorted({i for i, _ in out}, reverse=True):
        if i < 4:
            break
        for (ii, j) in [key for key in out if key[0] == i]:
            c = out.pop((ii, j))
            for d, gd in enumerate(g):
                if not gd.is_zero():
                    key = (i - 2, j + d)
                    out[key] = out[key] - c * gd if key in out else -(c * gd)
            for d, hd in enumerate(h):
                if not hd.is_zero():
                    key = (i - 4, j + d)
                    out[key] = out[key] - c * hd if key in out else -(c * hd)
    return {k: v for k, v in out.items() if not v.is_zero()}


def _solve(rows: list[list[FqElement]], rhs: list[FqElement], ctx: FieldContext):
    """One solution of rows * x = rhs over F_q (free variables set to 0), or None."""
    m, ncols = len(rows), len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, m) if not aug[i][col].is_zero()), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = aug[r][col].inv()
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and not aug[i][col].is_zero():
                fac = aug[i][col]
                aug[i] = [x - fac * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if any(not aug[i][ncols].is_zero() for i in range(r, m)):
        return None
    sol = [ctx.zero] * ncols
    for i, col in enumerate(pivots):
        sol[col] = aug[i][ncols]
    return sol


def _monomials(deg: int) -> list[tuple[int, int]]:
    return [(i, j) for t in range(deg + 1) for i in range(t + 1) for j in (t - i,)]


@dataclass(frozen=True)
class BezoutPair:
    alpha: BiPoly
    beta: BiPoly


def solve_bezout(curve: CurveInput | LiftedCurve) -> BezoutPair:
    if isinstance(curve, LiftedCurve):
        curve = curve.source
    ctx = curve.ctx
    f, fx, fy = _curve_bipolys(curve)
    blocks = [(_monomials(4), f), (_monomials(5), fy), (_monomials(5), fx)]
    targets = _monomials(8)
    index = {m: k for k, m in enumerate(targets)}
    cols = []
    for monos, poly in blocks:
        for (i, j) in monos:
            col = [ctx.zero] * len(targets)
            for (pi, pj), c in poly.items():
                col[index[(i + pi, j + pj)]] = c
            cols.append(col)
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(len(targets))]
    rhs = [ctx.zero] * len(targets)
    rhs[index[(0, 0)]] = ctx.one
    sol = _solve(rows, rhs, ctx)
    if sol is None:
        raise BezoutError("Bezout infeasible: the curve is not smooth")
    n0, n1 = len(blocks[0][0]), len(blocks[1][0])
    alpha_raw = {m: c for m, c in zip(blocks[1][0], sol[n0:n0 + n1]) if not c.is_zero()}
    beta_raw = {m: c for m, c in zip(blocks[2][0], sol[n0 + n1:]) if not c.is_zero()}
    # the odd part of alpha and the even part of beta still satisfy the identity mod f
    alpha = {m: c for m, c in alpha_raw.items() if m[0] % 2 == 1}
    beta = {m: c for m, c in beta_raw.items() if m[0] % 2 == 0}
    pair = BezoutPair(alpha, beta)
    if not bezout_residual_zero(pair, curve):
        raise BezoutError("Bezout identity check failed")
    return pair


def bezout_residual_zero(pair: BezoutPair, curve: CurveInput) -> bool:
    _, fx, fy = _curve_bipolys(curve)
    lhs = _bi_add(_bi_mul(pair.alpha, fy), _bi_mul(pair.beta, fx))
    lhs = _bi_add(lhs, {(0, 0): -curve.ctx.one})
    return not reduce_mod_f(lhs, curve)


# --- Newton solve -------------------------------------------------------------------------

def _lift_bipoly(actx: AlgebraContext, a: BiPoly) -> TruncatedAlgebraElement:
    ctx = actx.ctx
    return actx.from_monomials({m: ctx.zreduce(ctx.zlift(c), actx.mod) for m, c in a.items()})


def _poly_at(coeffs: list, powers: list[TruncatedAlgebraElement],
             actx: AlgebraContext) -> TruncatedAlgebraElement:
    ctx = actx.ctx
    out = actx.scalar(coeffs[0]) if not ctx.zis_zero(coeffs[0]) else actx.zero()
    for d in range(1, len(coeffs)):
        if not ctx.zis_zero(coeffs[d]):
            out = out + powers[d].scale(coeffs[d])
    return out


def _deriv_coeffs(coeffs: list, ctx: FieldContext, mod: int) -> list:
    return [ctx.zscal(coeffs[d], d, mod) for d in range(1, len(coeffs))]


@dataclass
class NewtonLog:
    precisions: list[int] = field(default_factory=list)
    residual_zero: bool = False


class _Evaluator:
    """f^sigma and its Z-derivative at (x^p + dx Z, y^p + dy Z) in a fixed context."""

    def __init__(self, actx: AlgebraContext, gs: list, hs: list,
                 delta_x: TruncatedAlgebraElement, delta_y: TruncatedAlgebraElement,
                 xp: TruncatedAlgebraElement, yp: TruncatedAlgebraElement):
        self.actx = actx
        ctx, mod = actx.ctx, actx.mod
        self.gs = [ctx.zreduce(c, mod) for c in gs]
        self.hs = [ctx.zreduce(c, mod) for c in hs]
        self.dgs = _deriv_coeffs(self.gs, ctx, mod)
        self.dhs = _deriv_coeffs(self.hs, ctx, mod)
        self.dx = delta_x.in_context(actx)
        self.dy = delta_y.in_context(actx)
        self.xp = xp.in_context(actx)
        self.yp = yp.in_context(actx)

    def images(self, Z: TruncatedAlgebraElement):
        return self.xp + self.dx * Z, self.yp + self.dy * Z

    def G_and_dG(self, Z: TruncatedAlgebraElement, want_derivative: bool = True):
        actx = self.actx
        X, Y = self.images(Z)
        X2 = X * X
        powers = [actx.one(), X, X2, X2 * X, X2 * X2]
        gX = _poly_at(self.gs, powers, actx)
        hX = _poly_at(self.hs, powers, actx)
        Y2 = Y * Y
        G = Y2 * Y2 + gX * Y2 + hX
        if not want_derivative:
            return G, None
        fx = _poly_at(self.dgs, powers, actx) * Y2 + _poly_at(self.dhs, powers, actx)
        two, four = actx.ctx.zfrom_int(2, actx.mod), actx.ctx.zfrom_int(4, actx.mod)
        fy = Y * (Y2.scale(four) + gX.scale(two))
        dG = self.dx * fx + self.dy * fy
        return G, dG


def _precision_schedule(N4: int) -> list[int]:
    steps = []
    k = 2
    while True:
        steps.append(min(k, N4))
        if k >= N4:
            break
        k *= 2
    return steps


def newton_Z0(lifted: LiftedCurve, bezout: BezoutPair, profile: PrecisionProfile,
              log: NewtonLog | None = None):
    """Z0 with G(Z0) = 0 mod (x^N3, p^N4); returns (Z0, delta_x, delta_y, context)."""
    ctx = lifted.ctx
    p, N4, N3 = ctx.p, profile.N4, profile.N3
    top = AlgebraContext.from_lifted(lifted, N4, N3)
    gs, hs = lifted.frame_gh(N4, sigma_power=1)
    delta_x = _lift_bipoly(top, bezout.beta) ** p
    delta_y = _lift_bipoly(top, bezout.alpha) ** p
    xp = top.monomial(0, p)
    yp = top.monomial(1, 0) ** p
    log = log if log is not None else NewtonLog()
    Z = top.zero()
    W = top.one()
    budget = int(math.ceil(math.log2(max(N4, 2)))) + 3
    schedule = _precision_schedule(N4) + [N4]
    while schedule:
        R = schedule.pop(0)
        actx = top.with_precision(R)
        ev = _Evaluator(actx, gs, hs, delta_x, delta_y, xp, yp)
        Zc, Wc = Z.in_context(actx), W.in_context(actx)
        G, dG = ev.G_and_dG(Zc)
        log.precisions.append(R)
        if not schedule:
            if G.is_zero():
                log.residual_zero = True
                Z = Zc
                break
            if len(log.precisions) >= budget:
                raise ArithmeticError("Newton iteration did not converge")
            schedule.append(N4)
        two = actx.scalar(ctx.zfrom_int(2, actx.mod))
        Wc = Wc * (two - dG * Wc)
        Zc = Zc - G * Wc
        Z, W = Zc, Wc
    return Z, delta_x, delta_y, top


@dataclass
class FrobeniusData:
    lifted: LiftedCurve
    actx: AlgebraContext
    delta_x: TruncatedAlgebraElement
    delta_y: TruncatedAlgebraElement
    Z0: TruncatedAlgebraElement
    Fx: TruncatedAlgebraElement
    Fy: TruncatedAlgebraElement
    dFx: DifferentialForm
    newton: NewtonLog
    _powers: dict = field(default_factory=dict)

    def Fx_pow(self, k: int) -> TruncatedAlgebraElement:
        return self._pow("x", k, self.Fx)

    def Fy_pow(self, l: int) -> TruncatedAlgebraElement:
        return self._pow("y", l, self.Fy)

    def _pow(self, tag: str, k: int, base: TruncatedAlgebraElement) -> TruncatedAlgebraElement:
        key = (tag, k)
        if key not in self._powers:
            if k == 0:
                val = self.actx.one()
            elif k == 1:
                val = base
            else:
                val = self._pow(tag, k - 1, base) * base
            self._powers[key] = val
        return self._powers[key]


def build_frobenius(lifted: LiftedCurve, profile: PrecisionProfile,
                    bezout: BezoutPair | None = None) -> FrobeniusData:
    if bezout is None:
        bezout = solve_bezout(lifted.source)
    log = NewtonLog()
    Z0, dx, dy, actx = newton_Z0(lifted, bezout, profile, log)
    p = lifted.ctx.p
    Fx = actx.monomial(0, p) + dx * Z0
    Fy = actx.monomial(1, 0) ** p + dy * Z0
    return FrobeniusData(lifted, actx, dx, dy, Z0, Fx, Fy, total_differential(Fx), log)


def frobenius_form(k: int, l: int, data: FrobeniusData) -> DifferentialForm:
    """Pullback of x^k y^l dx, normalised to dx and cut where the data is valid."""
    P = data.Fx_pow(k) * data.Fy_pow(l) if k else data.Fy_pow(l)
    A = P * data.dFx.A
    B = P * data.dFx.B
    form = normalize_to_dx(DifferentialForm(A, B, 0))
    return form.truncate(data.actx.cut - 1)


# --- checks -------------------------------------------------------------------------------

def decay_violations(elem: TruncatedAlgebraElement, p: int, offset: float = 0.0,
                     den: int = 0) -> list[tuple[int, int, int]]:
    """Stored nonzero coefficients with ord <= (i+j)/(16p) - offset."""
    bad = []
    for (i, j), v in elem.valuation_map(den).items():
        if 16 * p * (v + offset) <= i + j:
            bad.append((i, j, v))
    return bad


def parity_ok(data: FrobeniusData) -> bool:
    return data.Fx.is_even() and data.Fy.is_odd() and data.Z0.is_even()
