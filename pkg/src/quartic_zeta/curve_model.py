"""Input curves y^4 + g(x) y^2 + h(x): validation, case split, lifting and
the geometry of the points at infinity."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Sequence

from . import _polyfield as pf
from .padic_core import (FieldContext, FqElement, PrecisionProfile, ZqScaled,
                         teichmuller)


class CaseTag(enum.IntEnum):
    CASE1 = 1  # b4 = 0, a2 = 0
    CASE2 = 2  # b4 = 0, a2 != 0
    CASE3 = 3  # b4 != 0, a2^2 - 4 b4 = 0
    CASE4 = 4  # b4 != 0, a2^2 - 4 b4 != 0

    def __str__(self) -> str:
        return f"Case{int(self)}"


class SingularCurveError(ValueError):
    """The input does not define a smooth curve of the expected shape."""

    def __init__(self, report: "SingularReport"):
        super().__init__(report.reason)
        self.report = report


@dataclass(frozen=True)
class SingularReport:
    reason: str
    condition: str | None = None
    witness_x: list | None = None  # irreducible polynomial over F_q whose root is x0
    witness_y: list | None = None  # gcd polynomial in y over F_q(x0)


@dataclass(frozen=True)
class CurveInput:
    ctx: FieldContext
    gbar: tuple[FqElement, FqElement, FqElement]
    hbar: tuple[FqElement, FqElement, FqElement, FqElement, FqElement]

    @classmethod
    def from_ints(cls, ctx: FieldContext, g: Sequence, h: Sequence) -> "CurveInput":
        if len(g) != 3 or len(h) != 5:
            raise ValueError("g needs 3 coefficients and h needs 5")
        return cls(ctx, tuple(ctx.element(c) for c in g), tuple(ctx.element(c) for c in h))

    @property
    def coefficient_list(self) -> list[FqElement]:
        return list(self.gbar) + list(self.hbar)

    # bivariate data: list indexed by y-degree of polynomials in x
    def f_poly(self):
        one = [self.ctx.one]
        return [pf.trim(self.hbar), [], pf.trim(self.gbar), [], one]

    def fx_poly(self):
        ctx = self.ctx
        return [pf.derivative(pf.trim(self.hbar), ctx), [], pf.derivative(pf.trim(self.gbar), ctx)]

    def fy_poly(self):
        ctx = self.ctx
        return [[], pf.scale(pf.trim(self.gbar), ctx.from_int(2)), [], [ctx.from_int(4)]]


def classify(curve: CurveInput) -> CaseTag:
    a2, b4 = curve.gbar[2], curve.hbar[4]
    if b4.is_zero():
        return CaseTag.CASE1 if a2.is_zero() else CaseTag.CASE2
    disc = a2 * a2 - b4 * 4
    return CaseTag.CASE3 if disc.is_zero() else CaseTag.CASE4


# --- smoothness -------------------------------------------------------------------

class QuotientField:
    """F_q[x]/(P) for an irreducible P; follows the _polyfield field protocol."""

    def __init__(self, base: FieldContext, modulus: list):
        self.base = base
        self.modulus = pf.monic(modulus)
        self.degree = len(self.modulus) - 1
        self.order = base.q ** self.degree
        self.char = base.p
        self.zero = QElement(self, [])
        self.one = QElement(self, [base.one])

    def from_int(self, k: int) -> "QElement":
        return QElement(self, pf.trim([self.base.from_int(k)]))

    def embed(self, a: FqElement) -> "QElement":
        return QElement(self, pf.trim([a]))

    def random(self, rng: random.Random) -> "QElement":
        return QElement(self, pf.trim([self.base.random(rng) for _ in range(self.degree)]))

    def root(self) -> "QElement":
        return QElement(self, pf.mod([self.base.zero, self.base.one], self.modulus))


class QElement:
    __slots__ = ("field", "c")

    def __init__(self, field: QuotientField, c: list):
        self.field = field
        self.c = c

    def _wrap(self, c):
        return QElement(self.field, pf.mod(c, self.field.modulus))

    def __add__(self, o):
        return QElement(self.field, pf.add(self.c, o.c))

    def __sub__(self, o):
        return QElement(self.field, pf.sub(self.c, o.c))

    def __neg__(self):
        return QElement(self.field, pf.neg(self.c))

    def __mul__(self, o):
        return self._wrap(pf.mul(self.c, o.c))

    def __pow__(self, e: int):
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero")
        return self ** (self.field.order - 2)

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, o) -> bool:
        return isinstance(o, QElement) and self.c == o.c

    def __hash__(self):
        return hash(tuple(self.c))

    def __repr__(self):
        return f"Q{self.c}"


def _infinity_condition(curve: CurveInput, case: CaseTag) -> SingularReport | None:
    a1, a2 = curve.gbar[1], curve.gbar[2]
    b3 = curve.hbar[3]
    if case in (CaseTag.CASE1, CaseTag.CASE2) and b3.is_zero():
        return SingularReport("singular point at infinity", condition="b3 != 0")
    if case == CaseTag.CASE3 and (a1 * a2 - b3 * 2).is_zero():
        return SingularReport("singular point at infinity", condition="a1*a2 - 2*b3 != 0")
    return None


def _eval_coeffs(poly_by_y, x0, field):
    return pf.trim([pf.evaluate([field.embed(c) for c in cx], x0, field) if cx else field.zero
                    for cx in poly_by_y])


def check_smoothness(curve: CurveInput) -> SingularReport | None:
    """None if the projective curve is smooth, else a report with a witness."""
    ctx = curve.ctx
    case = classify(curve)
    bad = _infinity_condition(curve, case)
    if bad is not None:
        return bad
    f, fx, fy = curve.f_poly(), curve.fx_poly(), curve.fy_poly()
    r1 = pf.resultant_y(f, fx, ctx)
    r2 = pf.resultant_y(f, fy, ctx)
    G = pf.gcd(r1, r2) if (r1 or r2) else []
    if not G:
        return SingularReport("resultants vanish identically (non-reduced curve)")
    if len(G) == 1:
        return None
    for P, _ in pf.factor(G, ctx):
        K = QuotientField(ctx, P)
        x0 = K.root()
        polys = [_eval_coeffs(F, x0, K) for F in (f, fx, fy)]
        common = polys[0]
        for other in polys[1:]:
            common = pf.gcd(common, other) if (common or other) else []
        if len(common) != 1:
            return SingularReport("singular affine point", witness_x=P, witness_y=common)
    return None


def require_smooth(curve: CurveInput) -> None:
    report = check_smoothness(curve)
    if report is not None:
        raise SingularCurveError(report)


# --- infinity --------------------------------------------------------------------------

def _orbit_poly(orbits: Sequence[int], q: int) -> list[int]:
    """prod (X^s - q^s) / (X - q) as an integer list, low degree first."""
    poly = [1]
    for s in orbits:
        factor = [-(q ** s)] + [0] * (s - 1) + [1]
        out = [0] * (len(poly) + len(factor) - 1)
        for i, x in enumerate(poly):
            for j, y in enumerate(factor):
                out[i + j] += x * y
        poly = out
    # synthetic division by (X - q)
    quot = [0] * (len(poly) - 1)
    acc = 0
    for i in range(len(poly) - 1, 0, -1):
        acc = acc * q + poly[i]
        quot[i - 1] = acc
    rem = acc * q + poly[0]
    if rem != 0:
        raise ArithmeticError("orbit product not divisible by X - q")
    return quot


@dataclass(frozen=True)
class InfinityData:
    phi: tuple
    psi: tuple
    delta_C: int
    delta_E: int
    orbits_C: tuple[int, ...]
    orbits_E: tuple[int, ...]
    R_C: tuple[int, ...]  # low degree first
    R_E: tuple[int, ...]


def _orbits(poly, ctx) -> list[int]:
    return sorted(len(g) - 1 for g, _ in pf.factor(poly, ctx))


def infinity_data(curve: CurveInput) -> InfinityData:
    ctx = curve.ctx
    a2, b4 = curve.gbar[2], curve.hbar[4]
    phi = pf.trim([b4, ctx.zero, a2, ctx.zero, ctx.one])
    psi = pf.trim([b4, a2, ctx.one])
    oc, oe = _orbits(phi, ctx), _orbits(psi, ctx)
    return InfinityData(tuple(phi), tuple(psi), sum(oc), sum(oe), tuple(oc), tuple(oe),
                        tuple(_orbit_poly(oc, ctx.q)), tuple(_orbit_poly(oe, ctx.q)))


# --- lifting ------------------------------------------------------------------------------

@dataclass(frozen=True)
class LiftedCurve:
    source: CurveInput
    a: tuple[ZqScaled, ZqScaled, ZqScaled]
    b: tuple[ZqScaled, ZqScaled, ZqScaled, ZqScaled, ZqScaled]
    case: CaseTag
    inf: InfinityData
    N: int

    @property
    def ctx(self) -> FieldContext:
        return self.source.ctx

    def coefficients(self) -> list[ZqScaled]:
        return list(self.a) + list(self.b)

    def frame_gh(self, R: int, sigma_power: int = 0):
        """(g, h) coefficient lists as frame values mod p**R, optionally sigma-twisted."""
        def conv(z: ZqScaled):
            z = z.sigma(sigma_power) if sigma_power else z
            return z.to_frame(R)
        return [conv(z) for z in self.a], [conv(z) for z in self.b]


def lift_curve(curve: CurveInput, profile: PrecisionProfile | int,
               inf: InfinityData | None = None) -> LiftedCurve:
    N = profile if isinstance(profile, int) else profile.N5
    N = N + 16  # guard digits: rule derivation and the pivot headroom of the sweep
    case = classify(curve)
    a = [teichmuller(c, N) for c in curve.gbar]
    b = [teichmuller(c, N) for c in curve.hbar]
    if case == CaseTag.CASE3:
        b[4] = a[2] * a[2] / 4
    if inf is None:
        inf = infinity_data(curve)
    return LiftedCurve(curve, tuple(a), tuple(b), case, inf, N)
