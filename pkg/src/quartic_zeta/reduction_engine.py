"""Reduction of dx-forms to the cohomology basis.

Relations come from d(S_{l,k}) with S_{l,k} = -x^k (4/(l+4) y^(l+4) + 2/(l+2) g y^(l+2)),
rewritten with y^4 = -(g y^2 + h).  They are derived for any scalar type with
``+ - * /`` (Fractions for exact checks, :class:`ZqScaled` in the pipeline).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import kernels
from .curve_model import CaseTag, LiftedCurve
from .dagger_algebra import DifferentialForm
from .padic_core import FieldContext, PrecisionError, ZqScaled, floor_log


# --- basis --------------------------------------------------------------------------

@dataclass(frozen=True)
class CohomologyBasis:
    case: CaseTag
    elements: tuple[tuple[int, int], ...]  # (y-degree i, x-degree j) of x^j y^i dx

    @property
    def odd(self) -> tuple[int, ...]:
        return tuple(k for k, (i, _) in enumerate(self.elements) if i % 2 == 1)

    @property
    def even(self) -> tuple[int, ...]:
        return tuple(k for k, (i, _) in enumerate(self.elements) if i % 2 == 0)

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, i: int, j: int) -> int:
        return self.elements.index((i, j))


_XRANGE = {
    CaseTag.CASE1: {1: 2, 2: 2, 3: 2},
    CaseTag.CASE2: {1: 2, 2: 3, 3: 3},
    CaseTag.CASE3: {1: 3, 2: 2, 3: 2},
    CaseTag.CASE4: {1: 3, 2: 3, 3: 3},
}


def basis_for_case(case: CaseTag) -> CohomologyBasis:
    widths = _XRANGE[case]
    elems = [(i, j) for j in range(3) for i in (1, 2, 3) if j < widths[i]]
    return CohomologyBasis(case, tuple(elems))


def pivot_offset(case: CaseTag, l: int) -> int:
    """x-degree of the eliminated monomial of the l-rule at parameter k, minus k."""
    return _XRANGE[case][l]


# --- scalar plumbing -----------------------------------------------------------------

@dataclass
class CurveCoefficients:
    """Curve coefficients in some scalar ring plus the helpers rules need."""

    a: Sequence
    b: Sequence
    case: CaseTag
    const: Callable[[Fraction], object]
    is_zero: Callable[[object], bool]
    ctx: FieldContext | None = None

    @classmethod
    def from_lifted(cls, lifted: LiftedCurve) -> "CurveCoefficients":
        ctx, N = lifted.ctx, lifted.N
        return cls(list(lifted.a), list(lifted.b), lifted.case,
                   lambda r: ZqScaled.from_rational(ctx, r, N),
                   lambda z: z.is_zero(), ctx)

    @classmethod
    def exact(cls, a: Sequence, b: Sequence) -> "CurveCoefficients":
        a = [Fraction(x) for x in a]
        b = [Fraction(x) for x in b]
        if b[4] == 0:
            case = CaseTag.CASE1 if a[2] == 0 else CaseTag.CASE2
        else:
            case = CaseTag.CASE3 if a[2] ** 2 - 4 * b[4] == 0 else CaseTag.CASE4
        return cls(a, b, case, Fraction, lambda z: z == 0)


def _is_exact_zero(z) -> bool:
    if isinstance(z, ZqScaled):
        return z.is_exact_zero()
    return z == 0


def _acc(terms: dict, key, value) -> None:
    if _is_exact_zero(value):
        return
    if key in terms:
        terms[key] = terms[key] + value
    else:
        terms[key] = value


# --- rules --------------------------------------------------------------------------------

@dataclass
class ReductionRule:
    """sum over terms of coeff * x^e y^i dx is exact; ``terms`` keyed by (i, e)."""

    l: int
    k: int
    terms: dict
    pivot: tuple[int, int] | None = None
    provenance: str = ""

    def sparse(self) -> list[tuple[int, int, object]]:
        """(i, offset, coeff) with offset = exponent - k."""
        return sorted(((i, e - self.k, c) for (i, e), c in self.terms.items()),
                      key=lambda t: (t[1], t[0]))

    @property
    def pivot_coefficient(self):
        return self.terms[self.pivot]


def gamma_relation(l: int, k: int, cc: CurveCoefficients) -> ReductionRule:
    """The raw relation for (l, k), with y^(l+2) rewritten via the curve equation."""
    if l not in (1, 2, 3) or k < 0:
        raise ValueError("need l in {1,2,3} and k >= 0")
    C = cc.const
    terms: dict = {}
    for j in range(-1, 4):
        coef = C(Fraction(j + 1) + Fraction(4 * k, l + 4)) * cc.b[j + 1]
        _acc(terms, (l, k + j), coef)
    high: dict = {}
    for j in range(-1, 2):
        coef = C(Fraction(l, l + 2) * (Fraction(j + 1) + Fraction(2 * k, l + 4))) * cc.a[j + 1]
        _acc(high, k + j, coef)
    if l == 1:
        for e, c in high.items():
            _acc(terms, (3, e), c)
    else:
        # y^(l+2) = -y^(l-2) (g y^2 + h); y^0 terms are exact and dropped
        for e, c in high.items():
            for d, ad in enumerate(cc.a):
                _acc(terms, (l, e + d), -(c * ad))
            if l - 2 > 0:
                for d, bd in enumerate(cc.b):
                    _acc(terms, (l - 2, e + d), -(c * bd))
    terms = {key: v for key, v in terms.items() if key[1] >= 0 or not cc.is_zero(v)}
    if any(key[1] < 0 for key in terms):
        raise ArithmeticError("relation has a negative x-exponent")
    return ReductionRule(l, k, terms, None, f"raw l={l} k={k}")


def _drop_if_zero(terms: dict, key, cc: CurveCoefficients) -> None:
    if key in terms:
        if not cc.is_zero(terms[key]):
            raise ArithmeticError(f"expected a vanishing coefficient at {key}")
        del terms[key]


def _eliminate(terms: dict, key, rule: ReductionRule) -> None:
    c = terms.pop(key)
    t = c / rule.pivot_coefficient
    for k2, v in rule.terms.items():
        if k2 == key:
            continue
        _acc(terms, k2, -(t * v))


class RuleTable:
    """Lazily derived reduction rules for one curve."""

    def __init__(self, cc: CurveCoefficients):
        self.cc = cc
        self.case = cc.case
        self.basis = basis_for_case(cc.case)
        self._rules: dict[tuple[int, int], ReductionRule] = {}
        self.b4_nonzero = not cc.is_zero(cc.b[4])
        self._kernel_cache: dict = {}

    def rule(self, l: int, k: int) -> ReductionRule:
        key = (l, k)
        r = self._rules.get(key)
        if r is None:
            r = self._derive(l, k)
            self._rules[key] = r
        return r

    def _derive(self, l: int, k: int) -> ReductionRule:
        cc = self.cc
        raw = gamma_relation(l, k, cc)
        terms = dict(raw.terms)
        off = pivot_offset(self.case, l)
        if l == 1:
            prov = f"l=1 k={k}"
            if not self.b4_nonzero:
                _drop_if_zero(terms, (1, k + 3), cc)
        elif l == 2:
            prov = f"l=2 k={k}, y^4 rewritten"
            if off == 2:
                _drop_if_zero(terms, (2, k + 3), cc)
        else:
            prov = f"l=3 k={k}, y^5 rewritten, y-terms cleared by l=1 rules"
            o1 = pivot_offset(self.case, 1)
            lowest = k + 2 if (self.b4_nonzero and k >= 1) or not self.b4_nonzero else k + 3
            for e in range(k + 5, lowest - 1, -1):
                if (1, e) in terms and e - o1 >= 0:
                    _eliminate(terms, (1, e), self.rule(1, e - o1))
            if off == 2:
                _drop_if_zero(terms, (3, k + 3), cc)
        pivot = (l, k + off)
        if pivot not in terms or cc.is_zero(terms[pivot]):
            raise ArithmeticError(f"pivot vanishes for l={l}, k={k}")
        top = max(e for _, e in terms)
        if top != k + off:
            raise ArithmeticError(f"rule l={l} k={k} has a term above its pivot")
        return ReductionRule(l, k, terms, pivot, prov)

    def derive(self, kmax: int) -> dict:
        for k in range(kmax + 1):
            for l in (1, 2, 3):
                self.rule(l, k)
        return self._rules

    # frame version for the sweep kernel
    def kernel_table(self, L: int, R: int) -> "KernelTable":
        """Rules at x-degree < L in the sweep format.

        Coefficients are reduced modulo p^(R + V), V the largest pivot valuation,
        so that the digits a pivot division shifts out lie above p^R.
        """
        for (L0, R0), kt in self._kernel_cache.items():
            if L0 >= L and R0 == R:
                return kt
        ctx = self.cc.ctx
        slots = []
        V = 0
        for i in (1, 2, 3):
            off = pivot_offset(self.case, i)
            for j in range(off, L):
                rule = self.rule(i, j - off)
                v = rule.pivot_coefficient.val - _min_val(rule)
                V = max(V, v)
                slots.append((i, j, rule))
        Rf = R + V
        table = [None, [None] * L, [None] * L, [None] * L]
        for i, j, rule in slots:
            table[i][j] = _frame_rule(rule, ctx, Rf)
        kt = KernelTable(table, Rf, V)
        self._kernel_cache = {(L, R): kt}
        return kt


@dataclass
class KernelTable:
    table: list
    R: int  # frame modulus exponent
    vmax: int


def _min_val(rule: ReductionRule) -> int:
    return min(c.val for c in rule.terms.values() if not c.is_zero())


def _frame_rule(rule: ReductionRule, ctx: FieldContext, R: int):
    piv = rule.pivot_coefficient
    s = _min_val(rule)
    v = piv.val - s
    if piv.N < R:
        raise PrecisionError("pivot known to too few digits")
    uinv = ctx.zinv(ctx.zreduce(piv.unit, ctx.p ** R), R)
    terms = []
    for (i, e), c in rule.terms.items():
        if (i, e) == rule.pivot or c.is_zero():
            continue
        if c.absprec - s < R:
            raise PrecisionError("rule coefficient known to too few digits")
        terms.append((i, e, c.to_frame(R, -s)))
    return (v, uinv, tuple(terms))


def derive_rules(lifted: LiftedCurve, kmax: int) -> RuleTable:
    table = RuleTable(CurveCoefficients.from_lifted(lifted))
    table.derive(kmax)
    return table


# --- reduction -------------------------------------------------------------------------

def denominator_bound(p: int, k: int, Delta: int) -> int:
    """Largest power of p a reduced x^k y^l dx (integral input) can have in a denominator."""
    return floor_log(4 * k + 8, p) + Delta + 1


def default_headroom(p: int, Delta: int, L: int) -> int:
    return denominator_bound(p, L, Delta) + 8


@dataclass
class ReductionResult:
    coords: list[ZqScaled]
    steps: int
    vmax: int
    min_val: int


def reduce_form(form: DifferentialForm, table: RuleTable, *, E: int, R: int,
                rows: Iterable[int] = (1, 2, 3), loss: int = 0,
                prec: int | None = None) -> ReductionResult:
    """Coordinates of a normalised dx-form on the basis.

    Values are carried as value * p^E modulo p^R (plus the table's pivot
    headroom), so denominators down to p^-E are representable.  The input is
    known to absolute precision ``prec`` (default: that of its algebra minus
    its denominator); ``loss`` is the caller's bound for the denominators
    reduction can create, which by linearity also bounds the growth of the
    input error.
    """
    if form.B is not None:
        raise ValueError("form must be normalised to dx first")
    ctx = table.cc.ctx
    A = form.A
    L = max(A.length, 4)
    kt = table.kernel_table(L, R)
    mod = ctx.p ** kt.R
    shift = E - form.den
    if shift < 0:
        raise PrecisionError("precision exhausted: form denominator exceeds headroom")
    start = (A.actx.R - form.den) if prec is None else prec
    zero = ctx.zzero()
    W = [None]
    for i in (1, 2, 3):
        src = A.rows[i]
        row = [ctx.zmulp(ctx.zreduce(c, mod), shift, mod) for c in src]
        row.extend([zero] * (L - len(row)))
        W.append(row)
    try:
        steps, vmax = kernels.active().sweep(W, kt.table, tuple(rows), ctx.p, mod, ctx.n, ctx.M)
    except ArithmeticError as exc:
        raise PrecisionError(str(exc)) from exc
    basis_set = set(table.basis.elements)
    for i in (1, 2, 3):
        for j in range(L):
            if (i, j) not in basis_set and not ctx.zis_zero(W[i][j]):
                raise ArithmeticError(f"non-basis monomial x^{j} y^{i} survived reduction")
    absprec = min(start, R - E) - loss
    coords = [ZqScaled.from_frame(ctx, W[i][j], absprec, E) for (i, j) in table.basis.elements]
    min_val = min((c.val for c in coords if not c.is_zero()), default=math.inf)
    return ReductionResult(coords, steps, vmax, min_val)


def reduce(form: DifferentialForm, table: RuleTable, E: int, R: int, loss: int = 0) -> list[ZqScaled]:
    return reduce_form(form, table, E=E, R=R, loss=loss).coords


# --- closed-form validation ------------------------------------------------------------

def closed_form_M1(k: int, cc: CurveCoefficients) -> dict:
    a, b, C = cc.a, cc.b, cc.const
    out = {}
    for j in range(5):
        _acc(out, (1, k - 1 + j), C(Fraction(12 * k + 15 * j, 15)) * b[j])
    for j in range(3):
        _acc(out, (3, k - 1 + j), C(Fraction(2 * k + 5 * j, 15)) * a[j])
    return out


def closed_form_M2(k: int, cc: CurveCoefficients) -> dict:
    a, b, C = cc.a, cc.b, cc.const
    ent = [
        C(Fraction(k)) * (a[0] * a[0] - C(Fraction(4)) * b[0]),
        C(Fraction(2 * k + 3)) * (a[0] * a[1] - C(Fraction(2)) * b[1]),
        C(Fraction(k + 3)) * (a[1] * a[1] + C(Fraction(2)) * a[0] * a[2] - C(Fraction(4)) * b[2]),
        C(Fraction(2 * k + 9)) * (a[1] * a[2] - C(Fraction(2)) * b[3]),
        C(Fraction(k + 6)) * (a[2] * a[2] - C(Fraction(4)) * b[4]),
    ]
    out = {}
    for j, e in enumerate(ent):
        _acc(out, (2, k - 1 + j), C(Fraction(-1, 6)) * e)
    return out


def closed_form_M3_raw(k: int, cc: CurveCoefficients) -> dict:
    a0, a1, a2 = cc.a
    b0, b1, b2, b3, b4 = cc.b
    C = lambda r: cc.const(Fraction(r))  # noqa: E731
    y = [
        C(6 * k) * a0 * b0,
        C(6 * k) * (a1 * b0 + a0 * b1) + C(21) * a1 * b0,
        C(6 * k) * (a2 * b0 + a1 * b1 + a0 * b2) + C(21) * a1 * b1 + C(42) * a2 * b0,
        C(6 * k) * (a2 * b1 + a1 * b2 + a0 * b3) + C(21) * a1 * b2 + C(42) * a2 * b1,
        C(6 * k) * (a2 * b2 + a1 * b3 + a0 * b4) + C(21) * a1 * b3 + C(42) * a2 * b2,
        C(6 * k + 21) * (a2 * b3 + a1 * b4) + C(21) * a2 * b3,
        C(6 * k + 42) * a2 * b4,
    ]
    y3 = [
        C(k) * (C(6) * a0 * a0 - C(20) * b0),
        C(4 * k + 7) * (C(3) * a0 * a1 - C(5) * b1),
        C(2 * k + 7) * (C(3) * a1 * a1 + C(6) * a0 * a2 - C(10) * b2),
        C(4 * k + 21) * (C(3) * a1 * a2 - C(5) * b3),
        C(2 * k + 14) * (C(3) * a2 * a2 - C(10) * b4),
    ]
    scale = cc.const(Fraction(-1, 35))
    out = {}
    for j, v in enumerate(y):
        _acc(out, (1, k - 1 + j), scale * v)
    for j, v in enumerate(y3):
        _acc(out, (3, k - 1 + j), scale * v)
    return out


def closed_form_M3_entries(k: int, cc: CurveCoefficients) -> dict:
    """The printed y^3 entries of the final l=3 rule at x^(k+2) and x^(k+3), times c."""
    a0, a1, a2 = cc.a
    b0, b1, b2, b3, b4 = cc.b
    C = lambda r: cc.const(Fraction(r))  # noqa: E731
    if not cc.is_zero(b4):
        c = C(-1) / (C(2688 * (k + 4) * (k + 5) * (k + 6)) * b4 * b4 * b4)
        e46 = C(384 * (k + 4) * (k + 5) * (k + 6) * (k + 7)) * b4 * b4 * b4 * (a2 * a2 - C(4) * b4)
        e45 = C(96 * (k + 4) * (k + 5) * (k + 6)) * b4 * b4 * (
            C(8 * k + 44) * a1 * a2 * b4 - a2 * a2 * b3 - C(16 * k + 84) * b3 * b4)
        extra = {}
        if cc.case == CaseTag.CASE3:
            extra["(4,5) when a2^2 = 4 b4"] = (
                e45, C(384 * (k + 4) * (k + 5) * (k + 6) * (2 * k + 11)) * b4 * b4 * b4
                * (a1 * a2 - C(2) * b3))
    else:
        c = C(-1) / (C(7 * (4 * k + 15) * (4 * k + 19) * (4 * k + 23)) * b3 * b3)
        e46 = C(2 * (k + 7) * (2 * k + 11) * (4 * k + 15) * (4 * k + 19)) * b3 * b3 * a2 * a2
        e45 = C(4 * k + 15) * b3 * (
            C(32 * k ** 3 + 504 * k ** 2 + 2648 * k + 4641) * a1 * a2 * b3
            - C(4 * k ** 2 + 52 * k + 168) * a2 * a2 * b2
            - C(64 * k ** 3 + 1008 * k ** 2 + 5276 * k + 9177) * b3 * b3)
        extra = {}
        if cc.case == CaseTag.CASE1:
            extra["(4,5) when a2 = 0"] = (
                e45, C(-(4 * k + 15) * (4 * k + 19) * (4 * k + 21) * (4 * k + 23)) * b3 * b3 * b3)
    return {"c": c, "(4,5)": c * e45, "(4,6)": c * e46, "extra": extra}


def _same(x, y, cc: CurveCoefficients) -> bool:
    return cc.is_zero(x - y)


def _compare_terms(derived: dict, expected: dict, cc: CurveCoefficients) -> list:
    bad = []
    zero = cc.const(Fraction(0))
    for key in set(derived) | set(expected):
        if not _same(derived.get(key, zero), expected.get(key, zero), cc):
            bad.append(key)
    return sorted(bad)


@dataclass
class ClosedFormReport:
    checked: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def validate_closed_forms(table: RuleTable, krange: Iterable[int]) -> ClosedFormReport:
    cc = table.cc
    rep = ClosedFormReport()
    zero = cc.const(Fraction(0))
    for k in krange:
        r1 = table.rule(1, k)
        bad = _compare_terms(r1.terms, closed_form_M1(k, cc), cc)
        rep.checked += 1
        if bad:
            rep.mismatches.append(("M1", k, bad))
        raw2 = gamma_relation(2, k, cc)
        bad = _compare_terms(raw2.terms, closed_form_M2(k, cc), cc)
        rep.checked += 1
        if bad:
            rep.mismatches.append(("M2", k, bad))
        r2 = table.rule(2, k)
        if r2.pivot != (2, k + pivot_offset(table.case, 2)):
            rep.mismatches.append(("M2 pivot", k, r2.pivot))
        raw3 = gamma_relation(3, k, cc)
        bad = _compare_terms(raw3.terms, closed_form_M3_raw(k, cc), cc)
        rep.checked += 1
        if bad:
            rep.mismatches.append(("M3 raw", k, bad))
        r3 = table.rule(3, k)
        ent = closed_form_M3_entries(k, cc)
        got46 = r3.terms.get((3, k + 3), zero)
        got45 = r3.terms.get((3, k + 2), zero)
        rep.checked += 2
        if not _same(got46, ent["(4,6)"], cc):
            rep.mismatches.append(("M3 (4,6)", k))
        if not _same(got45, ent["(4,5)"], cc):
            rep.mismatches.append(("M3 (4,5)", k))
        for name, (lhs, rhs) in ent["extra"].items():
            rep.checked += 1
            if not _same(lhs, rhs, cc):
                rep.mismatches.append(("M3 " + name, k))
    return rep
