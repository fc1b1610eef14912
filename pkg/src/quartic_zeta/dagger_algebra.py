"""The truncated ring A / (x^cut, p^R), A = Z_q[x, y] / (y^4 + g y^2 + h),
and differential forms over it.

Elements are stored densely as four rows (y-degree 0..3) indexed by the
x-degree.  Rows may be shorter than ``cut``; missing entries are zero.
Products go through Kronecker substitution into one big integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import gmpy2

from . import kernels
from .padic_core import FieldContext


class AlgebraContext:
    """Parameters of the truncated ring: field, p-precision R, x-cut and f."""

    def __init__(self, ctx: FieldContext, R: int, cut: int, g: list, h: list):
        self.ctx = ctx
        self.n = ctx.n
        self.R = R
        self.mod = ctx.p ** R
        self.cut = cut
        self.g = [ctx.zreduce(c, self.mod) for c in g]
        self.h = [ctx.zreduce(c, self.mod) for c in h]
        self._zero = ctx.zzero()

    @classmethod
    def from_lifted(cls, lifted, R: int, cut: int) -> "AlgebraContext":
        g, h = lifted.frame_gh(R)
        return cls(lifted.ctx, R, cut, g, h)

    def with_precision(self, R: int) -> "AlgebraContext":
        return AlgebraContext(self.ctx, R, self.cut, self.g, self.h)

    def with_cut(self, cut: int) -> "AlgebraContext":
        return AlgebraContext(self.ctx, self.R, cut, self.g, self.h)

    # constructors
    def zero(self) -> "TruncatedAlgebraElement":
        return TruncatedAlgebraElement(self, [[], [], [], []])

    def scalar(self, c) -> "TruncatedAlgebraElement":
        return self.from_monomials({(0, 0): c})

    def one(self) -> "TruncatedAlgebraElement":
        return self.scalar(self.ctx.zfrom_int(1, self.mod))

    def monomial(self, i: int, j: int, c=None) -> "TruncatedAlgebraElement":
        if c is None:
            c = self.ctx.zfrom_int(1, self.mod)
        return self.from_monomials({(i, j): c})

    def from_monomials(self, terms: dict) -> "TruncatedAlgebraElement":
        """Element from {(y-degree, x-degree): frame value}; y^4 and up are reduced."""
        if not terms:
            return self.zero()
        ctx, mod = self.ctx, self.mod
        top_i = max(i for i, _ in terms)
        top_j = max(j for _, j in terms)
        width = min(self.cut, top_j + 2 * max(0, top_i - 3) + 5)
        rows = [[self._zero] * width for _ in range(max(4, top_i + 1))]
        for (i, j), c in terms.items():
            if j < self.cut:
                rows[i][j] = ctx.zadd(rows[i][j], c, mod)
        return TruncatedAlgebraElement(self, _reduce_high_y(self, rows)).trimmed()

    # arithmetic
    def mul(self, u: "TruncatedAlgebraElement", v: "TruncatedAlgebraElement"):
        return kronecker_mul(self, u.rows, v.rows)


def _reduce_high_y(actx: AlgebraContext, rows: list) -> list:
    ctx, mod = actx.ctx, actx.mod
    cut = actx.cut
    for i in range(len(rows) - 1, 3, -1):
        src = rows[i]
        for j, c in enumerate(src):
            if ctx.zis_zero(c):
                continue
            for target, poly in ((i - 2, actx.g), (i - 4, actx.h)):
                row = rows[target]
                for d, pc in enumerate(poly):
                    jj = j + d
                    if jj >= cut or ctx.zis_zero(pc):
                        continue
                    while len(row) <= jj:
                        row.append(actx._zero)
                    row[jj] = ctx.zsub(row[jj], ctx.zmul(pc, c, mod), mod)
        rows.pop()
    return rows[:4]


def kronecker_mul(actx: AlgebraContext, urows: list, vrows: list) -> "TruncatedAlgebraElement":
    ctx, n, mod, cut = actx.ctx, actx.n, actx.mod, actx.cut
    Lu = max(len(r) for r in urows)
    Lv = max(len(r) for r in vrows)
    if Lu == 0 or Lv == 0:
        return actx.zero()
    Lp = min(Lu + Lv - 1, cut)
    span = 2 * n - 1
    terms = 4 * min(Lu, Lv) * n
    w = (((mod - 1) ** 2 * terms).bit_length() + 8) // 8
    A = _pack(urows, Lu, n, span, w)
    B = A if urows is vrows else _pack(vrows, Lv, n, span, w)
    nslots = Lp * 7 * span
    prod = gmpy2.f_mod_2exp(A * B, nslots * w * 8)
    buf = prod.to_bytes(nslots * w, "little")
    k = kernels.active()
    vals = k.unpack_slots(buf, w, nslots)
    cols = k.gather_rows(vals, 7, Lp, n, ctx.M, mod)
    width = min(Lp + 8, cut)
    zero = actx._zero
    for row in cols:
        if len(row) < width:
            row.extend([zero] * (width - len(row)))
    rows = k.fold_y(cols, actx.g, actx.h, cut, mod, n, ctx.M)
    return TruncatedAlgebraElement(actx, rows).trimmed()


def _pack(rows: list, L: int, n: int, span: int, w: int):
    slots = [0] * (L * 7 * span)
    if n == 1:
        for i, row in enumerate(rows):
            if row:
                slots[i:len(row) * 7:7] = row
    else:
        stride = 7 * span
        for i, row in enumerate(rows):
            if row:
                for t in range(n):
                    slots[i * span + t:len(row) * stride:stride] = [e[t] for e in row]
    zero_b = bytes(w)
    data = b"".join([x.to_bytes(w, "little") if x else zero_b for x in slots])
    return gmpy2.mpz.from_bytes(data, "little")


class TruncatedAlgebraElement:
    """sum_{i<=3, j<cut} c[i][j] x^j y^i, coefficients as frame values mod p^R."""

    __slots__ = ("actx", "rows")

    def __init__(self, actx: AlgebraContext, rows: list):
        self.actx = actx
        self.rows = rows

    # bookkeeping
    def trimmed(self) -> "TruncatedAlgebraElement":
        ctx = self.actx.ctx
        for row in self.rows:
            while row and ctx.zis_zero(row[-1]):
                row.pop()
        return self

    @property
    def length(self) -> int:
        return max(len(r) for r in self.rows)

    def coeff(self, i: int, j: int):
        row = self.rows[i]
        return row[j] if j < len(row) else self.actx._zero

    def items(self) -> Iterable[tuple[int, int, object]]:
        ctx = self.actx.ctx
        for i, row in enumerate(self.rows):
            for j, c in enumerate(row):
                if not ctx.zis_zero(c):
                    yield i, j, c

    def to_dict(self) -> dict:
        return {(i, j): c for i, j, c in self.items()}

    def is_zero(self) -> bool:
        return not any(True for _ in self.items())

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncatedAlgebraElement) and self.to_dict() == other.to_dict()

    def is_even(self) -> bool:
        return not any(i % 2 for i, _, _ in self.items())

    def is_odd(self) -> bool:
        return not any(i % 2 == 0 for i, _, _ in self.items())

    def in_context(self, actx: AlgebraContext) -> "TruncatedAlgebraElement":
        """Reinterpret in a context with another precision or cut."""
        ctx = actx.ctx
        rows = [[ctx.zreduce(c, actx.mod) for c in row[:actx.cut]] for row in self.rows]
        return TruncatedAlgebraElement(actx, rows).trimmed()

    # ring operations
    def _combine(self, other: "TruncatedAlgebraElement", sign: int):
        ctx, mod = self.actx.ctx, self.actx.mod
        rows = []
        for a, b in zip(self.rows, other.rows):
            L = max(len(a), len(b))
            z = self.actx._zero
            a = a + [z] * (L - len(a))
            b = b + [z] * (L - len(b))
            if ctx.n == 1:
                rows.append([(x + sign * y) % mod for x, y in zip(a, b)])
            elif sign > 0:
                rows.append([ctx.zadd(x, y, mod) for x, y in zip(a, b)])
            else:
                rows.append([ctx.zsub(x, y, mod) for x, y in zip(a, b)])
        return TruncatedAlgebraElement(self.actx, rows).trimmed()

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        ctx, mod = self.actx.ctx, self.actx.mod
        return TruncatedAlgebraElement(self.actx, [[ctx.zneg(c, mod) for c in r] for r in self.rows])

    def scale(self, c) -> "TruncatedAlgebraElement":
        ctx, mod = self.actx.ctx, self.actx.mod
        if isinstance(c, int) and ctx.n > 1:
            return TruncatedAlgebraElement(self.actx, [[ctx.zscal(x, c, mod) for x in r]
                                                       for r in self.rows]).trimmed()
        return TruncatedAlgebraElement(self.actx, [[ctx.zmul(x, c, mod) for x in r]
                                                   for r in self.rows]).trimmed()

    def __mul__(self, other):
        return self.actx.mul(self, other)

    def __pow__(self, e: int):
        result, base = self.actx.one(), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift_x(self, k: int) -> "TruncatedAlgebraElement":
        z = self.actx._zero
        cut = self.actx.cut
        rows = [([z] * k + r)[:cut] if r else [] for r in self.rows]
        return TruncatedAlgebraElement(self.actx, rows)

    def d_dx(self) -> "TruncatedAlgebraElement":
        ctx, mod = self.actx.ctx, self.actx.mod
        rows = [[ctx.zscal(r[j], j, mod) for j in range(1, len(r))] for r in self.rows]
        return TruncatedAlgebraElement(self.actx, rows).trimmed()

    def d_dy(self) -> "TruncatedAlgebraElement":
        ctx, mod = self.actx.ctx, self.actx.mod
        rows = [[ctx.zscal(c, i, mod) for c in self.rows[i]] for i in (1, 2, 3)] + [[]]
        return TruncatedAlgebraElement(self.actx, rows).trimmed()

    def valuation_map(self, den: int = 0) -> dict:
        """{(i, j): ord_p(coefficient)} over nonzero stored coefficients."""
        ctx = self.actx.ctx
        return {(i, j): ctx.zval(c) - den for i, j, c in self.items()}

    def __repr__(self) -> str:
        terms = list(self.items())[:6]
        body = " + ".join(f"{c}*x^{j}*y^{i}" for i, j, c in terms)
        return f"<A elt {body}{' + ...' if len(terms) == 6 else ''}>"


def multiply(u: TruncatedAlgebraElement, v: TruncatedAlgebraElement) -> TruncatedAlgebraElement:
    return u * v


@dataclass
class DifferentialForm:
    """(A dx + B dy) / p**den; ``B is None`` once normalised to dx only."""

    A: TruncatedAlgebraElement
    B: TruncatedAlgebraElement | None
    den: int = 0

    @property
    def normalized(self) -> bool:
        return self.B is None

    def valuation_map(self) -> dict:
        if self.B is not None:
            raise ValueError("normalise the form first")
        return self.A.valuation_map(self.den)

    def truncate(self, cut: int) -> "DifferentialForm":
        rows = [r[:cut] for r in self.A.rows]
        A = TruncatedAlgebraElement(self.A.actx, rows).trimmed()
        B = None
        if self.B is not None:
            B = TruncatedAlgebraElement(self.B.actx, [r[:cut] for r in self.B.rows]).trimmed()
        return DifferentialForm(A, B, self.den)


def total_differential(u: TruncatedAlgebraElement) -> DifferentialForm:
    return DifferentialForm(u.d_dx(), u.d_dy(), 0)


def normalize_to_dx(form: DifferentialForm) -> DifferentialForm:
    """Replace x^j y^i dy by -(j/(i+1)) x^(j-1) y^(i+1) dx (exact difference)."""
    if form.B is None:
        return form
    actx = form.A.actx
    ctx, mod, p = actx.ctx, actx.mod, ctx_p(actx)
    e = 1 if p == 3 else 0
    scale = p ** e
    A = form.A.scale(scale) if e else form.A
    rows = [list(r) for r in A.rows] + [[]]
    z = actx._zero
    for i, brow in enumerate(form.B.rows):
        if not brow:
            continue
        if (i + 1) % p == 0:
            fac = -(scale // (i + 1))
        else:
            fac = -scale * pow(i + 1, -1, mod)
        target = rows[i + 1]
        need = len(brow) - 1
        if len(target) < need:
            target.extend([z] * (need - len(target)))
        for j in range(1, len(brow)):
            c = brow[j]
            if ctx.zis_zero(c):
                continue
            target[j - 1] = ctx.zadd(target[j - 1], ctx.zscal(c, fac * j, mod), mod)
    rows = _reduce_high_y(actx, rows)
    out = TruncatedAlgebraElement(actx, rows).trimmed()
    return DifferentialForm(out, None, form.den + e)


def ctx_p(actx: AlgebraContext) -> int:
    return actx.ctx.p
