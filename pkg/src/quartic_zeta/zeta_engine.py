"""Frobenius matrix, its sigma-twisted norm and the Weil polynomial."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .curve_model import LiftedCurve
from .frobenius_lift import FrobeniusData, frobenius_form
from .padic_core import (INF, FieldContext, PrecisionError, PrecisionProfile, ZqScaled,
                         precision_profile)
from .reduction_engine import CohomologyBasis, RuleTable, denominator_bound, reduce_form


class OrbitMismatch(ArithmeticError):
    """Division by the boundary factor was not exact."""


@dataclass
class FrobeniusMatrix:
    entries: list[list[ZqScaled]]
    basis: CohomologyBasis
    kind: str = "Mp"

    @property
    def ctx(self) -> FieldContext:
        return self.entries[0][0].ctx

    def block(self, idx: Sequence[int]) -> list[list[ZqScaled]]:
        return [[self.entries[r][c] for c in idx] for r in idx]

    def coupling_zero(self) -> bool:
        odd, even = self.basis.odd, self.basis.even
        return all(self.entries[r][c].is_zero() for r in odd for c in even) and \
            all(self.entries[r][c].is_zero() for r in even for c in odd)

    def min_valuation(self) -> int:
        return min((e.val for row in self.entries for e in row if not e.is_zero()), default=INF)

    def sigma(self, power: int) -> "FrobeniusMatrix":
        if power == 0:
            return self
        return FrobeniusMatrix([[e.sigma(power) for e in row] for row in self.entries],
                               self.basis, self.kind)


# --- assembly --------------------------------------------------------------------------

@dataclass
class AssemblyStats:
    reduction_steps: int = 0
    columns: int = 0
    full_check_digits: int | None = None  # digits compared by the full-mode cross-check


def is_certified(profile: PrecisionProfile, p: int, n: int) -> bool:
    """True when every precision parameter dominates the rigorous schedule."""
    ref = precision_profile(p, n)
    return profile.N3 >= ref.N3 and profile.N4 >= ref.N4 and profile.N5 >= ref.N5


def reduction_loss(profile: PrecisionProfile, p: int) -> int:
    """Digits charged to reduction: the denominator bound when certifying, else none."""
    if profile.preset == "rigorous":
        return denominator_bound(p, profile.N3, profile.Delta)
    return 0


def _exact_zero_matrix(ctx: FieldContext, d: int) -> list[list[ZqScaled]]:
    return [[ZqScaled.exact_zero(ctx) for _ in range(d)] for _ in range(d)]


def pullback_forms(table: RuleTable, frob: FrobeniusData) -> dict:
    return {(i, j): frobenius_form(j, i, frob) for (i, j) in table.basis.elements}


def assemble_Mp(table: RuleTable, frob: FrobeniusData, profile: PrecisionProfile,
                mode: str = "split", stats: AssemblyStats | None = None,
                forms: dict | None = None) -> FrobeniusMatrix:
    """Column (i, j) holds the basis coordinates of the pullback of x^j y^i dx."""
    if mode not in ("split", "full"):
        raise ValueError("mode must be 'split' or 'full'")
    basis = table.basis
    ctx = frob.lifted.ctx
    d = len(basis)
    E = profile.N5 - profile.N4
    M = _exact_zero_matrix(ctx, d)
    stats = stats if stats is not None else AssemblyStats()
    loss = reduction_loss(profile, ctx.p)
    for col, (i, j) in enumerate(basis.elements):
        form = forms[(i, j)] if forms is not None else frobenius_form(j, i, frob)
        odd = i % 2 == 1
        if odd and not form.A.is_odd() or not odd and not form.A.is_even():
            raise ArithmeticError("pullback form breaks the y -> -y symmetry")
        rows = (1, 2, 3) if mode == "full" else ((1, 3) if odd else (2,))
        res = reduce_form(form, table, E=E, R=profile.N5, rows=rows, loss=loss)
        stats.reduction_steps += res.steps
        stats.columns += 1
        same = basis.odd if odd else basis.even
        other = basis.even if odd else basis.odd
        for r in (range(d) if mode == "full" else same):
            M[r][col] = res.coords[r]
        if mode == "full" and not all(res.coords[r].is_zero() for r in other):
            raise ArithmeticError("parity-coupling entry is nonzero")
    out = FrobeniusMatrix(M, basis, "Mp")
    if not out.coupling_zero():
        raise ArithmeticError("parity-coupling entry is nonzero")
    return out


# --- sigma-twisted norm ------------------------------------------------------------------

def _matmul(A: list[list[ZqScaled]], B: list[list[ZqScaled]]) -> list[list[ZqScaled]]:
    d = len(A)
    ctx = A[0][0].ctx
    out = []
    for r in range(d):
        row = []
        for c in range(d):
            acc = ZqScaled.exact_zero(ctx)
            for k in range(d):
                a, b = A[r][k], B[k][c]
                if a.is_exact_zero() or b.is_exact_zero():
                    continue
                acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def twisted_norm(Mp: FrobeniusMatrix, n: int) -> FrobeniusMatrix:
    """M_p sigma(M_p) ... sigma^(n-1)(M_p) along the binary expansion of n."""
    if n < 1:
        raise ValueError("n must be positive")
    N, a = Mp, 1
    for bit in bin(n)[3:]:
        N = FrobeniusMatrix(_matmul(N.entries, N.sigma(a).entries), Mp.basis, "Mq")
        a *= 2
        if bit == "1":
            N = FrobeniusMatrix(_matmul(N.entries, Mp.sigma(a).entries), Mp.basis, "Mq")
            a += 1
    return N if n > 1 else Mp


def twisted_norm_direct(Mp: FrobeniusMatrix, n: int) -> FrobeniusMatrix:
    N = Mp
    for s in range(1, n):
        N = FrobeniusMatrix(_matmul(N.entries, Mp.sigma(s).entries), Mp.basis, "Mq")
    return N


# --- characteristic polynomials -----------------------------------------------------------

def charpoly_berkowitz(A: list[list], zero, one) -> list:
    """det(X I - A) as descending coefficients [1, c1, ..., cd], division free."""
    d = len(A)
    if d == 0:
        return [one]
    C = [one, -A[0][0]]
    for r in range(1, d):
        R = A[r][:r]
        S = [A[i][r] for i in range(r)]
        t = [one, -A[r][r]]
        v = S
        for _ in range(r):
            dot = zero
            for x, y in zip(R, v):
                dot = dot + x * y
            t.append(-dot)
            v = [_dot(A[i][:r], v, zero) for i in range(r)]
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                acc = acc + t[i - j] * C[j]
            new.append(acc)
        C = new
    return C


def _dot(row, v, zero):
    acc = zero
    for x, y in zip(row, v):
        acc = acc + x * y
    return acc


def _residues(poly: Sequence[ZqScaled], N1: int) -> list[int]:
    out = []
    for c in poly:
        if c.is_exact_zero():
            out.append(0)
            continue
        if c.absprec < N1:
            raise PrecisionError(f"precision insufficient: {c!r} needed to {N1} digits")
        if not c.is_zero() and c.val < 0:
            raise PrecisionError("precision insufficient: non-integral coefficient")
        out.append(c.residue_mod(N1) if c.ctx.n == 1 else _residue_n(c, N1))
    return out


def _residue_n(c: ZqScaled, N1: int) -> int:
    coeffs = c.ctx.zcoeffs(c.to_frame(N1))
    if any(x for x in coeffs[1:]):
        raise ArithmeticError("characteristic polynomial coefficient is not in Z_p")
    return coeffs[0]


def _polymul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _exact_div_monic(num: Sequence[int], den: Sequence[int], mod: int | None) -> list[int]:
    """num / den for descending coefficient lists with den monic; remainder must vanish."""
    num = list(num)
    dq = len(num) - len(den)
    if dq < 0:
        raise OrbitMismatch("orbit-correction mismatch")
    quot = []
    for k in range(dq + 1):
        c = num[k] % mod if mod else num[k]
        quot.append(c)
        for t in range(len(den)):
            num[k + t] -= c * den[t]
    rem = num[dq + 1:]
    if any((x % mod if mod else x) for x in rem):
        raise OrbitMismatch("orbit-correction mismatch")
    return quot


def _balanced(x: int, mod: int, bound: int) -> int:
    x %= mod
    if x > mod // 2:
        x -= mod
    if abs(x) > bound:
        raise PrecisionError("precision insufficient: coefficient outside the Weil bound")
    return x


@dataclass
class WeilData:
    charpoly_odd: list[int]
    charpoly_even: list[int]
    P_E: list[int]
    P_2: list[int]
    P_V: list[int]
    P: list[int]
    modulus: int
    counts: list[int] = field(default_factory=list)

    def a_E(self) -> int:
        return -self.P_E[1]


def functional_equation_ok(P: Sequence[int], q: int) -> bool:
    d = len(P) - 1
    g = d // 2
    # coefficient of X^(d-k) in X^d P(q/X) is P[d-k] q^k; in q^g P(X) it is q^g P[k]
    return all(P[d - k] * q ** k == q ** g * P[k] for k in range(d + 1))


def weil_bounds_ok(P: Sequence[int], q: int) -> bool:
    d = len(P) - 1
    g = d // 2
    for k in range(1, g + 1):
        if abs(P[k]) > math.comb(d, k) * math.isqrt(q ** k) + math.comb(d, k):
            return False
    return True


def counts_from_P(P: Sequence[int], q: int, R: int) -> list[int]:
    """#C(F_{q^r}) = q^r + 1 - s_r with s_r the Newton power sums of the roots."""
    d = len(P) - 1
    e = [(-1) ** k * P[k] for k in range(d + 1)]
    s: list[int] = []
    for k in range(1, R + 1):
        acc = (-1) ** (k - 1) * k * e[k] if k <= d else 0
        for i in range(1, min(k, d + 1)):
            acc += (-1) ** (i - 1) * e[i] * s[k - i - 1]
        s.append(acc)
    return [q ** r + 1 - s[r - 1] for r in range(1, R + 1)]


def _unit_one(Mq: FrobeniusMatrix) -> ZqScaled:
    N = max((e.N for row in Mq.entries for e in row), default=1)
    return ZqScaled.from_int(Mq.ctx, 1, N + 64)


def block_charpolys(Mq: FrobeniusMatrix) -> tuple[list[ZqScaled], list[ZqScaled]]:
    zero, one = ZqScaled.exact_zero(Mq.ctx), _unit_one(Mq)
    odd = charpoly_berkowitz(Mq.block(Mq.basis.odd), zero, one)
    even = charpoly_berkowitz(Mq.block(Mq.basis.even), zero, one)
    return odd, even


def full_charpoly(Mq: FrobeniusMatrix) -> list[ZqScaled]:
    return charpoly_berkowitz(Mq.entries, ZqScaled.exact_zero(Mq.ctx), _unit_one(Mq))


def reconstruct(lifted: LiftedCurve, Mq: FrobeniusMatrix, profile: PrecisionProfile,
                count_r: int = 3) -> WeilData:
    ctx = lifted.ctx
    q, p, N1 = ctx.q, ctx.p, profile.N1
    mod = p ** N1
    odd_zq, even_zq = block_charpolys(Mq)
    cp_odd = [x % mod for x in _residues(odd_zq, N1)]
    cp_even = [x % mod for x in _residues(even_zq, N1)]
    inf = lifted.inf
    R_C = list(reversed(inf.R_C))
    R_E = list(reversed(inf.R_E))
    P2_mod = _exact_div_monic(_polymul(cp_odd, R_E), R_C, mod)
    PE_mod = _exact_div_monic(cp_even, R_E, mod)
    if len(P2_mod) != 5 or len(PE_mod) != 3:
        raise OrbitMismatch("orbit-correction mismatch: unexpected block degrees")
    r = math.isqrt(q)
    a = -_balanced(PE_mod[1], mod, 2 * r + 1)
    if 4 * a * a > 16 * q or (PE_mod[2] - q) % mod:
        raise PrecisionError("precision insufficient: P_E outside the Weil bound")
    P_E = [1, -a, q]
    e1 = -_balanced(P2_mod[1], mod, 4 * r + 4)
    e2 = _balanced(P2_mod[2], mod, 6 * q)
    if e1 * e1 > 16 * q:
        raise PrecisionError("precision insufficient: P_2 outside the Weil bound")
    P_2 = [1, -e1, e2, -q * e1, q * q]
    if any((x - y) % mod for x, y in zip(P2_mod, P_2)):
        raise PrecisionError("precision insufficient: P_2 violates the functional equation")
    P_V = _exact_div_monic(_polymul(P_2, list(reversed(inf.R_C))), list(reversed(inf.R_E)), None)
    P = _polymul(P_E, P_2)
    if not functional_equation_ok(P, q):
        raise ArithmeticError("functional equation failed")
    return WeilData(cp_odd, cp_even, P_E, P_2, P_V, P, mod, counts_from_P(P, q, count_r))
