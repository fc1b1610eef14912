"""End-to-end zeta computation for one curve."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .curve_model import CaseTag, CurveInput, InfinityData, classify, infinity_data, lift_curve, require_smooth
from .frobenius_lift import FrobeniusData, build_frobenius, solve_bezout
from .padic_core import PrecisionError, PrecisionProfile, precision_profile
from .reduction_engine import CurveCoefficients, RuleTable
from .zeta_engine import (AssemblyStats, FrobeniusMatrix, WeilData, assemble_Mp, block_charpolys,
                          full_charpoly, is_certified, pullback_forms, reconstruct, twisted_norm)


@dataclass
class ComputeResult:
    curve: CurveInput
    case: CaseTag
    inf: InfinityData
    profile: PrecisionProfile
    mode: str
    weil: WeilData
    Mp: FrobeniusMatrix
    Mq: FrobeniusMatrix
    certified: bool
    timings_ms: dict = field(default_factory=dict)
    stats: AssemblyStats = field(default_factory=AssemblyStats)
    frob: FrobeniusData | None = None


class _Clock:
    def __init__(self):
        self.t = time.perf_counter()
        self.out: dict[str, int] = {}

    def lap(self, name: str) -> None:
        now = time.perf_counter()
        self.out[name] = int(round((now - self.t) * 1000))
        self.t = now


def compute(curve: CurveInput, profile: PrecisionProfile | None = None, mode: str = "split",
            count_r: int = 3, keep_frobenius: bool = False) -> ComputeResult:
    """Steps: Bezout, Frobenius lift and pullbacks, reduction, twisted norm, reconstruction."""
    ctx = curve.ctx
    require_smooth(curve)
    if profile is None:
        profile = precision_profile(ctx.p, ctx.n)
    clock = _Clock()
    inf = infinity_data(curve)
    lifted = lift_curve(curve, profile, inf)
    bezout = solve_bezout(curve)
    clock.lap("step1")
    frob = build_frobenius(lifted, profile, bezout)
    table = RuleTable(CurveCoefficients.from_lifted(lifted))
    forms = pullback_forms(table, frob)
    clock.lap("step2")
    stats = AssemblyStats()
    Mp = assemble_Mp(table, frob, profile, mode, stats, forms)
    clock.lap("step3")
    Mq = twisted_norm(Mp, ctx.n)
    clock.lap("step4")
    weil = reconstruct(lifted, Mq, profile, count_r)
    if mode == "full":
        stats.full_check_digits = _check_full(Mq, profile)
    clock.lap("step5")
    return ComputeResult(curve, classify(curve), inf, profile, mode, weil, Mp, Mq,
                         is_certified(profile, ctx.p, ctx.n), clock.out, stats,
                         frob if keep_frobenius else None)


def _check_full(Mq: FrobeniusMatrix, profile: PrecisionProfile) -> int:
    """Compare charpoly(Mq) with the product of the block charpolys.

    Each coefficient is compared to min(N1, digits it carries).  The direct
    expansion of the whole matrix tracks errors more pessimistically than the
    blocks do, so the fast preset can carry fewer than N1 digits here; the
    rigorous preset must reach N1.  Returns the digits actually compared.
    """
    odd, even = block_charpolys(Mq)
    whole = full_charpoly(Mq)
    zero = odd[0] - odd[0]
    prod = [zero] * (len(odd) + len(even) - 1)
    for i, x in enumerate(odd):
        for j, y in enumerate(even):
            prod[i + j] = prod[i + j] + x * y
    digits = profile.N1
    for a, b in zip(whole, prod):
        diff = a - b
        if not diff.is_zero():
            raise ArithmeticError("full charpoly differs from the product of the block charpolys")
        digits = min(digits, diff.absprec)
    if digits < profile.N1 and profile.preset == "rigorous":
        raise PrecisionError(f"precision insufficient: full-mode check reached {digits} digits")
    return digits
