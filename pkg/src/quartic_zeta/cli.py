"""Command line front end: ``quartic-zeta compute --input curve.json``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from . import oracle
from .curve_model import CurveInput, SingularCurveError
from .frobenius_lift import BezoutError
from .padic_core import (PrecisionError, PrecisionProfile, build_context, custom_profile,
                         fast_profile, is_prime, precision_profile)
from .pipeline import ComputeResult, compute
from .zeta_engine import OrbitMismatch, counts_from_P

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_SINGULAR, EXIT_ASSUMPTION, EXIT_MISMATCH = 0, 1, 2, 3, 4, 5

# predicted split/full cost ratios for n = 1, 2, 3 (context only, never asserted)
PREDICTED_SPEEDUP = {1: 0.45, 2: 0.36, 3: 0.30}


class ParseError(ValueError):
    pass


@dataclass
class JobConfig:
    input: str
    mode: str = "split"
    preset: str = "rigorous"
    N3: int | None = None
    N4: int | None = None
    N5: int | None = None
    verify_r: int = 0
    bench: bool = False
    json: bool = False
    timings: bool = True


# --- parsing -------------------------------------------------------------------------------

def _int_field(doc: dict, key: str) -> int:
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise ParseError(f"field {key!r} must be an integer")
    return v


def _coefficient(v: Any, p: int, n: int, where: str) -> list[int]:
    if n == 1 and isinstance(v, int) and not isinstance(v, bool):
        digits = [v]
    elif isinstance(v, list) and len(v) == n and all(isinstance(x, int) and not isinstance(x, bool)
                                                     for x in v):
        digits = v
    else:
        shape = "an integer" if n == 1 else f"a list of {n} integers"
        raise ParseError(f"{where}: expected {shape}")
    for k, d in enumerate(digits):
        if not 0 <= d < p:
            raise ParseError(f"{where}" + (f"[{k}]" if n > 1 else "") + f": {d} not in [0, {p})")
    return list(digits)


def parse_curve(text: str) -> CurveInput:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    p = _int_field(doc, "p")
    n = _int_field(doc, "n") if "n" in doc else 1
    if not is_prime(p):
        raise ParseError(f"p = {p} is not prime")
    if p == 2:
        raise ParseError("characteristic 2 unsupported")
    if n < 1:
        raise ParseError("n must be positive")
    modulus = None
    if "modulus" in doc:
        m = doc["modulus"]
        if not isinstance(m, list) or len(m) != n + 1 or not all(isinstance(x, int) for x in m):
            raise ParseError(f"modulus: expected a list of {n + 1} integers")
        modulus = [x % p for x in m]
    for key, size in (("g", 3), ("h", 5)):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
        if not isinstance(doc[key], list) or len(doc[key]) != size:
            raise ParseError(f"field {key!r} must list {size} coefficients")
    g = [_coefficient(v, p, n, f"g[{k}]") for k, v in enumerate(doc["g"])]
    h = [_coefficient(v, p, n, f"h[{k}]") for k, v in enumerate(doc["h"])]
    try:
        ctx = build_context(p, n, modulus)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    return CurveInput.from_ints(ctx, g, h)


def _profile(cfg: JobConfig, p: int, n: int) -> PrecisionProfile:
    overrides = (cfg.N3, cfg.N4, cfg.N5)
    if any(v is not None for v in overrides):
        if any(v is None for v in overrides):
            raise ParseError("--N3, --N4 and --N5 must be given together")
        if cfg.N5 < cfg.N4:
            raise ParseError("N5 must be >= N4")
        return custom_profile(p, n, cfg.N3, cfg.N4, cfg.N5)
    if cfg.preset == "fast":
        return fast_profile(p, n)
    return precision_profile(p, n)


# --- report --------------------------------------------------------------------------------

def _poly(coeffs: Sequence[int]) -> list[int]:
    return [int(c) for c in coeffs]


def build_report(res: ComputeResult, verify_r: int, timings: bool = True) -> tuple[dict, bool]:
    ctx = res.curve.ctx
    rows = []
    mismatch = False
    R = max(3, verify_r)
    engine = counts_from_P(res.weil.P, ctx.q, R)
    for r in range(1, R + 1):
        entry: dict[str, Any] = {"r": r, "engine": engine[r - 1]}
        if r <= verify_r:
            try:
                ref = oracle.count_C(res.curve, r)
                entry["oracle"] = ref
                entry["match"] = ref == engine[r - 1]
                mismatch |= ref != engine[r - 1]
            except oracle.BudgetExceeded:
                entry["oracle"] = None
                entry["match"] = None
        rows.append(entry)
    inf = res.inf
    report = {
        "case": str(res.case),
        "delta_C": inf.delta_C,
        "delta_E": inf.delta_E,
        "orbits": {"C": list(inf.orbits_C), "E": list(inf.orbits_E)},
        "precisions": res.profile.as_dict(),
        "preset": res.profile.preset,
        "certified": res.certified,
        "mode": res.mode,
        "P_E": _poly(res.weil.P_E),
        "P_2": _poly(res.weil.P_2),
        "P_V": _poly(res.weil.P_V),
        "P": _poly(res.weil.P),
        "counts": rows,
    }
    if res.stats.full_check_digits is not None:
        report["full_check_digits"] = res.stats.full_check_digits
    if timings:
        report["timings_ms"] = dict(res.timings_ms)
    return report, mismatch


def _text(report: dict) -> str:
    lines = [f"case        {report['case']}",
             f"delta_C/E   {report['delta_C']} / {report['delta_E']}",
             f"orbits      C {report['orbits']['C']}  E {report['orbits']['E']}",
             "precisions  " + " ".join(f"{k}={v}" for k, v in report["precisions"].items())
             + f"  ({report['preset']}{', certified' if report['certified'] else ''})",
             f"P_E         {report['P_E']}",
             f"P_2         {report['P_2']}",
             f"P_V         {report['P_V']}",
             f"P           {report['P']}"]
    for row in report["counts"]:
        extra = ""
        if "oracle" in row:
            extra = f"  oracle {row['oracle']}  {'match' if row['match'] else 'MISMATCH' if row['match'] is False else 'skipped'}"
        lines.append(f"#C(F_q^{row['r']})   {row['engine']}{extra}")
    if "timings_ms" in report:
        lines.append("timings_ms  " + " ".join(f"{k}={v}" for k, v in report["timings_ms"].items()))
    if "bench" in report:
        b = report["bench"]
        lines.append("bench       step    split    full")
        for k in b["split"]:
            lines.append(f"            {k}  {b['split'][k]:7d} {b['full'][k]:7d}")
        lines.append(f"            total {b['total_split']:7d} {b['total_full']:7d}  ratio {b['ratio']:.2f}"
                     f"  (predicted {b['predicted']})")
    return "\n".join(lines)


def run(cfg: JobConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        text = sys.stdin.read() if cfg.input == "-" else open(cfg.input, encoding="utf-8").read()
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=err)
        return EXIT_PARSE
    try:
        if cfg.mode not in ("split", "full"):
            raise ParseError("mode must be split or full")
        if not 0 <= cfg.verify_r <= 4:
            raise ParseError("--verify must be between 0 and 4")
        curve = parse_curve(text)
        profile = _profile(cfg, curve.ctx.p, curve.ctx.n)
    except ParseError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    try:
        res = compute(curve, profile, cfg.mode, count_r=max(3, cfg.verify_r))
        report, mismatch = build_report(res, cfg.verify_r, cfg.timings)
        if cfg.bench:
            other = compute(curve, profile, "full" if cfg.mode == "split" else "split")
            split = res if cfg.mode == "split" else other
            full = other if cfg.mode == "split" else res
            ts, tf = sum(split.timings_ms.values()), sum(full.timings_ms.values())
            report["bench"] = {"split": split.timings_ms, "full": full.timings_ms,
                               "total_split": ts, "total_full": tf,
                               "ratio": round(ts / tf, 3) if tf else None,
                               "predicted": PREDICTED_SPEEDUP.get(curve.ctx.n)}
            if split.weil.P != full.weil.P:
                mismatch = True
    except SingularCurveError as exc:
        rep = exc.report
        detail = {"error": "singular curve", "reason": rep.reason, "condition": rep.condition}
        print(json.dumps(detail) if cfg.json else f"error: singular curve: {rep.reason}"
              + (f" (requires {rep.condition})" if rep.condition else ""), file=err)
        return EXIT_SINGULAR
    except (BezoutError, OrbitMismatch) as exc:
        print(f"error: assumption violated: {exc}", file=err)
        return EXIT_ASSUMPTION
    except PrecisionError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_FAIL
    print(json.dumps(report, sort_keys=False) if cfg.json else _text(report), file=out)
    return EXIT_MISMATCH if mismatch else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quartic-zeta",
                                 description="Zeta functions of genus-3 curves y^4 + g(x) y^2 + h(x)")
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", help="compute the Weil polynomial of one curve")
    c.add_argument("--input", required=True, help="curve JSON file, or - for stdin")
    c.add_argument("--mode", choices=("split", "full"), default="split")
    prec = c.add_mutually_exclusive_group()
    prec.add_argument("--rigorous", dest="preset", action="store_const", const="rigorous")
    prec.add_argument("--fast", dest="preset", action="store_const", const="fast")
    c.add_argument("--N3", type=int)
    c.add_argument("--N4", type=int)
    c.add_argument("--N5", type=int)
    c.add_argument("--verify", type=int, default=0, metavar="R",
                   help="compare #C(F_{q^r}) for r <= R with exhaustive counts")
    c.add_argument("--bench", action="store_true", help="also run the other mode and compare timings")
    c.add_argument("--json", action="store_true")
    c.add_argument("--no-timings", dest="timings", action="store_false",
                   help="omit wall-clock data so the output is byte-for-byte reproducible")
    c.set_defaults(preset="rigorous")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = JobConfig(args.input, args.mode, args.preset, args.N3, args.N4, args.N5,
                    args.verify, args.bench, args.json, args.timings)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
