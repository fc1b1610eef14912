"""Compare the compiled and pure-Python kernel backends.

Times the two hot paths on a real curve: the reduction sweep (through
``assemble_Mp`` with a warm rule table) and Kronecker multiplication in the
truncated algebra.  Both backends must produce identical results.

    python benchmarks/bench_kernels.py [--p 7] [--n 1] [--N3 120 --N4 12 --N5 40] [--repeat 3]
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from quartic_zeta import kernels
from quartic_zeta.curve_model import CurveInput, infinity_data, lift_curve
from quartic_zeta.dagger_algebra import multiply
from quartic_zeta.frobenius_lift import build_frobenius
from quartic_zeta.padic_core import build_context, custom_profile, fast_profile
from quartic_zeta.reduction_engine import CurveCoefficients, RuleTable
from quartic_zeta.zeta_engine import assemble_Mp, pullback_forms

# smooth Case 4 curves (all five h coefficients nonzero, g of degree 2)
CURVES = {
    (7, 1): {"g": [1, 4, 4], "h": [1, 2, 4, 3, 5]},
    (11, 1): {"g": [3, 1, 2], "h": [5, 1, 7, 2, 3]},
    (7, 2): {"g": [[1, 0], [4, 1], [4, 0]], "h": [[1, 0], [2, 0], [4, 1], [3, 0], [5, 0]]},
}


def _best(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def run(p: int, n: int, N: tuple[int, int, int] | None, repeat: int) -> dict:
    ctx = build_context(p, n)
    spec = CURVES[(p, n)]
    curve = CurveInput.from_ints(ctx, *[[c if n > 1 else [c] for c in spec[k]] for k in "gh"])
    profile = custom_profile(p, n, *N) if N else fast_profile(p, n)
    lifted = lift_curve(curve, profile, infinity_data(curve))
    frob = build_frobenius(lifted, profile)
    table = RuleTable(CurveCoefficients.from_lifted(lifted))
    forms = pullback_forms(table, frob)
    assemble_Mp(table, frob, profile, "full", forms=forms)  # warm the rule cache

    u, v = frob.Fx, frob.Z0
    results = {}
    reference = None
    for name in kernels.available_backends():
        kernels.use_backend(name)
        t_sweep, M = _best(lambda: assemble_Mp(table, frob, profile, "full", forms=forms), repeat)
        t_mul, prod = _best(lambda: multiply(u, v), repeat)
        digest = ([[(c.val, c.unit, c.N) for c in row] for row in M.entries], prod.rows)
        if reference is None:
            reference = digest
        elif digest != reference:
            raise SystemExit(f"backend {name} disagrees with {kernels.available_backends()[0]}")
        results[name] = {"sweep_s": round(t_sweep, 4), "kronecker_s": round(t_mul, 4)}
    kernels.use_backend("auto")
    out = {"p": p, "n": n, "profile": profile.as_dict(), "length": frob.actx.cut,
           "backends": results}
    if "cython" in results:
        out["speedup"] = {k: round(results["python"][k] / results["cython"][k], 2)
                          for k in ("sweep_s", "kronecker_s")}
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=7)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--N3", type=int)
    ap.add_argument("--N4", type=int)
    ap.add_argument("--N5", type=int)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if (args.p, args.n) not in CURVES:
        ap.error(f"no benchmark curve for p={args.p}, n={args.n}")
    N = (args.N3, args.N4, args.N5) if args.N3 else None
    print(json.dumps(run(args.p, args.n, N, args.repeat), indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
