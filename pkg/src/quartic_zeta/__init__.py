"""Zeta functions of genus-3 curves y^4 + g(x) y^2 + h(x) = 0 over F_q, p odd.

The Frobenius action on Monsky-Washnitzer cohomology is computed separately on
the two eigenspaces of y -> -y; the even part gives the elliptic quotient
v^2 + g v + h = 0 and the odd part the remaining abelian surface.
"""

from .curve_model import CaseTag, CurveInput, SingularCurveError
from .padic_core import build_context, fast_profile, precision_profile
from .pipeline import ComputeResult, compute

__all__ = ["CaseTag", "CurveInput", "SingularCurveError", "build_context", "fast_profile",
           "precision_profile", "compute", "ComputeResult"]
__version__ = "0.1.0"
