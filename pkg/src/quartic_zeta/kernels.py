"""Kernel backend selection.

The compiled extension is used when it imports; otherwise (or when
``QUARTIC_ZETA_KERNELS=python`` is set) the pure-Python module takes over.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py

_compiled: ModuleType | None
try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _compiled = None


def available_backends() -> list[str]:
    return ["cython", "python"] if _compiled is not None else ["python"]


def get_backend(name: str | None = None) -> ModuleType:
    if name is None:
        name = os.environ.get("QUARTIC_ZETA_KERNELS", "auto")
    if name == "python":
        return _kernels_py
    if name in ("cython", "auto") and _compiled is not None:
        return _compiled
    if name == "cython":
        raise ImportError("compiled kernels are not built")
    return _kernels_py


_active = get_backend()
BACKEND = "cython" if _active is _compiled and _compiled is not None else "python"


def use_backend(name: str) -> None:
    """Switch the process-wide kernel backend ("cython", "python" or "auto")."""
    global _active, BACKEND
    _active = get_backend(name)
    BACKEND = "cython" if _active is _compiled and _compiled is not None else "python"


def active() -> ModuleType:
    return _active
