"""Trial-counting kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``COOPNOMA_PURE_PYTHON`` is set to a non-empty value other
than ``0``, the numpy implementation is selected. Both consume identical
uniform streams and apply identical decision rules.
"""

from __future__ import annotations

import os

from . import _trials_py
from .params import DRAWS_PER_TRIAL, KernelParams

_FORCE_PURE = os.environ.get("COOPNOMA_PURE_PYTHON", "") not in ("", "0")

try:
    if _FORCE_PURE:
        raise ImportError("pure-Python backend forced by environment")
    from . import _trials as _compiled
except ImportError:
    _compiled = None

BACKENDS = ("cython", "python")
DEFAULT_BACKEND = "python" if _compiled is None else "cython"


def available_backends() -> tuple[str, ...]:
    return BACKENDS if _compiled is not None else ("python",)


def count_block(packed, seed: int, start: int, stop: int, backend: str | None = None):
    """Outage counts ``(near, far_coop, far_noncoop, decoded)`` over trials [start, stop)."""
    backend = backend or DEFAULT_BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("the compiled kernel is not available in this installation")
        return _compiled.count_block(packed, seed, start, stop)
    if backend == "python":
        return _trials_py.count_block(packed, seed, start, stop)
    raise ValueError(f"unknown backend {backend!r}")


__all__ = [
    "BACKENDS",
    "DEFAULT_BACKEND",
    "DRAWS_PER_TRIAL",
    "KernelParams",
    "available_backends",
    "count_block",
]
