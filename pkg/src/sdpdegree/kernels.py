"""Backend selection for the numeric kernels.

The compiled extension ``sdpdegree._core`` is used when it imports; otherwise,
or when the environment variable ``SDPDEGREE_PURE_PYTHON`` is set to a
non-empty value other than ``0``, the numpy fallback is used.
"""

from __future__ import annotations

import os

from . import _fallback

_force_pure = os.environ.get("SDPDEGREE_PURE_PYTHON", "") not in ("", "0")

_core = None
if not _force_pure:
    try:
        from . import _core  # type: ignore[attr-defined]
    except ImportError:
        _core = None

backend = _core if _core is not None else _fallback
BACKEND = "compiled" if _core is not None else "python"

jacobi_eigh = backend.jacobi_eigh
hkm_solve = backend.hkm_solve

STATUS_OPTIMAL = _fallback.STATUS_OPTIMAL
STATUS_MAX_ITER = _fallback.STATUS_MAX_ITER
STATUS_NUMERICAL_FAILURE = _fallback.STATUS_NUMERICAL_FAILURE
STATUS_INFEASIBLE = _fallback.STATUS_INFEASIBLE


def available_backends() -> dict:
    out = {"python": _fallback}
    if _core is not None:
        out["compiled"] = _core
    else:
        try:
            from . import _core as core  # type: ignore[attr-defined]
            out["compiled"] = core
        except ImportError:
            pass
    return out
