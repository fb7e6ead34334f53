"""Backend selection for the hot loops.

The compiled extension is used when it was built; set
``REALODE_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
import os

from . import _rk4_py

BACKEND = "python"
rk4_march = _rk4_py.rk4_march

if os.environ.get("REALODE_PURE_PYTHON", "") in ("", "0"):
    try:
        from ._rk4 import rk4_march  # noqa: F811
    except ImportError:
        pass
    else:
        BACKEND = "cython"

BACKENDS = {"python": _rk4_py.rk4_march}
if BACKEND == "cython":
    BACKENDS["cython"] = rk4_march
