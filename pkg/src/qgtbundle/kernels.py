"""Backend selection for the planar ray kernel.

The compiled extension is used when it was built; otherwise the pure-Python
module with the same interface is loaded.
"""

from __future__ import annotations

from . import _raykernel_py

try:
    from . import _raykernel as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
rk4_planar = (_compiled or _raykernel_py).rk4_planar
rk4_planar_python = _raykernel_py.rk4_planar
rk4_planar_compiled = None if _compiled is None else _compiled.rk4_planar

STATUS_OK = _raykernel_py.STATUS_OK
STATUS_LEFT = _raykernel_py.STATUS_LEFT
STATUS_NONFINITE = _raykernel_py.STATUS_NONFINITE

# conformal factor code used by both kernels
VARIANT_CODES = {"flat": 0, "half_plane": 1, "disk": 2}
