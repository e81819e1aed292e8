import importlib
import sys

import numpy as np
import pytest

from qgtbundle import kernels

ARGS = dict(variant=1, a=1.0, q=1.0, ex=0.1, ey=0.05, b=0.5, dt=0.01, nsteps=500)
LO, HI = [-100, 0.1, -5, -10], [100, 10.1, 5, 10]


def run(fn, x0=(0.0, 1.0, 0.0, 0.0), p0=(-1.6, 0.1, 0.1, 0.0)):
    a = ARGS
    return fn(np.array(x0), np.array(p0), a["variant"], a["a"], a["q"], a["ex"], a["ey"], a["b"], a["dt"], a["nsteps"], LO, HI)


@pytest.mark.skipif(kernels.rk4_planar_compiled is None, reason="compiled kernel not built")
def test_compiled_matches_python():
    xs_c, ps_c, done_c, st_c = run(kernels.rk4_planar_compiled)
    xs_p, ps_p, done_p, st_p = run(kernels.rk4_planar_python)
    assert (done_c, st_c) == (done_p, st_p)
    assert np.max(np.abs(np.asarray(xs_c) - xs_p)) <= 1e-13
    assert np.max(np.abs(np.asarray(ps_c) - ps_p)) <= 1e-13


def test_python_kernel_reports_exit():
    xs, ps, done, status = run(kernels.rk4_planar_python, x0=(0.0, 0.11, 0.0, 0.0), p0=(-1.6, -1.0, 0.0, 0.0))
    assert status == kernels.STATUS_LEFT
    assert done < ARGS["nsteps"]


def test_fallback_when_extension_missing(monkeypatch):
    import qgtbundle

    monkeypatch.setitem(sys.modules, "qgtbundle._raykernel", None)
    monkeypatch.delattr(qgtbundle, "_raykernel", raising=False)
    reloaded = importlib.reload(kernels)
    try:
        assert reloaded.BACKEND == "python"
        assert reloaded.rk4_planar is reloaded.rk4_planar_python
    finally:
        monkeypatch.undo()
        importlib.reload(kernels)
    assert kernels.BACKEND in ("compiled", "python")
