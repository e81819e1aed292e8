"""Pure-Python RK4 ray kernel for conformally flat planar spacetimes.

Metric ``-dt^2 + lam^2 (dx^2 + dy^2) + dz^2`` with ``lam`` selected by
``variant`` (0 flat, 1 half-plane ``a/x``, 2 disk ``2a/(1-x^2-y^2)``) and the
potential ``A = (ex x + ey y, -b y/2, b x/2, 0)``.  Mirrors ``_raykernel.pyx``.
"""

import math

import numpy as np

STATUS_OK = 0
STATUS_LEFT = 1
STATUS_NONFINITE = 2


def _lam(variant, a, x, y):
    if variant == 1:
        return a / x, -a / (x * x), 0.0
    if variant == 2:
        s = 1.0 - x * x - y * y
        return 2.0 * a / s, 4.0 * a * x / (s * s), 4.0 * a * y / (s * s)
    return 1.0, 0.0, 0.0


def _rhs(st, variant, a, q, ex, ey, b, out):
    x, y = st[1], st[2]
    lam, lx, ly = _lam(variant, a, x, y)
    k0 = st[4] - q * (ex * x + ey * y)
    k1 = st[5] + q * 0.5 * b * y
    k2 = st[6] - q * 0.5 * b * x
    k3 = st[7]
    il2 = 1.0 / (lam * lam)
    u0, u1, u2 = -k0, k1 * il2, k2 * il2
    kk = (k1 * k1 + k2 * k2) * il2 / lam
    out[0] = u0
    out[1] = u1
    out[2] = u2
    out[3] = k3
    out[4] = 0.0
    out[5] = kk * lx + q * (ex * u0 + 0.5 * b * u2)
    out[6] = kk * ly + q * (ey * u0 - 0.5 * b * u1)
    out[7] = 0.0


def rk4_planar(x0, p0, variant, a, q, ex, ey, b, dt, nsteps, lo, hi):
    """Integrate ``nsteps`` RK4 steps; returns ``(xs, ps, done, status)``.

    ``xs`` and ``ps`` have ``nsteps + 1`` rows; only the first ``done + 1``
    are filled when integration stops early.
    """
    xs = np.zeros((nsteps + 1, 4))
    ps = np.zeros((nsteps + 1, 4))
    st = [float(v) for v in x0] + [float(v) for v in p0]
    lo = [float(v) for v in lo]
    hi = [float(v) for v in hi]
    xs[0] = st[:4]
    ps[0] = st[4:]
    k1, k2, k3, k4 = ([0.0] * 8 for _ in range(4))
    tmp = [0.0] * 8
    half = 0.5 * dt
    for n in range(nsteps):
        _rhs(st, variant, a, q, ex, ey, b, k1)
        for i in range(8):
            tmp[i] = st[i] + half * k1[i]
        _rhs(tmp, variant, a, q, ex, ey, b, k2)
        for i in range(8):
            tmp[i] = st[i] + half * k2[i]
        _rhs(tmp, variant, a, q, ex, ey, b, k3)
        for i in range(8):
            tmp[i] = st[i] + dt * k3[i]
        _rhs(tmp, variant, a, q, ex, ey, b, k4)
        for i in range(8):
            st[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        for i in range(8):
            if not math.isfinite(st[i]):
                return xs, ps, n, STATUS_NONFINITE
        for i in range(4):
            if st[i] < lo[i] or st[i] > hi[i]:
                return xs, ps, n, STATUS_LEFT
        xs[n + 1] = st[:4]
        ps[n + 1] = st[4:]
    return xs, ps, nsteps, STATUS_OK
