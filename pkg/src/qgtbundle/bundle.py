"""Hermitian vector bundles over a chart: fiber pseudo-metric, connection, curvature.

The bundle is presented in one global frame.  ``h(x)`` is the matrix of the
Hermitian form, ``h(u, v) = u^dagger h v``, and the connection is stored in
mixed-index form ``omega[mu][i, j] = omega^i_{j mu}`` so that

    nabla_mu s = d_mu s + omega[mu] @ s.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .chart import Chart, MatrixField, fd_derivative
from .errors import SingularMetric

# |det h| below this is treated as degenerate
DET_FLOOR = 1e-12


@dataclass(frozen=True)
class BundleSpec:
    """Rank-``rank`` Hermitian bundle with connection over ``chart``.

    ``h_field(x)`` returns the ``n x n`` Hermitian form, ``omega_field(x)``
    returns an ``(N, n, n)`` array of connection matrices, one per chart axis.
    """

    chart: Chart
    rank: int
    h_field: Callable[[np.ndarray], np.ndarray]
    omega_field: Callable[[np.ndarray], np.ndarray]

    def h(self, x) -> np.ndarray:
        x = self.chart.check(x)
        h = np.asarray(self.h_field(x), dtype=complex)
        if abs(np.linalg.det(h)) < DET_FLOOR:
            raise SingularMetric(f"fiber form is degenerate at {x.tolist()}")
        return h

    def omega(self, x) -> np.ndarray:
        x = self.chart.check(x)
        om = np.asarray(self.omega_field(x), dtype=complex)
        if om.shape != (self.chart.dim, self.rank, self.rank):
            raise ValueError(f"connection has shape {om.shape}")
        return om

    def h_matrix_field(self) -> MatrixField:
        return MatrixField(self.chart, self.h, self.rank, self.rank)

    def hermiticity_residual(self, x) -> float:
        h = self.h(x)
        return float(np.max(np.abs(h - h.conj().T)))


@dataclass(frozen=True)
class CurvatureSlice:
    point: np.ndarray
    mu: int
    nu: int
    omega_matrix: np.ndarray

    def h_skew_residual(self, h: np.ndarray) -> float:
        """Max-norm of ``h Omega + Omega^dagger h`` (zero for a compatible connection)."""
        om = self.omega_matrix
        return float(np.max(np.abs(h @ om + om.conj().T @ h)))


def connection_derivatives(spec: BundleSpec, point, step=None, scheme="central4") -> np.ndarray:
    """``d[rho, mu] = d_rho omega_mu`` as an ``(N, N, n, n)`` array."""
    point = spec.chart.check(point)
    return np.stack(
        [fd_derivative(spec.omega, point, rho, step, scheme, chart=spec.chart) for rho in range(spec.chart.dim)]
    )


def check_compatibility(spec: BundleSpec, point, step=None, scheme="central4") -> float:
    """Max over mu of ``|d_mu h_ij - (conj(omega_{ji mu}) + omega_{ij mu})|``.

    Lowered coefficients are ``omega_{ij mu} = h_ik omega^k_{j mu}``.
    """
    point = spec.chart.check(point)
    h = spec.h(point)
    om = spec.omega(point)
    worst = 0.0
    for mu in range(spec.chart.dim):
        dh = fd_derivative(spec.h, point, mu, step, scheme, chart=spec.chart)
        low = h @ om[mu]
        worst = max(worst, float(np.max(np.abs(dh - (low.conj().T + low)))))
    return worst


def curvature_from_derivatives(om: np.ndarray, dom: np.ndarray) -> np.ndarray:
    """Coordinate-frame curvature ``Omega[mu, nu]`` from ``omega`` and ``d omega``."""
    comm = np.einsum("mik,nkj->mnij", om, om)
    return dom - dom.transpose(1, 0, 2, 3) + comm - comm.transpose(1, 0, 2, 3)


def curvature_all(spec: BundleSpec, point, step=None, scheme="central4") -> np.ndarray:
    """All curvature matrices ``Omega^i_{j mu nu}`` as an ``(N, N, n, n)`` array."""
    point = spec.chart.check(point)
    return curvature_from_derivatives(spec.omega(point), connection_derivatives(spec, point, step, scheme))


def curvature(spec: BundleSpec, point, mu: int, nu: int, step=None, scheme="central4") -> CurvatureSlice:
    point = spec.chart.check(point)
    om = spec.omega(point)
    d_mu = fd_derivative(spec.omega, point, mu, step, scheme, chart=spec.chart)[nu]
    d_nu = fd_derivative(spec.omega, point, nu, step, scheme, chart=spec.chart)[mu]
    mat = d_mu - d_nu + om[mu] @ om[nu] - om[nu] @ om[mu]
    return CurvatureSlice(point, mu, nu, mat)


def covariant_derivative(spec: BundleSpec, section, point, mu: int, step=None, scheme="central4") -> np.ndarray:
    """``d_mu s + omega_mu s`` for a section given as a callable or an ``n x 1`` field."""
    point = spec.chart.check(point)

    def vec(x):
        return np.asarray(section(x), dtype=complex).reshape(spec.rank)

    ds = fd_derivative(vec, point, mu, step, scheme, chart=spec.chart)
    return ds + spec.omega(point)[mu] @ vec(point)
