"""Quantum geometry of Hermitian vector bundles.

Sub-bundle geometry (Berry connection, shape operators, quantum metric and
quantum geometric tensor) for a projector on a bundle with an arbitrary
compatible connection and pseudo-metric, with the Gauss-Codazzi-Mainardi
identities as numerical checks, and its application to Dirac fields on
curved spacetime.
"""

from .bundle import BundleSpec, check_compatibility, covariant_derivative, curvature
from .chart import Chart, MatrixField, convergence_order, fd_partial, grid_points
from .subgeometry import (
    ProjectorField,
    SubGeometry,
    berry_connection,
    berry_curvature,
    codazzi_residuals,
    gauss_residuals,
    qgt,
    quantum_metric,
    shape_operator,
)

__version__ = "0.1.0"

__all__ = [
    "BundleSpec",
    "Chart",
    "MatrixField",
    "ProjectorField",
    "SubGeometry",
    "berry_connection",
    "berry_curvature",
    "check_compatibility",
    "codazzi_residuals",
    "convergence_order",
    "covariant_derivative",
    "curvature",
    "fd_partial",
    "gauss_residuals",
    "grid_points",
    "qgt",
    "quantum_metric",
    "shape_operator",
]
