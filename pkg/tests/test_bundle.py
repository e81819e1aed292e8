import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgtbundle.bundle import BundleSpec, check_compatibility, covariant_derivative, curvature, curvature_all
from qgtbundle.chart import Chart
from qgtbundle.errors import SingularMetric
from qgtbundle.models import random_bundle

PLANE = Chart(("x1", "x2"), ((-1.0, 1.0), (-1.0, 1.0)), 0.01)


def flat_spec(n=2, h=None):
    h = np.eye(n) if h is None else h
    return BundleSpec(PLANE, n, lambda x: h, lambda x: np.zeros((2, n, n)))


def test_flat_connection_is_compatible():
    assert check_compatibility(flat_spec(), [0.1, 0.2]) <= 1e-12


def test_hermitian_connection_residual_is_twice_its_size():
    w = np.array([[0.3, 0.1 + 0.2j], [0.1 - 0.2j, -0.5]])
    spec = BundleSpec(PLANE, 2, lambda x: np.eye(2), lambda x: np.stack([w, np.zeros((2, 2))]))
    assert check_compatibility(spec, [0.0, 0.0]) == pytest.approx(2 * np.max(np.abs(w)), abs=1e-12)


def test_abelian_curvature_is_curl():
    # A = (-x2, 0) as a u(1) connection i*A: Omega_12 = i (d1 A2 - d2 A1) = i
    spec = BundleSpec(PLANE, 1, lambda x: np.eye(1), lambda x: np.array([[[-1j * x[1]]], [[0.0]]]))
    sl = curvature(spec, [0.2, -0.3], 0, 1)
    assert abs(sl.omega_matrix[0, 0] - 1j) <= 1e-10
    assert sl.h_skew_residual(np.eye(1)) <= 1e-10


def test_singular_metric_rejected():
    spec = flat_spec(h=np.diag([1.0, 0.0]))
    with pytest.raises(SingularMetric):
        spec.h([0.0, 0.0])


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10_000), x=st.floats(-0.5, 0.5), y=st.floats(-0.5, 0.5))
def test_random_bundle_curvature_properties(seed, x, y):
    spec = random_bundle(seed).spec
    pt = np.array([x, y])
    om = curvature_all(spec, pt)
    assert np.max(np.abs(om + om.transpose(1, 0, 2, 3))) <= 1e-14
    assert check_compatibility(spec, pt) <= 1e-7
    h = spec.h(pt)
    skew = h @ om[0, 1] + om[0, 1].conj().T @ h
    assert np.max(np.abs(skew)) <= 1e-6


def test_leibniz_rule():
    spec = random_bundle(3).spec
    pt = np.array([0.1, -0.2])
    rng = np.random.default_rng(1)
    c = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    d = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    s = lambda x: c[0] + x[0] * c[1] + x[1] ** 2 * c[2]
    t = lambda x: d[0] + np.sin(x[0]) * d[1] + x[1] * d[2]
    hst = lambda x: np.array(s(x).conj() @ spec.h(x) @ t(x))
    from qgtbundle.chart import fd_derivative

    for mu in range(2):
        lhs = fd_derivative(hst, pt, mu, chart=spec.chart)
        rhs = (
            covariant_derivative(spec, s, pt, mu).conj() @ spec.h(pt) @ t(pt)
            + s(pt).conj() @ spec.h(pt) @ covariant_derivative(spec, t, pt, mu)
        )
        assert abs(lhs - rhs) <= 1e-9
