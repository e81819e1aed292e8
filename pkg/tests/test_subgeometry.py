import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgtbundle.bundle import BundleSpec
from qgtbundle.chart import Chart
from qgtbundle.errors import RankMismatch, TorsionfulConnection
from qgtbundle.models import bloch_projector_field, bloch_state, cayley, random_bundle
from qgtbundle.subgeometry import (
    ProjectorField,
    SubGeometry,
    adapted_frame,
    aligned_frame_field,
    berry_connection,
    berry_curvature,
    codazzi_residuals,
    gauss_residuals,
    qgt,
    quantum_metric,
    shape_operator,
)

BLOCH = bloch_projector_field()


def bloch_dstate(theta, phi):
    """Hand-derived partial derivatives of the Bloch state."""
    d_theta = 0.5 * np.array([-np.sin(theta / 2), np.exp(1j * phi) * np.cos(theta / 2)])
    d_phi = np.array([0.0, 1j * np.exp(1j * phi) * np.sin(theta / 2)])
    return d_theta, d_phi


def central(f, x, mu, h=1e-4):
    e = np.zeros(len(x))
    e[mu] = h
    return (f(x + e) - f(x - e)) / (2 * h)


def test_adapted_frame_diagonal_projector():
    chart = Chart(("x",), ((-1.0, 1.0),), 0.01)
    spec = BundleSpec(chart, 2, lambda x: np.eye(2), lambda x: np.zeros((1, 2, 2)))
    fr = adapted_frame(ProjectorField(spec, lambda x: np.diag([1.0, 0.0]), 1), [0.0])
    np.testing.assert_allclose(np.abs(fr.matrix), np.eye(2), atol=1e-14)
    np.testing.assert_allclose(fr.signs, [1, 1])


def test_adapted_frame_rest_spinor_signature():
    chart = Chart(("x",), ((-1.0, 1.0),), 0.01)
    beta = np.diag([1.0, 1.0, -1.0, -1.0])
    spec = BundleSpec(chart, 4, lambda x: beta, lambda x: np.zeros((1, 4, 4)))
    # positive-energy rest projector (1 + beta)/2 has h-signature (+,+) on its image, (-,-) on the kernel
    fr = adapted_frame(ProjectorField(spec, lambda x: 0.5 * (np.eye(4) + beta), 2), [0.0])
    np.testing.assert_allclose(fr.signs, [1, 1, -1, -1])
    gram = fr.matrix.conj().T @ beta @ fr.matrix
    np.testing.assert_allclose(gram, np.diag(fr.signs), atol=1e-14)


def test_rank_mismatch():
    chart = Chart(("x",), ((-1.0, 1.0),), 0.01)
    spec = BundleSpec(chart, 2, lambda x: np.eye(2), lambda x: np.zeros((1, 2, 2)))
    with pytest.raises(RankMismatch):
        adapted_frame(ProjectorField(spec, lambda x: np.eye(2) * 0.5, 1), [0.0])


@pytest.mark.parametrize("theta", [0.4, 0.9, 1.3])
def test_bloch_berry_connection(theta):
    def standard_gauge(x):
        psi = bloch_state(*x)
        perp = np.array([-np.conj(psi[1]), np.conj(psi[0])])
        return np.column_stack([psi, perp])

    a = berry_connection(BLOCH, [theta, 1.1], step=0.005, frame_field=standard_gauge)
    assert abs(a[0, 0, 0]) <= 1e-9
    assert abs(a[0, 0, 1] - (-np.sin(theta / 2) ** 2)) <= 1e-9


@pytest.mark.parametrize("theta,phi", [(0.5, 0.3), (np.pi / 2, 2.0), (2.5, 4.0)])
def test_bloch_metric_and_provost(theta, phi):
    g, trace = quantum_metric(BLOCH, [theta, phi])
    np.testing.assert_allclose(trace, 0.25 * np.diag([1.0, np.sin(theta) ** 2]), atol=1e-9)
    # independent oracle: Re<d psi|(1-P)|d psi> from the hand-derived state derivative
    psi = bloch_state(theta, phi)
    d = bloch_dstate(theta, phi)
    proj = np.eye(2) - np.outer(psi, psi.conj())
    oracle = np.array([[np.real(d[m].conj() @ proj @ d[n]) for n in range(2)] for m in range(2)])
    np.testing.assert_allclose(trace, oracle, atol=1e-9)


def test_bloch_qgt_at_equator():
    q, report = qgt(BLOCH, [np.pi / 2, 1.0], step=0.005)
    assert abs(q[0, 0, 0, 0] - 0.25) <= 1e-9
    assert max(report["symmetric_vs_metric"], report["conjugate_symmetry"]) <= 1e-12


@pytest.mark.parametrize("theta", [0.6, 1.2, 2.2])
def test_bloch_berry_curvature_matches_monopole_curl(theta):
    x = np.array([theta, 0.7])

    def a_phi(y):
        psi = bloch_state(*y)
        return np.real(1j * psi.conj() @ central(lambda z: bloch_state(*z), y, 1))

    def a_theta(y):
        psi = bloch_state(*y)
        return np.real(1j * psi.conj() @ central(lambda z: bloch_state(*z), y, 0))

    curl = central(a_phi, x, 0, 1e-3) - central(a_theta, x, 1, 1e-3)
    assert abs(curl - (-0.5 * np.sin(theta))) <= 1e-6
    f_der, f_gauss = berry_curvature(BLOCH, x)
    assert abs(f_der[0, 0, 0, 1] - curl) <= 1e-6
    assert abs(f_gauss[0, 0, 0, 1] - curl) <= 1e-6
    assert abs(f_der[0, 0, 1, 0] + curl) <= 1e-6


def test_bloch_shape_second_form_consistency():
    s, sd, second = shape_operator(BLOCH, [1.0, 0.5])
    # h = I so S_{IA} = S^I_A and S^dagger is the conjugate transpose
    np.testing.assert_allclose(second, s, atol=1e-14)
    np.testing.assert_allclose(sd, np.conj(np.swapaxes(s, 0, 1)), atol=1e-9)


def random_point(seed):
    rng = np.random.default_rng(seed)
    return rng.uniform(-0.4, 0.4, size=2)


@settings(max_examples=12, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_random_configuration_identities(seed):
    pf = random_bundle(seed)
    pt = random_point(seed)
    res = pf.invariant_residuals(pt)
    assert max(res.values()) <= 1e-10
    sg = SubGeometry(pf, pt)
    rep = sg.qgt_report()
    assert rep["symmetric_vs_metric"] <= 1e-10
    assert rep["conjugate_symmetry"] <= 1e-10
    assert rep["antisymmetric_vs_curvatures"] <= 1e-5
    assert sg.adjointness_residual() <= 1e-10
    par, perp = sg.gauss_residuals()
    assert max(par, perp) <= 1e-5


def test_aligned_gauge_has_vanishing_connection_at_anchor():
    # projecting the anchor frame is a parallel gauge at the anchor point
    a = berry_connection(BLOCH, [0.9, 1.1])
    assert np.max(np.abs(a)) <= 1e-12


def test_alternative_forms_agree_at_small_step():
    sg = SubGeometry(random_bundle(4), random_point(4), step=2e-3)
    rep = sg.qgt_report()
    assert rep["alternative_nabla_form"] <= 1e-9
    assert rep["alternative_projector_form"] <= 1e-9


def test_gauss_converges_at_scheme_order():
    pf = random_bundle(5)
    par, perp = gauss_residuals(pf, random_point(5), step=0.02)
    for rec in (par, perp):
        assert rec.residual_h2 <= 1e-5
        assert rec.order == pytest.approx(4.0, rel=0.2)


def test_codazzi_residuals_and_independence():
    pf = random_bundle(6)
    par, perp, gap = codazzi_residuals(pf, random_point(6))
    assert max(par.residual_h2, perp.residual_h2) <= 1e-5
    assert gap <= 1e-8


def test_torsionful_base_connection_rejected():
    sg = SubGeometry(random_bundle(1), [0.0, 0.0])
    gam = np.zeros((2, 2, 2))
    gam[0, 0, 1] = 1.0
    with pytest.raises(TorsionfulConnection):
        sg.codazzi_residuals(gam)


def test_gauge_covariance_under_parallel_rotation():
    pf = random_bundle(7, negative=1)
    pt = np.array([0.2, -0.1])
    base = SubGeometry(pf, pt)
    aligned = aligned_frame_field(pf, base.anchor)
    m = pf.rank
    hpar = np.diag(base.anchor.signs[:m]).astype(complex)
    rng = np.random.default_rng(0)
    k0 = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    k1 = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    anti = lambda k: 0.5 * (k - hpar @ k.conj().T @ hpar)  # h_par-anti-self-adjoint part

    def rotated(x):
        u = cayley(anti(0.3 * k0 + x[0] * k1))
        fr = aligned(x)
        return np.hstack([fr[:, :m] @ u, fr[:, m:]])

    other = SubGeometry(pf, pt, frame_field=rotated)
    hinv = np.linalg.inv(hpar)
    t_base = np.einsum("ab,mnba->mn", hinv, base.metric_matrix)
    t_other = np.einsum("ab,mnba->mn", hinv, other.metric_matrix)
    np.testing.assert_allclose(t_other, t_base, atol=1e-10)
    f_base = np.einsum("ab,mnba->mn", hinv, base.berry_curvature_derivative)
    f_other = np.einsum("ab,mnba->mn", hinv, other.berry_curvature_derivative)
    np.testing.assert_allclose(f_other, f_base, atol=1e-6)
