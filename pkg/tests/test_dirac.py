import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgtbundle.dirac import (
    BETA,
    ETA,
    GAMMA_FLAT,
    analytic_qgt,
    check_on_shell,
    christoffels,
    dirac_projectors,
    dirac_symbol,
    hyperbolic_model,
    hyperbolic_quantum_metric,
    minkowski_model,
    numeric_vs_analytic,
    phase_point,
    pi_form,
    positive_energy_frame,
    riemann,
    riemann_lowered,
    scalar_curvature,
    slash,
    spin_connection,
    tetrad_residual,
)
from qgtbundle.errors import DomainError, FrameNotInKernel, OffPlane, OffShell

HALF = hyperbolic_model(1.0, "half_plane")
DISK = hyperbolic_model(1.0, "disk")
MINK = minkowski_model()


def test_clifford_relations():
    for a in range(4):
        for b in range(4):
            anti = GAMMA_FLAT[a] @ GAMMA_FLAT[b] + GAMMA_FLAT[b] @ GAMMA_FLAT[a]
            np.testing.assert_allclose(anti, -2 * ETA[a, b] * np.eye(4), atol=1e-15)
    # beta gamma^a is Hermitian, so h = beta makes the Dirac operator symmetric
    for a in range(4):
        m = BETA @ GAMMA_FLAT[a]
        np.testing.assert_allclose(m, m.conj().T, atol=1e-15)


def test_minkowski_christoffels_vanish():
    assert np.max(np.abs(christoffels(MINK, [0.0, 1.0, 2.0, 0.0]))) == 0.0


def test_half_plane_christoffels_by_hand():
    # lam = a/x: Gamma^x_xx = -1/x, Gamma^x_yy = 1/x, Gamma^y_xy = -1/x
    x = 2.0
    gam = christoffels(HALF, [0.0, x, 0.3, 0.0])
    assert gam[1, 1, 1] == pytest.approx(-1 / x, abs=1e-14)
    assert gam[1, 2, 2] == pytest.approx(1 / x, abs=1e-14)
    assert gam[2, 1, 2] == pytest.approx(-1 / x, abs=1e-14)
    assert gam[2, 2, 1] == pytest.approx(-1 / x, abs=1e-14)
    assert abs(gam[0]).max() == 0.0 and abs(gam[3]).max() == 0.0


@pytest.mark.parametrize("model", [HALF, DISK], ids=["half", "disk"])
def test_christoffels_symmetric_and_match_fd(model):
    pt = [0.0, 0.6 if model is DISK else 1.5, 0.2, 0.0]
    if model is DISK:
        pt = [0.0, 0.2, 0.15, 0.0]
    gam = christoffels(model, pt)
    assert np.max(np.abs(gam - gam.transpose(0, 2, 1))) <= 1e-15
    fd = christoffels(model, pt, analytic=False)
    assert np.max(np.abs(gam - fd)) <= 1e-8


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("variant", ["half_plane", "disk"])
def test_scalar_curvature(a, variant):
    model = hyperbolic_model(a, variant)
    pt = [0.0, 1.0, 0.5, 0.0] if variant == "half_plane" else [0.0, 0.1, -0.2, 0.0]
    assert scalar_curvature(model, pt) == pytest.approx(-2 / a**2, abs=1e-8)
    assert tetrad_residual(model, pt) <= 1e-13


def test_disk_frame_curvature_vanishes_for_large_radius():
    a = 2000.0
    model = hyperbolic_model(a, "disk")
    x = [0.0, 0.0, 0.0, 0.0]
    assert np.max(np.abs(christoffels(model, x))) == 0.0
    r = riemann_lowered(model, x)
    e = model.e(x)
    frame = np.einsum("abcd,ia,jb,kc,ld->ijkl", r, e, e, e, e)
    assert np.max(np.abs(frame)) <= 1e-6


def test_spin_connection_flat_and_antisymmetric():
    assert np.max(np.abs(spin_connection(MINK, [0, 1, 1, 0]).matrices)) == 0.0
    sc = spin_connection(HALF, [0.0, 1.7, -0.4, 0.0])
    assert sc.antisymmetry <= 1e-13


def test_spinor_curvature_matches_riemann():
    pt = np.array([0.0, 1.3, 0.2, 0.0])
    h = 1e-4

    def mats(x):
        return spin_connection(HALF, x).matrices

    gm = HALF.gammas(pt)
    r_low = riemann_lowered(HALF, pt)
    w = mats(pt)
    for mu, nu in [(1, 2), (0, 1), (2, 3)]:
        e_mu, e_nu = np.eye(4)[mu] * h, np.eye(4)[nu] * h
        d_mu = (mats(pt + e_mu) - mats(pt - e_mu))[nu] / (2 * h)
        d_nu = (mats(pt + e_nu) - mats(pt - e_nu))[mu] / (2 * h)
        curv = d_mu - d_nu + w[mu] @ w[nu] - w[nu] @ w[mu]
        expected = -0.25 * np.einsum("ab,aij,bjk->ik", r_low[:, :, mu, nu], gm, gm)
        assert np.max(np.abs(curv - expected)) <= 1e-7


def boosted(model, x, ps):
    return phase_point(model, x, ps)


def test_rest_frame_projectors():
    pp = phase_point(MINK, [0, 0, 0, 0], [0, 0, 0])
    assert pp.energy == pytest.approx(1.0)
    p_plus, p_minus = dirac_projectors(MINK, pp)
    np.testing.assert_allclose(p_plus, 0.5 * (np.eye(4) + BETA), atol=1e-15)
    np.testing.assert_allclose(p_plus + p_minus, np.eye(4), atol=1e-15)


@settings(max_examples=25, deadline=None)
@given(p=st.lists(st.floats(-2.5, 2.5), min_size=3, max_size=3), x=st.floats(0.5, 3.0), y=st.floats(-2, 2))
def test_projector_properties(p, x, y):
    pp = phase_point(HALF, [0.0, x, y, 0.0], p)
    check_on_shell(HALF, pp.x, pp.p)
    proj, _ = dirac_projectors(HALF, pp)
    m = HALF.mass
    np.testing.assert_allclose(proj @ proj, proj, atol=1e-10)
    assert abs(np.trace(proj) - 2) <= 1e-10
    np.testing.assert_allclose(BETA @ proj, proj.conj().T @ BETA, atol=1e-10)
    d = dirac_symbol(HALF, pp.x, pp.p)
    assert np.max(np.abs(d @ proj)) <= 1e-10 * (1 + np.abs(p).max())
    ps = slash(HALF, pp.x, pp.p)
    np.testing.assert_allclose(ps @ ps, m**2 * np.eye(4), atol=1e-9 * (1 + np.abs(p).max() ** 2))
    frame = positive_energy_frame(HALF, pp)
    h_ab = frame.conj().T @ BETA @ frame
    np.testing.assert_allclose(h_ab, np.eye(2), atol=1e-10)


def test_off_shell_rejected():
    with pytest.raises(OffShell):
        check_on_shell(MINK, np.zeros(4), np.array([-1.5, 0.0, 0.0, 0.0]))


def test_pi_form_constraint_and_flat_case():
    pp = phase_point(MINK, [0, 0, 0, 0], [0.3, -0.2, 0.1])
    pi = pi_form(MINK, pp)
    assert pi.shape == (4, 7)
    # p^alpha Pi_alpha = 0 on the shell
    p_up = MINK.g_inv(pp.x) @ pp.p
    assert np.max(np.abs(p_up @ pi)) <= 1e-15
    np.testing.assert_allclose(pi[1:, 4:], np.eye(3), atol=1e-15)
    np.testing.assert_allclose(pi[:, :4], 0.0, atol=1e-15)
    curved = phase_point(HALF, [0.0, 1.4, 0.1, 0.0], [0.5, -0.7, 0.2])
    p_up = HALF.g_inv(curved.x) @ curved.p
    assert np.max(np.abs(p_up @ pi_form(HALF, curved))) <= 1e-13


def test_analytic_qgt_rejects_frame_outside_kernel():
    pp = phase_point(MINK, np.zeros(4), [0.4, 0.0, 0.0])
    with pytest.raises(FrameNotInKernel):
        analytic_qgt(MINK, pp, frame=np.eye(4)[:, 2:])


@pytest.mark.parametrize("model", [MINK, HALF, DISK], ids=["mink", "half", "disk"])
def test_analytic_qgt_decomposition(model):
    x = [0.0, 1.2, 0.3, 0.0] if model is HALF else [0.0, 0.1, 0.2, 0.0]
    pp = phase_point(model, x, [0.4, -0.3, 0.2])
    an = analytic_qgt(model, pp)
    q, g, f, om = an["Q"], an["G"], an["F"], an["Omega_AB"]
    qt = q.transpose(0, 1, 3, 2)
    assert np.max(np.abs(0.5 * (q + qt) - g)) <= 1e-10
    assert np.max(np.abs(0.5 * (q - qt) - (-0.5j * f - 0.5 * om))) <= 1e-10
    if model is MINK:
        assert np.max(np.abs(om)) == 0.0


def test_rest_frame_metric_is_pure_momentum():
    pp = phase_point(MINK, np.zeros(4), [0.0, 0.0, 0.0])
    g = analytic_qgt(MINK, pp)["G"]
    expected = np.zeros((7, 7))
    expected[4:, 4:] = -np.eye(3) / 4
    for a in range(2):
        np.testing.assert_allclose(g[a, a], expected, atol=1e-15)


@pytest.mark.parametrize(
    "ps,tol", [([0.0, 0.0, 0.0], 1e-8), ([0.6, -0.4, 0.3], 1e-7)], ids=["rest", "boosted"]
)
def test_numeric_matches_analytic_minkowski(ps, tol):
    res = numeric_vs_analytic(MINK, phase_point(MINK, [0.0, 0.5, -0.5, 0.0], ps))
    for key in ("Q", "G", "F"):
        assert res[key]["residual_h"] <= tol


@pytest.mark.parametrize("model", [HALF, DISK], ids=["half", "disk"])
def test_numeric_matches_analytic_hyperbolic(model):
    x = [0.0, 1.2, 0.3, 0.0] if model is HALF else [0.0, 0.1, 0.2, 0.0]
    res = numeric_vs_analytic(model, phase_point(model, x, [0.5, -0.3, 0.0]))
    for key in ("Q", "G", "F"):
        assert res[key]["residual_h2"] <= 1e-5
        assert res[key]["order"] == pytest.approx(res["scheme_order"], rel=0.25)


@pytest.mark.parametrize("model", [HALF, DISK], ids=["half", "disk"])
def test_planar_metric_formula_matches_general_form(model):
    x = [0.0, 1.2, 0.3, 0.0] if model is HALF else [0.0, 0.1, 0.2, 0.0]
    pp = phase_point(model, x, [0.5, -0.3, 0.0])
    g = analytic_qgt(model, pp)["G"]
    assert np.max(np.abs(hyperbolic_quantum_metric(model, pp) - g)) <= 1e-12
    # the dp-dp-only variant drops Christoffel terms and differs on curved backgrounds
    assert np.max(np.abs(hyperbolic_quantum_metric(model, pp, form="momentum_only") - g)) > 1e-3


def test_planar_metric_special_cases():
    rest = phase_point(HALF, [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0])
    g = hyperbolic_quantum_metric(HALF, rest)
    # at p = 0 only the momentum block survives
    assert np.max(np.abs(g[0, 0, :4, :])) == 0.0
    # lam = 1: position blocks vanish for any momentum
    flat = phase_point(MINK, [0.0, 0.3, 0.2, 0.0], [0.7, -0.2, 0.0])
    gf = hyperbolic_quantum_metric(MINK, flat, form="momentum_only")
    assert np.max(np.abs(gf[:, :, :4, :4])) <= 1e-12
    np.testing.assert_allclose(gf, analytic_qgt(MINK, flat)["G"], atol=1e-12)


def test_planar_metric_domain_errors():
    with pytest.raises(OffPlane):
        hyperbolic_quantum_metric(HALF, phase_point(HALF, [0.0, 1.0, 0.0, 0.0], [0.1, 0.1, 0.2]))
    with pytest.raises(DomainError):
        hyperbolic_model(-1.0)
    with pytest.raises(DomainError):
        minkowski_model(mass=0.0)


def test_riemann_antisymmetry():
    r = riemann(HALF, [0.0, 1.1, 0.4, 0.0])
    assert np.max(np.abs(r + r.transpose(0, 1, 3, 2))) <= 1e-14
