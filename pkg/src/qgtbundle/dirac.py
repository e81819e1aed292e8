"""Dirac spinors on a curved spacetime and their phase-space sub-bundle geometry.

Conventions: signature (- + + +), ``{gamma^a, gamma^b} = -2 eta^{ab}``,
standard Dirac representation, spinor pairing ``h(u, v) = u^dagger gamma^0 v``.
The Dirac symbol at momentum ``p`` is ``D = -p_mu gamma^mu - m`` and its
kernel projector is ``P = (m - p_mu gamma^mu) / 2m``.

The mass shell is charted by ``(t, x, y, z, p_1, p_2, p_3)``; ``p_0`` is
eliminated through the future-directed root of the dispersion relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bundle import BundleSpec
from .chart import Chart, SCHEME_ORDER, convergence_order, fd_derivative
from .errors import DomainError, FrameNotInKernel, OffPlane, OffShell, SingularMetric
from .subgeometry import ProjectorField, SubGeometry, h_gram_schmidt

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
SHELL_TOL = 1e-10

_s1 = np.array([[0, 1], [1, 0]], dtype=complex)
_s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_s3 = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)

GAMMA_FLAT = np.array(
    [np.block([[_I2, _Z2], [_Z2, -_I2]])] + [np.block([[_Z2, s], [-s, _Z2]]) for s in (_s1, _s2, _s3)]
)
BETA = GAMMA_FLAT[0].copy()
# gamma_a = eta_{ab} gamma^b
GAMMA_FLAT_LOWER = np.einsum("ab,bij->aij", ETA, GAMMA_FLAT)


def sigma_matrices(gammas: np.ndarray) -> np.ndarray:
    """``sigma^{ab} = (i/2)[gamma^a, gamma^b]`` for a stack of gamma matrices."""
    prod = np.einsum("aij,bjk->abik", gammas, gammas)
    return 0.5j * (prod - prod.transpose(1, 0, 2, 3))


@dataclass(frozen=True)
class SpacetimeModel:
    """Lorentzian metric, tetrad and electromagnetic potential on a 4-D chart.

    ``tetrad(x)[a, mu]`` is the component ``e_a^mu``.  The optional
    ``metric_derivative(x)[mu, a, b] = d_mu g_ab``,
    ``tetrad_derivative(x)[mu, a, nu] = d_mu e_a^nu`` and
    ``em_gradient(x)[mu, nu] = d_mu A_nu`` override finite differences.
    """

    name: str
    chart: Chart
    metric: Callable[[np.ndarray], np.ndarray]
    tetrad: Callable[[np.ndarray], np.ndarray]
    mass: float
    charge: float = 0.0
    em_potential: Callable[[np.ndarray], np.ndarray] | None = None
    em_gradient: Callable[[np.ndarray], np.ndarray] | None = None
    metric_derivative: Callable[[np.ndarray], np.ndarray] | None = None
    tetrad_derivative: Callable[[np.ndarray], np.ndarray] | None = None
    conformal_factor: tuple | None = None
    params: dict = field(default_factory=dict)
    fd_step: float = 1e-3

    def __post_init__(self):
        if self.chart.dim != 4:
            raise ValueError("spacetime charts are 4-dimensional")
        if not self.mass > 0:
            raise DomainError("the Dirac mass must be positive")

    def g(self, x) -> np.ndarray:
        return np.asarray(self.metric(self.chart.check(x)), dtype=float)

    def g_inv(self, x) -> np.ndarray:
        g = self.g(x)
        if abs(np.linalg.det(g)) < 1e-14:
            raise SingularMetric(f"metric is degenerate at {np.asarray(x).tolist()}")
        return np.linalg.inv(g)

    def e(self, x) -> np.ndarray:
        return np.asarray(self.tetrad(self.chart.check(x)), dtype=float)

    def A(self, x) -> np.ndarray:
        if self.em_potential is None:
            return np.zeros(4)
        return np.asarray(self.em_potential(self.chart.check(x)), dtype=float)

    def dA(self, x) -> np.ndarray:
        """``d_mu A_nu`` as ``[mu, nu]``."""
        if self.em_potential is None:
            return np.zeros((4, 4))
        if self.em_gradient is not None:
            return np.asarray(self.em_gradient(self.chart.check(x)), dtype=float)
        return np.stack([fd_derivative(self.A, x, mu, self.fd_step, chart=self.chart) for mu in range(4)])

    def field_strength(self, x) -> np.ndarray:
        da = self.dA(x)
        return da - da.T

    def dg(self, x) -> np.ndarray:
        if self.metric_derivative is not None:
            return np.asarray(self.metric_derivative(self.chart.check(x)), dtype=float)
        return np.stack([fd_derivative(self.g, x, mu, self.fd_step, chart=self.chart) for mu in range(4)])

    def de(self, x) -> np.ndarray:
        if self.tetrad_derivative is not None:
            return np.asarray(self.tetrad_derivative(self.chart.check(x)), dtype=float)
        return np.stack([fd_derivative(self.e, x, mu, self.fd_step, chart=self.chart) for mu in range(4)])

    def gammas(self, x) -> np.ndarray:
        """Coordinate gamma matrices ``gamma^mu = e_a^mu gamma^a``."""
        return np.einsum("am,aij->mij", self.e(x), GAMMA_FLAT)


# -- spacetime geometry ----------------------------------------------------


def christoffels_from_derivative(g_inv: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Levi-Civita ``Gamma[rho, mu, nu]`` from ``g^{-1}`` and ``dg[mu, a, b]``."""
    lower = 0.5 * (dg.transpose(1, 0, 2) + dg.transpose(1, 2, 0) - dg)
    # lower[s, m, n] = (d_m g_sn + d_n g_sm - d_s g_mn) / 2
    return np.einsum("rs,smn->rmn", g_inv, lower)


def christoffels(model: SpacetimeModel, point, step=None, scheme="central4", analytic=True) -> np.ndarray:
    """Levi-Civita coefficients ``Gamma^rho_{mu nu}`` as ``[rho, mu, nu]``.

    Uses the model's analytic metric derivative when present (and
    ``analytic`` is true), otherwise central differences of the metric.
    """
    point = model.chart.check(point)
    if analytic and step is None and model.metric_derivative is not None:
        dg = model.dg(point)
    else:
        h = model.fd_step if step is None else step
        dg = np.stack([fd_derivative(model.g, point, mu, h, scheme, chart=model.chart) for mu in range(4)])
    return christoffels_from_derivative(model.g_inv(point), dg)


def riemann(model: SpacetimeModel, point, step=None, scheme="central4") -> np.ndarray:
    """``R^rho_{sigma mu nu}`` as ``[rho, sigma, mu, nu]``.

    Convention ``[nabla_mu, nabla_nu] V^rho = R^rho_{sigma mu nu} V^sigma``;
    derivatives of the Christoffels are central differences.
    """
    point = model.chart.check(point)
    h = model.fd_step if step is None else step
    gam = christoffels(model, point)
    dgam = np.stack(
        [fd_derivative(lambda y: christoffels(model, y), point, mu, h, scheme, chart=model.chart) for mu in range(4)]
    )
    # dgam[mu, rho, nu, sigma] = d_mu Gamma^rho_{nu sigma}
    term = dgam.transpose(1, 3, 0, 2) + np.einsum("rml,lns->rsmn", gam, gam)
    return term - term.transpose(0, 1, 3, 2)


def riemann_lowered(model: SpacetimeModel, point, step=None, scheme="central4") -> np.ndarray:
    return np.einsum("ar,rbmn->abmn", model.g(point), riemann(model, point, step, scheme))


def scalar_curvature(model: SpacetimeModel, point, step=None, scheme="central4") -> float:
    r = riemann(model, point, step, scheme)
    ricci = np.einsum("rsrn->sn", r)
    return float(np.einsum("sn,sn->", model.g_inv(point), ricci))


def tetrad_residual(model: SpacetimeModel, point) -> float:
    e = model.e(point)
    return float(np.max(np.abs(e @ model.g(point) @ e.T - ETA)))


@dataclass(frozen=True)
class SpinConnection:
    omega_ab: np.ndarray  # [mu, a, b]
    matrices: np.ndarray  # [mu] 4x4 spinor connection matrices
    antisymmetry: float


def spin_connection(model: SpacetimeModel, point) -> SpinConnection:
    """``omega^{ab}_mu = (e^a)_nu nabla_mu (e^b)^nu`` and ``-1/4 omega^{ab}_mu gamma_a gamma_b``.

    The spinor matrices use the commutator ``-1/8 omega^{ab}[gamma_a, gamma_b]``,
    which equals the quoted product form for antisymmetric ``omega``.
    """
    point = model.chart.check(point)
    e = model.e(point)  # e[a, nu] = e_a^nu
    de = model.de(point)  # de[mu, a, nu]
    gam = christoffels(model, point)
    g = model.g(point)
    # nabla_mu e_b^nu
    nab = de + np.einsum("nmr,br->mbn", gam, e)
    e_up_low = np.einsum("ac,cr,rn->an", ETA, e, g)  # (e^a)_nu
    w = np.einsum("an,mbn,bc->mac", e_up_low, nab, ETA)  # omega^{a b}_mu, b raised with eta
    asym = float(np.max(np.abs(w + w.transpose(0, 2, 1))))
    comm = np.einsum("aij,bjk->abik", GAMMA_FLAT_LOWER, GAMMA_FLAT_LOWER)
    comm = comm - comm.transpose(1, 0, 2, 3)
    mats = -0.125 * np.einsum("mab,abij->mij", w, comm)
    return SpinConnection(w, mats, asym)


def spinor_bundle(model: SpacetimeModel) -> BundleSpec:
    """The spinor bundle over the spacetime chart with its spin connection."""
    return BundleSpec(
        model.chart, 4, lambda x: BETA, lambda x: spin_connection(model, x).matrices
    )


# -- mass shell ------------------------------------------------------------


@dataclass(frozen=True)
class PhasePoint:
    x: np.ndarray
    p_spatial: np.ndarray
    p0: float

    @property
    def p(self) -> np.ndarray:
        return np.concatenate([[self.p0], self.p_spatial])

    @property
    def chart_point(self) -> np.ndarray:
        return np.concatenate([self.x, self.p_spatial])

    @property
    def energy(self) -> float:
        return -self.p0


def solve_p0(g_inv: np.ndarray, p_spatial, mass: float) -> float:
    """Future-directed root ``p_0`` of ``g^{mu nu} p_mu p_nu = -m^2``."""
    p_spatial = np.asarray(p_spatial, dtype=float)
    a = g_inv[0, 0]
    b = 2.0 * g_inv[0, 1:] @ p_spatial
    c = p_spatial @ g_inv[1:, 1:] @ p_spatial + mass**2
    disc = b * b - 4 * a * c
    if disc < 0:
        raise OffShell("no real on-shell energy for this momentum")
    # this root has p^0 = +sqrt(disc) / 2 > 0
    return float((-b + np.sqrt(disc)) / (2 * a))


def phase_point(model: SpacetimeModel, x, p_spatial) -> PhasePoint:
    x = model.chart.check(x)
    p_spatial = np.asarray(p_spatial, dtype=float)
    return PhasePoint(x, p_spatial, solve_p0(model.g_inv(x), p_spatial, model.mass))


def shell_residual(model: SpacetimeModel, x, p) -> float:
    p = np.asarray(p, dtype=float)
    return float(p @ model.g_inv(x) @ p + model.mass**2)


def check_on_shell(model: SpacetimeModel, x, p, tol: float = SHELL_TOL) -> None:
    res = shell_residual(model, x, p)
    if abs(res) > tol * max(1.0, model.mass**2):
        raise OffShell(f"mass-shell residual {res:.3e} exceeds {tol:g}")
    if (model.g_inv(x) @ np.asarray(p))[0] <= 0:
        raise OffShell("momentum is not future-directed")


def slash(model: SpacetimeModel, x, p) -> np.ndarray:
    return np.einsum("m,mij->ij", np.asarray(p, dtype=float), model.gammas(x))


def dirac_symbol(model: SpacetimeModel, x, p) -> np.ndarray:
    return -slash(model, x, p) - model.mass * np.eye(4)


def dirac_projectors(model: SpacetimeModel, pp: PhasePoint):
    """Kernel projector ``P`` of the Dirac symbol and its complement ``P'``."""
    check_on_shell(model, pp.x, pp.p)
    ps = slash(model, pp.x, pp.p)
    m = model.mass
    eye = np.eye(4)
    return (m * eye - ps) / (2 * m), (m * eye + ps) / (2 * m)


def positive_energy_frame(model: SpacetimeModel, pp: PhasePoint) -> np.ndarray:
    """h-orthonormal kernel frame: project the rest-frame basis, then orthonormalise."""
    p, _ = dirac_projectors(model, pp)
    frame, _ = h_gram_schmidt(p[:, :2], BETA)
    return frame


def gamma_chart(model: SpacetimeModel, p_max: float = 3.0, p_step: float | None = None) -> Chart:
    """7-D chart ``(t, x, y, z, p1, p2, p3)`` of the mass shell."""
    base = model.chart
    names = base.coord_names + ("p1", "p2", "p3")
    dom = base.domain + ((-p_max, p_max),) * 3
    ps = p_max / 300 if p_step is None else p_step
    return Chart(names, dom, base.default_step + (ps,) * 3)


def mass_shell_derivatives(model: SpacetimeModel, pp: PhasePoint, gam: np.ndarray | None = None):
    """``(d p_0 / d x^mu, d p_0 / d p_i)`` along the mass shell.

    The x-derivative is written through the Christoffels so that the
    tangency constraint ``p^alpha Pi_alpha = 0`` holds to rounding.
    """
    gam = christoffels(model, pp.x) if gam is None else gam
    p = pp.p
    p_up = model.g_inv(pp.x) @ p
    dx = np.einsum("r,brm,b->m", p_up, gam, p) / p_up[0]
    dp = -p_up[1:] / p_up[0]
    return dx, dp


def pi_form(model: SpacetimeModel, pp: PhasePoint, gam: np.ndarray | None = None) -> np.ndarray:
    """``Pi_alpha = dp_alpha - p_rho Gamma^rho_{alpha mu} dx^mu`` on the 7 chart directions.

    Returns a real ``(4, 7)`` array ``Pi[alpha, J]``.
    """
    check_on_shell(model, pp.x, pp.p)
    gam = christoffels(model, pp.x) if gam is None else gam
    dx, dp = mass_shell_derivatives(model, pp, gam)
    pi = np.zeros((4, 7))
    pi[:, :4] = -np.einsum("r,ram->am", pp.p, gam)
    pi[0, :4] += dx
    pi[1:, 4:] = np.eye(3)
    pi[0, 4:] = dp
    return pi


def phase_space_geometry(model: SpacetimeModel, p_max: float = 3.0, p_step: float | None = None) -> ProjectorField:
    """Pullback spinor bundle over the mass shell with the Dirac kernel projector.

    The connection has the spin-connection matrices along ``dx^mu`` and no
    components along ``dp_i``; the fiber form is ``gamma^0``.
    """
    chart = gamma_chart(model, p_max, p_step)

    def omega(y):
        out = np.zeros((7, 4, 4), dtype=complex)
        out[:4] = spin_connection(model, y[:4]).matrices
        return out

    def projector(y):
        x, ps = y[:4], y[4:]
        p0 = solve_p0(model.g_inv(x), ps, model.mass)
        p = np.concatenate([[p0], ps])
        return (model.mass * np.eye(4) - slash(model, x, p)) / (2 * model.mass)

    spec = BundleSpec(chart, 4, lambda y: BETA, omega)
    return ProjectorField(spec, projector, 2)


def analytic_qgt(model: SpacetimeModel, pp: PhasePoint, frame=None, riemann_step=None) -> dict:
    """Closed-form QGT, quantum metric and Berry curvature on the mass shell.

    Returns ``Q``, ``G``, ``F`` and the projected spinor curvature
    ``Omega_AB`` as ``(2, 2, 7, 7)`` arrays in the chart basis, plus ``Pi``.
    """
    frame = positive_energy_frame(model, pp) if frame is None else np.asarray(frame, dtype=complex)
    d = dirac_symbol(model, pp.x, pp.p)
    kern = float(np.max(np.abs(d @ frame)))
    if kern > 1e-10:
        raise FrameNotInKernel(f"|D s_A| = {kern:.3e}")
    m = model.mass
    gam = christoffels(model, pp.x)
    pi = pi_form(model, pp, gam)
    gm = model.gammas(pp.x)
    h_ab = frame.conj().T @ BETA @ frame
    v = np.einsum("aij,jA->aiA", gm, frame)  # gamma^alpha s_A
    pair = np.einsum("aiA,ij,bjB->abAB", v.conj(), BETA, v)
    q = np.einsum("abAB,am,bn->ABmn", pair, pi, pi) / (4 * m**2)
    g_inv = model.g_inv(pp.x)
    g = -np.einsum("AB,ab,am,bn->ABmn", h_ab, g_inv, pi, pi) / (4 * m**2)
    sig = sigma_matrices(gm)
    vs = np.einsum("iA,ij,abjk,kB->ABab", frame.conj(), BETA, sig, frame)
    wedge = np.einsum("am,bn->abmn", pi, pi)
    wedge = wedge - wedge.transpose(0, 1, 3, 2)
    r_low = riemann_lowered(model, pp.x, riemann_step)
    r7 = np.zeros((4, 4, 7, 7))
    r7[:, :, :4, :4] = r_low
    f = 0.25 * np.einsum("ABab,abmn->ABmn", vs, wedge / m**2 - r7)
    omega_ab = 0.25j * np.einsum("ABab,abmn->ABmn", vs, r7)
    return {"Q": q, "G": g, "F": f, "Omega_AB": omega_ab, "Pi": pi, "h_AB": h_ab}


def numeric_vs_analytic(model: SpacetimeModel, pp: PhasePoint, step=None, scheme="central4", p_max=3.0) -> dict:
    """Run the generic sub-bundle pipeline on the mass shell and compare to closed forms.

    Residuals are max-norms at ``step`` and ``step/2``; ``order`` is the
    observed convergence order of each.
    """
    pf = phase_space_geometry(model, p_max)
    base = np.asarray(pf.chart.default_step if step is None else step, dtype=float)
    out = {}
    runs = []
    for h in (base, base / 2):
        sg = SubGeometry(pf, pp.chart_point, h, scheme)
        an = analytic_qgt(model, pp, sg.frame.parallel_frame)
        q = np.moveaxis(sg.qgt_matrix, (0, 1), (2, 3))
        g = np.moveaxis(sg.metric_matrix, (0, 1), (2, 3))
        f = np.moveaxis(sg.berry_curvature_derivative, (0, 1), (2, 3))
        runs.append(
            {
                "Q": float(np.max(np.abs(q - an["Q"]))),
                "G": float(np.max(np.abs(g - an["G"]))),
                "F": float(np.max(np.abs(f - an["F"]))),
            }
        )
    for key in ("Q", "G", "F"):
        out[key] = {
            "residual_h": runs[0][key],
            "residual_h2": runs[1][key],
            "order": convergence_order(runs[0][key], runs[1][key]),
        }
    out["scheme_order"] = SCHEME_ORDER[scheme]
    return out


# -- models ----------------------------------------------------------------

# time and z are unbounded physically; rays need room along t
_T_RANGE = (-100.0, 100.0)
_Z_RANGE = (-10.0, 10.0)


def _planar_em(e_field=(0.0, 0.0), b_field=0.0):
    """Potential ``A = (ex x + ey y) dt + (b/2)(-y dx + x dy)`` and its gradient."""
    ex, ey = (float(v) for v in e_field)
    b = float(b_field)

    def potential(x):
        return np.array([ex * x[1] + ey * x[2], -0.5 * b * x[2], 0.5 * b * x[1], 0.0])

    grad = np.zeros((4, 4))
    grad[1, 0], grad[2, 0] = ex, ey
    grad[2, 1], grad[1, 2] = -0.5 * b, 0.5 * b

    def gradient(x):
        return grad

    return potential, gradient


def conformal_planar_model(
    name: str,
    chart: Chart,
    lam: Callable,
    dlam: Callable,
    mass: float,
    charge: float,
    e_field=(0.0, 0.0),
    b_field=0.0,
    params: dict | None = None,
) -> SpacetimeModel:
    """``g = -dt^2 + lam(x, y)^2 (dx^2 + dy^2) + dz^2`` with a diagonal tetrad."""

    def metric(x):
        l2 = lam(x[1], x[2]) ** 2
        return np.diag([-1.0, l2, l2, 1.0])

    def metric_derivative(x):
        l = lam(x[1], x[2])
        dl = dlam(x[1], x[2])
        out = np.zeros((4, 4, 4))
        for mu, d in ((1, dl[0]), (2, dl[1])):
            out[mu, 1, 1] = out[mu, 2, 2] = 2 * l * d
        return out

    def tetrad(x):
        inv = 1.0 / lam(x[1], x[2])
        return np.diag([1.0, inv, inv, 1.0])

    def tetrad_derivative(x):
        l = lam(x[1], x[2])
        dl = dlam(x[1], x[2])
        out = np.zeros((4, 4, 4))
        for mu, d in ((1, dl[0]), (2, dl[1])):
            out[mu, 1, 1] = out[mu, 2, 2] = -d / l**2
        return out

    potential, gradient = _planar_em(e_field, b_field)
    has_em = charge != 0.0 or any(e_field) or b_field
    merged = {"mass": mass, "charge": charge, "e_field": list(e_field), "b_field": b_field}
    merged.update(params or {})
    return SpacetimeModel(
        name=name,
        chart=chart,
        metric=metric,
        tetrad=tetrad,
        mass=mass,
        charge=charge,
        em_potential=potential if has_em else None,
        em_gradient=gradient if has_em else None,
        metric_derivative=metric_derivative,
        tetrad_derivative=tetrad_derivative,
        conformal_factor=(lam, dlam),
        params=merged,
    )


def minkowski_model(mass=1.0, charge=0.0, e_field=(0.0, 0.0), b_field=0.0, half_width=10.0) -> SpacetimeModel:
    w = float(half_width)
    chart = Chart(("t", "x", "y", "z"), (_T_RANGE, (-w, w), (-w, w), _Z_RANGE), 0.02)
    return conformal_planar_model(
        "minkowski",
        chart,
        lambda x, y: 1.0,
        lambda x, y: (0.0, 0.0),
        mass,
        charge,
        e_field,
        b_field,
        {"variant": "flat", "a": None},
    )


def hyperbolic_model(a=1.0, variant="half_plane", mass=1.0, charge=0.0, e_field=(0.0, 0.0), b_field=0.0, margin=None):
    """Dirac spacetime over the hyperbolic plane of scalar curvature ``-2/a^2``.

    ``variant`` is ``"half_plane"`` (``lam = a/x``, ``x > 0``) or ``"disk"``
    (``lam = 2a/(1 - x^2 - y^2)``).
    """
    a = float(a)
    if not a > 0:
        raise DomainError("the curvature radius a must be positive")
    if variant == "half_plane":
        margin = 0.1 if margin is None else margin
        chart = Chart(
            ("t", "x", "y", "z"),
            (_T_RANGE, (margin, margin + 10.0), (-5.0, 5.0), _Z_RANGE),
            (0.02, 0.02, 0.02, 0.02),
        )

        def lam(x, y):
            return a / x

        def dlam(x, y):
            return (-a / x**2, 0.0)

    elif variant == "disk":
        margin = 0.15 if margin is None else margin
        r = np.sqrt((1.0 - margin) / 2.0)
        chart = Chart(("t", "x", "y", "z"), (_T_RANGE, (-r, r), (-r, r), _Z_RANGE), (0.02, 0.005, 0.005, 0.02))

        def lam(x, y):
            return 2 * a / (1 - x * x - y * y)

        def dlam(x, y):
            d = (1 - x * x - y * y) ** 2
            return (4 * a * x / d, 4 * a * y / d)

    else:
        raise DomainError(f"unknown hyperbolic variant {variant!r}")
    name = "hyperbolic-half-plane" if variant == "half_plane" else "hyperbolic-disk"
    return conformal_planar_model(name, chart, lam, dlam, mass, charge, e_field, b_field, {"variant": variant, "a": a})


def hyperbolic_quantum_metric(model: SpacetimeModel, pp: PhasePoint, h_ab=None, form: str = "complete") -> np.ndarray:
    """Explicit planar quantum metric on the mass shell of a conformally flat plane.

    Built from ``lam`` and ``d ln lam`` only (no Christoffel symbols), in the
    chart basis ``(dt, dx, dy, dz, dp1, dp2, dp3)``.  ``form="complete"``
    keeps every term of ``-g^{ij} Pi_i Pi_j``; ``form="momentum_only"`` drops
    the connection terms ``c_ij dx^j`` of ``Pi_i = dp_i - c_ij dx^j`` and is
    exact only where ``lam`` is constant.  Returns ``(2, 2, 7, 7)``.
    """
    if model.conformal_factor is None:
        raise DomainError("model has no conformal factor")
    if abs(pp.p_spatial[2]) > 0:
        raise OffPlane("the planar quantum metric needs p_3 = 0")
    if form not in ("complete", "momentum_only"):
        raise ValueError(f"unknown form {form!r}")
    lam_fn, dlam_fn = model.conformal_factor
    x, y = pp.x[1], pp.x[2]
    lam = lam_fn(x, y)
    dl = np.asarray(dlam_fn(x, y), dtype=float) / lam  # d_i ln lam
    p = pp.p_spatial[:2]
    m = model.mass
    energy = np.sqrt(m**2 + p @ p / lam**2)
    p_up = p / lam**2
    pk = p_up @ p
    g_up = np.eye(2) / lam**2
    # index layout in the 7-chart: dx^i -> 1 + i, dp_i -> 4 + i
    xi, pi_ = [1, 2], [4, 5]
    t = np.zeros((7, 7))
    t[np.ix_(pi_, pi_)] = np.outer(p_up, p_up) / energy**2 - g_up
    t[6, 6] = -1.0  # flat z direction
    t[np.ix_(xi, xi)] = (pk / energy) ** 2 * np.outer(dl, dl)
    cross = -(pk / energy**2) * np.outer(p_up, dl)  # [i, j] multiplies dp_i dx^j
    t[np.ix_(pi_, xi)] += cross
    t[np.ix_(xi, pi_)] += cross.T
    if form == "complete":
        # Pi_i = dp_i - c_ij dx^j with c_ij = p_i dl_j + p_j dl_i - delta_ij (p . dl)
        c = np.outer(p, dl) + np.outer(dl, p) - np.eye(2) * (p @ dl)
        t[np.ix_(pi_, xi)] += g_up @ c
        t[np.ix_(xi, pi_)] += (g_up @ c).T
        t[np.ix_(xi, xi)] -= c.T @ g_up @ c
    h_ab = np.eye(2) if h_ab is None else np.asarray(h_ab)
    return np.einsum("AB,mn->ABmn", h_ab, t) / (4 * m**2)
