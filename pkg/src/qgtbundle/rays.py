"""Semiclassical rays of the Dirac field: Hamiltonian flow, intensity and spinor transport.

Rays are characteristics of ``H(x, p) = 1/2 g^{mu nu} k_mu k_nu`` with kinetic
momentum ``k = p - q A``; on the mass shell ``H = -m^2 / 2``.  Integration is
classical fixed-step RK4 in canonical variables ``(x, p)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .chart import fd_derivative
from .dirac import (
    BETA,
    GAMMA_FLAT,
    SpacetimeModel,
    christoffels,
    positive_energy_frame,
    phase_point,
    sigma_matrices,
    solve_p0,
    spin_connection,
)
from .errors import KernelCollapse, LeftDomain, OffShell, OutOfDomain, StepRejected

SHELL_TOL = 1e-10
COLLAPSE_TOL = 1e-6


def kinetic(model: SpacetimeModel, x, p) -> np.ndarray:
    return np.asarray(p, dtype=float) - model.charge * model.A(x)


def hamiltonian(model: SpacetimeModel, x, p) -> float:
    """``1/2 g^{mu nu}(p_mu - q A_mu)(p_nu - q A_nu)`` at canonical ``(x, p)``."""
    k = kinetic(model, x, p)
    return float(0.5 * k @ model.g_inv(x) @ k)


@dataclass(frozen=True)
class RayState:
    """Point on a ray: position, kinetic covector ``k_mu``, spinor and intensity."""

    tau: float
    x: np.ndarray
    k: np.ndarray
    psi: np.ndarray | None = None
    intensity: float = 1.0


def initial_state(model: SpacetimeModel, x, k_spatial, tau: float = 0.0, psi=None, intensity: float = 1.0) -> RayState:
    """On-shell ray state with ``k_0`` from the future-directed root."""
    x = model.chart.check(x)
    ks = np.asarray(k_spatial, dtype=float)
    k0 = solve_p0(model.g_inv(x), ks, model.mass)
    return RayState(tau, x, np.concatenate([[k0], ks]), psi, intensity)


def ray_rhs(model: SpacetimeModel, x, p):
    """Hamilton's equations ``(dx/dtau, dp/dtau)`` for the charged ray."""
    k = kinetic(model, x, p)
    k_up = model.g_inv(x) @ k
    gam = christoffels(model, x)
    dp = np.einsum("r,brm,b->m", k_up, gam, k)
    if model.charge:
        dp = dp + model.charge * model.dA(x) @ k_up
    return k_up, dp


@dataclass
class Trajectory:
    """Fixed-step ray samples with conservation diagnostics.

    ``x``, ``p`` and ``k`` have one row per node; ``H`` is the Hamiltonian at
    each node.  ``status`` is ``"ok"`` or ``"left_domain"``.
    """

    model_name: str
    dt: float
    tau: np.ndarray
    x: np.ndarray
    p: np.ndarray
    k: np.ndarray
    H: np.ndarray
    shell: np.ndarray
    mass: float
    backend: str
    status: str = "ok"

    @property
    def h_drift(self) -> float:
        return float(np.max(np.abs(self.H - self.H[0])))

    @property
    def kz_drift(self) -> float:
        return float(np.max(np.abs(self.k[:, 3] - self.k[0, 3])))

    @property
    def shell_residual(self) -> np.ndarray:
        """Dispersion residual ``g^{mu nu} k_mu k_nu + m^2`` per node."""
        return self.shell

    def states(self):
        for i in range(len(self.tau)):
            yield RayState(float(self.tau[i]), self.x[i], self.k[i])


def _kernel_params(model: SpacetimeModel):
    variant = model.params.get("variant")
    if variant not in kernels.VARIANT_CODES or model.conformal_factor is None:
        return None
    a = model.params.get("a") or 1.0
    ex, ey = model.params.get("e_field", (0.0, 0.0))
    b = model.params.get("b_field", 0.0)
    return kernels.VARIANT_CODES[variant], float(a), float(ex), float(ey), float(b)


def _rk4_generic(model: SpacetimeModel, x0, p0, dt, nsteps):
    xs = np.zeros((nsteps + 1, 4))
    ps = np.zeros((nsteps + 1, 4))
    xs[0], ps[0] = x0, p0
    x, p = x0.copy(), p0.copy()
    for n in range(nsteps):
        try:
            a1, b1 = ray_rhs(model, x, p)
            a2, b2 = ray_rhs(model, x + 0.5 * dt * a1, p + 0.5 * dt * b1)
            a3, b3 = ray_rhs(model, x + 0.5 * dt * a2, p + 0.5 * dt * b2)
            a4, b4 = ray_rhs(model, x + dt * a3, p + dt * b3)
        except OutOfDomain:
            return xs, ps, n, kernels.STATUS_LEFT
        x = x + dt / 6 * (a1 + 2 * a2 + 2 * a3 + a4)
        p = p + dt / 6 * (b1 + 2 * b2 + 2 * b3 + b4)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p))):
            return xs, ps, n, kernels.STATUS_NONFINITE
        if not model.chart.contains(x):
            return xs, ps, n, kernels.STATUS_LEFT
        xs[n + 1], ps[n + 1] = x, p
    return xs, ps, nsteps, kernels.STATUS_OK


def integrate_ray(
    model: SpacetimeModel,
    initial: RayState,
    tau_end: float,
    dt: float,
    backend: str = "auto",
    allow_exit: bool = False,
) -> Trajectory:
    """RK4 integration of the ray through ``initial`` up to ``tau_end``.

    ``backend`` is ``"kernel"`` (planar conformal models only), ``"generic"``
    or ``"auto"``.  Leaving the chart raises ``LeftDomain`` unless
    ``allow_exit`` is set, in which case the truncated trajectory is returned.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    x0 = model.chart.check(initial.x)
    k0 = np.asarray(initial.k, dtype=float)
    res = float(k0 @ model.g_inv(x0) @ k0 + model.mass**2)
    if abs(res) > SHELL_TOL * max(1.0, model.mass**2):
        raise OffShell(f"initial ray is off shell by {res:.3e}")
    nsteps = int(round((tau_end - initial.tau) / dt))
    if nsteps < 1:
        raise ValueError("tau_end must exceed the initial tau by at least one step")
    p0 = k0 + model.charge * model.A(x0)
    params = _kernel_params(model)
    if backend == "auto":
        backend = "kernel" if params is not None else "generic"
    if backend == "kernel":
        if params is None:
            raise ValueError(f"model {model.name!r} has no planar kernel")
        variant, a, ex, ey, b = params
        lo = [d[0] for d in model.chart.domain]
        hi = [d[1] for d in model.chart.domain]
        xs, ps, done, status = kernels.rk4_planar(
            x0, p0, variant, a, float(model.charge), ex, ey, b, float(dt), nsteps, lo, hi
        )
        used = f"kernel-{kernels.BACKEND}"
    elif backend == "generic":
        xs, ps, done, status = _rk4_generic(model, x0, p0, float(dt), nsteps)
        used = "generic"
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if status == kernels.STATUS_NONFINITE:
        raise StepRejected(f"non-finite state after step {done}")
    if status == kernels.STATUS_LEFT and not allow_exit:
        raise LeftDomain(f"ray left the chart after {done} steps (tau = {initial.tau + done * dt:g})")
    xs, ps = xs[: done + 1], ps[: done + 1]
    ks = np.array([kinetic(model, x, p) for x, p in zip(xs, ps)])
    hs = np.array([hamiltonian(model, x, p) for x, p in zip(xs, ps)])
    shell = np.array([k @ model.g_inv(x) @ k + model.mass**2 for x, k in zip(xs, ks)])
    tau = initial.tau + dt * np.arange(done + 1)
    return Trajectory(
        model.name, float(dt), tau, xs, ps, ks, hs, shell, model.mass, used, "ok" if status == kernels.STATUS_OK else "left_domain"
    )


# -- spinor transport -------------------------------------------------------


@dataclass
class SpinorTransport:
    """Transported spinor samples and pre-projection drift diagnostics.

    ``norm_drift[n]`` is ``|h(psi, psi) - 1|`` and ``kernel_drift[n]`` is
    ``|P psi - psi|`` after RK4 step ``n`` and before re-projection.
    ``ray_mismatch`` compares the re-integrated ray with the input nodes.
    """

    tau: np.ndarray
    psi: np.ndarray
    norm_drift: np.ndarray
    kernel_drift: np.ndarray
    ray_mismatch: float
    no_name: bool
    mode: str

    @property
    def max_norm_drift(self) -> float:
        return float(np.max(self.norm_drift)) if len(self.norm_drift) else 0.0

    @property
    def max_kernel_drift(self) -> float:
        return float(np.max(self.kernel_drift)) if len(self.kernel_drift) else 0.0


def _projector(model: SpacetimeModel, x, k):
    ks = np.einsum("m,mij->ij", k, model.gammas(x))
    return (model.mass * np.eye(4) - ks) / (2 * model.mass)


def no_name_operator(model: SpacetimeModel, x, k) -> np.ndarray:
    """``(i/4) q F_{mu nu} P sigma^{mu nu}``."""
    if not model.charge:
        return np.zeros((4, 4), dtype=complex)
    sig = sigma_matrices(model.gammas(x))
    fs = np.einsum("mn,mnij->ij", model.field_strength(x), sig)
    return 0.25j * model.charge * _projector(model, x, k) @ fs


def _transport_rhs(model, x, p, psi, no_name, mode):
    xdot, pdot = ray_rhs(model, x, p)
    k = kinetic(model, x, p)
    conn = np.einsum("m,mij->ij", xdot, spin_connection(model, x).matrices)
    proj = _projector(model, x, k)
    if mode == "projected":
        # d/dtau P along the ray: k_dot gamma + k gamma_dot
        kdot = pdot - model.charge * model.dA(x).T @ xdot
        dgam = np.einsum("n,nam,aij->mij", xdot, model.de(x), GAMMA_FLAT)
        pdot_mat = -(np.einsum("m,mij->ij", kdot, model.gammas(x)) + np.einsum("m,mij->ij", k, dgam)) / (
            2 * model.mass
        )
        dpsi = -proj @ (conn @ psi) + pdot_mat @ psi
    else:
        dpsi = -conn @ psi
    if no_name:
        dpsi = dpsi + no_name_operator(model, x, k) @ psi
    return xdot, pdot, dpsi


def transport_spinor(
    model: SpacetimeModel,
    trajectory: Trajectory,
    psi0=None,
    no_name: bool = True,
    mode: str = "projected",
) -> SpinorTransport:
    """Transport a unit kernel spinor along ``trajectory``.

    The ray is re-integrated jointly with the spinor at the trajectory's
    ``dt``.  ``mode="projected"`` integrates ``P (d/dtau + k.Gamma) psi =
    no-name term`` together with ``d/dtau (P psi) = d/dtau psi``, so that
    the kernel and the norm are exact invariants of the continuous flow;
    ``mode="naive"`` integrates ``d psi/dtau = -k.Gamma psi + no-name term``.
    Both re-project and h-normalise after every step.
    """
    if mode not in ("projected", "naive"):
        raise ValueError(f"unknown mode {mode!r}")
    x, p = trajectory.x[0].copy(), trajectory.p[0].copy()
    k = kinetic(model, x, p)
    if psi0 is None:
        psi = positive_energy_frame(model, phase_point(model, x, k[1:]))[:, 0]
    else:
        psi = np.asarray(psi0, dtype=complex)
        proj = _projector(model, x, k)
        if np.max(np.abs(proj @ psi - psi)) > 1e-10:
            raise KernelCollapse("initial spinor is not in the kernel of the Dirac symbol")
        psi = psi / np.sqrt(abs(np.vdot(psi, BETA @ psi)))
    dt = trajectory.dt
    n = len(trajectory.tau) - 1
    psis = np.zeros((n + 1, 4), dtype=complex)
    psis[0] = psi
    norm_d = np.zeros(n)
    ker_d = np.zeros(n)
    mismatch = 0.0
    for i in range(n):
        a1, b1, c1 = _transport_rhs(model, x, p, psi, no_name, mode)
        a2, b2, c2 = _transport_rhs(model, x + 0.5 * dt * a1, p + 0.5 * dt * b1, psi + 0.5 * dt * c1, no_name, mode)
        a3, b3, c3 = _transport_rhs(model, x + 0.5 * dt * a2, p + 0.5 * dt * b2, psi + 0.5 * dt * c2, no_name, mode)
        a4, b4, c4 = _transport_rhs(model, x + dt * a3, p + dt * b3, psi + dt * c3, no_name, mode)
        x = x + dt / 6 * (a1 + 2 * a2 + 2 * a3 + a4)
        p = p + dt / 6 * (b1 + 2 * b2 + 2 * b3 + b4)
        psi = psi + dt / 6 * (c1 + 2 * c2 + 2 * c3 + c4)
        mismatch = max(mismatch, float(np.max(np.abs(x - trajectory.x[i + 1]))))
        proj = _projector(model, x, kinetic(model, x, p))
        norm_d[i] = abs(np.vdot(psi, BETA @ psi).real - 1.0)
        ker_d[i] = float(np.linalg.norm(proj @ psi - psi))
        psi = proj @ psi
        if np.linalg.norm(psi) < COLLAPSE_TOL:
            raise KernelCollapse(f"|P psi| fell below {COLLAPSE_TOL:g} at step {i}")
        nrm = abs(np.vdot(psi, BETA @ psi).real)
        if nrm < COLLAPSE_TOL**2:
            raise KernelCollapse(f"h(psi, psi) vanished at step {i}")
        psi = psi / np.sqrt(nrm)
        psis[i + 1] = psi
    return SpinorTransport(trajectory.tau.copy(), psis, norm_d, ker_d, mismatch, no_name, mode)


# -- intensity transport ----------------------------------------------------


def intensity_transport_residual(model: SpacetimeModel, intensity_field, k_field, point, step=None, scheme="central4"):
    """``|d_mu(I k^mu) + Gamma^mu_{mu rho} I k^rho|`` at ``point``.

    ``intensity_field(x)`` returns a scalar and ``k_field(x)`` the covector
    ``k_mu``; derivatives are central differences.
    """
    point = model.chart.check(point)

    def current(y):
        return float(intensity_field(y)) * (model.g_inv(y) @ np.asarray(k_field(y), dtype=float))

    div = sum(fd_derivative(current, point, mu, step, scheme, chart=model.chart)[mu] for mu in range(4))
    gam = christoffels(model, point)
    return float(abs(div + np.einsum("mmr,r->", gam, current(point))))
