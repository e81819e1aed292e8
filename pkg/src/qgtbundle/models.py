"""Registry of named models and seeded random bundle configurations.

Every model resolves to a ``ModelInstance``: a projector field on some chart
(the parameter chart for bundle models, the 7-D mass-shell chart for Dirac
models) plus the spacetime model when there is one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bundle import BundleSpec
from .chart import Chart
from .dirac import SpacetimeModel, hyperbolic_model, minkowski_model, phase_space_geometry
from .errors import DomainError, ModelError
from .subgeometry import ProjectorField


@dataclass(frozen=True)
class ModelInstance:
    name: str
    kind: str  # "bundle" or "dirac"
    projector: ProjectorField
    spacetime: SpacetimeModel | None
    params: dict

    @property
    def chart(self) -> Chart:
        return self.projector.chart


# -- two-level Bloch model ---------------------------------------------------


def bloch_state(theta: float, phi: float) -> np.ndarray:
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def bloch_projector_field(margin: float = 0.2) -> ProjectorField:
    """``P = |psi><psi|`` with ``psi = (cos(theta/2), e^{i phi} sin(theta/2))`` on a flat C^2 bundle."""
    chart = Chart(("theta", "phi"), ((margin, np.pi - margin), (0.0, 2 * np.pi)), 0.02)
    spec = BundleSpec(chart, 2, lambda x: np.eye(2), lambda x: np.zeros((2, 2, 2)))

    def projector(x):
        psi = bloch_state(x[0], x[1])
        return np.outer(psi, psi.conj())

    return ProjectorField(spec, projector, 1)


# -- random h-compatible configurations ---------------------------------------


def _anti_hermitian(rng, n, scale):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (a - a.conj().T)


def cayley(k: np.ndarray) -> np.ndarray:
    """``(I - K)^{-1}(I + K)``; h-unitary whenever ``K`` is h-anti-self-adjoint."""
    eye = np.eye(len(k))
    return np.linalg.solve(eye - k, eye + k)


def random_bundle(
    seed: int = 0,
    dim: int = 2,
    n: int = 4,
    rank: int = 2,
    negative: int = 1,
    gauge: bool = True,
    scale: float = 0.4,
) -> ProjectorField:
    """Seeded smooth projector field with an h-compatible connection.

    A constant diagonal form ``h0`` with ``negative`` entries equal to -1 is
    used; the connection is ``h0^{-1} B(x)`` with ``B`` anti-Hermitian and the
    projector is ``U P0 U^{-1}`` with ``U`` the Cayley transform of
    ``h0^{-1} A(x)``.  With ``gauge`` the whole configuration is moved to a
    non-unitary position-dependent frame, so ``h`` varies over the chart.
    """
    if not 0 < rank < n:
        raise DomainError("rank must lie strictly between 0 and n")
    if not 0 <= negative <= n:
        raise DomainError("negative must lie in [0, n]")
    rng = np.random.default_rng(seed)
    signs = np.ones(n)
    signs[n - negative :] = -1.0
    perm = rng.permutation(n)
    h0 = np.diag(signs[perm])
    h0_inv = h0.copy()
    a0 = _anti_hermitian(rng, n, scale)
    a1 = [_anti_hermitian(rng, n, scale) for _ in range(dim)]
    a2 = [_anti_hermitian(rng, n, 0.5 * scale) for _ in range(dim)]
    # keep |K(x)| <= 0.6 on the chart so the Cayley transform stays well conditioned
    bound = np.linalg.norm(a0, 2) + sum(np.linalg.norm(a, 2) for a in a1 + a2)
    if bound > 0.6:
        a0, a1, a2 = a0 * 0.6 / bound, [a * 0.6 / bound for a in a1], [a * 0.6 / bound for a in a2]
    b0 = _anti_hermitian(rng, n, scale)
    b1 = [[_anti_hermitian(rng, n, scale) for _ in range(dim)] for _ in range(dim)]
    bm = [_anti_hermitian(rng, n, scale) for _ in range(dim)]
    g1 = [0.3 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(n) for _ in range(dim)]
    p0 = np.zeros((n, n))
    p0[:rank, :rank] = np.eye(rank)

    def u(x):
        k = a0 + sum(x[i] * a1[i] + x[i] ** 2 * a2[i] for i in range(dim))
        return cayley(h0_inv @ k)

    def proj0(x):
        uu = u(x)
        return uu @ p0 @ np.linalg.inv(uu)

    def omega0(x):
        out = np.empty((dim, n, n), dtype=complex)
        for mu in range(dim):
            b = bm[mu] + 0.5 * b0 * np.sin(x[mu]) + sum(x[j] * b1[mu][j] for j in range(dim))
            out[mu] = h0_inv @ b
        return out

    chart = Chart(tuple(f"x{i}" for i in range(dim)), ((-1.0, 1.0),) * dim, 0.005)
    if not gauge:
        spec = BundleSpec(chart, n, lambda x: h0, omega0)
        return ProjectorField(spec, proj0, rank)

    def gmat(x):
        return np.eye(n) + sum(x[i] * g1[i] for i in range(dim))

    def h_field(x):
        g = gmat(x)
        return g.conj().T @ h0 @ g

    def omega(x):
        g = gmat(x)
        gi = np.linalg.inv(g)
        om = omega0(x)
        return np.stack([gi @ om[mu] @ g + gi @ g1[mu] for mu in range(dim)])

    def projector(x):
        g = gmat(x)
        return np.linalg.solve(g, proj0(x) @ g)

    spec = BundleSpec(chart, n, h_field, omega)
    return ProjectorField(spec, projector, rank)


# -- registry ------------------------------------------------------------------


@dataclass(frozen=True)
class ModelEntry:
    name: str
    kind: str
    description: str
    defaults: dict
    build: Callable[..., ModelInstance]


def _dirac_instance(name, model, params):
    pf = phase_space_geometry(model, params["p_max"])
    return ModelInstance(name, "dirac", pf, model, params)


def _build_bloch(**p):
    return ModelInstance("bloch", "bundle", bloch_projector_field(p["margin"]), None, p)


def _build_random(**p):
    pf = random_bundle(p["seed"], p["dim"], p["n"], p["rank"], p["negative"], p["gauge"])
    return ModelInstance("random", "bundle", pf, None, p)


def _build_minkowski(**p):
    model = minkowski_model(p["m"], p["q"], tuple(p["e_field"]), p["b_field"])
    return _dirac_instance("minkowski", model, p)


def _hyperbolic_builder(variant, name):
    def build(**p):
        model = hyperbolic_model(p["a"], variant, p["m"], p["q"], tuple(p["e_field"]), p["b_field"])
        return _dirac_instance(name, model, p)

    return build


_DIRAC_DEFAULTS = {"m": 1.0, "q": 0.0, "e_field": [0.0, 0.0], "b_field": 0.0, "p_max": 3.0}

REGISTRY: dict[str, ModelEntry] = {
    "bloch": ModelEntry(
        "bloch", "bundle", "two-level state over the sphere, flat C^2 bundle, rank-1 projector", {"margin": 0.2}, _build_bloch
    ),
    "random": ModelEntry(
        "random",
        "bundle",
        "seeded smooth h-compatible projector and connection with a varying pseudo-metric",
        {"seed": 0, "dim": 2, "n": 4, "rank": 2, "negative": 1, "gauge": True},
        _build_random,
    ),
    "minkowski": ModelEntry(
        "minkowski", "dirac", "Dirac field on flat spacetime, mass-shell chart (t,x,y,z,p1,p2,p3)", dict(_DIRAC_DEFAULTS), _build_minkowski
    ),
    "hyperbolic-half-plane": ModelEntry(
        "hyperbolic-half-plane",
        "dirac",
        "Dirac field on R x H^2 x R, H^2 in the half-plane chart lam = a/x",
        {"a": 1.0, **_DIRAC_DEFAULTS},
        _hyperbolic_builder("half_plane", "hyperbolic-half-plane"),
    ),
    "hyperbolic-disk": ModelEntry(
        "hyperbolic-disk",
        "dirac",
        "Dirac field on R x H^2 x R, H^2 in the disk chart lam = 2a/(1-x^2-y^2)",
        {"a": 1.0, **_DIRAC_DEFAULTS},
        _hyperbolic_builder("disk", "hyperbolic-disk"),
    ),
}


def build_model(name: str, params: dict | None = None) -> ModelInstance:
    """Instantiate a registered model; unknown names or parameters raise ``ModelError``."""
    try:
        entry = REGISTRY[name]
    except KeyError:
        raise ModelError(f"unknown model {name!r}; known: {sorted(REGISTRY)}") from None
    params = dict(params or {})
    unknown = set(params) - set(entry.defaults)
    if unknown:
        raise ModelError(f"model {name!r} does not take parameters {sorted(unknown)}")
    merged = {**entry.defaults, **params}
    try:
        return entry.build(**merged)
    except DomainError as exc:
        raise ModelError(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        raise ModelError(f"invalid parameters for {name!r}: {exc}") from exc


def list_models() -> list[dict]:
    return [
        {"name": e.name, "kind": e.kind, "description": e.description, "parameters": e.defaults}
        for e in REGISTRY.values()
    ]
