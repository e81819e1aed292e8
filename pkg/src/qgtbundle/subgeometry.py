"""Sub-bundle geometry of a projector field.

Given a :class:`~qgtbundle.bundle.BundleSpec` and an h-compatible projector
field ``P`` of constant rank ``m``, this module builds adapted frames and
computes the Berry connection and curvature, the shape operators, the
quantum metric and the quantum geometric tensor, together with residuals of
the Gauss and Codazzi-Mainardi identities that tie them to the curvature of
the ambient connection.

Index conventions
-----------------
Frames are ``n x n`` matrices ``F = [s_1 .. s_m | s_{m+1} .. s_n]``; the
first ``m`` columns span ``image P`` (indices A, B), the rest span
``ker P`` (indices I, J).  Public arrays are ordered ``[A, B, mu]`` and
``[A, B, mu, nu]``; shape components are ``[I, A, mu]`` / ``[A, I, mu]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .bundle import BundleSpec, curvature_from_derivatives
from .chart import SCHEME_ORDER, convergence_order, fd_derivative
from .errors import FrameDiscontinuity, NullVector, RankMismatch, TorsionfulConnection

RANK_TOL = 1e-8
NULL_TOL = 1e-10
TORSION_TOL = 1e-12


@dataclass(frozen=True)
class ProjectorField:
    spec: BundleSpec
    p_field: Callable[[np.ndarray], np.ndarray]
    rank: int

    def __post_init__(self):
        if not 1 <= self.rank < self.spec.rank:
            raise ValueError(f"projector rank {self.rank} must lie in [1, {self.spec.rank - 1}]")

    @property
    def chart(self):
        return self.spec.chart

    @property
    def n(self) -> int:
        return self.spec.rank

    def P(self, x) -> np.ndarray:
        x = self.chart.check(x)
        p = np.asarray(self.p_field(x), dtype=complex)
        if p.shape != (self.n, self.n):
            raise ValueError(f"projector has shape {p.shape}")
        return p

    def invariant_residuals(self, x) -> dict[str, float]:
        p = self.P(x)
        h = self.spec.h(x)
        return {
            "idempotency": float(np.max(np.abs(p @ p - p))),
            "h_compatibility": float(np.max(np.abs(h @ p - p.conj().T @ h))),
            "trace": float(abs(np.trace(p) - self.rank)),
        }


@dataclass(frozen=True)
class AdaptedFrame:
    point: np.ndarray
    parallel_frame: np.ndarray
    perp_frame: np.ndarray
    h_par: np.ndarray
    h_perp: np.ndarray
    coframe: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.hstack([self.parallel_frame, self.perp_frame])

    @property
    def signs(self) -> np.ndarray:
        return np.concatenate([np.diag(self.h_par), np.diag(self.h_perp)]).real


def h_gram_schmidt(vectors: np.ndarray, h: np.ndarray, null_tol: float = NULL_TOL):
    """Modified Gram-Schmidt with the (possibly indefinite) form ``h``.

    Each output column ``u`` has ``h(u, u) = +-1``; the signs are returned
    alongside the frame.
    """
    vectors = np.array(vectors, dtype=complex)
    out = np.empty_like(vectors)
    signs = np.empty(vectors.shape[1])
    for k in range(vectors.shape[1]):
        v = vectors[:, k].copy()
        for j in range(k):
            u = out[:, j]
            v -= (u.conj() @ h @ v) * signs[j] * u
        norm2 = (v.conj() @ h @ v).real
        if abs(norm2) < null_tol:
            raise NullVector(f"|h(v, v)| = {abs(norm2):.3e} during Gram-Schmidt")
        signs[k] = np.sign(norm2)
        out[:, k] = v / np.sqrt(abs(norm2))
    return out, signs


def pivoted_columns(mat: np.ndarray, count: int) -> np.ndarray:
    """Pick ``count`` columns of ``mat`` by greedy pivoting on residual norm.

    At each step the column with the largest norm after removing the span of
    the columns already chosen is taken; ties go to the lowest index.
    """
    residual = np.array(mat, dtype=complex)
    picked = []
    for _ in range(count):
        norms = np.linalg.norm(residual, axis=0)
        norms[picked] = -1.0
        j = int(np.argmax(norms))
        picked.append(j)
        q = residual[:, j] / norms[j]
        residual = residual - np.outer(q, q.conj() @ residual)
    return np.array(mat, dtype=complex)[:, picked]


def _numerical_rank(mat: np.ndarray, tol: float) -> int:
    return int(np.sum(np.linalg.svd(mat, compute_uv=False) > tol))


def adapted_frame(pf: ProjectorField, point, rank_tol: float = RANK_TOL) -> AdaptedFrame:
    """Pointwise adapted frame for ``image P`` and ``ker P``.

    Columns come from pivoted selection of ``P`` and ``I - P`` followed by
    h-orthonormalisation within each block; the result is deterministic.
    """
    point = pf.chart.check(point)
    p = pf.P(point)
    h = pf.spec.h(point)
    n, m = pf.n, pf.rank
    comp = np.eye(n) - p
    if _numerical_rank(p, rank_tol) != m or _numerical_rank(comp, rank_tol) != n - m:
        raise RankMismatch(f"projector at {point.tolist()} does not have rank {m}")
    par, sp = h_gram_schmidt(pivoted_columns(p, m), h)
    perp, sq = h_gram_schmidt(pivoted_columns(comp, n - m), h)
    full = np.hstack([par, perp])
    return AdaptedFrame(
        point=point,
        parallel_frame=par,
        perp_frame=perp,
        h_par=np.diag(sp).astype(complex),
        h_perp=np.diag(sq).astype(complex),
        coframe=np.linalg.inv(full),
    )


def aligned_frame_field(pf: ProjectorField, anchor: AdaptedFrame) -> Callable[[np.ndarray], np.ndarray]:
    """Smooth frame field that reproduces ``anchor`` at its base point.

    Near the anchor, ``s_A(x) = GS_h(P(x) s_A(x0))`` and
    ``s_I(x) = GS_h((I - P(x)) s_I(x0))``: project the anchor frame, then
    h-orthonormalise.  This is analytic in ``x`` so it can be differentiated
    by finite differences without gauge jumps.
    """
    par0, perp0 = anchor.parallel_frame, anchor.perp_frame
    sign0 = anchor.signs
    m = par0.shape[1]

    def frame(x):
        p = pf.P(x)
        h = pf.spec.h(x)
        try:
            a, sa = h_gram_schmidt(p @ par0, h)
            b, sb = h_gram_schmidt(perp0 - p @ perp0, h)
        except NullVector as exc:
            raise FrameDiscontinuity(f"frame alignment failed at {np.asarray(x).tolist()}") from exc
        if not (np.array_equal(sa, sign0[:m]) and np.array_equal(sb, sign0[m:])):
            raise FrameDiscontinuity(f"frame signature changed at {np.asarray(x).tolist()}")
        return np.hstack([a, b])

    return frame


@dataclass
class SubGeometryPoint:
    """Everything computed at one point, in public index order."""

    point: np.ndarray
    frame: AdaptedFrame
    A: np.ndarray
    S: np.ndarray
    S_dagger: np.ndarray
    S_second: np.ndarray
    G: np.ndarray
    G_trace: np.ndarray
    Q: np.ndarray
    F: np.ndarray
    F_gauss: np.ndarray
    Omega_par_block: np.ndarray
    Omega_perp: np.ndarray
    Omega_perp_block: np.ndarray


class SubGeometry:
    """Lazy, cached evaluation of the sub-bundle geometry at one point.

    Parameters
    ----------
    pf : ProjectorField
    point : array_like
    step : float or sequence, optional
        Finite-difference step (per axis); chart default when omitted.
    scheme : {"central2", "central4"}
    frame_field : callable, optional
        ``x -> n x n`` adapted frame matrix, smooth near ``point``.  By
        default the aligned field anchored at :func:`adapted_frame` is used.
    """

    def __init__(self, pf: ProjectorField, point, step=None, scheme="central4", frame_field=None):
        self.pf = pf
        self.spec = pf.spec
        self.chart = pf.chart
        self.point = self.chart.check(point)
        self.N = self.chart.dim
        self.m = pf.rank
        self.n = pf.n
        if step is None:
            step = self.chart.default_step
        self.step = np.broadcast_to(np.asarray(step, dtype=float), (self.N,)).copy()
        self.scheme = scheme
        self.anchor = adapted_frame(pf, self.point)
        self.frame_field = frame_field if frame_field is not None else aligned_frame_field(pf, self.anchor)
        self._cache: dict = {}

    # -- cached primitives --------------------------------------------

    def _memo(self, name, x, fn):
        key = (name, np.asarray(x, dtype=float).tobytes())
        try:
            return self._cache[key]
        except KeyError:
            val = self._cache[key] = fn(x)
            return val

    def _d(self, func, x, mu):
        return fd_derivative(func, x, mu, self.step[mu], self.scheme, chart=self.chart)

    def _grad(self, func, x):
        return np.stack([self._d(func, x, mu) for mu in range(self.N)])

    def P(self, x):
        return self._memo("P", x, self.pf.P)

    def h(self, x):
        return self._memo("h", x, self.spec.h)

    def omega(self, x):
        return self._memo("omega", x, self.spec.omega)

    def F(self, x):
        return self._memo("F", x, lambda y: np.asarray(self.frame_field(y), dtype=complex))

    def coframe(self, x):
        return self._memo("coF", x, lambda y: np.linalg.inv(self.F(y)))

    def nabla_P(self, x):
        """``(N, n, n)`` covariant derivative ``d_mu P + [omega_mu, P]``.

        Evaluated as ``h^{-1}(d(hP) - omega^dagger h P - h P omega)``, which
        equals the definition for a compatible connection and keeps
        ``h nabla P`` exactly Hermitian under finite differences.
        """

        def hp(y):
            return self.h(y) @ self.P(y)

        def compute(y):
            low = hp(y)
            om = self.omega(y)
            lowered = self._grad(hp, y) - np.swapaxes(om.conj(), 1, 2) @ low - low @ om
            return np.linalg.solve(self.h(y), lowered)

        return self._memo("nablaP", x, compute)

    def nabla_frame(self, x):
        """``(N, n, n)`` covariant derivative of the frame columns."""
        return self._memo("nablaF", x, lambda y: self._grad(self.F, y) + self.omega(y) @ self.F(y))

    def frame_connection(self, x):
        """Mixed-index connection coefficients of ``nabla`` in the frame field.

        Block ``[A, B]`` is the projected parallel connection, ``[I, J]`` the
        projected normal one.
        """
        return self._memo("W", x, lambda y: self.coframe(y) @ self.nabla_frame(y))

    def lowered_connection(self, x):
        """``h(s_i, nabla_mu s_j)`` in the frame field."""

        def compute(y):
            f = self.F(y)
            return f.conj().T @ self.h(y) @ self.nabla_frame(y)

        return self._memo("L", x, compute)

    def shape_blocks(self, x):
        """``(S, S_dagger)`` with ``S[mu] = S^I_{A mu}`` and ``S_dagger[mu] = S^A_{I mu}``."""

        def compute(y):
            full = self.coframe(y) @ self.nabla_P(y) @ self.F(y)
            return full[:, self.m :, : self.m], full[:, : self.m, self.m :]

        return self._memo("S", x, compute)

    def berry_connection_at(self, x):
        """``(N, m, m)`` Berry connection ``i h(s_A, nabla_mu s_B)``."""
        return self._memo("A", x, lambda y: 1j * self.lowered_connection(y)[:, : self.m, : self.m])

    def perp_connection_at(self, x):
        """``(N, n-m, n-m)`` lowered normal connection ``h(s_I, nabla_mu s_J)``."""
        return self._memo("Aperp", x, lambda y: self.lowered_connection(y)[:, self.m :, self.m :])

    # -- frame-level quantities at the base point -------------------------

    @cached_property
    def frame(self) -> AdaptedFrame:
        f = self.F(self.point)
        g = f.conj().T @ self.h(self.point) @ f
        m = self.m
        return AdaptedFrame(self.point, f[:, :m], f[:, m:], g[:m, :m], g[m:, m:], self.coframe(self.point))

    @cached_property
    def h_frame(self) -> np.ndarray:
        f = self.F(self.point)
        return f.conj().T @ self.h(self.point) @ f

    @cached_property
    def h_par(self):
        return self.h_frame[: self.m, : self.m]

    @cached_property
    def h_perp(self):
        return self.h_frame[self.m :, self.m :]

    @cached_property
    def curvature(self) -> np.ndarray:
        """Ambient curvature ``(N, N, n, n)`` in the global bundle frame."""
        dom = self._grad(self.omega, self.point)
        return curvature_from_derivatives(self.omega(self.point), dom)

    @cached_property
    def curvature_frame(self) -> np.ndarray:
        """Mixed components ``sigma^i Omega s_j`` in the adapted frame."""
        return self.coframe(self.point) @ self.curvature @ self.F(self.point)

    @cached_property
    def curvature_lowered(self) -> np.ndarray:
        """``h(s_i, Omega s_j)`` in the adapted frame."""
        f = self.F(self.point)
        return f.conj().T @ self.h(self.point) @ self.curvature @ f

    @cached_property
    def shape(self):
        return self.shape_blocks(self.point)

    @cached_property
    def qgt_matrix(self) -> np.ndarray:
        """``Q[mu, nu] = S_mu^dagger h_perp S_nu`` as an ``(N, N, m, m)`` array."""
        s = self.shape[0]
        return np.einsum("mia,ij,njb->mnab", s.conj(), self.h_perp, s)

    @cached_property
    def metric_matrix(self) -> np.ndarray:
        q = self.qgt_matrix
        return 0.5 * (q + q.transpose(1, 0, 2, 3))

    @cached_property
    def berry_curvature_derivative(self) -> np.ndarray:
        """Berry curvature ``(N, N, m, m)`` from derivatives of the Berry connection."""
        a = self.berry_connection_at(self.point)
        da = self._grad(self.berry_connection_at, self.point)
        hinv = np.linalg.inv(self.h_par)
        prod = np.einsum("mac,cd,ndb->mnab", a, hinv, a)
        return da - da.transpose(1, 0, 2, 3) - 1j * (prod - prod.transpose(1, 0, 2, 3))

    @cached_property
    def omega_par_gauss(self) -> np.ndarray:
        """Parallel curvature from the Gauss equation (lowered, ``(N, N, m, m)``)."""
        q = self.qgt_matrix
        return self.curvature_lowered[:, :, : self.m, : self.m] + q - q.transpose(1, 0, 2, 3)

    @cached_property
    def omega_perp_derivative(self) -> np.ndarray:
        """Normal curvature (lowered) from derivatives of the normal connection."""
        w = self.perp_connection_at(self.point)
        dw = self._grad(self.perp_connection_at, self.point)
        hinv = np.linalg.inv(self.h_perp)
        prod = np.einsum("mik,kl,nlj->mnij", w, hinv, w)
        return dw - dw.transpose(1, 0, 2, 3) + prod - prod.transpose(1, 0, 2, 3)

    @cached_property
    def omega_perp_gauss(self) -> np.ndarray:
        t = self.shape[1]
        term = np.einsum("mai,ab,nbj->mnij", t.conj(), self.h_par, t)
        return self.curvature_lowered[:, :, self.m :, self.m :] + term - term.transpose(1, 0, 2, 3)

    # -- residuals --------------------------------------------------------

    def gauss_residuals(self) -> tuple[float, float]:
        par = np.max(np.abs(1j * self.omega_par_gauss - self.berry_curvature_derivative))
        perp = np.max(np.abs(self.omega_perp_gauss - self.omega_perp_derivative))
        return float(par), float(perp)

    def _base_connection(self, base_connection):
        if base_connection is None:
            gam = np.zeros((self.N, self.N, self.N))
        elif callable(base_connection):
            gam = np.asarray(base_connection(self.point), dtype=float)
        else:
            gam = np.asarray(base_connection, dtype=float)
        if gam.shape != (self.N, self.N, self.N):
            raise ValueError(f"base connection has shape {gam.shape}")
        if np.max(np.abs(gam - gam.transpose(0, 2, 1))) > TORSION_TOL:
            raise TorsionfulConnection("base connection is not symmetric in its lower indices")
        return gam

    def codazzi_tensors(self, base_connection=None):
        """Residual tensors ``(N, N, ...)`` of the parallel and normal Codazzi equations.

        ``base_connection[rho, mu, nu]`` are Christoffel-like coefficients of a
        torsion-free connection on the chart (zero when omitted).
        """
        gam = self._base_connection(base_connection)
        m = self.m
        x0 = self.point
        w = self.frame_connection(x0)
        w_par, w_perp = w[:, :m, :m], w[:, m:, m:]
        s, t = self.shape
        ds = self._grad(lambda y: self.shape_blocks(y)[0], x0)
        dt = self._grad(lambda y: self.shape_blocks(y)[1], x0)
        # D_mu S_nu with the base-connection term
        cs = (
            ds
            + np.einsum("mij,nja->mnia", w_perp, s)
            - np.einsum("nib,mba->mnia", s, w_par)
            - np.einsum("rmn,ria->mnia", gam, s)
        )
        ct = (
            dt
            + np.einsum("mab,nbi->mnai", w_par, t)
            - np.einsum("naj,mji->mnai", t, w_perp)
            - np.einsum("rmn,rai->mnai", gam, t)
        )
        om = self.curvature_frame
        res_par = cs - cs.transpose(1, 0, 2, 3) - om[:, :, m:, :m]
        res_perp = ct - ct.transpose(1, 0, 2, 3) + om[:, :, :m, m:]
        return res_par, res_perp

    def codazzi_residuals(self, base_connection=None, alt_connection=None):
        """Max-norm Codazzi residuals and the base-connection independence gap.

        The gap is the max-norm difference between residual tensors computed
        with ``base_connection`` and ``alt_connection`` (a fixed symmetric
        constant connection when ``alt_connection`` is omitted).
        """
        rp, rq = self.codazzi_tensors(base_connection)
        if alt_connection is None:
            rng = np.random.default_rng(12345)
            alt = rng.normal(size=(self.N, self.N, self.N))
            alt_connection = 0.5 * (alt + alt.transpose(0, 2, 1))
        ap, aq = self.codazzi_tensors(alt_connection)
        gap = max(np.max(np.abs(rp - ap)), np.max(np.abs(rq - aq)))
        return float(np.max(np.abs(rp))), float(np.max(np.abs(rq))), float(gap)

    def adjointness_residual(self) -> float:
        """``|h[s_I, S_mu s_A] - h[S^dagger_mu s_I, s_A]|`` over all I, A, mu."""
        x0 = self.point
        f = self.F(x0)
        h = self.h(x0)
        nab = self.nabla_P(x0)
        left = f.conj().T @ h @ nab @ f
        right = f.conj().T @ np.swapaxes(nab.conj(), 1, 2) @ h @ f
        m = self.m
        return float(np.max(np.abs((left - right)[:, m:, :m])))

    def qgt_report(self) -> dict[str, float]:
        m = self.m
        q = self.qgt_matrix
        qt = q.transpose(1, 0, 2, 3)
        sym = 0.5 * (q + qt)
        anti = 0.5 * (q - qt)
        om_ab = self.curvature_lowered[:, :, :m, :m]
        par = -1j * self.berry_curvature_derivative
        x0 = self.point
        f = self.F(x0)
        h = self.h(x0)
        p = self.P(x0)
        nf = self.nabla_frame(x0)[:, :, :m]
        alt1 = np.einsum("mia,ij,njb->mnab", nf.conj(), h @ (np.eye(self.n) - p), nf)
        nab = self.nabla_P(x0)
        alt2 = np.einsum("ia,ij,mjk,nkl,lb->mnab", f[:, :m].conj(), h, nab, nab, f[:, :m])
        return {
            "symmetric_vs_metric": float(np.max(np.abs(sym - self.metric_matrix))),
            "antisymmetric_vs_curvatures": float(np.max(np.abs(anti - 0.5 * (par - om_ab)))),
            "conjugate_symmetry": float(np.max(np.abs(q - np.conj(q.transpose(1, 0, 3, 2))))),
            "alternative_nabla_form": float(np.max(np.abs(q - alt1))),
            "alternative_projector_form": float(np.max(np.abs(q - alt2))),
        }

    def evaluate(self) -> SubGeometryPoint:
        m = self.m
        s, t = self.shape
        hpar_inv = np.linalg.inv(self.h_par)
        g = self.metric_matrix
        return SubGeometryPoint(
            point=self.point,
            frame=self.frame,
            A=np.moveaxis(self.berry_connection_at(self.point), 0, -1),
            S=np.moveaxis(s, 0, -1),
            S_dagger=np.moveaxis(t, 0, -1),
            S_second=np.moveaxis(np.einsum("ij,mja->mia", self.h_perp, s), 0, -1),
            G=np.moveaxis(g, (0, 1), (2, 3)),
            G_trace=np.einsum("ab,mnba->mn", hpar_inv, g),
            Q=np.moveaxis(self.qgt_matrix, (0, 1), (2, 3)),
            F=np.moveaxis(self.berry_curvature_derivative, (0, 1), (2, 3)),
            F_gauss=np.moveaxis(1j * self.omega_par_gauss, (0, 1), (2, 3)),
            Omega_par_block=np.moveaxis(self.curvature_lowered[:, :, :m, :m], (0, 1), (2, 3)),
            Omega_perp=np.moveaxis(self.omega_perp_derivative, (0, 1), (2, 3)),
            Omega_perp_block=np.moveaxis(self.curvature_lowered[:, :, m:, m:], (0, 1), (2, 3)),
        )


# -- functional surface ---------------------------------------------------


def berry_connection(pf, point, step=None, frame_field=None, scheme="central4") -> np.ndarray:
    """Berry connection ``A[A, B, mu] = i h(s_A, nabla_mu s_B)``."""
    sg = SubGeometry(pf, point, step, scheme, frame_field)
    return np.moveaxis(sg.berry_connection_at(sg.point), 0, -1)


def shape_operator(pf, point, step=None, frame_field=None, scheme="central4"):
    """``(S^I_{A mu}, S^A_{I mu}, S_{I A mu})`` at ``point``."""
    sg = SubGeometry(pf, point, step, scheme, frame_field)
    s, t = sg.shape
    second = np.einsum("ij,mja->mia", sg.h_perp, s)
    return np.moveaxis(s, 0, -1), np.moveaxis(t, 0, -1), np.moveaxis(second, 0, -1)


def quantum_metric(pf, point, step=None, frame_field=None, scheme="central4"):
    """Quantum metric ``G[A, B, mu, nu]`` and its trace ``G_{mu nu} = h^{AB} G_{AB mu nu}``."""
    sg = SubGeometry(pf, point, step, scheme, frame_field)
    g = sg.metric_matrix
    trace = np.einsum("ab,mnba->mn", np.linalg.inv(sg.h_par), g)
    return np.moveaxis(g, (0, 1), (2, 3)), trace


def qgt(pf, point, step=None, frame_field=None, scheme="central4"):
    """Quantum geometric tensor ``Q[A, B, mu, nu]`` and a decomposition report."""
    sg = SubGeometry(pf, point, step, scheme, frame_field)
    return np.moveaxis(sg.qgt_matrix, (0, 1), (2, 3)), sg.qgt_report()


def berry_curvature(pf, point, step=None, frame_field=None, scheme="central4"):
    """Berry curvature by two routes: derivative of the connection, and Gauss equation."""
    sg = SubGeometry(pf, point, step, scheme, frame_field)
    return (
        np.moveaxis(sg.berry_curvature_derivative, (0, 1), (2, 3)),
        np.moveaxis(1j * sg.omega_par_gauss, (0, 1), (2, 3)),
    )


@dataclass
class ConvergenceRecord:
    residual_h: float
    residual_h2: float
    order: float = field(default=float("nan"))


def _halved(step, chart):
    base = np.asarray(chart.default_step if step is None else step, dtype=float)
    return base, base / 2


def gauss_residuals(pf, point, step=None, frame_field=None, scheme="central4"):
    """Gauss residuals (parallel, normal) at ``step`` and ``step/2`` with observed order."""
    h, h2 = _halved(step, pf.chart)
    a = SubGeometry(pf, point, h, scheme, frame_field).gauss_residuals()
    b = SubGeometry(pf, point, h2, scheme, frame_field).gauss_residuals()
    return tuple(ConvergenceRecord(a[i], b[i], convergence_order(a[i], b[i])) for i in range(2))


def codazzi_residuals(pf, point, step=None, base_connection=None, alt_connection=None, frame_field=None, scheme="central4"):
    """Codazzi residuals (parallel, normal) with convergence, plus the independence gap."""
    h, h2 = _halved(step, pf.chart)
    a = SubGeometry(pf, point, h, scheme, frame_field).codazzi_residuals(base_connection, alt_connection)
    b = SubGeometry(pf, point, h2, scheme, frame_field).codazzi_residuals(base_connection, alt_connection)
    recs = tuple(ConvergenceRecord(a[i], b[i], convergence_order(a[i], b[i])) for i in range(2))
    return recs[0], recs[1], max(a[2], b[2])


def scheme_order(scheme: str) -> int:
    return SCHEME_ORDER[scheme]
