"""Single-chart parameter manifolds and finite-difference differentiation.

Fields are pure callables ``point -> ndarray``; derivatives are taken by
central stencils evaluated directly on the callable, so there is no
interpolation error on top of the truncation error of the scheme.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateDomain, NonFinite, OutOfDomain

# offsets (in units of step) and weights of the first-derivative stencils
STENCILS = {
    "central2": ((-1, -0.5), (1, 0.5)),
    "central4": ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12)),
}
SCHEME_ORDER = {"central2": 2, "central4": 4}
SCHEME_RADIUS = {"central2": 1, "central4": 2}

# relative slack on the domain test so that stencil nodes landing on a
# boundary (up to rounding) are accepted
_EDGE_SLACK = 1e-12


@dataclass(frozen=True)
class Chart:
    """A box-shaped coordinate chart.

    Parameters
    ----------
    coord_names : sequence of str
        One label per axis.
    domain : sequence of (float, float)
        Closed interval per axis.
    default_step : sequence of float or float, optional
        Finite-difference step per axis.  Defaults to 1/100 of each width.
    """

    coord_names: tuple[str, ...]
    domain: tuple[tuple[float, float], ...]
    default_step: tuple[float, ...] = field(default=())

    def __post_init__(self):
        names = tuple(self.coord_names)
        dom = tuple((float(lo), float(hi)) for lo, hi in self.domain)
        if len(names) < 1 or len(names) != len(dom):
            raise ValueError("chart needs one interval per coordinate name")
        for lo, hi in dom:
            if not lo < hi:
                raise DegenerateDomain(f"interval [{lo}, {hi}] is degenerate")
        steps = self.default_step
        if isinstance(steps, (int, float)):
            steps = (float(steps),) * len(dom)
        elif len(steps) == 0:
            steps = tuple((hi - lo) / 100 for lo, hi in dom)
        steps = tuple(float(s) for s in steps)
        if len(steps) != len(dom):
            raise ValueError("default_step must have one entry per axis")
        for s, (lo, hi) in zip(steps, dom):
            if not 0 < s < (hi - lo) / 4:
                raise ValueError(f"default step {s} outside (0, width/4)")
        object.__setattr__(self, "coord_names", names)
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "default_step", steps)

    @property
    def dim(self) -> int:
        return len(self.coord_names)

    def axis(self, name: str) -> int:
        return self.coord_names.index(name)

    def contains(self, point) -> bool:
        point = np.asarray(point, dtype=float)
        for x, (lo, hi) in zip(point, self.domain):
            slack = _EDGE_SLACK * (hi - lo)
            if not lo - slack <= x <= hi + slack:
                return False
        return True

    def check(self, point) -> np.ndarray:
        point = np.asarray(point, dtype=float)
        if point.shape != (self.dim,):
            raise ValueError(f"expected a point of dimension {self.dim}, got shape {point.shape}")
        if not self.contains(point):
            raise OutOfDomain(f"point {point.tolist()} outside chart {self.domain}")
        return point


@dataclass(frozen=True)
class MatrixField:
    """A complex ``rows x cols`` matrix-valued field on a chart."""

    chart: Chart
    eval: Callable[[np.ndarray], np.ndarray]
    rows: int
    cols: int

    def __call__(self, point) -> np.ndarray:
        point = self.chart.check(point)
        value = np.asarray(self.eval(point), dtype=complex)
        if value.shape != (self.rows, self.cols):
            raise ValueError(f"field returned shape {value.shape}, expected {(self.rows, self.cols)}")
        return value


def _resolve_step(chart: Chart | None, mu: int, step) -> float:
    if step is None:
        if chart is None:
            raise ValueError("a step is required when no chart is given")
        return chart.default_step[mu]
    if np.ndim(step) > 0:
        step = step[mu]
    step = float(step)
    if not step > 0:
        raise ValueError("finite-difference step must be positive")
    return step


def fd_derivative(
    func: Callable[[np.ndarray], np.ndarray],
    point,
    mu: int,
    step=None,
    scheme: str = "central4",
    chart: Chart | None = None,
) -> np.ndarray:
    """Central finite-difference derivative of ``func`` along axis ``mu``.

    ``func`` may return any array (or scalar).  When ``chart`` is given
    every stencil node is checked against its domain first.
    """
    try:
        stencil = STENCILS[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}") from None
    point = np.asarray(point, dtype=float)
    h = _resolve_step(chart, mu, step)
    nodes = []
    for offset, _ in stencil:
        node = point.copy()
        node[mu] += offset * h
        if chart is not None and not chart.contains(node):
            raise OutOfDomain(
                f"{scheme} stencil along axis {mu} with step {h} leaves the chart at {node.tolist()}"
            )
        nodes.append(node)
    total = None
    for node, (_, weight) in zip(nodes, stencil):
        value = np.asarray(func(node))
        if not np.all(np.isfinite(value)):
            raise NonFinite(f"field is not finite at stencil node {node.tolist()}")
        total = weight * value if total is None else total + weight * value
    return total / h


def fd_partial(field: MatrixField, point, mu: int, step=None, scheme: str = "central4") -> np.ndarray:
    """Finite-difference approximation of ``d field / d x^mu`` at ``point``."""
    point = field.chart.check(point)
    return fd_derivative(field, point, mu, step, scheme, chart=field.chart)


def fd_gradient(func, point, step=None, scheme: str = "central4", chart: Chart | None = None, dim=None):
    """Stack of all partial derivatives, axis 0 indexing the direction."""
    point = np.asarray(point, dtype=float)
    dim = len(point) if dim is None else dim
    return np.stack([fd_derivative(func, point, mu, step, scheme, chart) for mu in range(dim)])


def convergence_order(err_coarse: float, err_fine: float, ratio: float = 2.0, floor: float = 1e-300) -> float:
    """Observed order ``log(err_coarse / err_fine) / log(ratio)``; NaN if undefined."""
    if not (err_coarse > floor and err_fine > floor):
        return math.nan
    return math.log(err_coarse / err_fine) / math.log(ratio)


def grid_points(chart: Chart, counts: Sequence[int], margin: float = 0.0) -> list[np.ndarray]:
    """Row-major lattice of points on the chart shrunk by ``margin`` per side.

    An axis with count 1 contributes its midpoint.
    """
    counts = [int(c) for c in counts]
    if len(counts) != chart.dim:
        raise ValueError(f"need {chart.dim} counts, got {len(counts)}")
    if any(c < 1 for c in counts):
        raise ValueError("every axis needs at least one grid point")
    if margin < 0:
        raise ValueError("margin must be non-negative")
    axes = []
    for c, (lo, hi) in zip(counts, chart.domain):
        a, b = lo + margin, hi - margin
        if not a < b:
            raise DegenerateDomain(f"margin {margin} collapses interval [{lo}, {hi}]")
        axes.append([0.5 * (a + b)] if c == 1 else np.linspace(a, b, c).tolist())
    return [np.array(p, dtype=float) for p in itertools.product(*axes)]
