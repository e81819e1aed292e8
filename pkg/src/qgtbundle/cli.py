"""Command-line interface: ``verify``, ``eval``, ``trace`` and ``models``.

Runs are configured by one JSON document (``--config path`` or ``-`` for
stdin).  Reports are deterministic for a fixed configuration apart from the
top-level ``timestamp`` field.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 model error, 4 off-shell input.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .chart import SCHEME_ORDER, Chart, convergence_order, grid_points
from .bundle import check_compatibility
from .dirac import analytic_qgt, phase_point, pi_form
from .errors import ConfigError, DegenerateDomain, GeometryError, ModelError, OffShell, OutOfDomain
from .models import ModelInstance, build_model, list_models
from .rays import initial_state, integrate_ray, transport_spinor
from .subgeometry import SubGeometry

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_MODEL, EXIT_OFFSHELL = 0, 1, 2, 3, 4
OUT_ENV = "QGTBUNDLE_OUT"

ALGEBRAIC_TOL = 1e-10
FD_TOL = 1e-5
DEFAULT_TOLERANCES = {
    "projector_idempotency": ALGEBRAIC_TOL,
    "projector_h_compatibility": ALGEBRAIC_TOL,
    "projector_trace": ALGEBRAIC_TOL,
    "compatibility": FD_TOL,
    "adjointness": ALGEBRAIC_TOL,
    "gauss_parallel": FD_TOL,
    "gauss_perp": FD_TOL,
    "codazzi_parallel": FD_TOL,
    "codazzi_perp": FD_TOL,
    "codazzi_base_independence": 1e-8,
    "qgt_symmetric_part": ALGEBRAIC_TOL,
    "qgt_conjugate_symmetry": ALGEBRAIC_TOL,
    "qgt_decomposition": FD_TOL,
    "qgt_alternative_nabla": FD_TOL,
    "qgt_alternative_projector": FD_TOL,
    "shell_constraint": ALGEBRAIC_TOL,
    "dirac_qgt_analytic": FD_TOL,
    "dirac_metric_analytic": FD_TOL,
    "dirac_berry_analytic": FD_TOL,
}
EVAL_WHAT = ("qgt", "metric", "berry", "shape")

_TOP_KEYS = {"model", "points", "grid", "fd", "tolerances", "output", "seed", "what", "trace", "workers"}
_MODEL_KEYS = {"name", "params"}
_GRID_KEYS = {"counts", "margin", "box", "fixed"}
_FD_KEYS = {"step", "scheme"}
_OUTPUT_KEYS = {"path", "format", "tidy"}
_TRACE_KEYS = {"rays", "fan", "tau_end", "dt", "backend", "transport", "no_name", "dt_halving"}
_RAY_KEYS = {"x", "k"}
_FAN_KEYS = {"x", "speed", "count", "angle0"}


def _reject_unknown(section: str, got: dict, allowed: set) -> None:
    if not isinstance(got, dict):
        raise ConfigError(f"{section} must be an object")
    extra = set(got) - allowed
    if extra:
        raise ConfigError(f"unknown key(s) in {section}: {sorted(extra)}")


@dataclass
class RunConfig:
    """Validated run configuration."""

    model: str
    params: dict = field(default_factory=dict)
    points: list | None = None
    grid: dict | None = None
    step: float | list | None = None
    scheme: str = "central4"
    tolerances: dict = field(default_factory=dict)
    out_path: str | None = None
    fmt: str = "json"
    tidy: bool = False
    seed: int = 0
    what: str = "qgt"
    trace: dict = field(default_factory=dict)
    workers: int = 1
    raw: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, doc) -> "RunConfig":
        _reject_unknown("config", doc, _TOP_KEYS)
        if "model" not in doc:
            raise ConfigError("config needs a model section")
        model = doc["model"]
        if isinstance(model, str):
            model = {"name": model}
        _reject_unknown("model", model, _MODEL_KEYS)
        if "name" not in model:
            raise ConfigError("model.name is required")
        cfg = cls(model=str(model["name"]), params=dict(model.get("params", {})), raw=doc)
        if "points" in doc and "grid" in doc:
            raise ConfigError("give either points or grid, not both")
        if "points" in doc:
            pts = doc["points"]
            if not isinstance(pts, list) or not pts:
                raise ConfigError("points must be a non-empty list")
            cfg.points = pts
        if "grid" in doc:
            _reject_unknown("grid", doc["grid"], _GRID_KEYS)
            cfg.grid = doc["grid"]
        fd = doc.get("fd", {})
        _reject_unknown("fd", fd, _FD_KEYS)
        cfg.step = fd.get("step")
        cfg.scheme = fd.get("scheme", "central4")
        if cfg.scheme not in SCHEME_ORDER:
            raise ConfigError(f"unknown fd scheme {cfg.scheme!r}")
        if cfg.step is not None and not np.all(np.asarray(cfg.step, dtype=float) > 0):
            raise ConfigError("fd.step must be positive")
        tol = doc.get("tolerances", {})
        _reject_unknown("tolerances", tol, set(DEFAULT_TOLERANCES))
        for k, v in tol.items():
            if not (isinstance(v, (int, float)) and v > 0):
                raise ConfigError(f"tolerance {k} must be a positive number")
        cfg.tolerances = {**DEFAULT_TOLERANCES, **tol}
        out = doc.get("output", {})
        _reject_unknown("output", out, _OUTPUT_KEYS)
        cfg.out_path = out.get("path")
        cfg.fmt = out.get("format", "json")
        if cfg.fmt not in ("json", "csv"):
            raise ConfigError(f"unknown output format {cfg.fmt!r}")
        cfg.tidy = bool(out.get("tidy", False))
        seed = doc.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigError("seed must be an integer")
        cfg.seed = seed
        cfg.what = doc.get("what", "qgt")
        if cfg.what not in EVAL_WHAT:
            raise ConfigError(f"what must be one of {EVAL_WHAT}")
        tr = doc.get("trace", {})
        _reject_unknown("trace", tr, _TRACE_KEYS)
        for r in tr.get("rays", []):
            _reject_unknown("trace.rays[]", r, _RAY_KEYS)
        if "fan" in tr:
            _reject_unknown("trace.fan", tr["fan"], _FAN_KEYS)
        cfg.trace = tr
        workers = doc.get("workers", 1)
        if not isinstance(workers, int) or workers < 1:
            raise ConfigError("workers must be a positive integer")
        cfg.workers = workers
        return cfg


def load_config(source: str) -> RunConfig:
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
        doc = json.loads(text)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return RunConfig.from_dict(doc)


# -- serialisation -----------------------------------------------------------


def _num(v):
    """JSON-safe scalar: complex -> {re, im}, non-finite -> None."""
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": _num(float(v.real)), "im": _num(float(v.imag))}
    v = float(v)
    return v if math.isfinite(v) else None


def _tensor(arr: np.ndarray) -> dict:
    arr = np.asarray(arr)
    flat = arr.reshape(-1)
    if np.iscomplexobj(arr):
        values = [_num(complex(z)) for z in flat]
    else:
        values = [_num(z) for z in flat]
    return {"shape": list(arr.shape), "values": values}


def _dump(obj, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _envelope(command: str, cfg: RunConfig) -> dict:
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "config": cfg.raw,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }


def _out_dir(cfg: RunConfig, cli_out: str | None) -> Path:
    return Path(cli_out or os.environ.get(OUT_ENV) or cfg.out_path or ".")


# -- point sampling ----------------------------------------------------------


def resolve_points(chart: Chart, cfg: RunConfig) -> list[np.ndarray]:
    """Explicit points, or a lattice over a (sub-)box of the chart."""
    if cfg.points is not None:
        pts = []
        for p in cfg.points:
            arr = np.asarray(p, dtype=float)
            if arr.shape != (chart.dim,):
                raise ConfigError(f"point {p} needs {chart.dim} coordinates {chart.coord_names}")
            if not chart.contains(arr):
                raise ConfigError(f"point {p} lies outside the chart")
            pts.append(arr)
        return pts
    grid = cfg.grid or {}
    names = chart.coord_names
    counts = grid.get("counts", {})
    if isinstance(counts, list):
        if len(counts) != chart.dim:
            raise ConfigError(f"grid.counts needs {chart.dim} entries")
        counts = dict(zip(names, counts))
    for key in list(counts) + list(grid.get("box", {})) + list(grid.get("fixed", {})):
        if key not in names:
            raise ConfigError(f"unknown axis {key!r}; axes are {names}")
    for key, c in counts.items():
        if not isinstance(c, int) or c < 1:
            raise ConfigError(f"grid count for {key} must be a positive integer")
    box = []
    for name, (lo, hi) in zip(names, chart.domain):
        b = grid.get("box", {}).get(name, [lo, hi])
        if len(b) != 2 or not lo <= b[0] < b[1] <= hi:
            raise ConfigError(f"grid box for {name} must be a sub-interval of [{lo}, {hi}]")
        box.append((float(b[0]), float(b[1])))
    try:
        sub = Chart(names, box, tuple((b - a) / 8 for a, b in box))
        pts = grid_points(sub, [counts.get(n, 1) for n in names], float(grid.get("margin", 0.0)))
    except (DegenerateDomain, ValueError) as exc:
        raise ConfigError(f"invalid grid: {exc}") from exc
    fixed = grid.get("fixed", {})
    for p in pts:
        for name, v in fixed.items():
            p[names.index(name)] = float(v)
        if not chart.contains(p):
            raise ConfigError(f"grid point {p.tolist()} lies outside the chart")
    return pts


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- verify ------------------------------------------------------------------


def _alt_connection(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim, dim))
    return 0.5 * (a + a.transpose(0, 2, 1))


def _identity_values(inst: ModelInstance, sg: SubGeometry, alt) -> dict[str, float]:
    pf = inst.projector
    x = sg.point
    inv = pf.invariant_residuals(x)
    g_par, g_perp = sg.gauss_residuals()
    c_par, c_perp, gap = sg.codazzi_residuals(None, alt)
    rep = sg.qgt_report()
    vals = {
        "projector_idempotency": inv["idempotency"],
        "projector_h_compatibility": inv["h_compatibility"],
        "projector_trace": inv["trace"],
        "compatibility": check_compatibility(pf.spec, x, sg.step, sg.scheme),
        "adjointness": sg.adjointness_residual(),
        "gauss_parallel": g_par,
        "gauss_perp": g_perp,
        "codazzi_parallel": c_par,
        "codazzi_perp": c_perp,
        "codazzi_base_independence": gap,
        "qgt_symmetric_part": rep["symmetric_vs_metric"],
        "qgt_conjugate_symmetry": rep["conjugate_symmetry"],
        "qgt_decomposition": rep["antisymmetric_vs_curvatures"],
        "qgt_alternative_nabla": rep["alternative_nabla_form"],
        "qgt_alternative_projector": rep["alternative_projector_form"],
    }
    if inst.kind == "dirac":
        model = inst.spacetime
        pp = phase_point(model, x[:4], x[4:])
        p_up = model.g_inv(pp.x) @ pp.p
        vals["shell_constraint"] = float(np.max(np.abs(p_up @ pi_form(model, pp))))
        an = analytic_qgt(model, pp, sg.frame.parallel_frame)
        vals["dirac_qgt_analytic"] = float(np.max(np.abs(np.moveaxis(sg.qgt_matrix, (0, 1), (2, 3)) - an["Q"])))
        vals["dirac_metric_analytic"] = float(np.max(np.abs(np.moveaxis(sg.metric_matrix, (0, 1), (2, 3)) - an["G"])))
        vals["dirac_berry_analytic"] = float(
            np.max(np.abs(np.moveaxis(sg.berry_curvature_derivative, (0, 1), (2, 3)) - an["F"]))
        )
    return vals


def verify_point(inst: ModelInstance, point, step, scheme, tolerances, seed) -> list[dict]:
    base = np.asarray(inst.chart.default_step if step is None else step, dtype=float)
    alt = _alt_connection(inst.chart.dim, seed)
    a = _identity_values(inst, SubGeometry(inst.projector, point, base, scheme), alt)
    b = _identity_values(inst, SubGeometry(inst.projector, point, base / 2, scheme), alt)
    records = []
    for name in a:
        tol = tolerances[name]
        records.append(
            {
                "identity": name,
                "residual_h": _num(a[name]),
                "residual_h2": _num(b[name]),
                "order": _num(convergence_order(a[name], b[name])),
                "tolerance": tol,
                "pass": bool(a[name] <= tol),
            }
        )
    return records


def _build(cfg: RunConfig) -> ModelInstance:
    params = dict(cfg.params)
    if cfg.model == "random" and "seed" not in params:
        params["seed"] = cfg.seed
    return build_model(cfg.model, params)


def cmd_verify(cfg: RunConfig, out_dir: Path) -> tuple[dict, int]:
    inst = _build(cfg)
    points = resolve_points(inst.chart, cfg)

    def run(i):
        try:
            recs = verify_point(inst, points[i], cfg.step, cfg.scheme, cfg.tolerances, cfg.seed)
        except OutOfDomain as exc:
            raise ConfigError(f"point {i}: {exc}") from exc
        return {"index": i, "point": [_num(v) for v in points[i]], "records": recs}

    results = _map(run, range(len(points)), cfg.workers)
    n_rec = sum(len(r["records"]) for r in results)
    n_fail = sum(1 for r in results for rec in r["records"] if not rec["pass"])
    report = _envelope("verify", cfg)
    report.update(
        {
            "model": inst.name,
            "coord_names": list(inst.chart.coord_names),
            "scheme": cfg.scheme,
            "scheme_order": SCHEME_ORDER[cfg.scheme],
            "points": results,
            "summary": {"points": len(points), "records": n_rec, "passed": n_rec - n_fail, "failed": n_fail},
        }
    )
    _dump(report, out_dir / "verify_report.json")
    if cfg.fmt == "csv":
        rows = [
            [r["index"], *r["point"], rec["identity"], rec["residual_h"], rec["residual_h2"], rec["order"], rec["tolerance"], int(rec["pass"])]
            for r in results
            for rec in r["records"]
        ]
        header = ["point_index", *inst.chart.coord_names, "identity", "residual_h", "residual_h2", "order", "tolerance", "pass"]
        _write_csv(out_dir / "verify_report.csv", header, rows)
    return report, EXIT_OK if n_fail == 0 else EXIT_FAIL


# -- eval --------------------------------------------------------------------


def _numeric_tensor(sg: SubGeometry, what: str) -> np.ndarray:
    if what == "qgt":
        return np.moveaxis(sg.qgt_matrix, (0, 1), (2, 3))
    if what == "metric":
        return np.moveaxis(sg.metric_matrix, (0, 1), (2, 3))
    if what == "berry":
        return np.moveaxis(sg.berry_curvature_derivative, (0, 1), (2, 3))
    return np.moveaxis(sg.shape[0], 0, -1)


def _analytic_tensor(inst: ModelInstance, sg: SubGeometry, what: str) -> np.ndarray:
    model = inst.spacetime
    x = sg.point
    pp = phase_point(model, x[:4], x[4:])
    an = analytic_qgt(model, pp, sg.frame.parallel_frame)
    if what in ("qgt", "metric", "berry"):
        return an[{"qgt": "Q", "metric": "G", "berry": "F"}[what]]
    # S(s_A) = -(1/2m) Pi_alpha gamma^alpha s_A, in the adapted frame
    vec = -np.einsum("aJ,aij,jA->iAJ", an["Pi"], model.gammas(pp.x), sg.frame.parallel_frame) / (2 * model.mass)
    comp = np.einsum("ki,iAJ->kAJ", sg.frame.coframe, vec)
    return comp[sg.m :]


_INDEX_ORDER = {"qgt": "A,B,mu,nu", "metric": "A,B,mu,nu", "berry": "A,B,mu,nu", "shape": "I,A,mu"}


def _component_labels(shape) -> list[str]:
    return ["_".join(str(i) for i in idx) for idx in np.ndindex(*shape)]


def cmd_eval(cfg: RunConfig, out_dir: Path) -> tuple[dict, int]:
    inst = _build(cfg)
    points = resolve_points(inst.chart, cfg)
    what = cfg.what

    def run(i):
        try:
            sg = SubGeometry(inst.projector, points[i], cfg.step, cfg.scheme)
            num = _numeric_tensor(sg, what)
            entry = {"index": i, "point": [_num(v) for v in points[i]], "numeric": _tensor(num)}
            if inst.kind == "dirac":
                ana = _analytic_tensor(inst, sg, what)
                entry["analytic"] = _tensor(ana)
                entry["difference"] = _tensor(num - ana)
                entry["max_difference"] = _num(np.max(np.abs(num - ana)))
        except OutOfDomain as exc:
            raise ConfigError(f"point {i}: {exc}") from exc
        return entry, num, (ana if inst.kind == "dirac" else None)

    out = _map(run, range(len(points)), cfg.workers)
    report = _envelope("eval", cfg)
    report.update(
        {
            "model": inst.name,
            "what": what,
            "index_order": _INDEX_ORDER[what],
            "coord_names": list(inst.chart.coord_names),
            "points": [o[0] for o in out],
        }
    )
    _dump(report, out_dir / f"eval_{what}.json")
    labels = _component_labels(out[0][1].shape)
    if cfg.fmt == "csv":
        header = list(inst.chart.coord_names)
        blocks = ["numeric"] + (["analytic", "difference"] if inst.kind == "dirac" else [])
        for blk in blocks:
            for lab in labels:
                header += [f"{blk}_{what}_{lab}_re", f"{blk}_{what}_{lab}_im"]
        rows = []
        for i, (_, num, ana) in enumerate(out):
            row = [float(v) for v in points[i]]
            arrays = [num] + ([ana, num - ana] if ana is not None else [])
            for arr in arrays:
                for z in np.asarray(arr, dtype=complex).reshape(-1):
                    row += [float(z.real), float(z.imag)]
            rows.append(row)
        _write_csv(out_dir / f"eval_{what}.csv", header, rows)
    if cfg.tidy:
        rows = []
        for i, (_, num, ana) in enumerate(out):
            for tensor, arr in (("numeric", num), ("analytic", ana)):
                if arr is None:
                    continue
                for lab, z in zip(labels, np.asarray(arr, dtype=complex).reshape(-1)):
                    rows.append([i, tensor, lab, "re", float(z.real)])
                    rows.append([i, tensor, lab, "im", float(z.imag)])
        _write_csv(out_dir / f"eval_{what}_tidy.csv", ["point", "tensor", "component", "part", "value"], rows)
    return report, EXIT_OK


# -- trace -------------------------------------------------------------------


def _initial_rays(inst: ModelInstance, tr: dict):
    model = inst.spacetime
    states = []
    for r in tr.get("rays", []):
        if "x" not in r or "k" not in r:
            raise ConfigError("each ray needs x and k")
        x = np.asarray(r["x"], dtype=float)
        k = np.asarray(r["k"], dtype=float)
        if x.shape != (4,) or k.shape not in ((3,), (4,)):
            raise ConfigError("ray x needs 4 entries and k needs 3 (spatial) or 4")
        if not model.chart.contains(x):
            raise ConfigError(f"ray start {x.tolist()} lies outside the chart")
        if k.shape == (4,):
            res = float(k @ model.g_inv(x) @ k + model.mass**2)
            if abs(res) > 1e-10 * max(1.0, model.mass**2) or (model.g_inv(x) @ k)[0] <= 0:
                raise OffShell(f"ray k = {k.tolist()} is off shell (residual {res:.3e})")
            states.append(initial_state(model, x, k[1:]))
        else:
            states.append(initial_state(model, x, k))
    fan = tr.get("fan")
    if fan:
        x = np.asarray(fan["x"], dtype=float)
        if not model.chart.contains(x):
            raise ConfigError("fan start lies outside the chart")
        count = int(fan.get("count", 8))
        speed = float(fan.get("speed", 0.1))
        angle0 = float(fan.get("angle0", 0.0))
        for j in range(count):
            ang = angle0 + 2 * np.pi * j / count
            states.append(initial_state(model, x, [speed * np.cos(ang), speed * np.sin(ang), 0.0]))
    if not states:
        raise ConfigError("trace needs rays or a fan")
    return states


def cmd_trace(cfg: RunConfig, out_dir: Path) -> tuple[dict, int]:
    inst = _build(cfg)
    if inst.kind != "dirac":
        raise ConfigError("trace needs a spacetime model")
    model = inst.spacetime
    tr = cfg.trace
    tau_end = float(tr.get("tau_end", 1.0))
    dt = float(tr.get("dt", 1e-2))
    if not (dt > 0 and tau_end > dt):
        raise ConfigError("trace needs dt > 0 and tau_end > dt")
    backend = tr.get("backend", "auto")
    do_transport = bool(tr.get("transport", True))
    no_name = bool(tr.get("no_name", True))
    halving = bool(tr.get("dt_halving", False))
    states = _initial_rays(inst, tr)

    def run(i):
        s = states[i]
        traj = integrate_ray(model, s, s.tau + tau_end, dt, backend, allow_exit=True)
        summary = {
            "index": i,
            "status": traj.status,
            "steps": len(traj.tau) - 1,
            "backend": traj.backend,
            "h_drift": _num(traj.h_drift),
            "kz_drift": _num(traj.kz_drift),
            "shell_residual_max": _num(np.max(np.abs(traj.shell_residual))),
        }
        psi = np.full((len(traj.tau), 4), np.nan, dtype=complex)
        nd = np.full(len(traj.tau), np.nan)
        kd = np.full(len(traj.tau), np.nan)
        if do_transport and len(traj.tau) > 1:
            sp = transport_spinor(model, traj, no_name=no_name)
            psi = sp.psi
            nd[0] = kd[0] = 0.0
            nd[1:], kd[1:] = sp.norm_drift, sp.kernel_drift
            summary["psi_norm_drift"] = _num(sp.max_norm_drift)
            summary["kernel_drift"] = _num(sp.max_kernel_drift)
        if halving:
            fine = integrate_ray(model, s, s.tau + tau_end, dt / 2, backend, allow_exit=True)
            summary["h_drift_half_dt"] = _num(fine.h_drift)
            summary["h_drift_ratio"] = _num(traj.h_drift / fine.h_drift if fine.h_drift > 0 else math.nan)
        header = (
            ["tau"]
            + [f"x{m}" for m in range(4)]
            + [f"k{m}" for m in range(4)]
            + [f"psi{j}_{part}" for j in range(4) for part in ("re", "im")]
            + ["drift_H", "drift_psi_norm", "drift_kernel"]
        )
        rows = []
        for n in range(len(traj.tau)):
            row = [traj.tau[n], *traj.x[n], *traj.k[n]]
            for z in psi[n]:
                row += [z.real, z.imag]
            row += [traj.H[n] - traj.H[0], nd[n], kd[n]]
            rows.append(row)
        _write_csv(out_dir / f"ray_{i:03d}.csv", header, rows)
        return summary

    rays = _map(run, range(len(states)), cfg.workers)
    report = _envelope("trace", cfg)
    report.update({"model": inst.name, "dt": dt, "tau_end": tau_end, "rays": rays})
    _dump(report, out_dir / "trace_summary.json")
    return report, EXIT_OK


def _write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgtbundle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in ("verify", "eval", "trace"):
        p = sub.add_parser(verb)
        p.add_argument("--config", required=True, help="JSON config file, or - for stdin")
        p.add_argument("--out", help="output directory")
        p.add_argument("--workers", type=int, help="concurrent points or rays")
        p.add_argument("--format", choices=("json", "csv"), help="report format")
        if verb == "eval":
            p.add_argument("--what", choices=EVAL_WHAT, help="tensor to evaluate")
    sub.add_parser("models", help="list registered models")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verb == "models":
        print(json.dumps({"schema": SCHEMA, "models": list_models()}, indent=2, sort_keys=True))
        return EXIT_OK
    try:
        cfg = load_config(args.config)
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError("--workers must be positive")
            cfg.workers = args.workers
        if args.format:
            cfg.fmt = args.format
        if getattr(args, "what", None):
            cfg.what = args.what
        out_dir = _out_dir(cfg, args.out)
        command = {"verify": cmd_verify, "eval": cmd_eval, "trace": cmd_trace}[args.verb]
        report, code = command(cfg, out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except OffShell as exc:
        print(f"off-shell input: {exc}", file=sys.stderr)
        return EXIT_OFFSHELL
    except GeometryError as exc:
        print(f"model error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MODEL
    if args.verb == "verify":
        s = report["summary"]
        print(f"verify {report['model']}: {s['passed']}/{s['records']} records passed")
    return code


if __name__ == "__main__":
    sys.exit(main())
