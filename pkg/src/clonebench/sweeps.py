"""Parameter sweeps over the cloning machines with file-friendly records.

Every machine exposes one or two free parameters; a sweep walks a grid over
them, evaluates the machine at each point, and emits one record per point
carrying the fidelities, the per-clone shrinking factors, the success
probability (optical schemes), and an oracle residual: the signed gap,
largest in magnitude, between the closed-form fidelities and an independent
numeric route.  Machines without a closed form away from special slices
(the two-beam-splitter cascade) carry a residual only where one exists;
the column is still emitted so nothing is silently dropped.

Records serialize to CSV (fixed per-machine header) or JSON lines (full
record including the shrinking factors, plus a schema version).
"""

from __future__ import annotations

import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, TextIO

import numpy as np

from . import choi, one_to_n, optics, tripartite
from .linalg import haar_random_state

SCHEMA_VERSION = 1

MACHINES = ("asym1n", "tripartite", "choi", "pdc-112", "pdc-111", "pdc-1111")

# Free sweep parameters and their domains, per machine.
PARAM_DOMAINS: dict[str, dict[str, tuple[float, float]]] = {
    "asym1n": {"y": (0.0, 1.0)},
    "tripartite": {"r_ab": (1e-6, math.inf), "r_ac": (1e-6, math.inf)},
    "choi": {"a": (0.0, 1.0), "b": (0.0, 1.0)},
    "pdc-112": {"T": (0.0, 1.0)},
    "pdc-111": {"T": (0.0, 1.0)},
    "pdc-1111": {"T1": (0.0, 1.0), "T2": (0.0, 1.0)},
}

DEFAULT_TOLERANCES = {
    "asym1n": 1e-8,
    "tripartite": 1e-9,
    "choi": 1e-7,
    "pdc-112": 1e-9,
    "pdc-111": 1e-9,
    "pdc-1111": 1e-9,
}

_BOUNDARY_ATOL = 1e-12  # detecting closed-form slices of the cascade


class GridSpec(NamedTuple):
    """Inclusive linear grid over one parameter."""

    start: float
    stop: float
    points: int

    def values(self) -> np.ndarray:
        if self.points < 2:
            raise ValueError("grids need at least 2 points (use `point` for one)")
        return np.linspace(self.start, self.stop, self.points)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid spec {text!r} is not start:stop:points")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))


def default_grids(machine: str) -> dict[str, GridSpec]:
    return {
        "asym1n": {"y": GridSpec(0.0, 1.0, 50)},
        "tripartite": {"r_ab": GridSpec(0.5, 3.0, 6), "r_ac": GridSpec(0.5, 3.0, 6)},
        "choi": {"a": GridSpec(0.05, 0.9, 5), "b": GridSpec(0.05, 0.9, 5)},
        "pdc-112": {"T": GridSpec(0.5, 1.0, 50)},
        "pdc-111": {"T": GridSpec(0.5, 1.0, 50)},
        "pdc-1111": {"T1": GridSpec(0.5, 1.0, 6), "T2": GridSpec(0.5, 1.0, 6)},
    }[machine]


@dataclass(frozen=True)
class SweepConfig:
    machine: str
    d: int = 2
    n: int = 2
    seed: int = 0
    grids: dict[str, GridSpec] = field(default_factory=dict)
    out: str | None = None
    fmt: str = "csv"
    jobs: int = 1
    tolerance: float | None = None

    def __post_init__(self) -> None:
        if self.machine not in MACHINES:
            raise ValueError(f"unknown machine {self.machine!r} (choose from {MACHINES})")
        if self.fmt not in ("csv", "jsonl"):
            raise ValueError("format must be csv or jsonl")
        if self.d < 2:
            raise ValueError("d must be at least 2")
        if self.machine == "asym1n" and self.n < 2:
            raise ValueError("asym1n needs n >= 2")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")
        domains = PARAM_DOMAINS[self.machine]
        for name, grid in self.grids.items():
            if name not in domains:
                raise ValueError(
                    f"machine {self.machine} has no parameter {name!r} "
                    f"(has {sorted(domains)})"
                )
            lo, hi = domains[name]
            if grid.start < lo - 1e-12 or grid.stop > hi or grid.start > grid.stop:
                raise ValueError(f"grid for {name} outside its domain [{lo}, {hi}]")
            grid.values()  # validates the point count

    def effective_grids(self) -> dict[str, GridSpec]:
        grids = default_grids(self.machine)
        grids.update(self.grids)
        return grids

    def effective_tolerance(self) -> float:
        if self.tolerance is not None:
            return self.tolerance
        return DEFAULT_TOLERANCES[self.machine]


@dataclass(frozen=True)
class TradeoffRecord:
    """One sweep point: parameters in, fidelities and diagnostics out."""

    machine: str
    params: dict[str, float | str]
    fidelities: dict[str, float]
    etas: dict[str, float]
    prob: float | None
    residual: float | None

    def to_json(self) -> str:
        def safe(value):
            # strict JSON has no Infinity literal (infinite asymmetry ratios)
            if isinstance(value, float) and not math.isfinite(value):
                return "inf" if value > 0 else "-inf"
            return value

        payload = {
            "schema_version": SCHEMA_VERSION,
            "machine": self.machine,
            "params": {k: safe(v) for k, v in self.params.items()},
            "fidelities": self.fidelities,
            "etas": self.etas,
            "prob": self.prob,
            "residual": self.residual,
        }
        return json.dumps(payload, allow_nan=False)


class SweepSummary(NamedTuple):
    machine: str
    records: int
    max_abs_residual: float | None
    with_residual: int
    tolerance: float
    passed: bool


def shrinking_factor(fidelity: float, d: int) -> float:
    """Signed shrinking factor; negative below the maximally mixed value."""
    lo = 1.0 / d
    return (fidelity - lo) / (1.0 - lo)


def _etas(fids: dict[str, float], d: int) -> dict[str, float]:
    return {"eta" + k[1:]: shrinking_factor(v, d) for k, v in fids.items()}


def _signed_max(deltas: Iterable[float]) -> float:
    out = 0.0
    for x in deltas:
        if abs(x) > abs(out):
            out = x
    return out


def grid_points(config: SweepConfig) -> list[dict[str, float | str]]:
    """Cartesian product of the grids, in declared parameter order.

    The three-photon scheme emits both count branches per transmittance.
    """
    grids = config.effective_grids()
    names = list(PARAM_DOMAINS[config.machine])
    axes = [grids[name].values() for name in names]
    points: list[dict[str, float | str]] = []
    idx = np.ndindex(*(len(ax) for ax in axes))
    for multi in idx:
        base: dict[str, float | str] = {
            name: float(ax[i]) for name, ax, i in zip(names, axes, multi)
        }
        if config.machine == "pdc-112":
            for branch in ("1+2", "2+1"):
                points.append({**base, "branch": branch})
        elif config.machine == "choi":
            c = 1.0 - float(base["a"]) - float(base["b"])
            if c < -1e-12:
                continue
            points.append({**base, "c": max(c, 0.0)})
        else:
            points.append(base)
    return points


def _child_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def _eval_asym1n(n: int, seed: int, index: int, y: float) -> TradeoffRecord:
    p = one_to_n.TradeoffParam(y)
    f_a, f_b = one_to_n.analytic_tradeoff(n, p)
    alpha, beta = one_to_n.param_bridge(n, p)
    cloner = one_to_n.build_sandwich(n, alpha, beta)
    stats = one_to_n.numeric_fidelities(cloner, samples=20, seed=_child_rng(seed, index))
    residual = _signed_max((f_a - stats.f_a, f_b - stats.f_b))
    fids = {"F_A": f_a, "F_B": f_b}
    return TradeoffRecord("asym1n", {"y": y}, fids, _etas(fids, 2), None, residual)


def _eval_tripartite(d: int, seed: int, index: int, r_ab: float, r_ac: float) -> TradeoffRecord:
    coeffs = tripartite.coefficients_from_ratios(d, r_ab, r_ac)
    analytic = tripartite.analytic_fidelities(d, *coeffs)
    stats = tripartite.numeric_fidelities(d, *coeffs, samples=20, seed=_child_rng(seed, index))
    residual = _signed_max(a - m for a, m in zip(analytic, stats.mean))
    params = {
        "r_ab": r_ab,
        "r_ac": r_ac,
        "alpha": coeffs[0],
        "beta": coeffs[1],
        "gamma": coeffs[2],
    }
    fids = {"F_A": analytic.f_a, "F_B": analytic.f_b, "F_C": analytic.f_c}
    return TradeoffRecord("tripartite", params, fids, _etas(fids, d), None, residual)


def _eval_choi(d: int, weights: tuple[float, float, float]) -> TradeoffRecord:
    opt = choi.optimize_cloner(d, weights)
    best = tripartite.best_coefficients(d, opt.weights)
    # Zero-weight clones are unconstrained by the objective: the eigenspace
    # route and the coefficient route may legitimately disagree there, so
    # the residual compares only the clones the score actually weighs.
    residual = _signed_max(
        f - g
        for f, g, w in zip(opt.fidelities, best.fidelities, opt.weights)
        if w > 1e-12
    )
    a, b, c = opt.weights
    fids = {
        "F_A": opt.fidelities[0],
        "F_B": opt.fidelities[1],
        "F_C": opt.fidelities[2],
    }
    return TradeoffRecord(
        "choi", {"a": a, "b": b, "c": c}, fids, _etas(fids, d), None, residual
    )


def _haar_qubit(seed: int, index: int) -> np.ndarray:
    return haar_random_state(2, _child_rng(seed, index)).amplitudes


def _eval_pdc_111(seed: int, index: int, t: float) -> TradeoffRecord:
    psi = _haar_qubit(seed, index)
    sim = optics.simulate_11(t, psi)
    ref = optics.analytic_11(t)
    residual = _signed_max((ref[0] - sim.f_a, ref[1] - sim.f_b))
    fids = {"F_A": sim.f_a, "F_B": sim.f_b}
    return TradeoffRecord("pdc-111", {"T": t}, fids, _etas(fids, 2), sim.prob, residual)


def _eval_pdc_112(seed: int, index: int, t: float, branch: str) -> TradeoffRecord:
    m_a, m_b = (1, 2) if branch == "1+2" else (2, 1)
    psi = _haar_qubit(seed, index)
    sim = optics.simulate_112(t, m_a, m_b, psi)
    ref = optics.analytic_112(t, m_a, m_b)
    residual = _signed_max((ref[0] - sim.f_a, ref[1] - sim.f_b))
    fids = {"F_A": sim.f_a, "F_B": sim.f_b}
    return TradeoffRecord(
        "pdc-112", {"T": t, "branch": branch}, fids, _etas(fids, 2), sim.prob, residual
    )


def _cascade_reference(t1: float, t2: float) -> tuple[float, float, float] | None:
    """Closed-form cascade fidelities on the slices that have them."""
    if abs(t2 - 1.0) <= _BOUNDARY_ATOL:
        f_a, f_b = optics.analytic_112(t1, 1, 2)
        return tuple(sorted((f_a, f_b, f_b), reverse=True))
    if abs(t1 - 1.0) <= _BOUNDARY_ATOL:
        f_u, f_m = optics.analytic_112(t2, 2, 1)
        return tuple(sorted((f_u, f_u, f_m), reverse=True))
    return None


def _eval_pdc_1111(seed: int, index: int, t1: float, t2: float) -> TradeoffRecord:
    psi = _haar_qubit(seed, index)
    sim = optics.simulate_1111(t1, t2, psi)
    ref = _cascade_reference(t1, t2)
    residual = None
    if ref is not None:
        residual = _signed_max(r - s for r, s in zip(ref, sim[:3]))
    fids = {"F_A": sim.f_a, "F_B": sim.f_b, "F_C": sim.f_c}
    return TradeoffRecord(
        "pdc-1111", {"T1": t1, "T2": t2}, fids, _etas(fids, 2), sim.prob, residual
    )


def evaluate_point(
    machine: str,
    d: int,
    n: int,
    seed: int,
    index: int,
    point: dict[str, float | str],
) -> TradeoffRecord:
    if machine == "asym1n":
        return _eval_asym1n(n, seed, index, float(point["y"]))
    if machine == "tripartite":
        return _eval_tripartite(d, seed, index, float(point["r_ab"]), float(point["r_ac"]))
    if machine == "choi":
        return _eval_choi(d, (float(point["a"]), float(point["b"]), float(point["c"])))
    if machine == "pdc-111":
        return _eval_pdc_111(seed, index, float(point["T"]))
    if machine == "pdc-112":
        return _eval_pdc_112(seed, index, float(point["T"]), str(point["branch"]))
    if machine == "pdc-1111":
        return _eval_pdc_1111(seed, index, float(point["T1"]), float(point["T2"]))
    raise ValueError(f"unknown machine {machine!r}")


def _worker(args: tuple) -> TradeoffRecord:
    return evaluate_point(*args)


def run_sweep(config: SweepConfig, stream: TextIO | None = None) -> SweepSummary:
    """Evaluate the grid, write records, and summarize the oracle residuals.

    Records are written in grid order whatever the worker count; with an
    `out` path the file is (over)written, otherwise records go to `stream`
    (default stdout).
    """
    points = grid_points(config)
    tasks = [
        (config.machine, config.d, config.n, config.seed, i, pt)
        for i, pt in enumerate(points)
    ]
    if config.jobs == 1:
        records = [_worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_worker, tasks, chunksize=max(1, len(tasks) // (4 * config.jobs))))

    if config.out is not None:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            _write_records(records, config, fh)
    else:
        _write_records(records, config, stream if stream is not None else sys.stdout)

    residuals = [r.residual for r in records if r.residual is not None]
    max_abs = max(abs(x) for x in residuals) if residuals else None
    tol = config.effective_tolerance()
    passed = max_abs is None or max_abs <= tol
    return SweepSummary(
        machine=config.machine,
        records=len(records),
        max_abs_residual=max_abs,
        with_residual=len(residuals),
        tolerance=tol,
        passed=passed,
    )


def csv_columns(machine: str, record: TradeoffRecord) -> list[str]:
    cols = list(record.params) + list(record.fidelities)
    if machine != "pdc-112":
        # The three-photon scheme's header is pinned without the shrinking
        # factors; its full records are available through the jsonl format.
        cols += list(record.etas)
    if record.prob is not None or machine.startswith("pdc"):
        cols.append("prob")
    cols.append("residual")
    return cols


def _fmt(value: float | str | None) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return format(value, ".17g")


def _write_records(records: list[TradeoffRecord], config: SweepConfig, fh: TextIO) -> None:
    if not records:
        return
    if config.fmt == "jsonl":
        for rec in records:
            fh.write(rec.to_json() + "\n")
        return
    cols = csv_columns(config.machine, records[0])
    fh.write(",".join(cols) + "\n")
    for rec in records:
        merged: dict[str, float | str | None] = {**rec.params, **rec.fidelities, **rec.etas}
        merged["prob"] = rec.prob
        merged["residual"] = rec.residual
        fh.write(",".join(_fmt(merged.get(c)) for c in cols) + "\n")


def frontier_records(
    machine: str, d: int = 2, n: int = 2, points: int = 25, seed: int = 0
) -> list[TradeoffRecord]:
    """Optimal-curve generation: the non-dominated trade-off itself.

    asym1n walks the curve parameter up to the point where the mean clone
    fidelity peaks; tripartite and choi walk a barycentric grid of score
    weights and report the optimum at each, through their respective routes
    (coefficient optimization versus top eigenspace), cross-checking one
    against the other on the positively weighted clones.
    """
    if machine == "asym1n":
        if points < 2:
            raise ValueError("need at least 2 points")
        ys = np.linspace(0.0, one_to_n.frontier_peak_y(n), points)
        out = []
        for y in ys:
            f_a, f_b = one_to_n.analytic_tradeoff(n, one_to_n.TradeoffParam(float(y)))
            fids = {"F_A": f_a, "F_B": f_b}
            out.append(
                TradeoffRecord("asym1n", {"y": float(y)}, fids, _etas(fids, 2), None, None)
            )
        return out
    if machine in ("tripartite", "choi"):
        out = []
        for a, b, c in _barycentric_grid(points):
            if machine == "choi":
                rec = _eval_choi(d, (a, b, c))
            else:
                best = tripartite.best_coefficients(d, (a, b, c), seed=seed)
                opt = choi.optimize_cloner(d, (a, b, c))
                residual = _signed_max(
                    f - g
                    for f, g, w in zip(best.fidelities, opt.fidelities, (a, b, c))
                    if w > 1e-12
                )
                params = {
                    "a": a,
                    "b": b,
                    "c": c,
                    "alpha": best.coefficients[0],
                    "beta": best.coefficients[1],
                    "gamma": best.coefficients[2],
                }
                fids = {
                    "F_A": best.fidelities.f_a,
                    "F_B": best.fidelities.f_b,
                    "F_C": best.fidelities.f_c,
                }
                rec = TradeoffRecord("tripartite", params, fids, _etas(fids, d), None, residual)
            out.append(rec)
        return out
    raise ValueError("frontier supports asym1n, tripartite, and choi")


def _barycentric_grid(resolution: int) -> list[tuple[float, float, float]]:
    """Weight triples (i, j, k)/resolution covering the simplex."""
    if resolution < 1:
        raise ValueError("resolution must be positive")
    out = []
    for i in range(resolution + 1):
        for j in range(resolution + 1 - i):
            k = resolution - i - j
            out.append((i / resolution, j / resolution, k / resolution))
    return out
