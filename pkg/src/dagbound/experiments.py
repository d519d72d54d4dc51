"""Randomized experiment sweeps with deterministic aggregation.

Three metrics, each swept over one generator or platform parameter:

* ``bound``  - ratio of the multi-path bound to Graham's bound (smaller is
  better), swept over core count, parallelism factor, or vertex count;
* ``cores``  - ratio of the ceiling-free core allocations (multi-path over
  classic), swept over the deadline parameter alpha, parallelism factor, or
  vertex count;
* ``accept`` - acceptance ratio of federated scheduling under both core
  allocations, swept over normalized utilization, core count, parallelism
  factor, or vertex count.

Every sample is generated from a per-index substream, so results are
byte-identical regardless of how many worker processes evaluate them.  When
the swept parameter does not influence task generation (core count for the
bound metric, alpha for the cores metric, the utilization target for the
acceptance metric), the same sample is reused across the grid; this shares
random numbers between grid points and makes the resulting curves exactly
monotone where per-sample monotonicity holds.

Dominance is asserted on every sample; a violation aborts the run loudly,
since it would indicate an implementation bug rather than tolerable data.
"""

from __future__ import annotations

import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import partial
from typing import Sequence, Union

from .bounds import (
    fractional_cores_graham,
    fractional_cores_multipath,
    graham_bound,
    multipath_bound,
)
from .decompose import MultiPathModel, model_of
from .federated import schedulable
from .taskgen import GenParams, gen_dag, substream, task_prefix_stream

SWEEPS = ("m", "pf", "nvertex", "alpha", "nu")
METRICS = ("bound", "cores", "accept")

DEFAULT_GRIDS = {
    "m": (2, 4, 8, 16, 32),
    "pf": (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
    "nvertex": (50, 100, 150, 200, 250),
    "alpha": (0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5),
    "nu": (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8),
}

DEFAULT_METRIC = {"m": "bound", "pf": "bound", "nvertex": "bound", "alpha": "cores", "nu": "accept"}

VALID_COMBOS = {
    "bound": ("m", "pf", "nvertex"),
    "cores": ("alpha", "pf", "nvertex"),
    "accept": ("nu", "m", "pf", "nvertex"),
}

NU_RANGE = (0.0, 0.8)


class InternalInvariantError(AssertionError):
    """A dominance or safety identity failed; never tolerated as data."""


@dataclass(frozen=True)
class ExperimentConfig:
    sweep: str
    metric: str
    grid: tuple
    samples: int
    cores: int
    params: GenParams
    seed: int
    jobs: int = 1

    def __post_init__(self):
        if self.sweep not in SWEEPS:
            raise ValueError(f"unknown sweep {self.sweep!r}")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.sweep not in VALID_COMBOS[self.metric]:
            raise ValueError(f"metric {self.metric!r} cannot sweep {self.sweep!r}")
        if not self.grid:
            raise ValueError("empty sweep grid")
        if self.samples < 1:
            raise ValueError("need at least one sample per point")
        if self.cores < 1:
            raise ValueError("need at least one core")
        if self.jobs < 1:
            raise ValueError("need at least one worker")


def _point_params(params: GenParams, sweep: str, value) -> GenParams:
    if sweep == "pf":
        return replace(params, pf_range=(float(value), float(value)))
    if sweep == "nvertex":
        return replace(params, nvertex_range=(int(value), int(value)))
    return params


def _bound_ratio(model: MultiPathModel, m: int) -> float:
    g = graham_bound(model.total_work, model.longest, m)
    b = multipath_bound(model, m)
    if b > g:
        raise InternalInvariantError(f"multi-path bound {b} exceeds Graham's bound {g}")
    if model.lengths and b < model.longest:
        raise InternalInvariantError("bound dropped below the longest path length")
    if g == 0:
        return 1.0
    return float(b / g)


def _core_ratio(model: MultiPathModel, alpha: float) -> float:
    C, L = model.total_work, model.longest
    if C == L:
        return 1.0  # sequential task: one core either way
    if alpha == 0.0:
        return 0.0  # classic allocation diverges as the deadline meets L
    deadline = L + Fraction(alpha) * (C - L)
    ours = fractional_cores_multipath(model, deadline)
    classic = fractional_cores_graham(C, L, deadline)
    if ours > classic:
        raise InternalInvariantError(f"multi-path cores {ours} exceed classic cores {classic}")
    return float(ours / classic)


def _accept_pair(tasks, m: int) -> tuple[bool, bool]:
    fed = schedulable(tasks, m, "fed").accepted
    our = schedulable(tasks, m, "our").accepted
    if fed and not our:
        raise InternalInvariantError("a set accepted under fed was rejected under our")
    return fed, our


def _eval_sample(cfg: ExperimentConfig, index: int):
    """Per-grid-point values of sample `index` (floats or accept pairs)."""
    metric, sweep, grid = cfg.metric, cfg.sweep, cfg.grid

    if metric == "bound":
        if sweep == "m":
            model = model_of(gen_dag(cfg.params, substream(cfg.seed, index)))
            return tuple(_bound_ratio(model, m) for m in grid)
        out = []
        for p, value in enumerate(grid):
            rng = substream(cfg.seed, p * cfg.samples + index)
            model = model_of(gen_dag(_point_params(cfg.params, sweep, value), rng))
            out.append(_bound_ratio(model, cfg.cores))
        return tuple(out)

    if metric == "cores":
        if sweep == "alpha":
            model = model_of(gen_dag(cfg.params, substream(cfg.seed, index)))
            return tuple(_core_ratio(model, float(a)) for a in grid)
        out = []
        for p, value in enumerate(grid):
            rng = substream(cfg.seed, p * cfg.samples + index)
            model = model_of(gen_dag(_point_params(cfg.params, sweep, value), rng))
            alpha = rng.uniform(*cfg.params.alpha_range)
            out.append(_core_ratio(model, alpha))
        return tuple(out)

    # metric == "accept"
    if sweep == "nu":
        rng = substream(cfg.seed, index)
        budget = Fraction(max(grid)).limit_denominator(10**9) * cfg.cores
        tasks, cums = task_prefix_stream(cfg.params, rng, budget)
        out = []
        for nu in grid:
            cap = Fraction(nu).limit_denominator(10**9) * cfg.cores
            cut = sum(1 for c in cums if c <= cap)
            out.append(_accept_pair(tasks[:cut], cfg.cores))
        return tuple(out)
    if sweep == "m":
        rng = substream(cfg.seed, index)
        nu = Fraction(rng.uniform(*NU_RANGE)).limit_denominator(10**9)
        tasks, cums = task_prefix_stream(cfg.params, rng, nu * max(grid))
        out = []
        for m in grid:
            cap = nu * m
            cut = sum(1 for c in cums if c <= cap)
            out.append(_accept_pair(tasks[:cut], m))
        return tuple(out)
    out = []
    for p, value in enumerate(grid):
        rng = substream(cfg.seed, p * cfg.samples + index)
        nu = Fraction(rng.uniform(*NU_RANGE)).limit_denominator(10**9)
        tasks, _ = task_prefix_stream(_point_params(cfg.params, sweep, value), rng, nu * cfg.cores)
        tasks = tasks[:-1] if tasks else tasks  # the stream's last task overshot
        out.append(_accept_pair(tasks, cfg.cores))
    return tuple(out)


def _quartiles(values: Sequence[float]) -> tuple[float, float, float]:
    if len(values) == 1:
        v = float(values[0])
        return v, v, v
    q = statistics.quantiles(values, n=4, method="inclusive")
    return float(q[0]), float(q[1]), float(q[2])


def _aggregate(values: Sequence[float]) -> dict:
    p25, p50, p75 = _quartiles(values)
    return {
        "mean": statistics.fmean(values),
        "p25": p25,
        "p50": p50,
        "p75": p75,
        "n": len(values),
    }


def run_experiment(cfg: ExperimentConfig) -> list[dict]:
    """All samples of all grid points, aggregated to one row per series point."""
    evaluate = partial(_eval_sample, cfg)
    if cfg.jobs == 1:
        per_sample = [evaluate(i) for i in range(cfg.samples)]
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunk = max(1, cfg.samples // (cfg.jobs * 4))
            per_sample = list(pool.map(evaluate, range(cfg.samples), chunksize=chunk))

    rows: list[dict] = []
    for p, value in enumerate(cfg.grid):
        column = [sample[p] for sample in per_sample]
        if cfg.metric == "accept":
            for mi, method in enumerate(("fed", "our")):
                hits = [1.0 if pair[mi] else 0.0 for pair in column]
                rows.append({"sweep_value": value, "metric": cfg.metric, "method": method,
                             **_aggregate(hits)})
        else:
            rows.append({"sweep_value": value, "metric": cfg.metric, "method": "ratio",
                         **_aggregate(column)})
    return rows


CSV_HEADER = "sweep_value,metric,method,mean,p25,p50,p75,n"


def _fmt(value: Union[int, float]) -> str:
    return str(value) if isinstance(value, int) else repr(float(value))


def rows_to_csv(rows: Sequence[dict]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            _fmt(r["sweep_value"]),
            r["metric"],
            r["method"],
            f"{r['mean']:.6f}",
            f"{r['p25']:.6f}",
            f"{r['p50']:.6f}",
            f"{r['p75']:.6f}",
            str(r["n"]),
        ]))
    return "\n".join(lines) + "\n"
