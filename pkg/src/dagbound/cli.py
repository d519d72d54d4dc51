"""Command-line interface.

Subcommands: analyze, decompose, simulate, gen, gen-taskset, sched,
experiment.  All randomness flows from --seed, so every command is
byte-reproducible; experiment sweeps evaluate per-sample substreams and are
also reproducible across --jobs settings.

Exit codes: 0 success, 1 input error, 2 internal invariant violation (a
dominance or safety identity failed, which indicates a bug, never data).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import graham_bound, k_used, multipath_bound
from .dag import Dag, DagError, dag_from_obj, dag_to_obj
from .decompose import decompose, model_of
from .experiments import (
    DEFAULT_GRIDS,
    DEFAULT_METRIC,
    ExperimentConfig,
    InternalInvariantError,
    rows_to_csv,
    run_experiment,
)
from .federated import METHODS, schedulable, taskset_from_obj, taskset_to_obj
from .sim import (
    POLICY_NAMES,
    ExecutionTimes,
    check_busy_between,
    check_work_conserving,
    simulate,
)
from .taskgen import GenParams, gen_dag, gen_taskset, substream


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_dag(path: str) -> tuple[Dag, list[str]]:
    """Load, validate and normalize a DAG file; names track added dummies."""
    dag, names = dag_from_obj(_load_json(path))
    report = dag.validate()
    # source/sink multiplicity is repaired by normalize(); the rest is fatal
    hard = [v for v in report.violations if "cycle" in v or "negative" in v]
    if hard:
        raise InputError(f"{path}: " + "; ".join(hard))
    norm = dag.normalize()
    while len(names) < len(norm):
        base = "_src" if len(names) == len(dag) and len(dag.sources()) > 1 else "_snk"
        name = base
        k = 0
        while name in names:
            k += 1
            name = f"{base}{k}"
        names.append(name)
    return norm, names


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(obj, out: str | None) -> None:
    _emit(json.dumps(obj, indent=2) + "\n", out)


def _gen_params(args) -> GenParams:
    obj = _load_json(args.params) if getattr(args, "params", None) else {}
    try:
        return GenParams.from_obj(obj)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad generator parameters: {exc}") from exc


# -- subcommands -----------------------------------------------------------------


def cmd_analyze(args) -> int:
    dag, _ = _load_dag(args.dag)
    model = model_of(dag)
    g = graham_bound(model.total_work, model.longest, args.cores)
    b = multipath_bound(model, args.cores)
    _emit_json(
        {
            "volume": model.total_work,
            "longest_path_length": model.longest,
            "path_lengths": list(model.lengths),
            "k_bar": model.k_bar,
            "k_used": k_used(model, args.cores) if model.lengths else 0,
            "cores": args.cores,
            "graham": float(g),
            "multipath": float(b),
            "normalized": float(b / g) if g else 1.0,
        },
        args.out,
    )
    return 0


def cmd_decompose(args) -> int:
    dag, names = _load_dag(args.dag)
    pl = decompose(dag)
    _emit_json(
        {
            "k_bar": pl.k_bar,
            "paths": [[names[v] for v in path] for path in pl.paths],
            "lengths": list(pl.lengths),
        },
        args.out,
    )
    return 0


def cmd_simulate(args) -> int:
    dag, names = _load_dag(args.dag)
    times = ExecutionTimes.full(dag)
    if args.exec_times:
        table = _load_json(args.exec_times)
        index = {name: i for i, name in enumerate(names)}
        exec_vec = list(dag.wcets)
        for name, value in table.items():
            if name not in index:
                raise InputError(f"unknown vertex name {name!r} in {args.exec_times}")
            exec_vec[index[name]] = int(value)
        times = ExecutionTimes(tuple(exec_vec))
        try:
            times.validate_for(dag)
        except DagError as exc:
            raise InputError(str(exc)) from exc
    seq = simulate(dag, args.cores, policy=args.policy, times=times, seed=args.seed)
    obj = {
        "makespan": seq.makespan,
        "start": {names[v]: seq.start[v] for v in range(len(dag))},
        "finish": {names[v]: seq.finish[v] for v in range(len(dag))},
        "grid": [[None if v is None else names[v] for v in row] for row in seq.grid],
    }
    rc = 0
    if args.check:
        bound = multipath_bound(model_of(dag), args.cores)
        checks = {
            "work_conserving": check_work_conserving(seq, dag, args.cores),
            "busy_between": check_busy_between(seq, dag, args.cores),
            "multipath_bound": float(bound),
            "bound_safe": seq.makespan <= bound,
        }
        obj["checks"] = checks
        if not all(checks[k] for k in ("work_conserving", "busy_between", "bound_safe")):
            rc = 2
    _emit_json(obj, args.out)
    return rc


def cmd_gen(args) -> int:
    params = _gen_params(args)
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for i in range(args.count):
        dag = gen_dag(params, substream(args.seed, i))
        path = out_dir / f"dag_{i:04d}.json"
        path.write_text(json.dumps(dag_to_obj(dag), indent=2) + "\n", encoding="utf-8")
        written.append(path.name)
    sys.stdout.write(json.dumps({"written": written, "dir": str(out_dir)}, indent=2) + "\n")
    return 0


def cmd_gen_taskset(args) -> int:
    params = _gen_params(args)
    if not (0.0 <= args.nu <= 1.0):
        raise InputError("--nu must lie in [0, 1]")
    tasks = gen_taskset(args.nu, args.cores, params, substream(args.seed, 0))
    _emit_json(taskset_to_obj(tasks), args.out)
    return 0


def cmd_sched(args) -> int:
    try:
        tasks = taskset_from_obj(_load_json(args.taskset))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad task set: {exc}") from exc
    result = schedulable(tasks, args.cores, args.method)
    _emit_json(result.to_obj(), args.out)
    return 0


def cmd_experiment(args) -> int:
    params = _gen_params(args)
    metric = args.metric or DEFAULT_METRIC[args.sweep]
    if args.grid:
        raw = [x for x in args.grid.split(",") if x]
        grid = tuple(int(x) if args.sweep in ("m", "nvertex") else float(x) for x in raw)
    else:
        grid = DEFAULT_GRIDS[args.sweep]
    try:
        cfg = ExperimentConfig(
            sweep=args.sweep,
            metric=metric,
            grid=grid,
            samples=args.samples,
            cores=args.cores,
            params=params,
            seed=args.seed,
            jobs=args.jobs,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rows = run_experiment(cfg)
    if args.format == "json":
        _emit_json(rows, args.out)
    else:
        _emit(rows_to_csv(rows), args.out)
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")
    common.add_argument("--samples", type=int, default=500, help="samples per grid point")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="csv",
                        help="experiment output format")

    parser = argparse.ArgumentParser(
        prog="dagbound",
        description="Response-time bounds, core allocation and simulation for DAG tasks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="bounds for one DAG")
    p.add_argument("--dag", required=True)
    p.add_argument("--cores", type=int, required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decompose", parents=[common], help="generalized path list of a DAG")
    p.add_argument("--dag", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("simulate", parents=[common], help="run the work-conserving simulator")
    p.add_argument("--dag", required=True)
    p.add_argument("--cores", type=int, required=True)
    p.add_argument("--policy", choices=POLICY_NAMES, default="lexicographic")
    p.add_argument("--exec-times", default=None, help="JSON name->units, defaults to WCETs")
    p.add_argument("--check", action="store_true",
                   help="validate the trace and compare against the bound")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen", parents=[common], help="generate random DAG files")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--params", default=None, help="JSON generator parameter overrides")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("gen-taskset", parents=[common], help="generate a random task set")
    p.add_argument("--nu", type=float, required=True, help="target normalized utilization")
    p.add_argument("--cores", type=int, required=True)
    p.add_argument("--params", default=None)
    p.set_defaults(func=cmd_gen_taskset)

    p = sub.add_parser("sched", parents=[common], help="federated schedulability decision")
    p.add_argument("--taskset", required=True)
    p.add_argument("--cores", type=int, required=True)
    p.add_argument("--method", choices=METHODS, required=True)
    p.set_defaults(func=cmd_sched)

    p = sub.add_parser("experiment", parents=[common], help="randomized sweep, CSV/JSON out")
    p.add_argument("--sweep", choices=tuple(DEFAULT_GRIDS), required=True)
    p.add_argument("--metric", choices=("bound", "cores", "accept"), default=None)
    p.add_argument("--grid", default=None, help="comma-separated sweep values")
    p.add_argument("--cores", type=int, default=32, help="fixed core count where applicable")
    p.add_argument("--params", default=None)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (DagError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except InternalInvariantError as exc:  # pragma: no cover - indicates a bug
        sys.stderr.write(f"internal invariant violated: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
