"""Discrete-time work-conserving scheduler simulator.

Work proceeds in unit ticks: at every tick the set of active vertices (all
predecessors finished, work remaining) is computed and a scheduling policy
picks which of them occupy the m cores.  Preemption is therefore possible at
unit boundaries, which lets the per-tick policies realize both preemptive
and non-preemptive work-conserving behaviors.

Vertices may execute for less than their WCET (per-vertex execution times
are an input).  A vertex with zero execution time finishes at the instant it
becomes eligible, so dummy source/sink vertices never occupy a core.

Besides the simulator itself, the module provides trace validators (the
work-conserving occupancy rule and the all-cores-busy rule between a vertex
and its latest-finishing predecessor), trace-specific critical-path
extraction, and an exhaustive worst-case makespan oracle for tiny instances
that enumerates every work-conserving schedule.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional, Sequence, Union

from .dag import Dag, DagError


@dataclass(frozen=True)
class ExecutionTimes:
    """Per-vertex execution times e(v), each within [0, c(v)]."""

    exec: tuple[int, ...]

    @classmethod
    def full(cls, dag: Dag) -> "ExecutionTimes":
        return cls(tuple(dag.wcets))

    @classmethod
    def sampled(cls, dag: Dag, rng: random.Random) -> "ExecutionTimes":
        return cls(tuple(rng.randint(0, c) for c in dag.wcets))

    def validate_for(self, dag: Dag) -> None:
        if len(self.exec) != len(dag):
            raise DagError("execution-time vector length mismatch")
        for v, (e, c) in enumerate(zip(self.exec, dag.wcets)):
            if not (0 <= e <= c):
                raise DagError(f"execution time of vertex {v} outside [0, {c}]")


@dataclass(frozen=True)
class ExecutionSequence:
    """Which vertex ran on which core in every time unit, plus start/finish.

    grid[t][i] is the vertex occupying core i during [t, t+1), or None.
    Vertices with zero execution time inherit start == finish == the instant
    they became eligible.
    """

    grid: tuple[tuple[Optional[int], ...], ...]
    start: tuple[int, ...]
    finish: tuple[int, ...]
    makespan: int


# -- scheduling policies -------------------------------------------------------


class LexicographicPolicy:
    """Run the lowest-numbered active vertices (may preempt)."""

    def select(self, active, slots, t, eligible_since):
        return active[:slots]


class FifoPolicy:
    """First eligible, first served; ties by vertex id (run-to-completion)."""

    def select(self, active, slots, t, eligible_since):
        return sorted(active, key=lambda v: (eligible_since[v], v))[:slots]


class RandomPolicy:
    """Uniform choice among active vertices, reshuffled every tick.

    Stream: one 64-bit seeded generator; each tick draws rng.sample from the
    active list in ascending id order, so a (dag, m, times, seed) tuple fully
    determines the trace.
    """

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def select(self, active, slots, t, eligible_since):
        return self.rng.sample(active, slots)


class FixedPriorityPolicy:
    """Run active vertices in the order of an explicit priority list."""

    def __init__(self, order: Sequence[int]):
        self.rank = {v: i for i, v in enumerate(order)}

    def select(self, active, slots, t, eligible_since):
        return sorted(active, key=lambda v: self.rank.get(v, len(self.rank)))[:slots]


POLICY_NAMES = ("lexicographic", "fifo", "random")


def make_policy(name: str, seed: Optional[int] = None):
    if name == "lexicographic":
        return LexicographicPolicy()
    if name == "fifo":
        return FifoPolicy()
    if name == "random":
        return RandomPolicy(0 if seed is None else seed)
    raise ValueError(f"unknown policy {name!r}")


# -- the simulator -------------------------------------------------------------


def simulate(
    dag: Dag,
    m: int,
    policy: Union[str, object] = "lexicographic",
    times: Optional[ExecutionTimes] = None,
    seed: Optional[int] = None,
) -> ExecutionSequence:
    """Run the DAG to completion on m cores and record the trace.

    The source starts at time 0; the makespan is the finish time of the
    sink.  The policy only decides which active vertices run when there are
    more of them than idle cores; the work-conserving rule itself is not
    negotiable.
    """
    report = dag.validate()
    if not report.ok:
        raise DagError("; ".join(report.violations))
    if m < 1:
        raise DagError("need at least one core")
    if times is None:
        times = ExecutionTimes.full(dag)
    times.validate_for(dag)
    if isinstance(policy, str):
        policy = make_policy(policy, seed)

    n = len(dag)
    snk = dag.sink
    remaining = list(times.exec)
    pending = [len(dag.pred[v]) for v in range(n)]
    eligible_since = [-1] * n
    start = [-1] * n
    finish = [-1] * n
    done = [False] * n

    def complete(v: int, at: int) -> None:
        # finishes v at time point `at` and cascades zero-work successors
        stack = [(v, at)]
        while stack:
            u, tp = stack.pop()
            done[u] = True
            finish[u] = tp
            if start[u] < 0:
                start[u] = tp
            for w in dag.succ[u]:
                pending[w] -= 1
                if pending[w] == 0:
                    eligible_since[w] = tp
                    if remaining[w] == 0:
                        start[w] = tp
                        stack.append((w, tp))

    src = dag.source
    eligible_since[src] = 0
    if remaining[src] == 0:
        complete(src, 0)

    grid: list[tuple[Optional[int], ...]] = []
    t = 0
    while not done[snk]:
        active = [v for v in range(n) if eligible_since[v] >= 0 and not done[v]]
        if not active:  # pragma: no cover - impossible on a validated DAG
            raise DagError("deadlock: no active vertex but the sink is unfinished")
        chosen = policy.select(active, min(m, len(active)), t, eligible_since)
        row = list(chosen) + [None] * (m - len(chosen))
        grid.append(tuple(row))
        for v in chosen:
            if start[v] < 0:
                start[v] = t
            remaining[v] -= 1
            if remaining[v] == 0:
                complete(v, t + 1)
        t += 1

    return ExecutionSequence(
        grid=tuple(grid),
        start=tuple(start),
        finish=tuple(finish),
        makespan=finish[snk],
    )


# -- trace validation ----------------------------------------------------------


def work_conserving_violations(seq: ExecutionSequence, dag: Dag, m: int) -> list[str]:
    """All invariant violations of a trace (empty list == valid)."""
    bad: list[str] = []
    n = len(dag)
    units: list[list[int]] = [[] for _ in range(n)]
    for t, row in enumerate(seq.grid):
        if len(row) != m:
            bad.append(f"row {t} has width {len(row)}, expected {m}")
            continue
        seen = set()
        for v in row:
            if v is None:
                continue
            if not (0 <= v < n):
                bad.append(f"row {t} references unknown vertex {v}")
            elif v in seen:
                bad.append(f"vertex {v} occupies two cores in unit {t}")
            else:
                seen.add(v)
                units[v].append(t)
    if bad:
        return bad

    execd = [len(u) for u in units]
    for v in range(n):
        if execd[v] > dag.wcets[v]:
            bad.append(f"vertex {v} executed beyond its WCET")
        if execd[v] > 0:
            if seq.start[v] != units[v][0]:
                bad.append(f"start[{v}] does not match the first executed unit")
            if seq.finish[v] != units[v][-1] + 1:
                bad.append(f"finish[{v}] does not match the last executed unit")
        else:
            ready = max((seq.finish[u] for u in dag.pred[v]), default=0)
            if seq.start[v] != ready or seq.finish[v] != ready:
                bad.append(f"zero-work vertex {v} must start and finish when eligible")
    for (u, v) in dag.edges:
        if seq.start[v] < seq.finish[u]:
            bad.append(f"edge ({u}, {v}) violated: successor ran before {u} finished")
    if seq.makespan != seq.finish[dag.sink]:
        bad.append("makespan does not equal the sink finish time")
    if len(seq.grid) != seq.makespan:
        bad.append("grid length does not equal the makespan")
    if bad:
        return bad

    # occupancy rule: busy cores == min(m, active vertices) in every unit
    progressed = [0] * n
    for t, row in enumerate(seq.grid):
        occupied = sum(1 for v in row if v is not None)
        active = 0
        for v in range(n):
            if execd[v] == 0 or progressed[v] >= execd[v]:
                continue
            if all(seq.finish[u] <= t for u in dag.pred[v]):
                active += 1
        if occupied != min(m, active):
            bad.append(f"unit {t}: {occupied} cores busy, {active} vertices active")
        for v in row:
            if v is not None:
                progressed[v] += 1
    return bad


def check_work_conserving(seq: ExecutionSequence, dag: Dag, m: int) -> bool:
    """True iff the trace satisfies every execution-sequence invariant."""
    return not work_conserving_violations(seq, dag, m)


def critical_path(seq: ExecutionSequence, dag: Dag) -> tuple[int, ...]:
    """Backward chain through latest-finishing predecessors, sink to source.

    Ties resolve to the lowest vertex id (predecessor lists are ascending,
    so the strict `>` keeps the first maximum).
    """
    v = dag.sink
    src = dag.source
    chain = [v]
    while v != src:
        best = None
        best_f = -1
        for u in dag.pred[v]:
            if seq.finish[u] > best_f:
                best, best_f = u, seq.finish[u]
        if best is None:  # pragma: no cover - normalized DAGs reach the source
            raise DagError(f"vertex {v} has no predecessor on the way to the source")
        v = best
        chain.append(v)
    chain.reverse()
    return tuple(chain)


def check_busy_between(seq: ExecutionSequence, dag: Dag, m: int) -> bool:
    """All m cores busy between each vertex's critical predecessor and itself.

    For every vertex v with predecessors, let u be the latest-finishing one;
    every unit in [finish(u), start(v)) must occupy all m cores.  This holds
    for every work-conserving trace.
    """
    for v in range(len(dag)):
        if not dag.pred[v]:
            continue
        ready = max(seq.finish[u] for u in dag.pred[v])
        for t in range(ready, seq.start[v]):
            if sum(1 for x in seq.grid[t] if x is not None) != m:
                return False
    return True


# -- exhaustive worst case for tiny instances ------------------------------------

MAX_ORACLE_WORK = 10
MAX_ORACLE_VERTICES = 7
MAX_ORACLE_CORES = 3


def exhaustive_max_makespan(dag: Dag, m: int, vary_exec: bool = False) -> int:
    """Maximum makespan over every work-conserving schedule of a tiny DAG.

    Branches over which active vertices occupy the cores whenever there are
    more active vertices than cores; with ``vary_exec`` the maximum also runs
    over all integer execution-time vectors below the WCETs.  Core identity
    is ignored (only the set of vertices running per unit matters for
    timing), which keeps the enumeration tractable.

    Budget-guarded: volume <= 10, |V| <= 7, m <= 3.
    """
    report = dag.validate()
    if not report.ok:
        raise DagError("; ".join(report.violations))
    if dag.volume() > MAX_ORACLE_WORK or len(dag) > MAX_ORACLE_VERTICES or m > MAX_ORACLE_CORES:
        raise DagError("instance exceeds the enumeration budget")
    if m < 1:
        raise DagError("need at least one core")

    n = len(dag)
    order = dag.topo_order
    pred = dag.pred
    snk = dag.sink
    memo: dict[tuple[int, ...], int] = {}

    def worst(rem: tuple[int, ...]) -> int:
        cached = memo.get(rem)
        if cached is not None:
            return cached
        # a vertex is settled when it has no work left and its predecessors
        # are settled; zero-work vertices settle the moment they are eligible
        settled = [False] * n
        for v in order:
            settled[v] = rem[v] == 0 and all(settled[u] for u in pred[v])
        if settled[snk]:
            memo[rem] = 0
            return 0
        active = [
            v for v in range(n)
            if rem[v] > 0 and all(settled[u] for u in pred[v])
        ]
        if len(active) <= m:
            choices = [tuple(active)]
        else:
            choices = combinations(active, m)
        best = 0
        for chosen in choices:
            nxt = list(rem)
            for v in chosen:
                nxt[v] -= 1
            sub = worst(tuple(nxt))
            if sub > best:
                best = sub
        result = 1 + best
        memo[rem] = result
        return result

    if vary_exec:
        return max(worst(vec) for vec in product(*(range(c + 1) for c in dag.wcets)))
    return worst(tuple(dag.wcets))
