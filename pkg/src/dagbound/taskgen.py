"""Randomized workload generation for the experiment harnesses.

DAGs come from the layered Erdos-Renyi construction: vertices 0..n-1, and
for every ordered pair i < j an edge i -> j is added with probability pf
(the parallelism factor; larger pf gives more sequential graphs).  The
result is normalized with zero-WCET dummies.

Deadlines follow D = T = floor(L + alpha * (C - L)) clamped to >= L, so
alpha = 0 pins the deadline to the longest path and alpha = 1 to the total
work.  Task sets are filled until the next task would push total utilization
past the target; that task is discarded.

Reproducibility: one seed, with per-sample substreams derived by counter, so
any sample can be regenerated independently of evaluation order.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .dag import Dag
from .decompose import model_of
from .federated import Task

DEFAULT_WCETS = (50, 100)
DEFAULT_PF = (0.1, 0.9)
DEFAULT_NVERTEX = (50, 250)
DEFAULT_ALPHA = (0.0, 0.5)


@dataclass(frozen=True)
class GenParams:
    wcet_range: tuple[int, int] = DEFAULT_WCETS
    pf_range: tuple[float, float] = DEFAULT_PF
    nvertex_range: tuple[int, int] = DEFAULT_NVERTEX
    alpha_range: tuple[float, float] = DEFAULT_ALPHA
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.wcet_range
        if not (0 <= lo <= hi):
            raise ValueError("bad WCET range")
        lo, hi = self.pf_range
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValueError("parallelism factor must stay within [0, 1]")
        lo, hi = self.nvertex_range
        if not (1 <= lo <= hi):
            raise ValueError("bad vertex-count range")
        lo, hi = self.alpha_range
        if not (0.0 <= lo <= hi):
            raise ValueError("alpha must be non-negative")

    @classmethod
    def from_obj(cls, obj: dict) -> "GenParams":
        kw = {}
        for key in ("wcet_range", "nvertex_range"):
            if key in obj:
                kw[key] = tuple(int(x) for x in obj[key])
        for key in ("pf_range", "alpha_range"):
            if key in obj:
                kw[key] = tuple(float(x) for x in obj[key])
        if "seed" in obj:
            kw["seed"] = int(obj["seed"])
        return cls(**kw)

    def to_obj(self) -> dict:
        return {
            "wcet_range": list(self.wcet_range),
            "pf_range": list(self.pf_range),
            "nvertex_range": list(self.nvertex_range),
            "alpha_range": list(self.alpha_range),
            "seed": self.seed,
        }


_MIX = 0x9E3779B97F4A7C15


def substream(seed: int, index: int) -> random.Random:
    """Independent deterministic RNG for the index-th sample of a seed."""
    return random.Random((seed * _MIX + index) & 0xFFFFFFFFFFFFFFFF)


def gen_dag(params: GenParams, rng: random.Random) -> Dag:
    """One random normalized DAG; consumes a fixed draw order from rng."""
    n = rng.randint(*params.nvertex_range)
    pf = rng.uniform(*params.pf_range)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < pf:
                edges.append((i, j))
    wcets = [rng.randint(*params.wcet_range) for _ in range(n)]
    return Dag(wcets, edges).normalize()


def gen_dag_gnm(n: int, n_edges: int, wcet_range: tuple[int, int], rng: random.Random) -> Dag:
    """Random normalized DAG with an exact edge count (for scaling runs)."""
    total = n * (n - 1) // 2
    if n_edges > total:
        raise ValueError("more edges requested than ordered pairs available")
    chosen = rng.sample(range(total), n_edges)

    def row_start(i: int) -> int:
        return i * (2 * n - i - 1) // 2

    edges = []
    for idx in chosen:
        # linear index -> pair (i, j), i < j, rows of decreasing length
        i = int((2 * n - 1 - math.sqrt((2 * n - 1) ** 2 - 8 * idx)) / 2)
        while i + 1 < n and row_start(i + 1) <= idx:
            i += 1
        while row_start(i) > idx:
            i -= 1
        edges.append((i, i + 1 + idx - row_start(i)))
    wcets = [rng.randint(*wcet_range) for _ in range(n)]
    return Dag(wcets, edges).normalize()


def make_task(dag: Dag, alpha: float) -> Task:
    """Task with D = T = floor(L + alpha*(C - L)), clamped to >= L."""
    model = model_of(dag)
    C, L = model.total_work, model.longest
    deadline = max(L, math.floor(L + alpha * (C - L)))
    return Task(model=model, deadline=deadline, period=deadline)


def task_prefix_stream(
    params: GenParams, rng: random.Random, budget: Fraction
) -> tuple[list[Task], list[Fraction]]:
    """Tasks in generation order until cumulative utilization exceeds budget.

    Returns the tasks together with the running utilization sums; the last
    task is always the one that overshot.  Sharing one stream across several
    budgets (each budget keeping its own prefix) reproduces independent runs
    exactly, because generation stops at the first overshoot either way.
    """
    tasks: list[Task] = []
    cums: list[Fraction] = []
    total = Fraction(0)
    while True:
        dag = gen_dag(params, rng)
        alpha = rng.uniform(*params.alpha_range)
        task = make_task(dag, alpha)
        if task.utilization == 0:
            raise ValueError("zero-utilization task; the budget would never fill")
        total += task.utilization
        tasks.append(task)
        cums.append(total)
        if total > budget:
            return tasks, cums


def gen_taskset(target_nu: float, m: int, params: GenParams, rng: random.Random) -> list[Task]:
    """Tasks filled up to total utilization target_nu * m (overshoot dropped)."""
    if not (0.0 <= target_nu <= 1.0):
        raise ValueError("normalized utilization must lie in [0, 1]")
    budget = Fraction(target_nu).limit_denominator(10**9) * m
    tasks, _ = task_prefix_stream(params, rng, budget)
    return tasks[:-1]
