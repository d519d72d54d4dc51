"""Federated scheduling of multi-DAG task sets.

Heavy tasks (total work >= deadline) get dedicated cores, sized either by
the classic allocation from Graham's bound ("fed") or by the multi-path
allocation ("our").  Light tasks are treated as sequential sporadic tasks
and partitioned on the leftover cores by first-fit decreasing density with
a per-core density bound of 1 (a conservative single-core EDF admission
test applied identically under both methods, so the comparison is fair).

A heavy task whose deadline equals its longest-path length is rejected
under "fed" (the classic core formula diverges there) but is accepted by
"our" with one core per decomposed path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .bounds import cores_graham, cores_multipath
from .decompose import MultiPathModel

METHODS = ("fed", "our")


@dataclass(frozen=True)
class Task:
    """A sporadic DAG task: multi-path model plus deadline and period."""

    model: MultiPathModel
    deadline: int
    period: int

    def __post_init__(self):
        if not (self.model.longest <= self.deadline <= self.period):
            raise ValueError("need longest path <= deadline <= period")
        if self.period <= 0:
            raise ValueError("period must be positive")

    @property
    def utilization(self) -> Fraction:
        return Fraction(self.model.total_work, self.period)

    @property
    def density(self) -> Fraction:
        return Fraction(self.model.total_work, self.deadline)

    @property
    def heavy(self) -> bool:
        return self.model.total_work >= self.deadline

    def to_obj(self) -> dict:
        return {
            "total_work": self.model.total_work,
            "lengths": list(self.model.lengths),
            "deadline": self.deadline,
            "period": self.period,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "Task":
        model = MultiPathModel(
            total_work=int(obj["total_work"]),
            lengths=tuple(int(x) for x in obj["lengths"]),
        )
        return cls(model=model, deadline=int(obj["deadline"]), period=int(obj["period"]))


TaskSet = Sequence[Task]


def classify(task: Task) -> str:
    return "heavy" if task.heavy else "light"


@dataclass(frozen=True)
class SchedResult:
    accepted: bool
    heavy_cores: int
    light_partition: Optional[tuple[tuple[int, ...], ...]]
    reason: Optional[str] = None

    def to_obj(self) -> dict:
        return {
            "accepted": self.accepted,
            "heavy_cores": self.heavy_cores,
            "light_partition": None
            if self.light_partition is None
            else [list(core) for core in self.light_partition],
            "reason": self.reason,
        }


def _heavy_cores(task: Task, method: str) -> Optional[int]:
    """Dedicated cores for one heavy task, or None if the method rejects it."""
    model = task.model
    if method == "our":
        return cores_multipath(model, task.deadline)
    if task.deadline <= model.longest:
        return None  # classic formula needs D > L
    return cores_graham(model.total_work, model.longest, task.deadline)


def schedulable(tasks: TaskSet, m: int, method: str) -> SchedResult:
    """Accept or reject a task set on m cores under the given method."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if m < 1:
        raise ValueError("need at least one core")

    heavy_total = 0
    lights: list[int] = []
    for i, task in enumerate(tasks):
        if task.heavy:
            cores = _heavy_cores(task, method)
            if cores is None:
                return SchedResult(False, heavy_total, None, f"task {i}: deadline equals longest path")
            heavy_total += cores
            if heavy_total > m:
                return SchedResult(False, heavy_total, None, "heavy tasks exceed the core budget")
        else:
            lights.append(i)

    free = m - heavy_total
    if not lights:
        return SchedResult(True, heavy_total, ())
    if free == 0:
        return SchedResult(False, heavy_total, None, "no cores left for light tasks")

    # first-fit decreasing by density, per-core density bound 1
    by_density = sorted(lights, key=lambda i: (-tasks[i].density, i))
    load = [Fraction(0)] * free
    assignment: list[list[int]] = [[] for _ in range(free)]
    for i in by_density:
        density = tasks[i].density
        for core in range(free):
            if load[core] + density <= 1:
                load[core] += density
                assignment[core].append(i)
                break
        else:
            return SchedResult(False, heavy_total, None, f"light task {i} fits on no core")
    return SchedResult(True, heavy_total, tuple(tuple(core) for core in assignment))


def acceptance_ratio(tasksets: Sequence[TaskSet], m: int, method: str) -> Fraction:
    """Fraction of the given task sets accepted by the method."""
    if not tasksets:
        return Fraction(1)
    hits = sum(1 for ts in tasksets if schedulable(ts, m, method).accepted)
    return Fraction(hits, len(tasksets))


def taskset_to_obj(tasks: TaskSet) -> dict:
    return {"tasks": [t.to_obj() for t in tasks]}


def taskset_from_obj(obj: dict) -> list[Task]:
    return [Task.from_obj(t) for t in obj["tasks"]]
