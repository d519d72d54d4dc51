"""Greedy decomposition of a DAG into disjoint long generalized paths.

The loop repeatedly takes the longest complete path of the current residue
graph (the graph with all previously extracted workload zeroed), drops the
vertices that carry no remaining work, records the rest, and zeroes what it
recorded, until the residual volume is zero.  The recorded per-path lengths,
together with the total workload, form the multi-path abstraction that the
bound and core-allocation formulas consume.

Residue graphs share the vertex/edge structure of the original graph; only
the WCET vector is overlaid, which keeps the whole decomposition within
O(V * (V + E)).
"""

from __future__ import annotations

from dataclasses import dataclass

from .dag import Dag, DagError


@dataclass(frozen=True)
class PathList:
    """Ordered disjoint generalized paths covering all positive workload.

    ``lengths[0]`` is the longest-path length of the graph, the lengths are
    non-increasing, and they sum to the graph volume.  A zero-volume graph
    yields the empty list (``k_bar == -1``).
    """

    paths: tuple[tuple[int, ...], ...]
    lengths: tuple[int, ...]

    @property
    def k_bar(self) -> int:
        return len(self.paths) - 1


@dataclass(frozen=True)
class MultiPathModel:
    """A DAG abstracted as total work plus its decomposed path lengths."""

    total_work: int
    lengths: tuple[int, ...]

    def __post_init__(self):
        if self.total_work < 0:
            raise ValueError("total_work must be non-negative")
        if sum(self.lengths) != self.total_work:
            raise ValueError("path lengths must sum to the total work")
        if any(l <= 0 for l in self.lengths):
            raise ValueError("path lengths must be positive")
        if any(self.lengths[i] < self.lengths[i + 1] for i in range(len(self.lengths) - 1)):
            raise ValueError("path lengths must be non-increasing")

    @property
    def longest(self) -> int:
        """Longest-path length; 0 for an empty (zero-work) model."""
        return self.lengths[0] if self.lengths else 0

    @property
    def k_bar(self) -> int:
        return len(self.lengths) - 1


def residue(dag: Dag, path) -> Dag:
    """The same graph with the WCETs of ``path`` vertices set to zero."""
    ws = list(dag.wcets)
    for v in path:
        if not (0 <= v < len(dag)):
            raise DagError(f"unknown vertex id {v}")
        ws[v] = 0
    return Dag(ws, dag.edges)


def decompose(dag: Dag) -> PathList:
    """Extract disjoint long generalized paths until no workload remains.

    Requires a valid normalized DAG.  The extraction order is deterministic
    because longest-path ties resolve to the lexicographically smallest
    vertex sequence.
    """
    report = dag.validate()
    if not report.ok:
        raise DagError("; ".join(report.violations))
    weights = list(dag.wcets)
    vol = sum(weights)
    paths: list[tuple[int, ...]] = []
    lengths: list[int] = []
    while vol > 0:
        lam = dag.longest_path(weights)
        kept = tuple(v for v in lam if weights[v] > 0)
        length = sum(weights[v] for v in kept)
        paths.append(kept)
        lengths.append(length)
        for v in kept:
            weights[v] = 0
        vol -= length
    return PathList(paths=tuple(paths), lengths=tuple(lengths))


def model_of(dag: Dag) -> MultiPathModel:
    """Multi-path model of a valid normalized DAG."""
    pl = decompose(dag)
    return MultiPathModel(total_work=dag.volume(), lengths=pl.lengths)
