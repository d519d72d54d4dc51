"""DAG task model and graph primitives.

A parallel task is modeled as a directed acyclic graph whose vertices carry
integer worst-case execution times (WCETs, in work units).  All analyses in
this package operate on *normalized* graphs: exactly one source and exactly
one sink, with zero-WCET dummy vertices inserted when the input has several.

Vertex ids are dense integers in [0, n).  External names exist only at the
JSON boundary (see :func:`dag_from_obj` / :func:`dag_to_obj`).

WCETs are non-negative integers.  Time is treated as discrete throughout the
package, so integer work units keep every comparison exact; callers with
fractional WCETs must pre-scale them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class DagError(ValueError):
    """Raised for structurally invalid graphs or malformed queries."""


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]


class Dag:
    """Immutable vertex-weighted DAG.

    Construction performs shape checks only (edge endpoints in range, integer
    WCETs); semantic invariants such as acyclicity or single source/sink are
    reported by :meth:`validate` so that defective graphs can still be
    inspected.  Instances never mutate after construction and are safe for
    concurrent reads.
    """

    __slots__ = ("wcets", "edges", "succ", "pred", "_topo")

    def __init__(self, wcets: Iterable[int], edges: Iterable[tuple[int, int]]):
        ws = tuple(int(c) for c in wcets)
        n = len(ws)
        if n == 0:
            raise DagError("a DAG needs at least one vertex")
        edge_set = set()
        succ: list[list[int]] = [[] for _ in range(n)]
        pred: list[list[int]] = [[] for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise DagError(f"edge ({u}, {v}) references an unknown vertex")
            if (u, v) in edge_set:
                continue
            edge_set.add((u, v))
            succ[u].append(v)
            pred[v].append(u)
        for adj in succ:
            adj.sort()
        for adj in pred:
            adj.sort()
        self.wcets = ws
        self.edges = frozenset(edge_set)
        self.succ = tuple(tuple(a) for a in succ)
        self.pred = tuple(tuple(a) for a in pred)
        self._topo = self._kahn()

    # -- structure ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.wcets)

    def _kahn(self) -> Optional[tuple[int, ...]]:
        """Topological order (ascending-id tie break), or None if cyclic."""
        n = len(self.wcets)
        indeg = [len(self.pred[v]) for v in range(n)]
        order = [v for v in range(n) if indeg[v] == 0]
        head = 0
        while head < len(order):
            u = order[head]
            head += 1
            for w in self.succ[u]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    order.append(w)
        return tuple(order) if len(order) == n else None

    @property
    def is_acyclic(self) -> bool:
        return self._topo is not None

    @property
    def topo_order(self) -> tuple[int, ...]:
        if self._topo is None:
            raise DagError("graph is cyclic")
        return self._topo

    def sources(self) -> list[int]:
        return [v for v in range(len(self)) if not self.pred[v]]

    def sinks(self) -> list[int]:
        return [v for v in range(len(self)) if not self.succ[v]]

    @property
    def source(self) -> int:
        srcs = self.sources()
        if len(srcs) != 1:
            raise DagError(f"expected exactly one source, found {len(srcs)}")
        return srcs[0]

    @property
    def sink(self) -> int:
        snks = self.sinks()
        if len(snks) != 1:
            raise DagError(f"expected exactly one sink, found {len(snks)}")
        return snks[0]

    def _check_vertex(self, v: int) -> int:
        if not (0 <= v < len(self)):
            raise DagError(f"unknown vertex id {v}")
        return v

    # -- validation / normalization ----------------------------------------

    def validate(self) -> ValidationReport:
        """Check semantic invariants and report all violations found."""
        bad: list[str] = []
        for v, c in enumerate(self.wcets):
            if c < 0:
                bad.append(f"negative WCET at vertex {v}")
        if not self.is_acyclic:
            bad.append("cycle detected")
        else:
            srcs, snks = self.sources(), self.sinks()
            if len(srcs) != 1:
                bad.append(f"expected one source, found {len(srcs)}")
            if len(snks) != 1:
                bad.append(f"expected one sink, found {len(snks)}")
            if len(srcs) == 1:
                reach = self.descendants(srcs[0]) | {srcs[0]}
                if len(reach) != len(self):
                    bad.append("not every vertex is reachable from the source")
            if len(snks) == 1:
                reach = self.ancestors(snks[0]) | {snks[0]}
                if len(reach) != len(self):
                    bad.append("not every vertex reaches the sink")
        return ValidationReport(ok=not bad, violations=tuple(bad))

    def normalize(self) -> "Dag":
        """Return an equivalent DAG with exactly one source and one sink.

        If the graph already complies, it is returned unchanged.  Otherwise a
        fresh zero-WCET vertex is appended (source first, then sink) with
        edges to all former sources / from all former sinks.  Volume and
        longest-path length are preserved.
        """
        if not self.is_acyclic:
            raise DagError("cannot normalize a cyclic graph")
        srcs, snks = self.sources(), self.sinks()
        if len(srcs) == 1 and len(snks) == 1:
            return self
        ws = list(self.wcets)
        edges = set(self.edges)
        if len(srcs) > 1:
            s = len(ws)
            ws.append(0)
            edges.update((s, v) for v in srcs)
        if len(snks) > 1:
            t = len(ws)
            ws.append(0)
            edges.update((v, t) for v in snks)
        return Dag(ws, edges)

    # -- measures ------------------------------------------------------------

    def volume(self, vertices: Optional[Iterable[int]] = None) -> int:
        """Total WCET of the whole graph, or of a vertex subset."""
        if vertices is None:
            return sum(self.wcets)
        return sum(self.wcets[self._check_vertex(v)] for v in vertices)

    def longest_len(self, weights: Optional[Sequence[int]] = None) -> int:
        """Length of the longest complete path, optionally under a WCET overlay."""
        w = self.wcets if weights is None else weights
        return self._down(w)[self.source]

    def longest_path(self, weights: Optional[Sequence[int]] = None) -> tuple[int, ...]:
        """A maximum-total-WCET source-to-sink path.

        Ties are broken deterministically: among all maximum-length complete
        paths, the lexicographically smallest vertex-id sequence is returned.
        An optional ``weights`` overlay substitutes the stored WCETs without
        copying the graph (used by the path decomposition).
        """
        w = self.wcets if weights is None else weights
        down = self._down(w)
        succ = self.succ
        v = self.source
        path = [v]
        while succ[v]:
            need = down[v] - w[v]
            # ascending-id successor list: first hit is the smallest valid id
            for u in succ[v]:
                if down[u] == need:
                    v = u
                    break
            else:  # pragma: no cover - down[] always admits a continuation
                raise DagError("longest-path reconstruction failed")
            path.append(v)
        return tuple(path)

    def _down(self, w: Sequence[int]) -> list[int]:
        """down[v] = max path length from v to the sink, inclusive of w[v]."""
        self.sink  # raises unless unique
        down = [0] * len(self)
        succ = self.succ
        for v in reversed(self.topo_order):
            adj = succ[v]
            best = 0
            for u in adj:
                d = down[u]
                if d > best:
                    best = d
            down[v] = best + w[v]
        return down

    # -- ancestry ------------------------------------------------------------

    def predecessors(self, v: int) -> set[int]:
        return set(self.pred[self._check_vertex(v)])

    def ancestors(self, v: int) -> set[int]:
        """Transitive closure of the predecessor relation."""
        self._check_vertex(v)
        seen: set[int] = set()
        stack = list(self.pred[v])
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(self.pred[u])
        return seen

    def descendants(self, v: int) -> set[int]:
        self._check_vertex(v)
        seen: set[int] = set()
        stack = list(self.succ[v])
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(self.succ[u])
        return seen

    def reaches(self, u: int, v: int) -> bool:
        """True iff there is a directed path from u to v (u != v required)."""
        self._check_vertex(u)
        self._check_vertex(v)
        return v in self.descendants(u)

    # -- path predicates -------------------------------------------------------

    def is_path(self, vs: Sequence[int]) -> bool:
        """True iff vs is a non-empty edge-connected path without repeats."""
        if not vs:
            return False
        if len(set(vs)) != len(vs):
            return False
        return all((vs[i], vs[i + 1]) in self.edges for i in range(len(vs) - 1))

    def is_generalized_path(self, vs: Sequence[int]) -> bool:
        """True iff each consecutive pair is connected by some directed path.

        A singleton is always a generalized path; the empty sequence is not.
        """
        if not vs:
            return False
        for v in vs:
            self._check_vertex(v)
        return all(self.reaches(vs[i], vs[i + 1]) for i in range(len(vs) - 1))


# -- JSON boundary -------------------------------------------------------------
#
# Format: {"vertices": [{"name": str, "wcet": int}], "edges": [[name, name]]}
# Names map to dense vertex ids in declaration order.


def dag_from_obj(obj: dict) -> tuple[Dag, list[str]]:
    """Build a Dag from its JSON object form; returns (dag, names)."""
    try:
        vertices = obj["vertices"]
        names = [str(v["name"]) for v in vertices]
        wcets = [int(v["wcet"]) for v in vertices]
        raw_edges = obj["edges"]
    except (KeyError, TypeError) as exc:
        raise DagError(f"malformed DAG object: {exc}") from exc
    if len(set(names)) != len(names):
        raise DagError("duplicate vertex names")
    index = {name: i for i, name in enumerate(names)}
    edges = []
    for e in raw_edges:
        try:
            u, v = e
            edges.append((index[str(u)], index[str(v)]))
        except (KeyError, ValueError, TypeError) as exc:
            raise DagError(f"malformed edge {e!r}: {exc}") from exc
    return Dag(wcets, edges), names


def dag_to_obj(dag: Dag, names: Optional[Sequence[str]] = None) -> dict:
    """JSON object form of a Dag; default names are v0..v{n-1}."""
    if names is None:
        names = [f"v{i}" for i in range(len(dag))]
    if len(names) != len(dag):
        raise DagError("names/vertex count mismatch")
    return {
        "vertices": [{"name": names[i], "wcet": dag.wcets[i]} for i in range(len(dag))],
        "edges": [[names[u], names[v]] for (u, v) in sorted(dag.edges)],
    }
