"""Schedulability analysis for parallel tasks modeled as DAGs.

Provides Graham's classic response-time bound, a tighter bound built from
the lengths of multiple disjoint long paths, minimal core allocations for
federated scheduling, a work-conserving scheduler simulator that validates
every bound empirically, and randomized experiment harnesses.
"""

from .bounds import (
    cores_graham,
    cores_multipath,
    fractional_cores_graham,
    fractional_cores_multipath,
    graham_bound,
    k_used,
    multipath_bound,
)
from .dag import Dag, DagError, ValidationReport, dag_from_obj, dag_to_obj
from .decompose import MultiPathModel, PathList, decompose, model_of, residue
from .federated import SchedResult, Task, classify, schedulable, acceptance_ratio
from .sim import (
    ExecutionSequence,
    ExecutionTimes,
    check_busy_between,
    check_work_conserving,
    critical_path,
    exhaustive_max_makespan,
    simulate,
)
from .taskgen import GenParams, gen_dag, gen_dag_gnm, gen_taskset, make_task, substream

__all__ = [
    "Dag",
    "DagError",
    "ValidationReport",
    "dag_from_obj",
    "dag_to_obj",
    "PathList",
    "MultiPathModel",
    "decompose",
    "model_of",
    "residue",
    "graham_bound",
    "multipath_bound",
    "k_used",
    "cores_graham",
    "cores_multipath",
    "fractional_cores_graham",
    "fractional_cores_multipath",
    "ExecutionTimes",
    "ExecutionSequence",
    "simulate",
    "check_work_conserving",
    "check_busy_between",
    "critical_path",
    "exhaustive_max_makespan",
    "GenParams",
    "gen_dag",
    "gen_dag_gnm",
    "make_task",
    "gen_taskset",
    "substream",
    "Task",
    "SchedResult",
    "classify",
    "schedulable",
    "acceptance_ratio",
]

__version__ = "0.1.0"
