"""Closed-form response-time bounds and core-allocation formulas.

Two response-time bounds for a DAG task under any work-conserving scheduler
on m identical cores:

* Graham's bound,  L + (C - L) / m,  using total work C and longest-path
  length L only;
* the multi-path bound,  min over j of  L + (C - sum(L_0..L_j)) / (m - j),
  which additionally exploits the lengths of the decomposed long paths and
  is never larger than Graham's bound (the j = 0 term reproduces it).

The corresponding minimum core counts for meeting a deadline D follow the
same pattern; the multi-path allocation never exceeds the classic one.

All arithmetic is exact (integers and fractions.Fraction): the dominance
relations above are identities, not approximations, and the tests check
them with exact comparisons.  Floats appear only when results are printed.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil
from typing import Union

from .decompose import MultiPathModel

Number = Union[int, Fraction]


def graham_bound(C: int, L: int, m: int) -> Fraction:
    """Work-conserving response-time bound from total work and longest path."""
    if m < 1:
        raise ValueError("need at least one core")
    if not (C >= L >= 0):
        raise ValueError("need total work >= longest path length >= 0")
    return L + Fraction(C - L, m)


def k_used(model: MultiPathModel, m: int) -> int:
    """Number of extra paths the multi-path bound may exploit on m cores."""
    return min(model.k_bar, m - 1)


def multipath_bound(model: MultiPathModel, m: int) -> Fraction:
    """Multi-path response-time bound; never exceeds graham_bound."""
    if m < 1:
        raise ValueError("need at least one core")
    if not model.lengths:
        return Fraction(0)
    C = model.total_work
    L = model.longest
    best = None
    covered = 0
    for j in range(k_used(model, m) + 1):
        covered += model.lengths[j]
        term = L + Fraction(C - covered, m - j)
        if best is None or term < best:
            best = term
    return best


def cores_graham(C: int, L: int, D: Number) -> int:
    """Cores required by the classic federated allocation; needs C >= D > L."""
    if not (C >= D):
        raise ValueError("task must be heavy (total work >= deadline)")
    if not (D > L):
        raise ValueError("deadline must exceed the longest path length")
    return ceil(Fraction(C - L) / (D - L))


def cores_multipath(model: MultiPathModel, D: Number) -> int:
    """Minimum cores meeting deadline D under the multi-path bound.

    Accepts D == L (the decomposed paths then run on k_bar + 1 dedicated
    cores without mutual interference); never exceeds cores_graham where
    both are defined.
    """
    C = model.total_work
    L = model.longest
    if not (C >= D >= L):
        raise ValueError("need total work >= deadline >= longest path length")
    if not model.lengths:
        return 1
    k_bar = model.k_bar
    best = k_bar + 1  # the j = k_bar case: one core per decomposed path
    if D > L:
        covered = 0
        for j in range(k_bar):
            covered += model.lengths[j]
            mj = ceil(Fraction(C - covered) / (D - L)) + j
            if mj < best:
                best = mj
    return best


def fractional_cores_graham(C: int, L: int, D: Number) -> Fraction:
    """cores_graham without the ceiling; for core-ratio experiments."""
    if not (C >= D):
        raise ValueError("task must be heavy (total work >= deadline)")
    if not (D > L):
        raise ValueError("deadline must exceed the longest path length")
    return Fraction(C - L) / (D - L)


def fractional_cores_multipath(model: MultiPathModel, D: Number) -> Fraction:
    """cores_multipath without the ceilings.

    The j = k_bar alternative is k_bar + 1 exactly as in the integer
    formula; it never contained a ceiling to drop.
    """
    C = model.total_work
    L = model.longest
    if not (C >= D):
        raise ValueError("task must be heavy (total work >= deadline)")
    if not (D > L):
        raise ValueError("deadline must exceed the longest path length")
    if not model.lengths:
        return Fraction(1)
    k_bar = model.k_bar
    best = Fraction(k_bar + 1)
    covered = 0
    for j in range(k_bar):
        covered += model.lengths[j]
        mj = Fraction(C - covered) / (D - L) + j
        if mj < best:
            best = mj
    return best
