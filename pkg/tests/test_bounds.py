import random
from fractions import Fraction

import pytest

from dagbound import (
    cores_graham,
    cores_multipath,
    fractional_cores_graham,
    fractional_cores_multipath,
    graham_bound,
    model_of,
    multipath_bound,
)
from dagbound.decompose import MultiPathModel

from conftest import random_raw_dag

DEMO_MODEL = MultiPathModel(total_work=10, lengths=(6, 3, 1))


def random_model(rng):
    d = random_raw_dag(rng, max_n=7, max_wcet=5).normalize()
    return model_of(d)


class TestGrahamBound:
    def test_worked_example(self):
        assert graham_bound(10, 6, 2) == 8

    def test_single_core_serializes(self):
        assert graham_bound(10, 6, 1) == 10

    def test_sequential_task(self):
        for m in (1, 2, 7):
            assert graham_bound(6, 6, m) == 6

    def test_zero_cores_rejected(self):
        with pytest.raises(ValueError):
            graham_bound(10, 6, 0)

    def test_exact_rational(self):
        assert graham_bound(10, 6, 3) == Fraction(22, 3)


class TestMultipathBound:
    def test_worked_example_two_cores(self):
        assert multipath_bound(DEMO_MODEL, 2) == 7

    def test_three_cores_hits_longest_path(self):
        assert multipath_bound(DEMO_MODEL, 3) == 6

    def test_one_core_degrades_to_graham(self):
        assert multipath_bound(DEMO_MODEL, 1) == 10

    def test_empty_model(self):
        assert multipath_bound(MultiPathModel(0, ()), 4) == 0

    def test_dominates_graham(self):
        rng = random.Random(123)
        for _ in range(400):
            model = random_model(rng)
            for m in (1, 2, 3, 5, 9):
                b = multipath_bound(model, m)
                g = graham_bound(model.total_work, model.longest, m)
                assert b <= g
                assert b >= model.longest

    def test_non_increasing_in_cores(self):
        rng = random.Random(124)
        for _ in range(100):
            model = random_model(rng)
            values = [multipath_bound(model, m) for m in range(1, 12)]
            assert all(values[i] >= values[i + 1] for i in range(len(values) - 1))

    def test_enough_cores_reach_longest_path(self):
        rng = random.Random(125)
        for _ in range(100):
            model = random_model(rng)
            if not model.lengths:
                continue
            for m in (model.k_bar + 1, model.k_bar + 3):
                assert multipath_bound(model, m) == model.longest

    def test_min_over_all_j_not_just_last(self):
        # a long second path can make an intermediate j optimal
        model = MultiPathModel(total_work=20, lengths=(8, 8, 2, 1, 1))
        values = {
            j: model.longest + Fraction(model.total_work - sum(model.lengths[: j + 1]), 4 - j)
            for j in range(4)
        }
        assert multipath_bound(model, 4) == min(values.values())


class TestCores:
    def test_cores_graham_worked_example(self):
        assert cores_graham(10, 6, 7) == 4

    def test_cores_graham_deadline_equals_work(self):
        assert cores_graham(10, 6, 10) == 1

    def test_cores_graham_derived(self):
        assert cores_graham(10, 6, 8) == 2

    def test_cores_graham_rejects_tight_deadline(self):
        with pytest.raises(ValueError):
            cores_graham(10, 6, 6)

    def test_cores_multipath_worked_example(self):
        assert cores_multipath(DEMO_MODEL, 7) == 2

    def test_cores_multipath_deadline_at_longest_path(self):
        assert cores_multipath(DEMO_MODEL, 6) == 3

    def test_cores_multipath_sequential(self):
        assert cores_multipath(MultiPathModel(5, (5,)), 5) == 1

    def test_cores_dominance(self):
        rng = random.Random(321)
        checked = 0
        for _ in range(500):
            model = random_model(rng)
            C, L = model.total_work, model.longest
            if C <= L:
                continue
            for D in range(L + 1, C + 1):
                assert cores_multipath(model, D) <= cores_graham(C, L, D)
                checked += 1
        assert checked > 500

    def test_fractional_worked_example(self):
        assert fractional_cores_graham(10, 6, 7) == 4
        assert fractional_cores_multipath(DEMO_MODEL, 7) == 2
        ratio = fractional_cores_multipath(DEMO_MODEL, 7) / fractional_cores_graham(10, 6, 7)
        assert ratio == Fraction(1, 2)

    def test_fractional_dominance_and_range(self):
        rng = random.Random(322)
        for _ in range(300):
            model = random_model(rng)
            C, L = model.total_work, model.longest
            if C <= L:
                continue
            D = L + Fraction(1, 3) * (C - L)
            ours = fractional_cores_multipath(model, D)
            classic = fractional_cores_graham(C, L, D)
            assert 0 < ours <= classic
