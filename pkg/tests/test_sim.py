import random

import pytest

from dagbound import (
    Dag,
    DagError,
    ExecutionSequence,
    ExecutionTimes,
    check_busy_between,
    check_work_conserving,
    critical_path,
    exhaustive_max_makespan,
    graham_bound,
    model_of,
    multipath_bound,
    simulate,
)
from dagbound.sim import FifoPolicy, FixedPriorityPolicy, make_policy

from conftest import DEMO_EDGES, random_raw_dag


class TestSimulate:
    def test_worked_example_worst_order(self, demo_dag):
        # running v1 and v3 ahead of v2 realizes the worst case on 2 cores
        seq = simulate(demo_dag, 2, policy=FixedPriorityPolicy([0, 1, 3, 2, 4, 5]))
        assert seq.makespan == 7
        assert check_work_conserving(seq, demo_dag, 2)

    def test_worked_example_reduced_execution(self, demo_dag):
        times = ExecutionTimes((1, 2, 1, 2, 1, 1))
        seq = simulate(demo_dag, 2, policy=FixedPriorityPolicy([0, 1, 3, 2, 4, 5]), times=times)
        assert seq.makespan == 6
        assert seq.start[1] == 1 and seq.finish[1] == 3

    def test_chain_has_no_parallelism(self):
        d = Dag([2, 3, 1], [(0, 1), (1, 2)])
        for m in (1, 2, 4):
            assert simulate(d, m).makespan == d.longest_len()

    def test_all_policies_within_bound(self, demo_dag):
        bound = multipath_bound(model_of(demo_dag), 2)
        for policy in ("lexicographic", "fifo", "random"):
            seq = simulate(demo_dag, 2, policy=policy, seed=11)
            assert seq.makespan <= bound

    def test_zero_execution_everywhere(self, demo_dag):
        seq = simulate(demo_dag, 2, times=ExecutionTimes((0,) * 6))
        assert seq.makespan == 0
        assert seq.grid == ()
        assert all(f == 0 for f in seq.finish)

    def test_zero_work_vertices_never_occupy_cores(self):
        d = Dag([1, 1, 1], []).normalize()  # dummies at ids 3 and 4
        seq = simulate(d, 2)
        ran = {v for row in seq.grid for v in row if v is not None}
        assert ran == {0, 1, 2}

    def test_invalid_times_rejected(self, demo_dag):
        with pytest.raises(DagError):
            simulate(demo_dag, 2, times=ExecutionTimes((2, 3, 1, 3, 1, 1)))

    def test_random_policy_reproducible(self, demo_dag):
        a = simulate(demo_dag, 2, policy="random", seed=5)
        b = simulate(demo_dag, 2, policy="random", seed=5)
        assert a == b

    def test_unknown_policy_rejected(self):
        with pytest.raises(ValueError):
            make_policy("spaghetti")


class TestCheckWorkConserving:
    def test_simulator_output_valid(self):
        rng = random.Random(42)
        for _ in range(150):
            d = random_raw_dag(rng, max_n=8, max_wcet=3).normalize()
            m = rng.randint(1, 3)
            policy = rng.choice(["lexicographic", "fifo", "random"])
            times = ExecutionTimes.sampled(d, rng)
            seq = simulate(d, m, policy=policy, times=times, seed=rng.randrange(2**32))
            assert check_work_conserving(seq, d, m)
            assert check_busy_between(seq, d, m)

    def test_idle_core_with_eligible_vertex_rejected(self):
        # two independent unit vertices, two cores, but run serially
        d = Dag([0, 1, 1, 0], [(0, 1), (0, 2), (1, 3), (2, 3)])
        seq = ExecutionSequence(
            grid=((1, None), (2, None)),
            start=(0, 0, 1, 2),
            finish=(0, 1, 2, 2),
            makespan=2,
        )
        assert not check_work_conserving(seq, d, 2)

    def test_precedence_violation_rejected(self):
        d = Dag([1, 1], [(0, 1)])
        seq = ExecutionSequence(grid=((1,), (0,)), start=(1, 0), finish=(2, 1), makespan=2)
        assert not check_work_conserving(seq, d, 1)

    def test_double_occupancy_rejected(self, demo_dag):
        seq = simulate(demo_dag, 2)
        doubled = ExecutionSequence(
            grid=((0, 0),) + seq.grid[1:], start=seq.start, finish=seq.finish,
            makespan=seq.makespan,
        )
        assert not check_work_conserving(doubled, demo_dag, 2)


class TestCriticalPath:
    def test_worst_order_trace(self, demo_dag):
        # v2 ran late, so it finishes after v1 and becomes critical
        seq = simulate(demo_dag, 2, policy=FixedPriorityPolicy([0, 1, 3, 2, 4, 5]))
        assert critical_path(seq, demo_dag) == (0, 2, 4, 5)

    def test_longest_path_can_be_critical(self, demo_dag):
        # running v2, v3 ahead of v1 makes v1 the late finisher
        seq = simulate(demo_dag, 2, policy=FixedPriorityPolicy([0, 2, 3, 1, 4, 5]))
        assert seq.makespan == 7
        assert critical_path(seq, demo_dag) == (0, 1, 4, 5)

    def test_reduced_execution_trace(self, demo_dag):
        times = ExecutionTimes((1, 2, 1, 2, 1, 1))
        seq = simulate(demo_dag, 2, policy=FixedPriorityPolicy([0, 1, 3, 2, 4, 5]), times=times)
        assert critical_path(seq, demo_dag) == (0, 2, 4, 5)

    def test_chain_is_its_own_critical_path(self):
        d = Dag([1, 2, 1], [(0, 1), (1, 2)])
        seq = simulate(d, 2)
        assert critical_path(seq, d) == (0, 1, 2)

    def test_each_step_is_latest_finishing_predecessor(self):
        rng = random.Random(77)
        for _ in range(100):
            d = random_raw_dag(rng, max_n=7, max_wcet=3).normalize()
            seq = simulate(d, 2, policy="random", seed=rng.randrange(2**32))
            chain = critical_path(seq, d)
            assert chain[0] == d.source and chain[-1] == d.sink
            for prev, v in zip(chain, chain[1:]):
                assert seq.finish[prev] == max(seq.finish[u] for u in d.pred[v])


class TestBusyBetween:
    def test_holds_on_simulator_output(self, demo_dag):
        for m in (1, 2, 3):
            seq = simulate(demo_dag, m, policy="fifo")
            assert check_busy_between(seq, demo_dag, m)

    def test_gap_on_critical_chain_rejected(self):
        # vertex 2 waits a unit although no core was busy: illegal idling
        d = Dag([1, 1, 1], [(0, 1), (1, 2)])
        seq = ExecutionSequence(grid=((0,), (1,), (None,), (2,)), start=(0, 1, 3),
                                finish=(1, 2, 4), makespan=4)
        assert not check_busy_between(seq, d, 1)


class TestExhaustiveOracle:
    def test_unit_variant_of_worked_example(self):
        unit = Dag([1] * 6, DEMO_EDGES)
        model = model_of(unit)
        # enumeration confirms the hand-derived worst case of 5 units
        assert exhaustive_max_makespan(unit, 2) == 5
        assert exhaustive_max_makespan(unit, 2, vary_exec=True) == 5
        assert multipath_bound(model, 2) == 5

    def test_chain(self):
        d = Dag([2, 2, 2], [(0, 1), (1, 2)])
        for m in (1, 2, 3):
            assert exhaustive_max_makespan(d, m) == 6

    def test_two_parallel_units(self):
        d = Dag([0, 1, 1, 0], [(0, 1), (0, 2), (1, 3), (2, 3)])
        assert exhaustive_max_makespan(d, 1) == 2
        assert exhaustive_max_makespan(d, 2) == 1

    def test_budget_rejected(self):
        with pytest.raises(DagError):
            exhaustive_max_makespan(Dag([11], []), 2)
        with pytest.raises(DagError):
            exhaustive_max_makespan(Dag([1] * 8, [(i, i + 1) for i in range(7)]), 2)
        with pytest.raises(DagError):
            exhaustive_max_makespan(Dag([1], []), 4)

    def test_oracle_upper_bounds_simulation(self):
        rng = random.Random(404)
        generated = 0
        while generated < 60:
            d = random_raw_dag(rng, max_n=4, max_wcet=2).normalize()
            if d.volume() > 10 or len(d) > 7 or d.volume() == 0:
                continue
            generated += 1
            m = rng.randint(1, 3)
            worst = exhaustive_max_makespan(d, m, vary_exec=True)
            for policy in ("lexicographic", "fifo", "random"):
                times = ExecutionTimes.sampled(d, rng)
                seq = simulate(d, m, policy=policy, times=times, seed=rng.randrange(2**32))
                assert seq.makespan <= worst
            assert worst <= multipath_bound(model_of(d), m)
            assert worst <= graham_bound(d.volume(), d.longest_len(), m)


class TestFifoPolicy:
    def test_earlier_eligible_keeps_running(self):
        # fork of three unit chains on two cores: fifo never preempts
        d = Dag([0, 2, 2, 2, 0], [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
        seq = simulate(d, 2, policy=FifoPolicy())
        for v in (1, 2, 3):
            assert seq.finish[v] - seq.start[v] == 2  # contiguous
