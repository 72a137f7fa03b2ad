"""Exhaustive enumeration oracle: guards, hand-checked optima, structure."""

import numpy as np
import pytest

from lotflow import (Instance, OracleConfig, OracleGuardError,
                     check_feasibility, gen_random_small, gen_table1,
                     solve_exact)
from lotflow.oracle import _delta_patterns, deviation


def two_period_instance(Bc=500.0):
    return Instance(T=2, d=[30, 40], p=[21, 21], c=[5, 5], h=[1, 1],
                    s=[100, 100], Bc=Bc, beta=0.0)


class TestGuard:
    def test_horizon_guard(self):
        with pytest.raises(OracleGuardError):
            solve_exact(gen_table1(Bc=200))

    def test_guard_is_configurable(self):
        sol = solve_exact(gen_table1(Bc=200), OracleConfig(max_T=12))
        assert sol.objective == pytest.approx(1891.3076923, rel=1e-6)


class TestHandExamples:
    def test_two_period_single_launch_wins(self):
        # producing 70 in period 1 saves one setup: 16*70 - 100 - 40 = 980
        # versus two launches at 16*70 - 200 = 920
        sol = solve_exact(two_period_instance(Bc=500.0))
        assert sol.objective == pytest.approx(980.0)
        assert list(sol.trajectory.x) == [1, 0]

    def test_tight_capital_forces_two_launches(self):
        # 400 affords at most 60 units up front, worth 15*60 - 70 = 830;
        # relaunching in period 2 serves everything for 16*70 - 200 = 920
        sol = solve_exact(two_period_instance(Bc=400.0))
        assert list(sol.trajectory.x) == [1, 1]
        assert sol.objective == pytest.approx(920.0)

    def test_nothing_profitable_returns_null_plan(self):
        inst = Instance(T=2, d=[10, 10], p=[1, 1], c=[5, 5], h=[1, 1],
                        s=[100, 100], Bc=500.0)
        sol = solve_exact(inst)
        assert sol.objective == 0.0
        assert not sol.trajectory.x.any()


class TestDeltaPatterns:
    def test_no_goodwill_single_pattern(self):
        inst = two_period_instance()
        patterns = _delta_patterns(inst)
        assert len(patterns) == 1
        assert list(patterns[0]) == [1, 1]

    def test_goodwill_allows_dead_period(self):
        inst = Instance(T=2, d=[100, 10], p=[20, 20], c=[5, 5], h=[1, 1],
                        s=[100, 100], Bc=500.0, beta=1.0)
        patterns = {tuple(p) for p in _delta_patterns(inst)}
        assert patterns == {(1, 1), (1, 0)}

    def test_first_period_always_survives(self):
        inst = Instance(T=3, d=[50, 10, 10], p=[20] * 3, c=[5] * 3,
                        h=[1] * 3, s=[100] * 3, Bc=500.0, beta=1.0)
        for pattern in _delta_patterns(inst):
            assert pattern[0] == 1


class TestStructure:
    def test_objective_monotone_in_capital(self):
        values = [solve_exact(two_period_instance(Bc=bc)).objective
                  for bc in (100.0, 250.0, 400.0, 550.0)]
        assert values == sorted(values)

    def test_zero_inventory_ordering_constant_cost(self):
        for seed in range(10):
            inst = gen_random_small(seed=300 + seed, T=4, beta=0.0,
                                    constant_c=True)
            sol = solve_exact(inst)
            traj = sol.trajectory
            for t in range(inst.T - 1):
                assert traj.I[t + 1] * traj.plan.y[t + 1] <= 1e-7

    def test_solutions_always_feasible(self):
        for seed in range(15):
            inst = gen_random_small(seed=400 + seed, T=4,
                                    beta=float((seed % 3) * 0.25),
                                    with_loan=(seed % 2 == 0))
            sol = solve_exact(inst)
            assert check_feasibility(inst, sol.trajectory).feasible


class TestDeviation:
    def test_deviation_nonnegative_and_clamped(self):
        inst = gen_random_small(seed=12, T=4, beta=0.5)
        dev = deviation(inst)
        assert dev >= 0.0

    def test_deviation_zero_when_heuristic_optimal(self):
        inst = gen_random_small(seed=13, T=4, beta=0.0, constant_c=True)
        assert deviation(inst) <= 1e-9
