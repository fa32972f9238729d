"""Preemptive region tests against brute-force and response-time oracles."""

import json
import random
from math import ceil, lcm

import pytest

from schedregion.geometry import Kind, ParamVar, Region, linear
from schedregion.model import parse_system
from schedregion.preemptive import (
    InterferingTask,
    LevelContext,
    preemptive_job_count,
    scheduling_points,
    task_region_preemptive,
)
from schedregion.simulator import simulate


def rta(c_own, hp, cap):
    """Least fixed point of R = C + sum(ceil(R/T_j)*C_j); None past cap."""
    r = c_own
    while True:
        nxt = c_own + sum(ceil(r / t) * c for c, t in hp)
        if nxt == r:
            return r
        if nxt > cap:
            return None
        r = nxt


def rta_job(h, c_own, t_own, hp, cap):
    """Completion of the h-th job under continuous backlog (Lemma-1 transform)."""
    r = h * c_own
    while True:
        nxt = h * c_own + sum(ceil(r / t) * c for c, t in hp)
        if nxt == r:
            return r
        if nxt > cap:
            return None
        r = nxt


def ctx_45(deadline, bound=20, jobs=1):
    """The single-CPU example: tau1(1,3), tau2(2,8), tau3(C=4,T=20)."""
    return LevelContext(
        task_id="tau3",
        period=20,
        max_deadline=20,
        wcet=4,
        deadline=deadline,
        jitter=0,
        hp=(
            InterferingTask("tau1", 3, 3, 1, 0),
            InterferingTask("tau2", 8, 7, 2, 0),
        ),
        deadline_bound=bound,
        jobs=jobs,
    )


class TestSchedulingPoints:
    def test_brute_force_multiples_covered(self):
        """Every vector derived from a release multiple <= t must be present."""
        ctx = ctx_45(ParamVar("tau3", Kind.D))
        pts = scheduling_points(ctx, 20)
        expected = set()
        for period in (3, 8, 20):
            for u in range(period, 21, period):
                expected.add((ceil(u / 3), ceil(u / 8)))
        expected.add((ceil(20 / 3), ceil(20 / 8)))
        assert expected <= set(pts)
        assert (4, 2) in pts  # the witness certifying D3 = 12

    def test_witness_certifies_wcrt(self):
        # 4*1 + 2*2 + 4 = 12 <= min(4*3, 2*8)
        n = (4, 2)
        load = 4 + n[0] * 1 + n[1] * 2
        assert load == 12
        assert load <= min(n[0] * 3, n[1] * 8)

    def test_no_higher_priority(self):
        ctx = LevelContext("t", 10, 10, 1, 10, 0, (), 10, 1)
        assert scheduling_points(ctx, 10) == ((),)

    def test_equal_periods(self):
        ctx = LevelContext(
            "t",
            4,
            4,
            1,
            4,
            0,
            (InterferingTask("a", 4, 4, 1, 0), InterferingTask("b", 4, 4, 1, 0)),
            4,
            1,
        )
        assert scheduling_points(ctx, 4) == ((1, 1),)

    def test_deterministic_order(self):
        ctx = ctx_45(ParamVar("tau3", Kind.D))
        pts = scheduling_points(ctx, 20)
        assert list(pts) == sorted(pts)

    def test_rejects_zero_horizon(self):
        with pytest.raises(ValueError):
            scheduling_points(ctx_45(20), 0)


class TestJobCount:
    def test_constrained_single_job(self):
        assert preemptive_job_count(20, 20, (3, 8)) == 1

    def test_unconstrained_hyperperiod(self):
        assert preemptive_job_count(16, 17, (20,)) == lcm(16, 20) // 16

    def test_no_interferers(self):
        assert preemptive_job_count(10, 50, ()) == 1


class TestTaskRegion:
    def test_deadline_interval_sec45(self):
        d3 = ParamVar("tau3", Kind.D)
        region = task_region_preemptive(ctx_45(d3))
        bounded = region.intersect(
            Region.of_constraints([linear({d3: 1}, 20), linear({d3: -1}, 0)])
        )
        iv = bounded.var_interval(d3)
        assert (iv.lower, iv.upper) == (12, 20)

    def test_single_task(self):
        c, d = ParamVar("t", Kind.C), ParamVar("t", Kind.D)
        region = task_region_preemptive(LevelContext("t", 10, 10, c, d, 0, (), 10, 1))
        assert region.contains({c: 3, d: 3})
        assert not region.contains({c: 3, d: 2})

    def test_wcet_interval_matches_rta(self):
        """Largest feasible C3 at fixed D3=20, from the RTA oracle."""
        largest = max(
            c for c in range(0, 21) if (rta(c, [(1, 3), (2, 8)], 20) or 99) <= 20
        )
        assert largest == 7  # computed by the oracle, not assumed
        c3 = ParamVar("tau3", Kind.C)
        ctx = LevelContext(
            "tau3",
            20,
            20,
            c3,
            20,
            0,
            (InterferingTask("tau1", 3, 3, 1, 0), InterferingTask("tau2", 8, 7, 2, 0)),
            20,
            1,
        )
        region = task_region_preemptive(ctx).intersect(
            Region.of_constraints([linear({c3: -1}, 0)])
        )
        iv = region.var_interval(c3)
        assert (iv.lower, iv.upper) == (0, largest)


def random_fixed_system(rng, max_tasks=3, max_period=12):
    """Single preemptive resource, constrained fixed deadlines, zero jitter."""
    n = rng.randint(1, max_tasks)
    tasks = []
    for i in range(n):
        period = rng.randint(2, max_period)
        deadline = rng.randint(1, period)
        wcet = rng.randint(0, max(1, period // 2))
        tasks.append(
            {
                "id": f"t{i}",
                "resource": "r",
                "period": period,
                "priority": n - i,
                "max_deadline": deadline,
                "C": wcet,
                "D": deadline,
                "J": 0,
            }
        )
    doc = {
        "resources": [{"id": "r", "policy": "preemptive"}],
        "tasks": tasks,
        "pipelines": [],
    }
    return parse_system(json.dumps(doc))


def analytic_verdict(system):
    from schedregion.composition import build_system_region

    sr = build_system_region(system)
    return len(sr.region.disjuncts) > 0


class TestExactness:
    def test_fixed_points_match_simulation(self):
        """Zero jitter + constrained fixed deadlines: region membership is an
        exact schedulability test (both directions)."""
        rng = random.Random(7)
        checked = 0
        for _ in range(120):
            system = random_fixed_system(rng)
            horizon = lcm(*(t.period for t in system.tasks))
            sim = simulate(system, {}, horizon).schedulable
            ana = analytic_verdict(system)
            assert ana == sim, f"mismatch on {system}"
            checked += 1
        assert checked == 120


class TestMonotonicity:
    def test_smaller_wcet_stays_inside(self):
        rng = random.Random(11)
        d3 = ParamVar("tau3", Kind.D)
        c3 = ParamVar("tau3", Kind.C)
        ctx = LevelContext(
            "tau3",
            20,
            20,
            c3,
            d3,
            0,
            (InterferingTask("tau1", 3, 3, 1, 0), InterferingTask("tau2", 8, 7, 2, 0)),
            20,
            1,
        )
        region = task_region_preemptive(ctx)
        for _ in range(200):
            c = rng.randint(0, 10)
            d = rng.randint(0, 20)
            if region.contains({c3: c, d3: d}) and c > 0:
                assert region.contains({c3: c - 1, d3: d})


class TestLemmaOneTransform:
    def test_transformed_jobs_match_simulation(self):
        """h-th job completion under continuous backlog: C -> hC,
        D -> (h-1)T + D; compare with the synchronous trace."""
        rng = random.Random(23)
        for _ in range(60):
            t_hp = rng.randint(2, 8)
            c_hp = rng.randint(1, t_hp - 1)
            t_own = rng.randint(2, 10)
            d_own = rng.randint(t_own, 3 * t_own)  # unconstrained allowed
            budget = 1 - c_hp / t_hp
            c_own = rng.randint(1, max(1, int(budget * t_own)))
            if c_hp / t_hp + c_own / t_own > 1:
                continue
            h_count = lcm(t_hp, t_own) // t_own
            doc = {
                "resources": [{"id": "r", "policy": "preemptive"}],
                "tasks": [
                    {"id": "hp", "resource": "r", "period": t_hp, "priority": 2,
                     "max_deadline": t_hp, "C": c_hp, "D": t_hp, "J": 0},
                    {"id": "own", "resource": "r", "period": t_own, "priority": 1,
                     "max_deadline": d_own, "C": c_own, "D": d_own, "J": 0},
                ],
                "pipelines": [],
            }
            system = parse_system(json.dumps(doc))
            horizon = lcm(t_hp, t_own) + d_own
            trace = simulate(system, {}, horizon).trace
            own_jobs = {j.index: j for j in trace.jobs if j.task == "own"}
            for h in range(1, h_count + 1):
                cap = (h - 1) * t_own + d_own
                transformed = rta_job(h, c_own, t_own, [(c_hp, t_hp)], cap)
                analytic_ok = transformed is not None and transformed <= cap
                job = own_jobs[h - 1]
                sim_ok = job.finish is not None and job.finish <= cap
                assert analytic_ok == sim_ok
