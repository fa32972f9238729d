"""Parametric schedulability region of one task under preemptive fixed priority.

The region of a task is an intersection over job indices h of unions over
scheduling-point vectors n of small conjunctions: each vector certifies that
the accumulated workload of h own jobs plus n_j interfering jobs fits both
before every interferer's (n_k)-th next release (jitter-adjusted) and before
the job's own deadline. Free parameters stay symbolic; fixed ones fold into
constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .geometry import (
    Atom,
    ConvexPolyhedron,
    Kind,
    LinearConstraint,
    ParamVar,
    Region,
    expr,
    reduce_polyhedra,
)


@dataclass(frozen=True)
class InterferingTask:
    """A higher-priority task as seen from the analyzed level."""

    task_id: str
    period: int
    max_deadline: int
    wcet: Atom
    jitter: Atom


@dataclass(frozen=True)
class LevelContext:
    """Everything needed to build one task's region on one resource."""

    task_id: str
    period: int
    max_deadline: int
    wcet: Atom
    deadline: Atom
    jitter: Atom
    hp: tuple[InterferingTask, ...]  # descending priority
    deadline_bound: int  # fixed D if any, else the admissible upper bound on D
    jobs: int  # number of job indices h to check


@dataclass(frozen=True)
class Witness:
    """Explains one disjunct: task, job index, scheduling-point vector."""

    task_id: str
    job: int
    vector: tuple[int, ...]


# (polyhedron, witnesses) pairs: a Region that remembers where each disjunct
# came from, so composition can expose provenance for --explain.
Tagged = tuple[ConvexPolyhedron, tuple[Witness, ...]]


def preemptive_job_count(period: int, deadline_bound: int, hp_periods: tuple[int, ...]) -> int:
    """How many job indices must be checked (h_i).

    One job suffices whenever every admissible deadline fits inside the
    period (the level-i busy window closes before the next release);
    otherwise all jobs in the level hyperperiod.
    """
    if deadline_bound <= period:
        return 1
    return lcm(period, *hp_periods) // period if hp_periods else 1


def scheduling_points(ctx: LevelContext, t: int) -> tuple[tuple[int, ...], ...]:
    """Scheduling-point vectors for workload certificates up to time t.

    Witness times are every release multiple k*T of the task itself and its
    interferers up to t, plus t itself; each time u yields the vector
    n_j = ceil(u / T_j). Deduplicated, lexicographically sorted.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    times = {t}
    periods = [h.period for h in ctx.hp] + [ctx.period]
    for T in periods:
        times.update(range(T, t + 1, T))
    vectors = {tuple(-(-u // h.period) for h in ctx.hp) for u in times}
    return tuple(sorted(vectors))


def _job_disjunct(ctx: LevelContext, h: int, n: tuple[int, ...]) -> ConvexPolyhedron:
    """Constraints certifying that job h completes in time via vector n."""
    constraints: list[LinearConstraint] = []
    lhs = expr((ctx.wcet, h))
    for nj, task in zip(n, ctx.hp):
        lhs.add(task.wcet, nj)
    for nk, task in zip(n, ctx.hp):
        # workload fits before the (n_k+1)-th interfering arrival
        rhs = expr(nk * task.period).add(task.jitter, -1)
        constraints.append(lhs.copy().le(rhs))
    rhs = expr((h - 1) * ctx.period).add(ctx.deadline).add(ctx.jitter, -1)
    constraints.append(lhs.copy().le(rhs))
    return ConvexPolyhedron.of(constraints)


def tagged_task_region(ctx: LevelContext, full_limit: int = 300) -> list[Tagged]:
    """Per-task region with per-disjunct witnesses, reduced after each level."""
    acc: list[Tagged] = [(ConvexPolyhedron(()), ())]
    for h in range(1, ctx.jobs + 1):
        t_h = (h - 1) * ctx.period + ctx.deadline_bound
        pts = scheduling_points(ctx, t_h)
        if not pts:
            return []
        level: list[Tagged] = [
            (_job_disjunct(ctx, h, n), (Witness(ctx.task_id, h, n),)) for n in pts
        ]
        product: list[Tagged] = []
        for poly_a, tags_a in acc:
            for poly_b, tags_b in level:
                cand = poly_a.intersect(poly_b)
                if not cand.is_empty():
                    product.append((cand, tags_a + tags_b))
        keep = reduce_polyhedra([p for p, _ in product], full_limit)
        acc = [product[i] for i in keep]
        if not acc:
            return []
    return acc


def task_region_preemptive(ctx: LevelContext) -> Region:
    """Region of parameter values under which every checked job meets D_i."""
    return Region.of(p for p, _ in tagged_task_region(ctx))
