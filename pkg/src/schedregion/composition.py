"""Assembles the distributed-system schedulability region.

Per-resource task regions (preemptive or non-preemptive by policy) are
intersected with the pipeline precedence constraints (first jitter pinned to
zero, each deadline variable bounded by the successor's jitter, last deadline
bounded by the end-to-end deadline) and the trivial bounds (non-negative C
and J, 0 <= D <= max deadline).

Deadline and jitter variables are existentially quantified when answering
queries about computation times: a C-point is schedulable iff some D/J
assignment satisfies the whole system. ``schedulability_slice`` realizes
that quantification by exact projection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .geometry import (
    Atom,
    ConvexPolyhedron,
    EmptyRegionError,
    Interval,
    Kind,
    LinearConstraint,
    ParamVar,
    Region,
    expr,
    reduce_polyhedra,
)
from .model import Policy, SystemSpec, TaskSpec
from .nonpreemptive import (
    BlockingTask,
    NPLevelContext,
    np_job_count,
    tagged_task_region_np,
)
from .preemptive import (
    InterferingTask,
    LevelContext,
    Tagged,
    Witness,
    preemptive_job_count,
    tagged_task_region,
)


class CompositionError(Exception):
    pass


def _atom(task: TaskSpec, kind: Kind) -> Atom:
    value = {Kind.C: task.wcet, Kind.D: task.deadline, Kind.J: task.jitter}[kind]
    return ParamVar(task.id, kind) if value is None else value


def free_variables(system: SystemSpec) -> list[ParamVar]:
    """Canonical variable order: task order in the file, then C, D, J."""
    out = []
    for t in system.tasks:
        for kind in (Kind.C, Kind.D, Kind.J):
            a = _atom(t, kind)
            if isinstance(a, ParamVar):
                out.append(a)
    return out


def _deadline_bound(system: SystemSpec, task: TaskSpec) -> int:
    if task.deadline is not None:
        return task.deadline
    p = system.pipeline_of(task.id)
    if p is not None:
        return min(task.max_deadline, p.e2e_deadline)
    return task.max_deadline


def level_context(system: SystemSpec, task: TaskSpec) -> LevelContext | NPLevelContext:
    """Build the analysis context for one task from the validated system."""
    resource = system.resource_by_id(task.resource)
    peers = system.tasks_on(task.resource)
    hp = tuple(
        InterferingTask(
            task_id=t.id,
            period=t.period,
            max_deadline=t.max_deadline,
            wcet=_atom(t, Kind.C),
            jitter=_atom(t, Kind.J),
        )
        for t in peers
        if t.priority > task.priority
    )
    bound = _deadline_bound(system, task)
    common = dict(
        task_id=task.id,
        period=task.period,
        max_deadline=task.max_deadline,
        wcet=_atom(task, Kind.C),
        deadline=_atom(task, Kind.D),
        jitter=_atom(task, Kind.J),
        hp=hp,
        deadline_bound=bound,
    )
    if resource.policy is Policy.PREEMPTIVE:
        jobs = preemptive_job_count(
            task.period, bound, tuple(t.period for t in hp)
        )
        return LevelContext(jobs=jobs, **common)
    lp = tuple(
        BlockingTask(task_id=t.id, wcet=_atom(t, Kind.C))
        for t in peers
        if t.priority < task.priority
    )
    jobs = np_job_count(
        task.period,
        tuple(t.period for t in hp),
        tuple(t.period for t in peers if t.priority < task.priority),
    )
    return NPLevelContext(jobs=jobs, lp=lp, **common)


def _base_constraints(system: SystemSpec) -> list[LinearConstraint]:
    """Trivial bounds plus pipeline precedence constraints."""
    out: list[LinearConstraint] = []
    for t in system.tasks:
        c, d, j = _atom(t, Kind.C), _atom(t, Kind.D), _atom(t, Kind.J)
        if isinstance(c, ParamVar):
            out.append(expr(0).le(expr(c)))
        if isinstance(j, ParamVar):
            out.append(expr(0).le(expr(j)))
        if isinstance(d, ParamVar):
            out.append(expr(0).le(expr(d)))
            out.append(expr(d).le(expr(t.max_deadline)))
    for p in system.pipelines:
        tasks = [system.task_by_id(tid) for tid in p.tasks]
        out.append(expr(_atom(tasks[0], Kind.J)).eq(expr(0)))
        for a, b in zip(tasks, tasks[1:]):
            out.append(expr(_atom(a, Kind.D)).le(expr(_atom(b, Kind.J))))
        out.append(expr(_atom(tasks[-1], Kind.D)).le(expr(p.e2e_deadline)))
    return out


@dataclass(frozen=True)
class SystemRegion:
    """Full-system region plus per-disjunct provenance."""

    system: SystemSpec
    region: Region
    var_index: dict[ParamVar, int]
    provenance: tuple[tuple[Witness, ...], ...]


def build_system_region(system: SystemSpec, full_limit: int = 300) -> SystemRegion:
    """Intersect every task's region with precedence and trivial constraints.

    Emptiness propagates as an empty region, never an exception. The result
    does not depend on task or pipeline order in the input (intersection is
    commutative); tasks are processed resource by resource for pruning.
    """
    base = ConvexPolyhedron.of(_base_constraints(system))
    acc: list[Tagged] = [] if base.is_empty() else [(base, ())]

    # build every per-task region, then intersect smallest unions first so
    # tight single-disjunct constraints prune before unions multiply
    regions: list[tuple[TaskSpec, list[Tagged]]] = []
    for resource in sorted(system.resources, key=lambda r: r.id):
        for task in system.tasks_on(resource.id):
            ctx = level_context(system, task)
            if isinstance(ctx, NPLevelContext):
                tr = tagged_task_region_np(ctx, full_limit)
            else:
                tr = tagged_task_region(ctx, full_limit)
            regions.append((task, tr))
    regions.sort(key=lambda item: (len(item[1]), item[0].resource, -item[0].priority))

    for task, tr in regions:
        product: list[Tagged] = []
        for poly_a, tags_a in acc:
            for poly_b, tags_b in tr:
                cand = poly_a.intersect(poly_b)
                if not cand.is_empty():
                    product.append((cand, tags_a + tags_b))
        keep = reduce_polyhedra([p for p, _ in product], full_limit)
        acc = [product[i] for i in keep]
        if not acc:
            break

    # final cleanup: per-disjunct redundancy removal, then subsumption
    cleaned: list[Tagged] = []
    for poly, tags in acc:
        n = poly.normalize()
        if not n.is_empty():
            cleaned.append((n, tags))
    keep = reduce_polyhedra([p for p, _ in cleaned], full_limit)
    cleaned = [cleaned[i] for i in keep]

    variables = free_variables(system)
    return SystemRegion(
        system=system,
        region=Region.of(p for p, _ in cleaned),
        var_index={v: i for i, v in enumerate(variables)},
        provenance=tuple(tags for _, tags in cleaned),
    )


def schedulability_slice(sr: SystemRegion, keep: Iterable[ParamVar]) -> Region:
    """Project the region onto ``keep``: a kept point lies in the slice iff
    some assignment of the eliminated variables makes the system schedulable."""
    keep = set(keep)
    unknown = keep - set(sr.var_index)
    if unknown:
        raise CompositionError(
            "not free parameters of the system: "
            + ", ".join(str(v) for v in sorted(unknown))
        )
    drop = set(sr.var_index) - keep
    return sr.region.eliminate(drop).reduce()


def wcrt_bound(sr: SystemRegion, task_id: str):
    """Analysis bound on the worst-case response time of a task: the minimum
    of its deadline variable over the region. Raises EmptyRegionError if the
    task is unschedulable at the system's fixed parameters."""
    v = ParamVar(task_id, Kind.D)
    if v not in sr.var_index:
        raise CompositionError(f"D of task {task_id} is not free")
    interval = sr.region.var_interval(v)
    return interval.lower
