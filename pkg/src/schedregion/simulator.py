"""Exact discrete-time scheduling simulator for fixed parameter points.

Synchronous periodic semantics: every pipeline releases its first task at
t = 0, T, 2T, ...; each successor task becomes ready when its predecessor's
matching job completes; every job executes for exactly C ticks. Preemptive
resources always run the highest-priority ready job; non-preemptive resources
arbitrate only when idle or at a completion. Within one instant the order is:
completions, then activations/releases, then arbitration (so a job released
at a completion instant is seen by that arbitration).

The verdict checks pipeline jobs against the pipeline's end-to-end deadline
(activation of the first task + D_e2e) and standalone jobs against their own
fixed deadline. Start-time jitter of standalone tasks is not exercised:
releases happen exactly at multiples of the period.

This simulator is exact for synchronous periodic systems only; analytic
regions also cover sporadic arrivals, so pessimism (analysis no / simulator
yes) is expected and reported, while the converse is a soundness violation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from math import lcm
from typing import Iterable, Mapping, Sequence

from .geometry import Kind, ParamVar
from .model import Policy, SystemSpec, TaskSpec


class SimulationError(Exception):
    pass


class ExplosionGuardError(SimulationError):
    """Adversarial offset exploration would exceed the configured cap."""


class EventKind(str, Enum):
    ACTIVATE = "activate"
    START = "start"
    PREEMPT = "preempt"
    RESUME = "resume"
    COMPLETE = "complete"
    DEADLINE_MISS = "deadline_miss"


@dataclass(frozen=True)
class SimEvent:
    time: int
    task: str
    kind: EventKind


@dataclass
class JobRecord:
    task: str
    index: int
    activation: int  # pipeline release for pipeline tasks, own release otherwise
    ready: int | None = None  # eligible to run (predecessor completion)
    start: int | None = None
    finish: int | None = None
    deadline: int | None = None  # absolute; None if outside the horizon's scope
    remaining: int = 0
    started: bool = False

    @property
    def response(self) -> int | None:
        return None if self.finish is None else self.finish - self.activation


@dataclass
class SimTrace:
    events: list[SimEvent]
    jobs: list[JobRecord]

    def response_times(self) -> dict[str, int]:
        """Max finish - activation per task, over completed jobs."""
        out: dict[str, int] = {}
        for j in self.jobs:
            if j.finish is not None:
                r = j.finish - j.activation
                if r > out.get(j.task, -1):
                    out[j.task] = r
        return out


@dataclass
class SimResult:
    trace: SimTrace
    schedulable: bool
    misses: list[JobRecord] = field(default_factory=list)


def default_horizon(system: SystemSpec) -> int:
    """One hyperperiod plus the largest deadline, to settle boundary jobs."""
    h = lcm(*(t.period for t in system.tasks)) if system.tasks else 1
    tail = max(
        [t.max_deadline for t in system.tasks]
        + [p.e2e_deadline for p in system.pipelines]
        + [0]
    )
    return h + tail


def resolve_wcets(system: SystemSpec, point: Mapping[ParamVar, int]) -> dict[str, int]:
    """Concrete C per task; free C values must be assigned in the point."""
    out = {}
    for t in system.tasks:
        if t.wcet is not None:
            out[t.id] = t.wcet
        else:
            var = ParamVar(t.id, Kind.C)
            if var not in point:
                raise SimulationError(f"point does not assign {var}")
            value = point[var]
            if value < 0:
                raise SimulationError(f"{var} must be non-negative")
            out[t.id] = int(value)
    return out


class _ResourceState:
    __slots__ = ("rid", "preemptive", "ready", "running", "run_start")

    def __init__(self, rid: str, preemptive: bool):
        self.rid = rid
        self.preemptive = preemptive
        self.ready: list[JobRecord] = []  # released & predecessor done
        self.running: JobRecord | None = None
        self.run_start = 0


def simulate(
    system: SystemSpec,
    point: Mapping[ParamVar, int],
    horizon: int | None = None,
    offsets: Mapping[str, int] | None = None,
) -> SimResult:
    """Run the system at a concrete point and judge every decidable job.

    ``offsets`` shifts the releases of selected standalone tasks (used by the
    adversarial blocking mode); all other releases start at zero.
    """
    if horizon is None:
        horizon = default_horizon(system)
    if horizon < 1:
        raise SimulationError("horizon must be at least 1")
    offsets = dict(offsets or {})
    wcets = resolve_wcets(system, point)

    prio = {t.id: t.priority for t in system.tasks}
    resources = {
        r.id: _ResourceState(r.id, r.policy is Policy.PREEMPTIVE)
        for r in system.resources
    }
    res_of = {t.id: t.resource for t in system.tasks}

    # next task in the same pipeline, if any
    successor: dict[str, str] = {}
    heads: list[tuple[TaskSpec, int]] = []  # (task, e2e deadline)
    pipeline_of: dict[str, tuple[str, int]] = {}
    for p in system.pipelines:
        for a, b in zip(p.tasks, p.tasks[1:]):
            successor[a] = b
        for tid in p.tasks:
            pipeline_of[tid] = (p.id, p.e2e_deadline)
        heads.append((system.task_by_id(p.tasks[0]), p.e2e_deadline))
    standalone = [t for t in system.tasks if t.id not in pipeline_of]

    events: list[SimEvent] = []
    jobs: list[JobRecord] = []
    # released standalone/head jobs, plus successor jobs woken by completions
    releases: list[tuple[int, int, str, JobRecord]] = []  # (time, seq, task, job)
    seq = itertools.count()

    def make_chain(head: TaskSpec, k: int, release: int, e2e: int) -> JobRecord:
        """Create the job chain for pipeline instance k; returns the head job."""
        first = None
        tid: str | None = head.id
        while tid is not None:
            deadline = release + e2e
            job = JobRecord(
                task=tid,
                index=k,
                activation=release,
                deadline=deadline if deadline <= horizon else None,
                remaining=wcets[tid],
            )
            jobs.append(job)
            if first is None:
                first = job
            else:
                chain_links[prev_tid].setdefault(k, job)
            prev_tid = tid
            tid = successor.get(tid)
        return first

    # job of task successor[t] with index k, to wake at completion of (t, k)
    chain_links: dict[str, dict[int, JobRecord]] = {t: {} for t in successor}

    for head, e2e in heads:
        t = 0
        k = 0
        while t < horizon:
            job = make_chain(head, k, t, e2e)
            releases.append((t, next(seq), head.id, job))
            k += 1
            t += head.period
    for task in standalone:
        t = offsets.get(task.id, 0)
        k = 0
        while t < horizon:
            deadline = t + task.max_deadline
            job = JobRecord(
                task=task.id,
                index=k,
                activation=t,
                deadline=deadline if deadline <= horizon else None,
                remaining=wcets[task.id],
            )
            jobs.append(job)
            releases.append((t, next(seq), task.id, job))
            k += 1
            t += task.period

    releases.sort(key=lambda item: (item[0], item[1]))
    release_pos = 0

    def arbitrate(t: int) -> list[JobRecord]:
        """(Re)assign each resource at instant t; returns jobs completing now."""
        done_now: list[JobRecord] = []
        for rid in sorted(resources):
            rs = resources[rid]
            if rs.preemptive:
                best = None
                cand = rs.ready + ([rs.running] if rs.running else [])
                for job in cand:
                    if best is None or prio[job.task] > prio[best.task]:
                        best = job
                if best is not rs.running:
                    if rs.running is not None:
                        rs.running.remaining -= t - rs.run_start
                        rs.ready.append(rs.running)
                        events.append(SimEvent(t, rs.running.task, EventKind.PREEMPT))
                        rs.running = None
                    if best is not None:
                        rs.ready.remove(best)
                        kind = EventKind.RESUME if best.started else EventKind.START
                        if not best.started:
                            best.start = t
                            best.started = True
                        events.append(SimEvent(t, best.task, kind))
                        rs.running = best
                        rs.run_start = t
            else:
                if rs.running is None and rs.ready:
                    best = max(rs.ready, key=lambda j: prio[j.task])
                    rs.ready.remove(best)
                    best.start = t
                    best.started = True
                    events.append(SimEvent(t, best.task, EventKind.START))
                    rs.running = best
                    rs.run_start = t
            if rs.running is not None and rs.running.remaining == 0:
                done_now.append(rs.running)
        return done_now

    def complete(job: JobRecord, t: int) -> None:
        rs = resources[res_of[job.task]]
        assert rs.running is job
        job.finish = t
        events.append(SimEvent(t, job.task, EventKind.COMPLETE))
        rs.running = None
        link = chain_links.get(job.task)
        if link is not None:
            nxt = link.get(job.index)
            if nxt is not None:
                nxt.ready = t
                releases_at_now.append(nxt)

    t = 0
    releases_at_now: list[JobRecord] = []
    while True:
        # next instant anything can happen
        candidates = []
        if release_pos < len(releases):
            candidates.append(releases[release_pos][0])
        for rs in resources.values():
            if rs.running is not None:
                candidates.append(rs.run_start + rs.running.remaining)
        if not candidates:
            break
        t = min(candidates)
        if t > horizon:
            break
        # completions due exactly now
        for rid in sorted(resources):
            rs = resources[rid]
            job = rs.running
            if job is not None and rs.run_start + job.remaining == t:
                job.remaining = 0
                complete(job, t)
        # releases due now
        while release_pos < len(releases) and releases[release_pos][0] == t:
            _, _, tid, job = releases[release_pos]
            job.ready = t
            events.append(SimEvent(t, tid, EventKind.ACTIVATE))
            resources[res_of[tid]].ready.append(job)
            release_pos += 1
        # successor activations and zero-length jobs cascade within the tick
        while True:
            for job in releases_at_now:
                events.append(SimEvent(t, job.task, EventKind.ACTIVATE))
                resources[res_of[job.task]].ready.append(job)
            releases_at_now = []
            finished = arbitrate(t)
            for job in finished:
                complete(job, t)
            if not releases_at_now and not finished:
                break

    misses = []
    for job in jobs:
        if job.deadline is None:
            continue
        if job.finish is None or job.finish > job.deadline:
            misses.append(job)
            events.append(SimEvent(job.deadline, job.task, EventKind.DEADLINE_MISS))
    events.sort(key=lambda e: e.time)
    trace = SimTrace(events=events, jobs=jobs)
    return SimResult(trace=trace, schedulable=not misses, misses=misses)


def worst_case_blocking_mode(
    system: SystemSpec,
    point: Mapping[ParamVar, int],
    horizon: int | None = None,
    max_combinations: int = 20000,
) -> SimResult:
    """Adversarial variant: explore release offsets of standalone tasks on
    non-preemptive resources so a lower-priority job can start just before a
    higher-priority activation. Exhaustive over the offset product; returns
    the first failing run, or the zero-offset run if none fails."""
    np_resources = {r.id for r in system.resources if r.policy is Policy.NONPREEMPTIVE}
    pipeline_members = {tid for p in system.pipelines for tid in p.tasks}
    movable: list[TaskSpec] = []
    for t in system.tasks:
        if t.resource in np_resources and t.id not in pipeline_members:
            top = max(
                x.priority for x in system.tasks if x.resource == t.resource
            )
            if t.priority < top:
                movable.append(t)
    total = 1
    for t in movable:
        total *= t.period
        if total > max_combinations:
            raise ExplosionGuardError(
                f"offset exploration needs {total}+ runs (cap {max_combinations})"
            )
    base = simulate(system, point, horizon)
    if not movable or not base.schedulable:
        return base
    worst = base
    worst_response = _max_response(base)
    for combo in itertools.product(*(range(t.period) for t in movable)):
        if all(o == 0 for o in combo):
            continue
        offsets = {t.id: o for t, o in zip(movable, combo)}
        result = simulate(system, point, horizon, offsets=offsets)
        if not result.schedulable:
            return result
        response = _max_response(result)
        if response > worst_response:
            worst, worst_response = result, response
    return worst


def _max_response(result: SimResult) -> int:
    responses = result.trace.response_times()
    return max(responses.values(), default=0)


@dataclass
class GridReport:
    """Analytic vs. simulated verdicts on a 2-D integer grid."""

    x: ParamVar
    y: ParamVar
    step: int
    points: list[tuple[int, int, bool, bool]]  # (x, y, analytic, simulated)
    soundness_violations: list[tuple[int, int]]
    pessimistic: list[tuple[int, int]]

    @property
    def total(self) -> int:
        return len(self.points)

    @property
    def agreements(self) -> int:
        return sum(1 for _, _, a, s in self.points if a == s)

    def to_text(self) -> str:
        lines = [
            f"grid {self.x} x {self.y}: {self.total} points, step {self.step}",
            f"agreements: {self.agreements}",
            f"soundness violations (analytic yes, simulated no): {len(self.soundness_violations)}",
            f"pessimistic points (analytic no, simulated yes): {len(self.pessimistic)}",
        ]
        for gx, gy in self.soundness_violations:
            lines.append(f"VIOLATION at {self.x}={gx} {self.y}={gy}")
        return "\n".join(lines) + "\n"


def grid_compare(
    system: SystemSpec,
    x: ParamVar,
    y: ParamVar,
    x_range: tuple[int, int],
    y_range: tuple[int, int],
    step: int = 1,
    horizon: int | None = None,
    adversarial: bool = True,
    extra_point: Mapping[ParamVar, int] | None = None,
    region2d=None,
) -> GridReport:
    """Compare the analytic region with the simulator on an integer grid.

    Every (analytic yes, simulated no) point is a soundness violation and
    must not occur; (analytic no, simulated yes) measures pessimism. The
    analytic verdict existentially eliminates all free parameters except the
    two grid variables. A prebuilt 2-D region may be passed to avoid
    rebuilding.
    """
    from .composition import build_system_region, schedulability_slice

    if step <= 0:
        raise ValueError("step must be positive")
    if region2d is None:
        sr = build_system_region(system)
        region2d = schedulability_slice(sr, {x, y})
    extra = dict(extra_point or {})
    points = []
    violations = []
    pessimistic = []
    for gx in range(x_range[0], x_range[1] + 1, step):
        for gy in range(y_range[0], y_range[1] + 1, step):
            analytic = region2d.contains({x: gx, y: gy})
            pt = dict(extra)
            pt[x] = gx
            pt[y] = gy
            if adversarial:
                result = worst_case_blocking_mode(system, pt, horizon)
            else:
                result = simulate(system, pt, horizon)
            simulated = result.schedulable
            points.append((gx, gy, analytic, simulated))
            if analytic and not simulated:
                violations.append((gx, gy))
            elif simulated and not analytic:
                pessimistic.append((gx, gy))
    return GridReport(
        x=x,
        y=y,
        step=step,
        points=points,
        soundness_violations=violations,
        pessimistic=pessimistic,
    )


def trace_to_text(result: SimResult) -> str:
    lines = [f"t={e.time} task={e.task} {e.kind.value}" for e in result.trace.events]
    lines.append("verdict=" + ("SCHEDULABLE" if result.schedulable else "NOT SCHEDULABLE"))
    return "\n".join(lines) + "\n"
