"""System description: resources, tasks, pipelines; JSON parsing and validation.

All time quantities are non-negative unbounded integers (ticks). A parameter
field holding ``None`` is free; an ``int`` is fixed. Every value is immutable
after construction.

Defaults: C is free; standalone tasks get J fixed at 0 and D free (bounded by
``max_deadline``); pipeline member tasks get D and J free. Standalone tasks
may also declare J free explicitly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from math import lcm
from typing import Iterable, Sequence


class ModelError(Exception):
    pass


class ParseError(ModelError):
    """Malformed system document (syntax or vocabulary)."""


class ValidationError(ModelError):
    """Structurally well-formed document violating a model invariant."""


class Policy(str, Enum):
    PREEMPTIVE = "preemptive"
    NONPREEMPTIVE = "nonpreemptive"


@dataclass(frozen=True)
class ResourceSpec:
    id: str
    policy: Policy


@dataclass(frozen=True)
class TaskSpec:
    id: str
    resource: str
    period: int
    priority: int  # higher value = higher priority
    max_deadline: int
    wcet: int | None = None  # C; None = free
    deadline: int | None = None  # D; None = free
    jitter: int | None = 0  # J; None = free

    @property
    def wcet_free(self) -> bool:
        return self.wcet is None

    @property
    def deadline_free(self) -> bool:
        return self.deadline is None

    @property
    def jitter_free(self) -> bool:
        return self.jitter is None


@dataclass(frozen=True)
class PipelineSpec:
    id: str
    period: int
    e2e_deadline: int
    tasks: tuple[str, ...]


@dataclass(frozen=True)
class SystemSpec:
    resources: tuple[ResourceSpec, ...]
    tasks: tuple[TaskSpec, ...]
    pipelines: tuple[PipelineSpec, ...]

    def resource_by_id(self, rid: str) -> ResourceSpec:
        for r in self.resources:
            if r.id == rid:
                return r
        raise KeyError(rid)

    def task_by_id(self, tid: str) -> TaskSpec:
        for t in self.tasks:
            if t.id == tid:
                return t
        raise KeyError(tid)

    def pipeline_of(self, tid: str) -> PipelineSpec | None:
        for p in self.pipelines:
            if tid in p.tasks:
                return p
        return None

    def tasks_on(self, rid: str) -> tuple[TaskSpec, ...]:
        """Tasks of one resource, highest priority first."""
        return tuple(
            sorted(
                (t for t in self.tasks if t.resource == rid),
                key=lambda t: -t.priority,
            )
        )

    def periods(self) -> tuple[int, ...]:
        return tuple(t.period for t in self.tasks)


def hyperperiod(tasks: Sequence[TaskSpec], level: int) -> int:
    """lcm of the periods of the first ``level`` tasks (priority order).

    ``tasks`` is one resource's task list sorted highest priority first;
    ``level`` counts how many of them to include (1-based).
    """
    if not tasks or level < 1:
        raise ValueError("level must select at least one task")
    return lcm(*(t.period for t in tasks[:level]))


def validate(system: SystemSpec) -> SystemSpec:
    rids = [r.id for r in system.resources]
    if len(set(rids)) != len(rids):
        raise ValidationError("duplicate resource id")
    tids = [t.id for t in system.tasks]
    if len(set(tids)) != len(tids):
        raise ValidationError("duplicate task id")
    pids = [p.id for p in system.pipelines]
    if len(set(pids)) != len(pids):
        raise ValidationError("duplicate pipeline id")

    rset = set(rids)
    for t in system.tasks:
        if t.resource not in rset:
            raise ValidationError(f"task {t.id}: unknown resource {t.resource}")
        if t.period <= 0:
            raise ValidationError(f"task {t.id}: period must be positive")
        if t.max_deadline <= 0:
            raise ValidationError(f"task {t.id}: max_deadline must be positive")
        if t.wcet is not None and t.wcet < 0:
            raise ValidationError(f"task {t.id}: C must be non-negative")
        if t.jitter is not None and t.jitter < 0:
            raise ValidationError(f"task {t.id}: J must be non-negative")
        if t.deadline is not None and not 0 <= t.deadline <= t.max_deadline:
            raise ValidationError(
                f"task {t.id}: fixed D must satisfy 0 <= D <= max_deadline"
            )

    for rid in rids:
        prios = [t.priority for t in system.tasks if t.resource == rid]
        if len(set(prios)) != len(prios):
            raise ValidationError(f"priority collision on resource {rid}")

    tset = set(tids)
    owner: dict[str, str] = {}
    for p in system.pipelines:
        if not p.tasks:
            raise ValidationError(f"pipeline {p.id}: empty task list")
        if p.period <= 0 or p.e2e_deadline <= 0:
            raise ValidationError(f"pipeline {p.id}: period and e2e_deadline must be positive")
        for tid in p.tasks:
            if tid not in tset:
                raise ValidationError(f"pipeline {p.id}: unknown task {tid}")
            if tid in owner:
                raise ValidationError(
                    f"task {tid} belongs to both {owner[tid]} and {p.id}"
                )
            owner[tid] = p.id
            if system.task_by_id(tid).period != p.period:
                raise ValidationError(
                    f"pipeline {p.id}: task {tid} period differs from pipeline period"
                )
    return system


_FREE = "free"


def _param(obj: dict, field: str, default):
    v = obj.get(field, default)
    if v == _FREE:
        return None
    if v is None:
        raise ParseError(f"field {field} must be an integer or \"{_FREE}\"")
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"field {field} must be an integer or \"{_FREE}\"")
    return v


def _require(obj: dict, field: str, where: str):
    if field not in obj:
        raise ParseError(f"{where}: missing required field {field!r}")
    return obj[field]


def parse_system(text: str) -> SystemSpec:
    """Parse and validate a JSON system-description document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"syntax error at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")

    resources = []
    for robj in doc.get("resources", []):
        pol = _require(robj, "policy", "resource")
        try:
            policy = Policy(pol)
        except ValueError:
            raise ParseError(f"unknown policy {pol!r}") from None
        resources.append(ResourceSpec(id=str(_require(robj, "id", "resource")), policy=policy))

    pipelines = []
    pipeline_members: set[str] = set()
    for pobj in doc.get("pipelines", []):
        pipelines.append(
            PipelineSpec(
                id=str(_require(pobj, "id", "pipeline")),
                period=int(_require(pobj, "period", "pipeline")),
                e2e_deadline=int(_require(pobj, "e2e_deadline", "pipeline")),
                tasks=tuple(str(t) for t in _require(pobj, "tasks", "pipeline")),
            )
        )
        pipeline_members.update(pipelines[-1].tasks)

    tasks = []
    for tobj in doc.get("tasks", []):
        tid = str(_require(tobj, "id", "task"))
        in_pipeline = tid in pipeline_members
        tasks.append(
            TaskSpec(
                id=tid,
                resource=str(_require(tobj, "resource", "task")),
                period=int(_require(tobj, "period", "task")),
                priority=int(_require(tobj, "priority", "task")),
                max_deadline=int(_require(tobj, "max_deadline", "task")),
                wcet=_param(tobj, "C", _FREE),
                deadline=_param(tobj, "D", _FREE),
                jitter=_param(tobj, "J", _FREE if in_pipeline else 0),
            )
        )

    return validate(SystemSpec(tuple(resources), tuple(tasks), tuple(pipelines)))


def serialize_system(system: SystemSpec) -> str:
    """Canonical JSON for a SystemSpec; parse_system(serialize(s)) == s."""

    def p(v):
        return _FREE if v is None else v

    doc = {
        "resources": [{"id": r.id, "policy": r.policy.value} for r in system.resources],
        "tasks": [
            {
                "id": t.id,
                "resource": t.resource,
                "period": t.period,
                "priority": t.priority,
                "max_deadline": t.max_deadline,
                "C": p(t.wcet),
                "D": p(t.deadline),
                "J": p(t.jitter),
            }
            for t in system.tasks
        ],
        "pipelines": [
            {
                "id": pl.id,
                "period": pl.period,
                "e2e_deadline": pl.e2e_deadline,
                "tasks": list(pl.tasks),
            }
            for pl in system.pipelines
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_system(path: str) -> SystemSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_system(fh.read())
