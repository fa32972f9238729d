"""Parametric schedulability region under non-preemptive fixed priority.

Models a CAN-style bus: a started job runs to completion, so a task suffers
up to one lower-priority blocker of length C_j - 1 and its own job h must
*start* early enough to fit C_i before the deadline. The blocking time is an
auxiliary variable B, lower-bounded by every lower-priority C_j - 1 (and by
zero), and eliminated by Fourier-Motzkin before the region is returned.

Also provides the fixed-parameter helpers (level-i active period and
worst-case start time) used to validate the parametric test.
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
from .preemptive import (
    InterferingTask,
    LevelContext,
    Tagged,
    Witness,
    scheduling_points,
)


class OverUtilizedError(Exception):
    """Fixed-point iteration diverged past B_i + H_i."""


@dataclass(frozen=True)
class BlockingTask:
    """A lower-priority task; only its computation time matters."""

    task_id: str
    wcet: Atom


@dataclass(frozen=True)
class NPLevelContext(LevelContext):
    """LevelContext plus lower-priority blockers; ``jobs`` holds h̄_i."""

    lp: tuple[BlockingTask, ...] = ()


def np_job_count(period: int, hp_periods: tuple[int, ...], lp_periods: tuple[int, ...]) -> int:
    """h̄_i = ceil(L̄_i / T_i) with L̄_i = max lp period (0 if none) + H_i."""
    h_i = lcm(period, *hp_periods) if hp_periods else period
    l_bar = (max(lp_periods) if lp_periods else 0) + h_i
    return -(-l_bar // period)


def _blocking_value(lp_wcets: list[int]) -> int:
    return max([0] + [c - 1 for c in lp_wcets])


def active_period_fixed(ctx: NPLevelContext) -> int:
    """Lowest fixed point of L = B + sum_{j<=i} ceil(L/T_j)*C_j.

    All computation times must be fixed. Diverging past B + H_i raises
    OverUtilizedError.
    """
    cs = _fixed_wcets(ctx)
    blocking = _blocking_value([c for _, c in _fixed_lp(ctx)])
    h_i = lcm(ctx.period, *(t.period for t in ctx.hp)) if ctx.hp else ctx.period
    bound = blocking + h_i
    own = cs[ctx.task_id]
    level = [(t.period, cs[t.task_id]) for t in ctx.hp] + [(ctx.period, own)]
    length = blocking + own
    while True:
        nxt = blocking + sum(-(-length // period) * c for period, c in level)
        if nxt == length:
            return length
        if nxt > bound:
            raise OverUtilizedError(
                f"active period of {ctx.task_id} exceeds {bound}"
            )
        length = nxt


def np_start_time_fixed(k: int, ctx: NPLevelContext) -> int:
    """Worst-case start time of job k: lowest fixed point of
    s = B + (k-1)C_i + sum_{j<i} (floor(s/T_j)+1)*C_j."""
    if k < 1:
        raise ValueError("job index starts at 1")
    cs = _fixed_wcets(ctx)
    blocking = _blocking_value([c for _, c in _fixed_lp(ctx)])
    h_i = lcm(ctx.period, *(t.period for t in ctx.hp)) if ctx.hp else ctx.period
    bound = blocking + h_i
    own = cs[ctx.task_id]
    hp = [(t.period, cs[t.task_id]) for t in ctx.hp]
    s = blocking + sum(c for _, c in hp)
    while True:
        nxt = blocking + (k - 1) * own + sum(
            (s // period + 1) * c for period, c in hp
        )
        if nxt == s:
            return s
        if nxt > bound:
            raise OverUtilizedError(
                f"start time of {ctx.task_id} job {k} exceeds {bound}"
            )
        s = nxt


def _fixed_wcets(ctx: NPLevelContext) -> dict[str, int]:
    out = {}
    for t in (ctx,) + ctx.hp:
        tid = t.task_id
        if not isinstance(t.wcet, int):
            raise ValueError(f"C of {tid} must be fixed for this computation")
        out[tid] = t.wcet
    return out


def _fixed_lp(ctx: NPLevelContext) -> list[tuple[str, int]]:
    out = []
    for b in ctx.lp:
        if not isinstance(b.wcet, int):
            raise ValueError(f"C of {b.task_id} must be fixed for this computation")
        out.append((b.task_id, b.wcet))
    return out


def _job_disjunct_np(
    ctx: NPLevelContext, bvar: ParamVar, h: int, n: tuple[int, ...]
) -> ConvexPolyhedron:
    """Start-time certificate for job h via vector n, plus blocking bounds."""
    constraints: list[LinearConstraint] = []
    lhs = expr(bvar, (ctx.wcet, h - 1))
    for nj, task in zip(n, ctx.hp):
        lhs.add(task.wcet, nj)
    for nk, task in zip(n, ctx.hp):
        rhs = expr(nk * task.period).add(task.jitter, -1)
        constraints.append(lhs.copy().le(rhs))
    # job h must start by (h-1)T + D - C - J so its C ticks fit
    rhs = (
        expr((h - 1) * ctx.period)
        .add(ctx.deadline)
        .add(ctx.wcet, -1)
        .add(ctx.jitter, -1)
    )
    constraints.append(lhs.copy().le(rhs))
    constraints.append(expr(0).le(expr(bvar)))  # B >= 0
    for blocker in ctx.lp:
        # B >= C_j - 1 for every possible blocker
        constraints.append(expr(blocker.wcet, -1).le(expr(bvar)))
    return ConvexPolyhedron.of(constraints)


def tagged_task_region_np(ctx: NPLevelContext, full_limit: int = 300) -> list[Tagged]:
    bvar = ParamVar(ctx.task_id, Kind.B)
    acc: list[Tagged] = [(ConvexPolyhedron(()), ())]
    for h in range(1, ctx.jobs + 1):
        t_h = (h - 1) * ctx.period + ctx.deadline_bound
        pts = scheduling_points(ctx, t_h)
        if not pts:
            return []
        level: list[Tagged] = [
            (_job_disjunct_np(ctx, bvar, h, n), (Witness(ctx.task_id, h, n),))
            for n in pts
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
    # the auxiliary blocking variable never escapes this module
    out: list[Tagged] = []
    for poly, tags in acc:
        elim = poly.eliminate({bvar})
        if not elim.is_empty():
            out.append((elim, tags))
    keep = reduce_polyhedra([p for p, _ in out], full_limit)
    return [out[i] for i in keep]


def task_region_nonpreemptive(ctx: NPLevelContext) -> Region:
    """Region under which every checked job starts early enough to finish."""
    return Region.of(p for p, _ in tagged_task_region_np(ctx))
