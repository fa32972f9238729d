"""Parametric schedulability regions for distributed fixed-priority systems.

Exact-arithmetic construction of the region of free parameters (computation
times, deadlines, jitters) under which a distributed system of task pipelines
is schedulable, plus a brute-force discrete-time simulator used as ground
truth for soundness checks.
"""

from .composition import (
    SystemRegion,
    build_system_region,
    free_variables,
    level_context,
    schedulability_slice,
    wcrt_bound,
)
from .geometry import (
    ConvexPolyhedron,
    EmptyRegionError,
    Interval,
    Kind,
    LinearConstraint,
    ParamVar,
    Region,
    Relation,
    linear,
)
from .model import (
    ParseError,
    PipelineSpec,
    Policy,
    ResourceSpec,
    SystemSpec,
    TaskSpec,
    ValidationError,
    hyperperiod,
    load_system,
    parse_system,
    serialize_system,
)
from .nonpreemptive import (
    NPLevelContext,
    active_period_fixed,
    np_start_time_fixed,
    task_region_nonpreemptive,
)
from .preemptive import (
    LevelContext,
    scheduling_points,
    task_region_preemptive,
)
from .simulator import (
    GridReport,
    SimResult,
    SimTrace,
    default_horizon,
    grid_compare,
    simulate,
    worst_case_blocking_mode,
)

__all__ = [
    "SystemRegion",
    "build_system_region",
    "free_variables",
    "level_context",
    "schedulability_slice",
    "wcrt_bound",
    "ConvexPolyhedron",
    "EmptyRegionError",
    "Interval",
    "Kind",
    "LinearConstraint",
    "ParamVar",
    "Region",
    "Relation",
    "linear",
    "ParseError",
    "PipelineSpec",
    "Policy",
    "ResourceSpec",
    "SystemSpec",
    "TaskSpec",
    "ValidationError",
    "hyperperiod",
    "load_system",
    "parse_system",
    "serialize_system",
    "NPLevelContext",
    "active_period_fixed",
    "np_start_time_fixed",
    "task_region_nonpreemptive",
    "LevelContext",
    "scheduling_points",
    "task_region_preemptive",
    "GridReport",
    "SimResult",
    "SimTrace",
    "default_horizon",
    "grid_compare",
    "simulate",
    "worst_case_blocking_mode",
]

__version__ = "0.1.0"
