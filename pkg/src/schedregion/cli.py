"""Command-line front end: analyze, query, slice, project, simulate, compare.

Exit codes: 0 success / schedulable; 1 not schedulable or soundness
violations found; 2 usage, parse or lookup errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .composition import (
    CompositionError,
    build_system_region,
    schedulability_slice,
)
from .geometry import (
    EmptyRegionError,
    Kind,
    MissingAssignmentError,
    ParamVar,
    region_to_dict,
    region_to_text,
)
from .model import ModelError, load_system
from .simulator import (
    ExplosionGuardError,
    SimulationError,
    default_horizon,
    grid_compare,
    simulate,
    trace_to_text,
    worst_case_blocking_mode,
)

_VAR_RE = re.compile(r"^([CDJ])\[([^\[\]]+)\]$")


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


def parse_var(text: str) -> ParamVar:
    m = _VAR_RE.match(text.strip())
    if not m:
        raise CliError(f"bad variable syntax {text!r}; expected C[id], D[id] or J[id]")
    return ParamVar(m.group(2), Kind(m.group(1)))


def parse_point(text: str) -> dict[ParamVar, int]:
    out: dict[ParamVar, int] = {}
    if not text.strip():
        return out
    for item in text.split(","):
        if "=" not in item:
            raise CliError(f"bad point component {item!r}; expected VAR=INT")
        name, value = item.split("=", 1)
        try:
            out[parse_var(name)] = int(value)
        except ValueError:
            raise CliError(f"bad integer in point component {item!r}") from None
    return out


def _check_free(system_region, variables) -> None:
    unknown = [v for v in variables if v not in system_region.var_index]
    if unknown:
        raise CliError(
            "not free parameters of this system: "
            + ", ".join(str(v) for v in unknown)
        )


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _region_text(sr, explain: bool) -> str:
    lines = []
    for k, d in enumerate(sr.region.disjuncts):
        lines.append(f"DISJUNCT {k}")
        if explain:
            for w in sr.provenance[k]:
                vec = ",".join(str(x) for x in w.vector)
                lines.append(f"# witness task={w.task_id} h={w.job} n=({vec})")
        for c in d.constraints:
            lines.append(str(c))
    if not sr.region.disjuncts:
        lines.append("EMPTY")
    return "\n".join(lines) + "\n"


def _region_structured(sr, explain: bool) -> str:
    doc = region_to_dict(sr.region)
    doc["variables"] = [str(v) for v in sr.var_index]
    if explain:
        for k, dis in enumerate(doc["disjuncts"]):
            dis["witnesses"] = [
                {"task": w.task_id, "h": w.job, "n": list(w.vector)}
                for w in sr.provenance[k]
            ]
    return json.dumps(doc, indent=2) + "\n"


def cmd_analyze(args) -> int:
    system = load_system(args.system)
    sr = build_system_region(system)
    if args.format == "structured":
        _emit(_region_structured(sr, args.explain), args.out)
    else:
        _emit(_region_text(sr, args.explain), args.out)
    return 0


def cmd_query(args) -> int:
    system = load_system(args.system)
    sr = build_system_region(system)
    point = parse_point(args.point)
    _check_free(sr, point)
    sliced = schedulability_slice(sr, set(point))
    ok = sliced.contains(point)
    _emit(("SCHEDULABLE" if ok else "NOT SCHEDULABLE") + "\n", args.out)
    return 0 if ok else 1


def cmd_project(args) -> int:
    system = load_system(args.system)
    sr = build_system_region(system)
    v = parse_var(args.var)
    _check_free(sr, [v])
    sliced = schedulability_slice(sr, {v})
    try:
        interval = sliced.var_interval(v)
    except EmptyRegionError:
        _emit(f"{v} in EMPTY\n", args.out)
        return 1
    lo = "-inf" if interval.lower is None else str(interval.lower)
    hi = "+inf" if interval.upper is None else str(interval.upper)
    left = "[" if interval.lower_attained else "("
    right = "]" if interval.upper_attained else ")"
    _emit(f"{v} in {left}{lo}, {hi}{right}\n", args.out)
    return 0


def _grid_axes(args):
    x = parse_var(args.x)
    y = parse_var(args.y)
    return x, y, (args.xmin, args.xmax), (args.ymin, args.ymax)


def cmd_slice(args) -> int:
    system = load_system(args.system)
    x, y, xr, yr = _grid_axes(args)
    sr = build_system_region(system)
    _check_free(sr, [x, y])
    region2d = schedulability_slice(sr, {x, y})
    cells = []
    for gx in range(xr[0], xr[1] + 1, args.step):
        for gy in range(yr[0], yr[1] + 1, args.step):
            cells.append((gx, gy, region2d.contains({x: gx, y: gy})))
    if args.format == "svg":
        _emit(_cells_to_svg(x, y, xr, yr, args.step, cells), args.out)
    else:
        lines = [f"{x},{y},schedulable"]
        lines += [f"{gx},{gy},{1 if ok else 0}" for gx, gy, ok in cells]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cells_to_svg(x, y, xr, yr, step, cells) -> str:
    """One square per schedulable integer grid cell (integer semantics)."""
    size = 10
    ncols = (xr[1] - xr[0]) // step + 1
    nrows = (yr[1] - yr[0]) // step + 1
    width, height = ncols * size, nrows * size
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<!-- x axis: {x} in [{xr[0]},{xr[1]}], y axis: {y} in [{yr[0]},{yr[1]}], step {step} -->",
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for gx, gy, ok in cells:
        if not ok:
            continue
        col = (gx - xr[0]) // step
        row = (gy - yr[0]) // step
        px = col * size
        py = height - (row + 1) * size  # y grows upward
        parts.append(
            f'<rect x="{px}" y="{py}" width="{size}" height="{size}" fill="#3a7d44"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_simulate(args) -> int:
    system = load_system(args.system)
    point = parse_point(args.point)
    horizon = args.horizon if args.horizon is not None else default_horizon(system)
    if args.adversarial_blocking:
        result = worst_case_blocking_mode(system, point, horizon)
    else:
        result = simulate(system, point, horizon)
    _emit(trace_to_text(result), args.out)
    return 0 if result.schedulable else 1


def cmd_compare(args) -> int:
    system = load_system(args.system)
    x, y, xr, yr = _grid_axes(args)
    extra = parse_point(args.point) if args.point else {}
    report = grid_compare(
        system,
        x,
        y,
        xr,
        yr,
        step=args.step,
        horizon=args.horizon,
        adversarial=args.adversarial_blocking,
        extra_point=extra,
    )
    _emit(report.to_text(), args.out)
    return 1 if report.soundness_violations else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schedregion",
        description="Parametric schedulability regions for distributed "
        "fixed-priority systems, validated by brute-force simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--system", required=True, help="system description file")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("analyze", help="emit the full system region")
    common(p)
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.add_argument("--explain", action="store_true", help="attach scheduling-point witnesses")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("query", help="is the system schedulable at a point?")
    common(p)
    p.add_argument("--point", required=True, help='assignments "C[id]=2,..."')
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("project", help="exact interval of one variable over the region")
    common(p)
    p.add_argument("--var", required=True, help="variable, e.g. D[tau3]")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("slice", help="2-D schedulability slice as CSV or SVG")
    common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--xmin", type=int, default=0)
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--ymin", type=int, default=0)
    p.add_argument("--ymax", type=int, required=True)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--format", choices=["csv", "svg"], default="csv")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("simulate", help="run the oracle simulator at a point")
    common(p)
    p.add_argument("--point", default="", help='assignments "C[id]=2,..."')
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--adversarial-blocking", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="grid-compare analysis against the simulator")
    common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--xmin", type=int, default=0)
    p.add_argument("--xmax", type=int, required=True)
    p.add_argument("--ymin", type=int, default=0)
    p.add_argument("--ymax", type=int, required=True)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--point", default="", help="extra fixed assignments")
    p.add_argument("--adversarial-blocking", action="store_true")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (ModelError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (CompositionError, MissingAssignmentError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (SimulationError, ExplosionGuardError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
