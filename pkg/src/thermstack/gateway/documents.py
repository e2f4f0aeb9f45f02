"""The unified design document: one JSON object carrying everything a run
needs, with the text artifacts (stack, floorplans, patterns, traces, sweep)
embedded verbatim so documents are self-contained and content-addressable.

Schema (all texts in the package's own file formats):

    {
      "name": "baseline",
      "grid": {"rows": 64, "cols": 64},
      "stack": "<stack description text>",        # refs resolve against the
      "floorplans": {"cores.flp": "<text>"},      # floorplans/patterns keys
      "patterns": {"chan.pat": "<text>"},
      "power_models": [{"block": "...", "static_power": W,
                        "switching_energy": J, "clock_frequency": Hz,
                        "activity_factor_default": f}, ...],
      "mapping_rules": "<text>",                  # optional
      "activity": {"trace": "<text>"}             # one of three forms
                | {"stats": {"name": [...]}, "interval_s": s}
                | {"profile": {"kind": "uniform|one_hot|ramp", ...}},
      "workloads": {"name": "<activity trace text>"},   # optional, sweeps
      "solver": {"sink_h": 12000.0},              # optional overrides
      "sweep": "<sweep definition text>"          # optional
    }
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .. import cooling, floorplan, power, stack as stack_mod
from ..dse import DesignPoint, PipelineResult, SweepConfig, run_pipeline, run_sweep, compare_report
from ..sweepdef import SweepDefinition, build_points, geometry_from, parse_sweep_definition
from ..thermal.network import DEFAULT_SINK_H


class DocumentError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def content_hash(content: dict, *extra: str) -> str:
    payload = json.dumps(content, sort_keys=True, separators=(",", ":"))
    h = hashlib.sha256(payload.encode())
    for e in extra:
        h.update(e.encode())
    return h.hexdigest()[:16]


@dataclass
class RuntimeDesign:
    stack: stack_mod.Stack
    grid: stack_mod.Grid
    models: tuple[power.BlockPowerModel, ...]
    activity: power.ActivityTrace
    config: SweepConfig
    sweep: SweepDefinition | None
    workloads: dict[str, power.ActivityTrace]


def _parse_models(raw) -> tuple[power.BlockPowerModel, ...]:
    models = []
    for m in raw:
        models.append(
            power.BlockPowerModel(
                block=m["block"],
                static_power=float(m["static_power"]),
                switching_energy=float(m["switching_energy"]),
                clock_frequency=float(m["clock_frequency"]),
                activity_factor_default=float(m.get("activity_factor_default", 0.0)),
            )
        )
    return tuple(models)


def _activity_blocks(stk: stack_mod.Stack) -> list[str]:
    blocks: list[str] = []
    for idx in stk.die_indices():
        blocks.extend(n for n in stk.layers[idx].floorplan.block_names())
    return blocks


def _build_activity(content: dict, models, stk) -> power.ActivityTrace:
    spec = content.get("activity")
    if spec is None:
        raise ValueError("document has no 'activity' entry")
    if "trace" in spec:
        return power.parse_activity_trace(spec["trace"])
    if "stats" in spec:
        rules = power.parse_mapping_rules(content.get("mapping_rules", ""))
        return power.apply_mapping(spec["stats"], rules, models, float(spec["interval_s"]))
    if "profile" in spec:
        p = dict(spec["profile"])
        kind = p.pop("kind")
        intervals = int(p.pop("intervals", 1))
        interval_s = float(p.pop("interval_s", 1e-3))
        modeled = [m.block for m in models]
        return power.synthetic_activity(modeled, kind, intervals, interval_s, **p)
    raise ValueError("activity must contain one of: trace, stats, profile")


def build_runtime(content: dict) -> RuntimeDesign:
    """Parse and cross-link a document; raises DocumentError on violations."""
    violations: list[str] = []

    rows = int(content.get("grid", {}).get("rows", 64))
    cols = int(content.get("grid", {}).get("cols", 64))

    floorplans = {}
    for key, text in content.get("floorplans", {}).items():
        try:
            floorplans[key] = floorplan.parse_floorplan(text)
        except floorplan.FloorplanError as e:
            violations.append(f"floorplan {key!r}: {e}")

    if violations:
        raise DocumentError(violations)

    stack_text = content.get("stack")
    if not stack_text:
        raise DocumentError(["document has no 'stack' entry"])

    # grid needs the outline; pre-parse the stack once without patterns
    try:
        shell = stack_mod.parse_stack(stack_text, floorplans=floorplans)
    except stack_mod.StackFormatError as e:
        raise DocumentError([f"stack: {e}"]) from e
    try:
        grid = stack_mod.grid_for(shell.outline, rows, cols)
    except stack_mod.InvalidResolutionError as e:
        raise DocumentError([f"grid: {e}"]) from e

    patterns = {}
    for key, text in content.get("patterns", {}).items():
        try:
            patterns[key] = cooling.parse_pattern(text, grid)
        except (cooling.PatternFormatError, ValueError) as e:
            violations.append(f"pattern {key!r}: {e}")
    if violations:
        raise DocumentError(violations)

    try:
        stk = stack_mod.parse_stack(stack_text, floorplans=floorplans, patterns=patterns)
    except stack_mod.StackFormatError as e:
        raise DocumentError([f"stack: {e}"]) from e

    for v in stack_mod.validate_stack(stk):
        violations.append(f"stack: {v}")
    for key, p in patterns.items():
        for pv in cooling.validate_pattern(p):
            violations.append(f"pattern {key!r}: {pv}")
    if violations:
        raise DocumentError(violations)

    try:
        models = _parse_models(content.get("power_models", []))
        activity = _build_activity(content, models, stk)
    except (ValueError, KeyError) as e:
        raise DocumentError([f"power: {e}"]) from e

    solver = content.get("solver", {})
    sweep = None
    geometry = None
    knobs: tuple = ()
    if content.get("sweep"):
        try:
            sweep = parse_sweep_definition(content["sweep"])
            geometry = geometry_from(sweep)
            knobs = tuple(sweep.knobs)
        except Exception as e:  # noqa: BLE001 - reported as violation
            raise DocumentError([f"sweep: {e}"]) from e

    config = SweepConfig(
        rows=rows,
        cols=cols,
        power_models=models,
        knobs=knobs,
        sink_h=float(solver.get("sink_h", DEFAULT_SINK_H)),
        workers=solver.get("workers"),
    )
    if geometry is not None:
        config.cooling = geometry

    workloads: dict[str, power.ActivityTrace] = {}
    if sweep is not None:
        if sweep.use_default_workload or not sweep.workloads:
            workloads["default"] = activity
        for name, key in sweep.workloads:
            table = content.get("workloads", {})
            if key not in table:
                raise DocumentError([f"sweep: workload {name!r} references missing key {key!r}"])
            workloads[name] = power.parse_activity_trace(table[key])

    return RuntimeDesign(stk, grid, models, activity, config, sweep, workloads)


def validate_document(content: dict) -> list[str]:
    """All violations in a document; empty list means runnable."""
    try:
        build_runtime(content)
    except DocumentError as e:
        return e.violations
    except Exception as e:  # noqa: BLE001 - surface anything as a violation
        return [f"{type(e).__name__}: {e}"]
    return []


def run_simulate(content: dict) -> tuple[PipelineResult, RuntimeDesign]:
    """Steady-state pipeline for the document's stack as described."""
    rt = build_runtime(content)
    point = DesignPoint(name=content.get("name", "design"), stack=rt.stack)
    result = run_pipeline(point, rt.activity, rt.config)
    return result, rt


def run_sweep_document(content: dict):
    """Sweep per the document's sweep definition; returns the comparison report."""
    rt = build_runtime(content)
    if rt.sweep is None:
        raise DocumentError(["document has no 'sweep' entry"])
    points = build_points(rt.sweep, rt.stack, rt.config)
    result = run_sweep(points, rt.workloads, rt.config)
    baseline = rt.sweep.baseline_point or points[0].name
    return compare_report(result, baseline), result, rt
