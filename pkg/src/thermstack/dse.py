"""Design-space exploration: enumerate stackings, cooling insertions, and
power knobs; run the power -> assemble -> steady-solve -> summarize pipeline
per design point per workload; rank by worst-case stack maximum temperature.

Points are evaluated on a worker pool over immutable inputs; a failing point
is recorded and never aborts the sweep. Ranking is by worst case over
workloads, then mean over workloads, then declaration order.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fnmatch import fnmatch
from typing import Mapping, Sequence

from .cooling import Coolant, generate_pattern, water_coolant
from .floorplan import rasterize
from .power import ActivityTrace, BlockPowerModel, block_power, scale_for_capacity, trace_power
from .stack import DEFAULT_MATERIALS, Layer, Material, Stack, grid_for, validate_stack
from .thermal import assemble, solve_steady, summarize
from .thermal.network import DEFAULT_SINK_H
from .thermal.report import Summary
from .thermal.solve import ThermalField


class SweepDefinitionError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class KnobSpec:
    """A named power knob: capacity-style scaling of matching blocks."""

    name: str
    targets: tuple[str, ...]  # block names, fnmatch patterns allowed
    values: tuple[float, ...]
    static_exponent: float = 1.0
    dynamic_exponent: float = 0.5

    def applies_to(self, block: str) -> bool:
        return any(fnmatch(block, pat) for pat in self.targets)


@dataclass(frozen=True)
class CoolingGeometry:
    channel_width: float = 125e-6
    channel_pitch: float = 250e-6
    layer_thickness: float = 200e-6
    wall_material: Material = DEFAULT_MATERIALS["silicon"]
    coolant: Coolant | None = None  # None: water with derived h


@dataclass
class SweepConfig:
    rows: int
    cols: int
    power_models: tuple[BlockPowerModel, ...]
    knobs: tuple[KnobSpec, ...] = ()
    cooling: CoolingGeometry = field(default_factory=CoolingGeometry)
    sink_h: float = DEFAULT_SINK_H
    workers: int | None = None


@dataclass(frozen=True)
class StackVariant:
    name: str
    order: tuple[int, ...]  # permutation of original die indices
    stack: Stack


@dataclass(frozen=True)
class CoolingVariant:
    name: str
    style: str | None  # None = no cooling
    position: int | str | None  # insertion index or "below_hottest_die"


@dataclass(frozen=True)
class DesignPoint:
    name: str
    stack: Stack
    knob_settings: Mapping[str, float] = field(default_factory=dict)
    stacking: str = ""
    cooling: str = "none"


@dataclass(frozen=True)
class RunRecord:
    point: str
    workload: str
    stack_max_k: float
    layer_max_k: tuple[float, ...]
    runtime_s: float


@dataclass(frozen=True)
class ErrorRecord:
    point: str
    workload: str | None
    message: str


@dataclass
class SweepResult:
    records: list[RunRecord]
    errors: list[ErrorRecord]
    ranking: list[str]  # point names, best (coolest worst case) first
    workload_names: tuple[str, ...]

    def record(self, point: str, workload: str) -> RunRecord:
        for r in self.records:
            if r.point == point and r.workload == workload:
                return r
        raise KeyError((point, workload))

    def worst_case(self, point: str) -> float:
        return max(r.stack_max_k for r in self.records if r.point == point)


# --- enumeration -------------------------------------------------------------


def enumerate_stackings(
    stack: Stack,
    policy: str,
    named: Mapping[str, Sequence[int]] | None = None,
) -> list[StackVariant]:
    """Stack variants under a stacking policy.

    `all_die_permutations` permutes die layers in place (non-die layers keep
    their slots) and removes content-duplicate orders; `named_list` builds
    exactly the given name -> die-index-order entries.
    """
    die_idx = stack.die_indices()
    if policy == "all_die_permutations":
        out = []
        seen = set()
        for perm in itertools.permutations(range(len(die_idx))):
            key = tuple(_die_signature(stack.layers[die_idx[p]]) for p in perm)
            if key in seen:
                continue
            seen.add(key)
            name = "-".join(str(p) for p in perm)
            out.append(StackVariant(name, perm, _reorder_dies(stack, perm)))
        return out
    if policy == "named_list":
        if not named:
            raise ValueError("named_list policy needs name -> order entries")
        out = []
        for name, order in named.items():
            if sorted(order) != list(range(len(die_idx))):
                raise ValueError(
                    f"stacking {name!r}: order {tuple(order)} is not a permutation "
                    f"of the {len(die_idx)} die layers"
                )
            out.append(StackVariant(name, tuple(order), _reorder_dies(stack, order)))
        return out
    raise ValueError(f"unknown stacking policy {policy!r}")


def _die_signature(layer: Layer):
    return (layer.kind, layer.thickness, layer.material, layer.floorplan)


def _reorder_dies(stack: Stack, order: Sequence[int]) -> Stack:
    die_idx = stack.die_indices()
    new = stack.copy()
    for slot, which in zip(die_idx, order):
        new.layers[slot] = stack.layers[die_idx[which]].copy()
    return new


def enumerate_cooling(
    variant: StackVariant,
    styles: Sequence[str],
    positions: Sequence[int | str] = ("below_hottest_die",),
) -> list[CoolingVariant]:
    """One cooling variant per style x position; style 'none' means no layer."""
    out = []
    n = len(variant.stack.layers)
    for style in styles:
        if style == "none" or style is None:
            out.append(CoolingVariant("none", None, None))
            continue
        for pos in positions:
            if isinstance(pos, int) and not 0 <= pos <= n:
                raise ValueError(f"cooling insertion index {pos} beyond layer count {n}")
            label = f"{style}@{pos}"
            out.append(CoolingVariant(label, style, pos))
    return out


def hottest_die_index(stack: Stack, models: Sequence[BlockPowerModel]) -> int:
    """Die layer with the highest total power at default activity factors."""
    by_block = {m.block: m for m in models}
    best, best_power = None, -1.0
    for idx in stack.die_indices():
        total = 0.0
        for b in stack.layers[idx].floorplan.blocks:
            m = by_block.get(b.name)
            if m is not None:
                total += block_power(m, m.activity_factor_default)
        if total > best_power:
            best, best_power = idx, total
    if best is None:
        raise ValueError("stack has no die layers")
    return best


def build_point(
    name: str,
    variant: StackVariant,
    cooling: CoolingVariant,
    config: SweepConfig,
    knob_settings: Mapping[str, float] | None = None,
) -> DesignPoint:
    """Materialize a design point: insert the cooling layer, record knobs."""
    stack = variant.stack.copy()
    if cooling.style is not None:
        pos = cooling.position
        if pos == "below_hottest_die":
            pos = hottest_die_index(stack, config.power_models)
        if not isinstance(pos, int) or not 0 <= pos <= len(stack.layers):
            raise ValueError(f"bad cooling insertion position {cooling.position!r}")
        geo = config.cooling
        grid = grid_for(stack.outline, config.rows, config.cols)
        coolant = geo.coolant or water_coolant(geo.channel_width, geo.layer_thickness)
        pattern = generate_pattern(grid, cooling.style, geo.channel_width, geo.channel_pitch, coolant)
        stack.layers.insert(
            pos,
            Layer("microchannel", geo.layer_thickness, geo.wall_material, pattern=pattern,
                  ref=f"{cooling.style}.pat"),
        )
    return DesignPoint(
        name=name,
        stack=stack,
        knob_settings=dict(knob_settings or {}),
        stacking=variant.name,
        cooling=cooling.name,
    )


def apply_knobs(
    models: Sequence[BlockPowerModel],
    knobs: Sequence[KnobSpec],
    settings: Mapping[str, float],
) -> list[BlockPowerModel]:
    specs = {k.name: k for k in knobs}
    out = list(models)
    for name, value in settings.items():
        spec = specs.get(name)
        if spec is None:
            raise KeyError(f"unknown knob {name!r}")
        out = [
            scale_for_capacity(m, value, spec.static_exponent, spec.dynamic_exponent)
            if spec.applies_to(m.block)
            else m
            for m in out
        ]
    return out


# --- pipeline ----------------------------------------------------------------


@dataclass
class PipelineResult:
    field: ThermalField
    summary: Summary
    rasterizations: dict
    network: object
    block_powers: dict[str, float]


def run_pipeline(
    point: DesignPoint, workload: ActivityTrace, config: SweepConfig
) -> PipelineResult:
    """power -> assemble -> solve_steady -> summarize for one design point.

    Steady powers are the per-block means over the workload trace.
    """
    stack = point.stack
    problems = validate_stack(stack)
    if problems:
        raise ValueError("invalid stack: " + "; ".join(str(p) for p in problems))
    grid = grid_for(stack.outline, config.rows, config.cols)
    models = apply_knobs(config.power_models, config.knobs, point.knob_settings)
    all_blocks: list[str] = []
    for idx in stack.die_indices():
        all_blocks.extend(stack.layers[idx].floorplan.block_names())
    trace = trace_power(models, workload, blocks=all_blocks)
    block_powers = trace.mean_powers()
    rasterizations = {
        idx: rasterize(stack.layers[idx].floorplan, grid) for idx in stack.die_indices()
    }
    network = assemble(stack, grid, rasterizations, sink_h=config.sink_h)
    field = solve_steady(network, block_powers)
    summary = summarize(field, rasterizations)
    return PipelineResult(field, summary, rasterizations, network, block_powers)


def run_sweep(
    points: Sequence[DesignPoint],
    workloads: Mapping[str, ActivityTrace] | Sequence[tuple[str, ActivityTrace]],
    config: SweepConfig,
) -> SweepResult:
    """Evaluate points x workloads and rank; failures isolate per point."""
    if not points:
        raise ValueError("no design points to sweep")
    wl = dict(workloads)
    if not wl:
        raise ValueError("no workloads to sweep")
    names = [p.name for p in points]
    if len(set(names)) != len(names):
        raise ValueError("design point names must be unique")

    records: dict[tuple[str, str], RunRecord] = {}
    errors: list[ErrorRecord] = []

    def job(point: DesignPoint, wl_name: str, trace: ActivityTrace):
        start = time.perf_counter()
        result = run_pipeline(point, trace, config)
        elapsed = time.perf_counter() - start
        layer_max = tuple(l.max_k for l in result.summary.layers)
        return RunRecord(point.name, wl_name, result.summary.stack_max_k, layer_max, elapsed)

    tasks = [(p, n, t) for p in points for n, t in wl.items()]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        futures = {pool.submit(job, *task): task for task in tasks}
        for fut, (point, wl_name, _) in futures.items():
            try:
                rec = fut.result()
                records[(rec.point, rec.workload)] = rec
            except Exception as exc:  # noqa: BLE001 - isolation contract
                errors.append(ErrorRecord(point.name, wl_name, f"{type(exc).__name__}: {exc}"))

    ordered_records = [
        records[(p.name, w)] for p in points for w in wl if (p.name, w) in records
    ]
    complete = [
        p.name
        for p in points
        if all((p.name, w) in records for w in wl)
    ]
    decl_index = {p.name: i for i, p in enumerate(points)}

    def rank_key(name: str):
        maxima = [records[(name, w)].stack_max_k for w in wl]
        return (max(maxima), sum(maxima) / len(maxima), decl_index[name])

    ranking = sorted(complete, key=rank_key)
    return SweepResult(ordered_records, errors, ranking, tuple(wl))


# --- comparison report -------------------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    point: str
    workload: str
    max_k: float
    delta_k: float


@dataclass
class ComparisonReport:
    baseline: str
    rows: list[ComparisonRow]
    ranking: list[str]
    errors: list[ErrorRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "baseline": self.baseline,
            "rows": [
                {
                    "point": r.point,
                    "workload": r.workload,
                    "max_k": float(f"{r.max_k:.6g}"),
                    "delta_k": float(f"{r.delta_k:.6g}"),
                }
                for r in self.rows
            ],
            "ranking": list(self.ranking),
            "errors": [
                {"point": e.point, "workload": e.workload, "message": e.message}
                for e in self.errors
            ],
        }

    def to_text(self) -> str:
        lines = ["point\tworkload\tmax_K\tdelta_K"]
        for r in self.rows:
            lines.append(f"{r.point}\t{r.workload}\t{r.max_k:.6g}\t{r.delta_k:.6g}")
        lines.append("")
        lines.append(f"# ranking (worst-case stack max, baseline: {self.baseline})")
        for i, name in enumerate(self.ranking, start=1):
            lines.append(f"# {i}. {name}")
        for e in self.errors:
            lines.append(f"# error\t{e.point}\t{e.workload}\t{e.message}")
        return "\n".join(lines) + "\n"


def compare_report(result: SweepResult, baseline: str) -> ComparisonReport:
    """Per point x workload maxima and deltas against a named baseline point."""
    base = {
        w: r.stack_max_k
        for w in result.workload_names
        for r in result.records
        if r.point == baseline and r.workload == w
    }
    if len(base) != len(result.workload_names):
        raise KeyError(f"baseline point {baseline!r} has no complete results")
    rows = [
        ComparisonRow(r.point, r.workload, r.stack_max_k, r.stack_max_k - base[r.workload])
        for r in result.records
    ]
    return ComparisonReport(baseline, rows, list(result.ranking), list(result.errors))
