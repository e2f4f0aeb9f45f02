"""Sweep definition file: the on-disk description of a design-space sweep.

Line-oriented sections, '#' comments:

    [stackings]
    policy named_list | all_die_permutations
    order <name> <die_idx> <die_idx> ...      # named_list entries

    [cooling]
    option none
    option <style> <below_hottest_die | insertion_index>
    channel_width_m / channel_pitch_m / layer_thickness_m <value>
    wall_material <name>
    coolant <name> <c_v> <T_in_K> <flow_m3s> <h>

    [knobs]
    knob <name> targets <pat,pat,...> values <v> <v> ... \
         [static_exp <e>] [dynamic_exp <e>]

    [points]                                   # explicit list; otherwise the
    point <name> stacking <sname> cooling <none|style@position> [knob n=v ...]

    [workloads]
    use default                                # the design document's trace
    trace <name> <path>

    [baseline]
    point <name>

Without a [points] section the sweep is the cross product of stackings,
cooling options, and knob values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field, replace
from typing import Mapping

from .cooling import Coolant
from .dse import (
    CoolingGeometry,
    CoolingVariant,
    DesignPoint,
    KnobSpec,
    SweepConfig,
    SweepDefinitionError,
    build_point,
    enumerate_cooling,
    enumerate_stackings,
)
from .stack import DEFAULT_MATERIALS, Stack


@dataclass(frozen=True)
class PointSpec:
    name: str
    stacking: str
    cooling_style: str | None
    cooling_position: int | str | None
    knobs: Mapping[str, float] = dc_field(default_factory=dict)


@dataclass
class SweepDefinition:
    policy: str = "named_list"
    orders: dict[str, tuple[int, ...]] = dc_field(default_factory=dict)
    cooling_options: list[tuple[str | None, int | str | None]] = dc_field(default_factory=list)
    geometry: dict[str, float | str] = dc_field(default_factory=dict)
    coolant: Coolant | None = None
    knobs: list[KnobSpec] = dc_field(default_factory=list)
    points: list[PointSpec] = dc_field(default_factory=list)
    workloads: list[tuple[str, str]] = dc_field(default_factory=list)  # (name, path)
    use_default_workload: bool = False
    baseline_point: str | None = None


def _parse_cooling_token(token: str) -> tuple[str | None, int | str | None]:
    if token == "none":
        return None, None
    if "@" in token:
        style, pos = token.split("@", 1)
        if pos != "below_hottest_die":
            try:
                return style, int(pos)
            except ValueError:
                raise SweepDefinitionError(f"bad cooling position {pos!r}") from None
        return style, pos
    return token, "below_hottest_die"


def parse_sweep_definition(text: str) -> SweepDefinition:
    defn = SweepDefinition()
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in ("stackings", "cooling", "knobs", "points", "workloads", "baseline"):
                raise SweepDefinitionError(f"unknown section {section!r}", lineno)
            continue
        fields = line.split()
        try:
            _dispatch(defn, section, fields, lineno)
        except SweepDefinitionError:
            raise
        except Exception as exc:
            raise SweepDefinitionError(str(exc), lineno) from exc
    return defn


def _dispatch(defn: SweepDefinition, section: str | None, fields: list[str], lineno: int) -> None:
    if section == "stackings":
        if fields[0] == "policy":
            defn.policy = fields[1]
        elif fields[0] == "order":
            defn.orders[fields[1]] = tuple(int(f) for f in fields[2:])
        else:
            raise SweepDefinitionError(f"unknown stackings directive {fields[0]!r}", lineno)
    elif section == "cooling":
        if fields[0] == "option":
            if fields[1] == "none":
                defn.cooling_options.append((None, None))
            else:
                pos: int | str = fields[2] if len(fields) > 2 else "below_hottest_die"
                if pos != "below_hottest_die":
                    pos = int(pos)
                defn.cooling_options.append((fields[1], pos))
        elif fields[0] in ("channel_width_m", "channel_pitch_m", "layer_thickness_m"):
            defn.geometry[fields[0]] = float(fields[1])
        elif fields[0] == "wall_material":
            defn.geometry["wall_material"] = fields[1]
        elif fields[0] == "coolant":
            defn.coolant = Coolant(fields[1], *(float(f) for f in fields[2:6]))
        else:
            raise SweepDefinitionError(f"unknown cooling directive {fields[0]!r}", lineno)
    elif section == "knobs":
        if fields[0] != "knob":
            raise SweepDefinitionError(f"unknown knobs directive {fields[0]!r}", lineno)
        name = fields[1]
        targets: tuple[str, ...] = ()
        values: tuple[float, ...] = ()
        static_exp, dynamic_exp = 1.0, 0.5
        i = 2
        while i < len(fields):
            key = fields[i]
            if key == "targets":
                targets = tuple(fields[i + 1].split(","))
                i += 2
            elif key == "values":
                vals = []
                i += 1
                while i < len(fields) and fields[i] not in ("targets", "static_exp", "dynamic_exp"):
                    vals.append(float(fields[i]))
                    i += 1
                values = tuple(vals)
            elif key == "static_exp":
                static_exp = float(fields[i + 1])
                i += 2
            elif key == "dynamic_exp":
                dynamic_exp = float(fields[i + 1])
                i += 2
            else:
                raise SweepDefinitionError(f"unknown knob field {key!r}", lineno)
        if not targets or not values:
            raise SweepDefinitionError(f"knob {name!r} needs targets and values", lineno)
        defn.knobs.append(KnobSpec(name, targets, values, static_exp, dynamic_exp))
    elif section == "points":
        if fields[0] != "point":
            raise SweepDefinitionError(f"unknown points directive {fields[0]!r}", lineno)
        name = fields[1]
        stacking = None
        style: str | None = None
        position: int | str | None = None
        knobs: dict[str, float] = {}
        i = 2
        while i < len(fields):
            if fields[i] == "stacking":
                stacking = fields[i + 1]
                i += 2
            elif fields[i] == "cooling":
                style, position = _parse_cooling_token(fields[i + 1])
                i += 2
            elif fields[i] == "knob":
                k, v = fields[i + 1].split("=", 1)
                knobs[k] = float(v)
                i += 2
            else:
                raise SweepDefinitionError(f"unknown point field {fields[i]!r}", lineno)
        if stacking is None:
            raise SweepDefinitionError(f"point {name!r} needs a stacking", lineno)
        defn.points.append(PointSpec(name, stacking, style, position, knobs))
    elif section == "workloads":
        if fields[0] == "use" and fields[1] == "default":
            defn.use_default_workload = True
        elif fields[0] == "trace":
            defn.workloads.append((fields[1], fields[2]))
        else:
            raise SweepDefinitionError(f"unknown workloads directive {fields[0]!r}", lineno)
    elif section == "baseline":
        if fields[0] != "point":
            raise SweepDefinitionError(f"unknown baseline directive {fields[0]!r}", lineno)
        defn.baseline_point = fields[1]
    else:
        raise SweepDefinitionError("directive outside any section", lineno)


def emit_sweep_definition(defn: SweepDefinition) -> str:
    lines = ["[stackings]", f"policy {defn.policy}"]
    for name, order in defn.orders.items():
        lines.append("order " + name + " " + " ".join(str(i) for i in order))
    lines.append("")
    lines.append("[cooling]")
    for style, pos in defn.cooling_options:
        lines.append("option none" if style is None else f"option {style} {pos}")
    for key in ("channel_width_m", "channel_pitch_m", "layer_thickness_m", "wall_material"):
        if key in defn.geometry:
            lines.append(f"{key} {defn.geometry[key]}")
    if defn.coolant is not None:
        c = defn.coolant
        lines.append(
            f"coolant {c.name} {c.volumetric_heat_capacity!r} {c.inlet_temperature!r} "
            f"{c.volumetric_flow_rate_per_channel!r} {c.convection_coefficient!r}"
        )
    if defn.knobs:
        lines.append("")
        lines.append("[knobs]")
        for k in defn.knobs:
            lines.append(
                f"knob {k.name} targets {','.join(k.targets)} values "
                + " ".join(repr(v) for v in k.values)
                + f" static_exp {k.static_exponent!r} dynamic_exp {k.dynamic_exponent!r}"
            )
    if defn.points:
        lines.append("")
        lines.append("[points]")
        for p in defn.points:
            cooling = "none" if p.cooling_style is None else f"{p.cooling_style}@{p.cooling_position}"
            entry = f"point {p.name} stacking {p.stacking} cooling {cooling}"
            for k, v in p.knobs.items():
                entry += f" knob {k}={v!r}"
            lines.append(entry)
    lines.append("")
    lines.append("[workloads]")
    if defn.use_default_workload:
        lines.append("use default")
    for name, path in defn.workloads:
        lines.append(f"trace {name} {path}")
    if defn.baseline_point:
        lines.append("")
        lines.append("[baseline]")
        lines.append(f"point {defn.baseline_point}")
    return "\n".join(lines) + "\n"


def geometry_from(defn: SweepDefinition) -> CoolingGeometry:
    g = defn.geometry
    base = CoolingGeometry()
    wall = g.get("wall_material")
    return CoolingGeometry(
        channel_width=float(g.get("channel_width_m", base.channel_width)),
        channel_pitch=float(g.get("channel_pitch_m", base.channel_pitch)),
        layer_thickness=float(g.get("layer_thickness_m", base.layer_thickness)),
        wall_material=DEFAULT_MATERIALS[wall] if wall else base.wall_material,
        coolant=defn.coolant,
    )


def build_points(defn: SweepDefinition, base_stack: Stack, config: SweepConfig) -> list[DesignPoint]:
    """Materialize the sweep's design points against a base stack.

    Channel geometry from the definition's [cooling] section overrides the
    config default.
    """
    if defn.geometry or defn.coolant is not None:
        config = replace(config, cooling=geometry_from(defn))
    variants = {
        v.name: v
        for v in enumerate_stackings(
            base_stack, defn.policy, defn.orders if defn.policy == "named_list" else None
        )
    }
    points: list[DesignPoint] = []
    if defn.points:
        for spec in defn.points:
            if spec.stacking not in variants:
                raise SweepDefinitionError(f"point {spec.name!r}: unknown stacking {spec.stacking!r}")
            cooling = CoolingVariant(
                "none" if spec.cooling_style is None else f"{spec.cooling_style}@{spec.cooling_position}",
                spec.cooling_style,
                spec.cooling_position,
            )
            points.append(build_point(spec.name, variants[spec.stacking], cooling, config, spec.knobs))
        return points

    # cross product mode
    cooling_variants: list[CoolingVariant] = []
    for style, pos in defn.cooling_options or [(None, None)]:
        if style is None:
            cooling_variants.append(CoolingVariant("none", None, None))
        else:
            cooling_variants.extend(enumerate_cooling(next(iter(variants.values())), [style], [pos]))
    knob_axes = [[(k.name, v) for v in k.values] for k in defn.knobs]
    knob_combos = [dict(combo) for combo in itertools.product(*knob_axes)] if knob_axes else [{}]
    for vname, variant in variants.items():
        for cooling in cooling_variants:
            for knobs in knob_combos:
                label = f"{vname}/{cooling.name}"
                if knobs:
                    label += "/" + ",".join(f"{k}={v}" for k, v in sorted(knobs.items()))
                points.append(build_point(label, variant, cooling, config, knobs))
    return points
