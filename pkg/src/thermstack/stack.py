"""Geometric and material data model shared by the whole pipeline.

All quantities are SI internally: meters, watts, kelvin, joules. Layer
index 0 is the layer farthest from the heat sink; the sink, when present,
is last. Stacks are treated as immutable once validated and may be shared
freely between concurrent simulations.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Callable, Mapping

if TYPE_CHECKING:
    from .cooling import CoolingPattern
    from .floorplan import Floorplan

LAYER_KINDS = ("die", "tim", "microchannel", "spreader", "sink")

DEFAULT_AMBIENT_K = 318.15


class StackFormatError(ValueError):
    """Malformed stack description text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidResolutionError(ValueError):
    pass


@dataclass(frozen=True)
class Material:
    name: str
    thermal_conductivity: float  # W/(m K)
    volumetric_heat_capacity: float  # J/(m^3 K)

    def __post_init__(self):
        if self.thermal_conductivity <= 0:
            raise ValueError(f"material {self.name!r}: thermal_conductivity must be > 0")
        if self.volumetric_heat_capacity <= 0:
            raise ValueError(f"material {self.name!r}: volumetric_heat_capacity must be > 0")


# Stand-in literature values; the reference configuration does not pin any.
DEFAULT_MATERIALS: Mapping[str, Material] = {
    "silicon": Material("silicon", 150.0, 1.75e6),
    "tim": Material("tim", 4.0, 2.0e6),
    "copper": Material("copper", 400.0, 3.45e6),
}


@dataclass(frozen=True)
class DieOutline:
    width: float  # m
    height: float  # m

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("die outline dimensions must be > 0")

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass(frozen=True)
class Grid:
    rows: int
    cols: int
    cell_width: float  # m
    cell_height: float  # m

    @property
    def width(self) -> float:
        return self.cols * self.cell_width

    @property
    def height(self) -> float:
        return self.rows * self.cell_height

    @property
    def cell_area(self) -> float:
        return self.cell_width * self.cell_height

    @property
    def n_cells(self) -> int:
        return self.rows * self.cols


def grid_for(outline: DieOutline, rows: int, cols: int) -> Grid:
    """Discretization grid exactly tiling the outline with rows x cols cells."""
    if rows < 2 or cols < 2:
        raise InvalidResolutionError(f"resolution must be at least 2x2, got {rows}x{cols}")
    return Grid(rows, cols, outline.width / cols, outline.height / rows)


@dataclass
class Layer:
    kind: str
    thickness: float  # m
    material: Material
    floorplan: "Floorplan | None" = None
    pattern: "CoolingPattern | None" = None
    ref: str | None = None  # file/key token carried through the on-disk format

    def copy(self) -> "Layer":
        return replace(self)


@dataclass
class Stack:
    outline: DieOutline
    layers: list[Layer]
    ambient_temperature: float = DEFAULT_AMBIENT_K

    def die_indices(self) -> list[int]:
        return [i for i, l in enumerate(self.layers) if l.kind == "die"]

    def microchannel_indices(self) -> list[int]:
        return [i for i, l in enumerate(self.layers) if l.kind == "microchannel"]

    def copy(self) -> "Stack":
        return Stack(self.outline, [l.copy() for l in self.layers], self.ambient_temperature)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    layer: int | None = None

    def __str__(self) -> str:
        if self.layer is None:
            return f"{self.code}: {self.message}"
        return f"{self.code} (layer {self.layer}): {self.message}"


def validate_stack(stack: Stack) -> list[Violation]:
    """Every invariant violation in the stack; empty list means valid.

    Violations are data, not exceptions: callers decide whether to abort.
    """
    out: list[Violation] = []
    layers = stack.layers

    if not any(l.kind == "die" for l in layers):
        out.append(Violation("no-die-layer", "stack has no die layer"))

    sink_positions = [i for i, l in enumerate(layers) if l.kind == "sink"]
    if len(sink_positions) > 1:
        out.append(Violation("multiple-sinks", f"sink layers at indices {sink_positions}"))
    elif sink_positions and sink_positions[0] != len(layers) - 1:
        out.append(
            Violation(
                "sink-not-last",
                f"sink layer must be last, found at index {sink_positions[0]}",
                sink_positions[0],
            )
        )

    for i, layer in enumerate(layers):
        if layer.kind not in LAYER_KINDS:
            out.append(Violation("unknown-kind", f"unknown layer kind {layer.kind!r}", i))
        if layer.thickness <= 0:
            out.append(Violation("non-positive-thickness", f"thickness {layer.thickness} <= 0", i))
        if layer.kind == "die" and layer.floorplan is None:
            out.append(Violation("die-missing-floorplan", "die layer has no floorplan", i))
        if layer.kind != "die" and layer.floorplan is not None:
            out.append(Violation("unexpected-floorplan", f"{layer.kind} layer carries a floorplan", i))
        if layer.kind == "microchannel" and layer.pattern is None:
            out.append(Violation("channel-missing-pattern", "microchannel layer has no pattern", i))
        if layer.kind != "microchannel" and layer.pattern is not None:
            out.append(Violation("unexpected-pattern", f"{layer.kind} layer carries a cooling pattern", i))
        if layer.floorplan is not None and not _outline_close(layer.floorplan.outline, stack.outline):
            out.append(
                Violation(
                    "outline-mismatch",
                    f"floorplan outline {layer.floorplan.outline.width}x{layer.floorplan.outline.height}"
                    f" differs from stack outline {stack.outline.width}x{stack.outline.height}",
                    i,
                )
            )

    for i in range(len(layers) - 1):
        if layers[i].kind == "microchannel" and layers[i + 1].kind == "microchannel":
            out.append(
                Violation(
                    "adjacent-microchannels",
                    f"microchannel layers at indices {i} and {i + 1} are adjacent",
                    i,
                )
            )

    if stack.ambient_temperature <= 0:
        out.append(Violation("non-positive-ambient", f"ambient {stack.ambient_temperature} K <= 0"))

    return out


def _outline_close(a: DieOutline, b: DieOutline, rel: float = 1e-9) -> bool:
    return abs(a.width - b.width) <= rel * b.width and abs(a.height - b.height) <= rel * b.height


# --- on-disk format ---------------------------------------------------------
#
# Line-oriented, tab-separated, '#' comments. Preamble:
#   outline <width_m> <height_m>
#   ambient <K>
# then one layer per line, bottom (farthest from sink) first:
#   kind  thickness_m  material_name  [floorplan_ref|pattern_ref]


def parse_stack(
    text: str,
    materials: Mapping[str, Material] | None = None,
    floorplans: Mapping[str, "Floorplan"] | Callable[[str], "Floorplan"] | None = None,
    patterns: Mapping[str, "CoolingPattern"] | Callable[[str], "CoolingPattern"] | None = None,
) -> Stack:
    """Parse a stack description.

    `floorplans` and `patterns` resolve layer refs to parsed objects; they
    may be mappings or loader callables. Unresolvable refs raise; missing
    resolvers leave the objects unset (validate_stack then reports them).
    """
    mats = dict(DEFAULT_MATERIALS)
    if materials:
        mats.update(materials)

    outline: DieOutline | None = None
    ambient = DEFAULT_AMBIENT_K
    layers: list[Layer] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        key = fields[0]
        if key == "outline":
            if len(fields) != 3:
                raise StackFormatError("outline expects <width_m> <height_m>", lineno)
            try:
                outline = DieOutline(float(fields[1]), float(fields[2]))
            except ValueError as e:
                raise StackFormatError(str(e), lineno) from e
        elif key == "ambient":
            if len(fields) != 2:
                raise StackFormatError("ambient expects <K>", lineno)
            ambient = float(fields[1])
        elif key in LAYER_KINDS:
            if len(fields) not in (3, 4):
                raise StackFormatError(
                    "layer line expects: kind thickness_m material_name [ref]", lineno
                )
            try:
                thickness = float(fields[1])
            except ValueError:
                raise StackFormatError(f"bad thickness {fields[1]!r}", lineno) from None
            mat_name = fields[2]
            if mat_name not in mats:
                raise StackFormatError(f"unknown material {mat_name!r}", lineno)
            ref = fields[3] if len(fields) == 4 else None
            layer = Layer(key, thickness, mats[mat_name], ref=ref)
            if ref is not None:
                if key == "die":
                    layer.floorplan = _resolve(floorplans, ref, lineno)
                elif key == "microchannel":
                    layer.pattern = _resolve(patterns, ref, lineno)
                else:
                    raise StackFormatError(f"{key} layer does not take a ref", lineno)
            layers.append(layer)
        else:
            raise StackFormatError(f"unknown directive {key!r}", lineno)

    if outline is None:
        raise StackFormatError("missing 'outline' preamble line")
    return Stack(outline, layers, ambient)


def _resolve(source, ref: str, lineno: int):
    if source is None:
        return None
    if callable(source):
        return source(ref)
    try:
        return source[ref]
    except KeyError:
        raise StackFormatError(f"unresolved ref {ref!r}", lineno) from None


def emit_stack(stack: Stack) -> str:
    """Canonical text form; parse(emit(s)) reproduces s field-exactly."""
    lines = [
        "# stack description (units: m, K); bottom layer first, sink side last",
        f"outline\t{stack.outline.width!r}\t{stack.outline.height!r}",
        f"ambient\t{stack.ambient_temperature!r}",
    ]
    for i, layer in enumerate(stack.layers):
        fields = [layer.kind, repr(layer.thickness), layer.material.name]
        if layer.ref is not None:
            fields.append(layer.ref)
        elif layer.kind == "die" or layer.kind == "microchannel":
            raise ValueError(f"layer {i} needs a ref to be written to the stack format")
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"
