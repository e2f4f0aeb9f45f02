"""Microchannel cooling strategy generator.

Channel geometry is quantized to whole grid cells so patterns align with the
simulation resolution. Three styles are supported: straight `vertical`
channels (south inlet edge, north outlet edge), the analogous `horizontal`
style, and `bent90` with inlets on the north and south edges and outlets on
the east and west edges. The bend rule for `bent90` is nested L-shaped runs
per quadrant: each channel runs inward from its edge, turns 90 degrees at
the row/column band matching its own offset, and exits through the nearer
lateral edge. Every channel in `channel_paths` is a one-cell-wide run; a
channel_width of w cells produces w adjacent runs per slot, each fed at the
coolant's per-channel flow rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .stack import Grid

# flow direction codes stored per cell
DIR_NONE, DIR_PX, DIR_NX, DIR_PY, DIR_NY = 0, 1, 2, 3, 4

_DIR_CHAR = {DIR_PX: ">", DIR_NX: "<", DIR_PY: "^", DIR_NY: "v"}
_CHAR_DIR = {v: k for k, v in _DIR_CHAR.items()}
_DIR_STEP = {DIR_PX: (0, 1), DIR_NX: (0, -1), DIR_PY: (1, 0), DIR_NY: (-1, 0)}

WATER_VOLUMETRIC_HEAT_CAPACITY = 4.18e6  # J/(m^3 K)
WATER_THERMAL_CONDUCTIVITY = 0.6  # W/(m K)
NUSSELT_LAMINAR = 4.36  # fully developed laminar flow, constant heat flux
DEFAULT_INLET_K = 300.0
DEFAULT_FLOW_PER_CHANNEL = 2e-8  # m^3/s


class GeometryError(ValueError):
    pass


class PatternError(ValueError):
    pass


class PatternFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Coolant:
    name: str
    volumetric_heat_capacity: float  # J/(m^3 K)
    inlet_temperature: float  # K
    volumetric_flow_rate_per_channel: float  # m^3/s
    convection_coefficient: float  # W/(m^2 K)

    def __post_init__(self):
        for f in (
            "volumetric_heat_capacity",
            "inlet_temperature",
            "volumetric_flow_rate_per_channel",
            "convection_coefficient",
        ):
            if getattr(self, f) <= 0:
                raise ValueError(f"coolant {self.name!r}: {f} must be > 0")

    @property
    def flow_heat_capacity(self) -> float:
        """W/K carried by one channel's flow."""
        return self.volumetric_heat_capacity * self.volumetric_flow_rate_per_channel


def water_coolant(
    channel_width: float,
    channel_depth: float,
    inlet_temperature: float = DEFAULT_INLET_K,
    flow_rate_per_channel: float = DEFAULT_FLOW_PER_CHANNEL,
) -> Coolant:
    """Water with a laminar fully-developed convection coefficient.

    h = Nu k / D_h with the hydraulic diameter of the rectangular duct
    spanned by the channel width and the channel layer thickness.
    """
    d_h = 2.0 * channel_width * channel_depth / (channel_width + channel_depth)
    h = NUSSELT_LAMINAR * WATER_THERMAL_CONDUCTIVITY / d_h
    return Coolant(
        "water",
        WATER_VOLUMETRIC_HEAT_CAPACITY,
        inlet_temperature,
        flow_rate_per_channel,
        h,
    )


@dataclass
class CoolingPattern:
    grid: Grid
    fluid: np.ndarray  # (rows, cols) bool
    flow_dir: np.ndarray  # (rows, cols) uint8, DIR_* codes
    inlets: tuple[frozenset[tuple[int, int]], ...]  # boundary cell sets
    outlets: tuple[frozenset[tuple[int, int]], ...]
    coolant: Coolant
    channel_width: float | None = None  # m; not persisted in the file format
    channel_pitch: float | None = None
    style: str | None = None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoolingPattern)
            and self.grid.rows == other.grid.rows
            and self.grid.cols == other.grid.cols
            and np.array_equal(self.fluid, other.fluid)
            and np.array_equal(self.flow_dir, other.flow_dir)
            and self.inlets == other.inlets
            and self.outlets == other.outlets
            and self.coolant == other.coolant
        )

    def fluid_cell_count(self) -> int:
        return int(self.fluid.sum())


@dataclass(frozen=True)
class PatternViolation:
    code: str
    message: str
    cell: tuple[int, int] | None = None

    def __str__(self) -> str:
        if self.cell is None:
            return f"{self.code}: {self.message}"
        return f"{self.code} at {self.cell}: {self.message}"


def _quantize(value: float, cell: float, what: str) -> int:
    n = round(value / cell)
    if n < 1 or abs(n * cell - value) > 1e-9 * max(cell, value):
        raise GeometryError(
            f"{what} {value} m is not a whole multiple of the {cell} m cell size"
        )
    return n


def generate_pattern(
    grid: Grid,
    style: str,
    channel_width: float,
    channel_pitch: float,
    coolant: Coolant | None = None,
) -> CoolingPattern:
    """Grid-aligned channel pattern for one of the supported styles.

    Width and pitch are in meters and must quantize to >= 1 and >= 2 cells;
    the pitch must divide the transverse grid extent. `bent90` additionally
    needs a square grid whose side is a multiple of twice the pitch.
    """
    if style not in ("vertical", "horizontal", "bent90"):
        raise GeometryError(f"unknown pattern style {style!r}")
    tcell = grid.cell_width if style in ("vertical", "bent90") else grid.cell_height
    w = _quantize(channel_width, tcell, "channel width")
    p = _quantize(channel_pitch, tcell, "channel pitch")
    if p < 2:
        raise GeometryError(f"channel pitch must span at least 2 cells, got {p}")
    if w > p:
        raise GeometryError(f"channel width ({w} cells) exceeds pitch ({p} cells)")
    if coolant is None:
        coolant = water_coolant(channel_width, channel_depth=channel_width)

    fluid = np.zeros((grid.rows, grid.cols), dtype=bool)
    flow = np.zeros((grid.rows, grid.cols), dtype=np.uint8)
    off = (p - w) // 2
    if style == "bent90" and off == 0 and p > w:
        off = 1  # keep bent runs off the die edge; avoids one-cell corner channels

    if style == "vertical":
        if grid.cols % p:
            raise GeometryError(
                f"pitch of {p} cells must divide the {grid.cols}-column grid extent"
            )
        for k in range(grid.cols // p):
            c0 = k * p + off
            fluid[:, c0 : c0 + w] = True
            flow[:, c0 : c0 + w] = DIR_PY
        inlets = (frozenset((0, c) for c in range(grid.cols) if fluid[0, c]),)
        outlets = (frozenset((grid.rows - 1, c) for c in range(grid.cols) if fluid[-1, c]),)
    elif style == "horizontal":
        if grid.rows % p:
            raise GeometryError(
                f"pitch of {p} cells must divide the {grid.rows}-row grid extent"
            )
        for k in range(grid.rows // p):
            r0 = k * p + off
            fluid[r0 : r0 + w, :] = True
            flow[r0 : r0 + w, :] = DIR_PX
        inlets = (frozenset((r, 0) for r in range(grid.rows) if fluid[r, 0]),)
        outlets = (frozenset((r, grid.cols - 1) for r in range(grid.rows) if fluid[r, -1]),)
    else:
        if grid.rows != grid.cols:
            raise GeometryError(
                f"bent90 needs a square grid, got {grid.rows}x{grid.cols}"
            )
        if grid.rows % (2 * p):
            raise GeometryError(
                f"bent90 needs the grid side ({grid.rows}) to be a multiple of "
                f"twice the pitch ({2 * p} cells)"
            )
        half = grid.rows // 2
        # nested L runs in the south-west quadrant; the other three quadrants
        # are mirror images, which makes the pattern symmetric about both
        # mid-axes and invariant under 180-degree rotation.
        for k in range(half // p):
            for j in range(w):
                c = k * p + off + j
                r = k * p + off + j
                fluid[0 : r + 1, c] = True
                flow[0:r, c] = DIR_PY
                flow[r, c] = DIR_NX
                fluid[r, 0:c] = True
                flow[r, 0:c] = DIR_NX
        _mirror_quadrants(fluid, flow)
        inlets = (
            frozenset((0, c) for c in range(grid.cols) if fluid[0, c]),
            frozenset((grid.rows - 1, c) for c in range(grid.cols) if fluid[-1, c]),
        )
        outlets = (
            frozenset((r, 0) for r in range(grid.rows) if fluid[r, 0]),
            frozenset((r, grid.cols - 1) for r in range(grid.rows) if fluid[r, -1]),
        )

    return CoolingPattern(
        grid,
        fluid,
        flow,
        inlets,
        outlets,
        coolant,
        channel_width=channel_width,
        channel_pitch=channel_pitch,
        style=style,
    )


_MIRROR_X = {DIR_PX: DIR_NX, DIR_NX: DIR_PX, DIR_PY: DIR_PY, DIR_NY: DIR_NY, DIR_NONE: DIR_NONE}
_MIRROR_Y = {DIR_PY: DIR_NY, DIR_NY: DIR_PY, DIR_PX: DIR_PX, DIR_NX: DIR_NX, DIR_NONE: DIR_NONE}


def _mirror_quadrants(fluid: np.ndarray, flow: np.ndarray) -> None:
    rows, cols = fluid.shape
    hr, hc = rows // 2, cols // 2
    mx = np.vectorize(_MIRROR_X.get, otypes=[np.uint8])
    my = np.vectorize(_MIRROR_Y.get, otypes=[np.uint8])
    # SW -> SE (mirror columns)
    fluid[:hr, hc:] = fluid[:hr, :hc][:, ::-1]
    flow[:hr, hc:] = mx(flow[:hr, :hc][:, ::-1])
    # southern half -> northern half (mirror rows)
    fluid[hr:, :] = fluid[:hr, :][::-1, :]
    flow[hr:, :] = my(flow[:hr, :][::-1, :])


def _downstream(pattern: CoolingPattern, r: int, c: int) -> tuple[int, int] | None:
    d = int(pattern.flow_dir[r, c])
    dr, dc = _DIR_STEP[d]
    nr, nc = r + dr, c + dc
    if 0 <= nr < pattern.grid.rows and 0 <= nc < pattern.grid.cols:
        return nr, nc
    return None


def validate_pattern(pattern: CoolingPattern) -> list[PatternViolation]:
    """Dead ends, cycles, merges, unreachable cells, off-boundary ports."""
    out: list[PatternViolation] = []
    rows, cols = pattern.grid.rows, pattern.grid.cols
    fluid = pattern.fluid

    if fluid.shape != (rows, cols) or pattern.flow_dir.shape != (rows, cols):
        out.append(PatternViolation("shape-mismatch", "cell arrays do not match the grid"))
        return out

    for r, c in np.argwhere(fluid & (pattern.flow_dir == DIR_NONE)):
        out.append(PatternViolation("missing-direction", "fluid cell has no flow direction", (int(r), int(c))))
    for r, c in np.argwhere(~fluid & (pattern.flow_dir != DIR_NONE)):
        out.append(PatternViolation("direction-on-wall", "wall cell has a flow direction", (int(r), int(c))))
    if out:
        return out  # the flow walk below needs consistent directions

    all_inlets = set().union(*pattern.inlets) if pattern.inlets else set()
    all_outlets = set().union(*pattern.outlets) if pattern.outlets else set()
    for kind, cells in (("inlet", all_inlets), ("outlet", all_outlets)):
        for r, c in cells:
            if not (r in (0, rows - 1) or c in (0, cols - 1)):
                out.append(PatternViolation(f"{kind}-not-on-boundary", f"{kind} cell is interior", (r, c)))
            if not fluid[r, c]:
                out.append(PatternViolation(f"{kind}-not-fluid", f"{kind} cell is a wall", (r, c)))
    if any(not fluid[r, c] for r, c in all_inlets):
        return out  # cannot walk from a wall

    visited = np.zeros((rows, cols), dtype=bool)
    for r0, c0 in sorted(all_inlets):
        r, c = r0, c0
        seen_on_walk = set()
        while True:
            if visited[r, c] or (r, c) in seen_on_walk:
                code = "cycle" if (r, c) in seen_on_walk else "merge"
                out.append(PatternViolation(code, "flow revisits an already-routed cell", (r, c)))
                break
            visited[r, c] = True
            seen_on_walk.add((r, c))
            nxt = _downstream(pattern, r, c)
            if nxt is None:
                if (r, c) not in all_outlets:
                    out.append(PatternViolation("exit-not-outlet", "flow leaves the grid off an outlet", (r, c)))
                break
            nr, nc = nxt
            if not fluid[nr, nc]:
                out.append(PatternViolation("dead-end", "flow runs into a wall", (r, c)))
                break
            if (r, c) in all_outlets:
                out.append(PatternViolation("outlet-not-terminal", "flow continues past an outlet", (r, c)))
                break
            r, c = nr, nc
    for r, c in np.argwhere(fluid & ~visited):
        out.append(PatternViolation("unreachable", "fluid cell not reached from any inlet", (int(r), int(c))))
    return out


def channel_paths(pattern: CoolingPattern) -> list[list[tuple[int, int]]]:
    """Ordered inlet-to-outlet cell sequences, one per channel.

    The sequences partition the fluid cells; channels are ordered by inlet
    set, then by inlet cell position.
    """
    problems = validate_pattern(pattern)
    if problems:
        raise PatternError(
            f"invalid pattern ({len(problems)} violations): " + "; ".join(str(p) for p in problems[:5])
        )
    paths = []
    for inlet_set in pattern.inlets:
        for r0, c0 in sorted(inlet_set):
            path = [(r0, c0)]
            r, c = r0, c0
            while True:
                nxt = _downstream(pattern, r, c)
                if nxt is None:
                    break
                r, c = nxt
                path.append((r, c))
            paths.append(path)
    return paths


# --- file format ------------------------------------------------------------
#
# Preamble:
#   grid <rows> <cols>
#   coolant <name> <c_v> <T_in_K> <flow_m3s> <h>
# then one line of single-character cell codes per grid row, row 0 first
# ('#' wall, '^v<>' fluid with direction), then port cells:
#   inlet <row> <col>
#   outlet <row> <col>


def emit_pattern(pattern: CoolingPattern) -> str:
    c = pattern.coolant
    lines = [
        f"grid {pattern.grid.rows} {pattern.grid.cols}",
        "coolant {} {!r} {!r} {!r} {!r}".format(
            c.name,
            c.volumetric_heat_capacity,
            c.inlet_temperature,
            c.volumetric_flow_rate_per_channel,
            c.convection_coefficient,
        ),
    ]
    for r in range(pattern.grid.rows):
        row = "".join(
            _DIR_CHAR[int(pattern.flow_dir[r, c_])] if pattern.fluid[r, c_] else "#"
            for c_ in range(pattern.grid.cols)
        )
        lines.append(row)
    for inlet_set in sorted(pattern.inlets, key=lambda s: sorted(s)):
        for r, c_ in sorted(inlet_set):
            lines.append(f"inlet {r} {c_}")
    for outlet_set in sorted(pattern.outlets, key=lambda s: sorted(s)):
        for r, c_ in sorted(outlet_set):
            lines.append(f"outlet {r} {c_}")
    return "\n".join(lines) + "\n"


def parse_pattern(text: str, grid: Grid | None = None) -> CoolingPattern:
    """Parse a pattern file.

    The file stores only the grid shape; pass the simulation `grid` to attach
    real cell dimensions (shape must agree), otherwise unit cells are used.
    Port cells are grouped into sets by the boundary edge they sit on, in
    south, north, west, east order.
    """
    rows = cols = None
    coolant = None
    cell_rows: list[str] = []
    inlet_cells: list[tuple[int, int]] = []
    outlet_cells: list[tuple[int, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line or line.startswith("//"):
            continue
        if line.startswith("grid "):
            parts = line.split()
            if len(parts) != 3:
                raise PatternFormatError("grid expects <rows> <cols>", lineno)
            rows, cols = int(parts[1]), int(parts[2])
        elif line.startswith("coolant "):
            parts = line.split()
            if len(parts) != 6:
                raise PatternFormatError("coolant expects <name> <c_v> <T_in_K> <flow_m3s> <h>", lineno)
            coolant = Coolant(parts[1], *(float(x) for x in parts[2:]))
        elif line.startswith("inlet "):
            _, r, c = line.split()
            inlet_cells.append((int(r), int(c)))
        elif line.startswith("outlet "):
            _, r, c = line.split()
            outlet_cells.append((int(r), int(c)))
        else:
            if rows is None:
                raise PatternFormatError("cell rows before 'grid' preamble", lineno)
            if len(line) != cols:
                raise PatternFormatError(f"expected {cols} cell codes, got {len(line)}", lineno)
            cell_rows.append(line)

    if rows is None or coolant is None:
        raise PatternFormatError("missing 'grid' or 'coolant' preamble")
    if len(cell_rows) != rows:
        raise PatternFormatError(f"expected {rows} cell rows, got {len(cell_rows)}")
    if grid is None:
        grid = Grid(rows, cols, 1.0, 1.0)
    elif grid.rows != rows or grid.cols != cols:
        raise PatternFormatError(
            f"pattern is {rows}x{cols} but the simulation grid is {grid.rows}x{grid.cols}"
        )

    fluid = np.zeros((rows, cols), dtype=bool)
    flow = np.zeros((rows, cols), dtype=np.uint8)
    for r, line in enumerate(cell_rows):
        for c, ch in enumerate(line):
            if ch == "#":
                continue
            if ch not in _CHAR_DIR:
                raise PatternFormatError(f"unknown cell code {ch!r} at ({r}, {c})")
            fluid[r, c] = True
            flow[r, c] = _CHAR_DIR[ch]

    return CoolingPattern(
        grid,
        fluid,
        flow,
        _group_ports(inlet_cells, rows, cols),
        _group_ports(outlet_cells, rows, cols),
        coolant,
    )


def _group_ports(
    cells: Iterable[tuple[int, int]], rows: int, cols: int
) -> tuple[frozenset[tuple[int, int]], ...]:
    south, north, west, east = set(), set(), set(), set()
    for r, c in cells:
        if r == 0:
            south.add((r, c))
        elif r == rows - 1:
            north.add((r, c))
        elif c == 0:
            west.add((r, c))
        else:
            east.add((r, c))
    return tuple(frozenset(s) for s in (south, north, west, east) if s)
