"""Floorplan designer: templates, area-driven packing, file I/O, rasterization.

Blocks are axis-aligned rectangles in die coordinates with the origin at the
bottom-left corner, x to the right, y upward. Every floorplan must tile its
outline exactly: whitespace is modeled as explicit `_fill_k` blocks so the
thermal grid has material everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .stack import DieOutline, Grid

OVERLAP_TOL_M2 = 1e-15
COVERAGE_REL_TOL = 1e-9
AREA_MATCH_REL_TOL = 1e-6
TIE_BREAK_EPS_M = 1e-12

FILL_PREFIX = "_fill_"


class FloorplanError(ValueError):
    """Base class for floorplan validation failures."""

    def __init__(self, message: str, blocks: Sequence[str] = (), line: int | None = None):
        self.blocks = tuple(blocks)
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateBlockError(FloorplanError):
    pass


class OverlapError(FloorplanError):
    pass


class OutOfOutlineError(FloorplanError):
    pass


class CoverageGapError(FloorplanError):
    pass


@dataclass(frozen=True)
class Block:
    name: str
    width: float
    height: float
    left_x: float
    bottom_y: float

    @property
    def right_x(self) -> float:
        return self.left_x + self.width

    @property
    def top_y(self) -> float:
        return self.bottom_y + self.height

    @property
    def area(self) -> float:
        return self.width * self.height

    def is_filler(self) -> bool:
        return self.name.startswith(FILL_PREFIX)


@dataclass(frozen=True)
class Floorplan:
    outline: DieOutline
    blocks: tuple[Block, ...]

    def block_names(self) -> tuple[str, ...]:
        return tuple(b.name for b in self.blocks)

    def block(self, name: str) -> Block:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)


@dataclass(frozen=True)
class AreaEntry:
    name: str
    area: float  # m^2
    aspect_hint: float | None = None  # width/height ratio, best effort


@dataclass(frozen=True)
class AreaBudget:
    entries: tuple[AreaEntry, ...]

    def total(self) -> float:
        return sum(e.area for e in self.entries)


def _overlap_area(a: Block, b: Block) -> float:
    w = min(a.right_x, b.right_x) - max(a.left_x, b.left_x)
    h = min(a.top_y, b.top_y) - max(a.bottom_y, b.bottom_y)
    return max(0.0, w) * max(0.0, h)


def check_floorplan(fp: Floorplan) -> list[str]:
    """All invariant violations as messages; empty list means valid."""
    problems: list[str] = []
    seen: dict[str, int] = {}
    for i, b in enumerate(fp.blocks):
        if b.name in seen:
            problems.append(f"duplicate block name {b.name!r}")
        seen.setdefault(b.name, i)
        if b.width <= 0 or b.height <= 0:
            problems.append(f"block {b.name!r} has non-positive dimensions")
        out = (
            b.left_x < -OVERLAP_TOL_M2
            or b.bottom_y < -OVERLAP_TOL_M2
            or b.right_x > fp.outline.width * (1 + COVERAGE_REL_TOL) + OVERLAP_TOL_M2
            or b.top_y > fp.outline.height * (1 + COVERAGE_REL_TOL) + OVERLAP_TOL_M2
        )
        if out:
            problems.append(f"block {b.name!r} extends outside the die outline")
    for i in range(len(fp.blocks)):
        for j in range(i + 1, len(fp.blocks)):
            a, b = fp.blocks[i], fp.blocks[j]
            ov = _overlap_area(a, b)
            if ov > OVERLAP_TOL_M2:
                problems.append(f"blocks {a.name!r} and {b.name!r} overlap by {ov:.3e} m^2")
    covered = sum(b.area for b in fp.blocks)
    gap = fp.outline.area - covered
    if abs(gap) > COVERAGE_REL_TOL * fp.outline.area:
        problems.append(f"coverage gap of {gap:.6e} m^2 (die area {fp.outline.area:.6e} m^2)")
    return problems


def _raise_typed(fp: Floorplan, line_of: dict[str, int] | None = None) -> None:
    seen: dict[str, int] = {}
    for b in fp.blocks:
        if b.name in seen:
            raise DuplicateBlockError(
                f"duplicate block name {b.name!r}",
                [b.name],
                line=line_of.get(b.name) if line_of else None,
            )
        seen[b.name] = 1
    for b in fp.blocks:
        if b.width <= 0 or b.height <= 0:
            raise FloorplanError(
                f"block {b.name!r} has non-positive dimensions",
                [b.name],
                line=line_of.get(b.name) if line_of else None,
            )
        if (
            b.left_x < -OVERLAP_TOL_M2
            or b.bottom_y < -OVERLAP_TOL_M2
            or b.right_x > fp.outline.width * (1 + COVERAGE_REL_TOL) + OVERLAP_TOL_M2
            or b.top_y > fp.outline.height * (1 + COVERAGE_REL_TOL) + OVERLAP_TOL_M2
        ):
            raise OutOfOutlineError(
                f"block {b.name!r} extends outside the die outline",
                [b.name],
                line=line_of.get(b.name) if line_of else None,
            )
    for i in range(len(fp.blocks)):
        for j in range(i + 1, len(fp.blocks)):
            a, b = fp.blocks[i], fp.blocks[j]
            ov = _overlap_area(a, b)
            if ov > OVERLAP_TOL_M2:
                raise OverlapError(
                    f"blocks {a.name!r} and {b.name!r} overlap by {ov:.3e} m^2",
                    [a.name, b.name],
                )
    covered = sum(b.area for b in fp.blocks)
    gap = fp.outline.area - covered
    if abs(gap) > COVERAGE_REL_TOL * fp.outline.area:
        raise CoverageGapError(
            f"blocks cover {covered:.9e} m^2 of {fp.outline.area:.9e} m^2 die area; "
            f"missing {gap:.6e} m^2"
        )


def _grid_shape(n: int) -> tuple[int, int]:
    # most-square factorization, rows <= cols
    r = int(math.isqrt(n))
    while n % r:
        r -= 1
    return r, n // r


def generate_template(
    outline: DieOutline,
    template: str,
    count: int,
    prefix: str | None = None,
) -> Floorplan:
    """Equal-block grid template (`core_grid` or `bank_grid`).

    Blocks are named `prefix_0 .. prefix_{n-1}` in row-major order starting
    at the bottom-left corner. Any count >= 1 factorizes (worst case 1 x n).
    """
    if template not in ("core_grid", "bank_grid"):
        raise ValueError(f"unknown template {template!r}")
    if count < 1:
        raise ValueError("count must be >= 1")
    if prefix is None:
        prefix = "C" if template == "core_grid" else "B"
    rows, cols = _grid_shape(count)
    bw = outline.width / cols
    bh = outline.height / rows
    blocks = []
    for r in range(rows):
        for c in range(cols):
            blocks.append(Block(f"{prefix}_{r * cols + c}", bw, bh, c * bw, r * bh))
    return Floorplan(outline, tuple(blocks))


def generate_from_areas(outline: DieOutline, budget: AreaBudget) -> Floorplan:
    """Deterministic strip packing of an area budget onto the die.

    Entries are normalized to the outline area, sorted by area descending
    (stable), and sliced off the remaining rectangle along its longer axis;
    an aspect hint flips the slicing axis when that lands the block closer
    to the requested width/height ratio. The final entry absorbs the exact
    remainder, so coverage is exact by construction.
    """
    if not budget.entries:
        raise ValueError("empty area budget")
    for e in budget.entries:
        if e.area <= 0:
            raise ValueError(f"entry {e.name!r} has non-positive area")
    scale = outline.area / budget.total()  # normalize to the outline before packing
    order = sorted(range(len(budget.entries)), key=lambda i: -budget.entries[i].area)

    x, y = 0.0, 0.0
    rem_w, rem_h = outline.width, outline.height
    blocks: list[Block] = [None] * len(budget.entries)  # type: ignore[list-item]
    for pos, idx in enumerate(order):
        entry = budget.entries[idx]
        area = entry.area * scale
        last = pos == len(order) - 1
        if last:
            blocks[idx] = Block(entry.name, rem_w, rem_h, x, y)
            break
        vertical = rem_w >= rem_h  # slice a full-height strip off the left
        if entry.aspect_hint is not None:
            w_v, h_v = area / rem_h, rem_h
            w_h, h_h = rem_w, area / rem_w
            want = entry.aspect_hint
            if abs(w_h / h_h - want) < abs(w_v / h_v - want):
                vertical = False
            else:
                vertical = True
        if vertical:
            w = area / rem_h
            blocks[idx] = Block(entry.name, w, rem_h, x, y)
            x += w
            rem_w -= w
        else:
            h = area / rem_w
            blocks[idx] = Block(entry.name, rem_w, h, x, y)
            y += h
            rem_h -= h
        if rem_w <= 0 or rem_h <= 0:
            raise FloorplanError("area budget exhausted the die before all entries were placed")
    fp = Floorplan(outline, tuple(blocks))
    _raise_typed(fp)
    return fp


def fill_gaps(outline: DieOutline, blocks: Iterable[Block]) -> Floorplan:
    """Complete a partial placement with zero-power `_fill_k` blocks.

    Uses a guillotine sweep over the uncovered area; fillers carry no power
    but give the thermal grid material everywhere.
    """
    blocks = list(blocks)
    xs = sorted({0.0, outline.width, *(b.left_x for b in blocks), *(b.right_x for b in blocks)})
    ys = sorted({0.0, outline.height, *(b.bottom_y for b in blocks), *(b.top_y for b in blocks)})
    fillers: list[Block] = []
    k = 0
    for xi in range(len(xs) - 1):
        run_start = None
        for yi in range(len(ys) - 1):
            cx = (xs[xi] + xs[xi + 1]) / 2
            cy = (ys[yi] + ys[yi + 1]) / 2
            covered = any(
                b.left_x <= cx < b.right_x and b.bottom_y <= cy < b.top_y for b in blocks
            )
            if not covered and run_start is None:
                run_start = yi
            if covered and run_start is not None:
                fillers.append(
                    Block(f"{FILL_PREFIX}{k}", xs[xi + 1] - xs[xi], ys[yi] - ys[run_start], xs[xi], ys[run_start])
                )
                k += 1
                run_start = None
        if run_start is not None:
            fillers.append(
                Block(f"{FILL_PREFIX}{k}", xs[xi + 1] - xs[xi], ys[-1] - ys[run_start], xs[xi], ys[run_start])
            )
            k += 1
    fp = Floorplan(outline, tuple(blocks + fillers))
    _raise_typed(fp)
    return fp


# --- file format ------------------------------------------------------------
#
# One block per line, tab-separated, meters, '#' comments:
#   name  width_m  height_m  left_x_m  bottom_y_m


def parse_floorplan(text: str, outline: DieOutline | None = None) -> Floorplan:
    """Parse and validate; rejects invariant violations with line numbers.

    When no outline is given it is inferred as the bounding box of the
    blocks, which matches emission for exactly tiling floorplans.
    """
    blocks: list[Block] = []
    line_of: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 5:
            raise FloorplanError(
                "expected: name width_m height_m left_x_m bottom_y_m", line=lineno
            )
        name = fields[0]
        try:
            w, h, x, y = (float(f) for f in fields[1:])
        except ValueError:
            raise FloorplanError(f"bad numeric field in {raw!r}", line=lineno) from None
        if name not in line_of:
            line_of[name] = lineno
        blocks.append(Block(name, w, h, x, y))
    if not blocks:
        raise FloorplanError("no blocks in floorplan")
    if outline is None:
        outline = DieOutline(max(b.right_x for b in blocks), max(b.top_y for b in blocks))
    fp = Floorplan(outline, tuple(blocks))
    _raise_typed(fp, line_of)
    return fp


def emit_floorplan(fp: Floorplan) -> str:
    """Canonical text form; parse(emit(fp)) == fp and emit is byte-stable."""
    lines = ["# floorplan (units: m): name width height left_x bottom_y"]
    for b in fp.blocks:
        lines.append(f"{b.name}\t{b.width!r}\t{b.height!r}\t{b.left_x!r}\t{b.bottom_y!r}")
    return "\n".join(lines) + "\n"


# --- rasterization ----------------------------------------------------------


@dataclass(frozen=True)
class CellAssignment:
    """Per-cell block ownership on a simulation grid.

    `index[r, c]` is the position of the owning block in `block_names`.
    Cell centers on shared edges tie-break toward the block containing the
    point (x - eps, y - eps).
    """

    block_names: tuple[str, ...]
    index: np.ndarray  # (rows, cols) int32
    block_areas: np.ndarray  # (n_blocks,) m^2, from block geometry
    grid: Grid

    def name_at(self, row: int, col: int) -> str:
        return self.block_names[self.index[row, col]]

    def counts(self) -> np.ndarray:
        return np.bincount(self.index.ravel(), minlength=len(self.block_names))

    def cells_of(self, name: str) -> np.ndarray:
        i = self.block_names.index(name)
        return np.argwhere(self.index == i)

    def __eq__(self, other) -> bool:  # ndarray fields break dataclass eq
        return (
            isinstance(other, CellAssignment)
            and self.block_names == other.block_names
            and np.array_equal(self.index, other.index)
            and np.array_equal(self.block_areas, other.block_areas)
            and self.grid == other.grid
        )


def rasterize(fp: Floorplan, grid: Grid) -> CellAssignment:
    """Assign every grid cell to exactly one block by cell-center containment."""
    xc = (np.arange(grid.cols) + 0.5) * grid.cell_width - TIE_BREAK_EPS_M
    yc = (np.arange(grid.rows) + 0.5) * grid.cell_height - TIE_BREAK_EPS_M
    index = np.full((grid.rows, grid.cols), -1, dtype=np.int32)
    for i, b in enumerate(fp.blocks):
        cmask = (xc >= b.left_x) & (xc < b.right_x)
        rmask = (yc >= b.bottom_y) & (yc < b.top_y)
        region = index[np.ix_(rmask, cmask)]
        if (region != -1).any():
            raise FloorplanError(
                f"cell claimed twice while rasterizing block {b.name!r}", [b.name]
            )
        index[np.ix_(rmask, cmask)] = i
    if (index == -1).any():
        r, c = np.argwhere(index == -1)[0]
        raise FloorplanError(f"cell ({r}, {c}) not covered by any block")
    areas = np.array([b.area for b in fp.blocks])
    return CellAssignment(fp.block_names(), index, areas, grid)
