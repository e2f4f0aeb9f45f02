// Heatmap rendering: render-only by construction. Every temperature string
// these helpers produce is formatted directly from a gateway response value;
// the UI never computes a temperature of its own. The color scale is shared
// across layers and comparison sides (equal temperature, equal color).

import { blockAt, type Block } from "./floorplan.js";
import type { HeatmapResponse, SummaryResponse } from "./types.js";

export interface ColorScale {
  min: number;
  max: number;
}

// compact viridis-like ramp; perceptually ordered dark -> bright
const RAMP: [number, number, number][] = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

export function formatTemp(value: number): string {
  return value.toFixed(3);
}

/** One scale across all given responses: layer tabs and comparison sides. */
export function sharedScale(maps: HeatmapResponse[]): ColorScale {
  let min = Infinity;
  let max = -Infinity;
  for (const m of maps) {
    for (const row of m.temperatures) {
      for (const t of row) {
        if (t < min) min = t;
        if (t > max) max = t;
      }
    }
  }
  if (!Number.isFinite(min)) throw new Error("no temperatures to scale");
  return { min, max };
}

export function colorFor(value: number, scale: ColorScale): string {
  const span = scale.max - scale.min;
  const x = span > 0 ? Math.min(1, Math.max(0, (value - scale.min) / span)) : 0.5;
  const pos = x * (RAMP.length - 1);
  const i = Math.min(RAMP.length - 2, Math.floor(pos));
  const f = pos - i;
  const [r0, g0, b0] = RAMP[i];
  const [r1, g1, b1] = RAMP[i + 1];
  const mix = (a: number, b: number) => Math.round(a + (b - a) * f);
  return `rgb(${mix(r0, r1)},${mix(g0, g1)},${mix(b0, b1)})`;
}

/** Legend labels come straight from response extremes, nothing interpolated. */
export function legendLabels(scale: ColorScale): { min: string; max: string } {
  return { min: formatTemp(scale.min), max: formatTemp(scale.max) };
}

/** Hover text: the cell's response temperature plus the owning block. */
export function tooltipText(
  map: HeatmapResponse,
  row: number,
  col: number,
  blocks: Block[] | null,
): string {
  const t = map.temperatures[row][col];
  const owner = blocks
    ? blockAt(blocks, row, col, map.cell_width_m, map.cell_height_m)
    : null;
  const where = owner ? ` in ${owner}` : "";
  return `${formatTemp(t)} K at (${row}, ${col})${where}`;
}

export interface SummaryRow {
  scope: string;
  name: string;
  mean: string;
  max: string;
}

/** Table rows for the summary panel, all values formatted from the response. */
export function summaryRows(summary: SummaryResponse): SummaryRow[] {
  const rows: SummaryRow[] = summary.blocks.map((b) => ({
    scope: "block",
    name: b.name,
    mean: formatTemp(b.mean_k),
    max: formatTemp(b.max_k),
  }));
  for (const l of summary.layers) {
    rows.push({
      scope: "layer",
      name: String(l.layer),
      mean: formatTemp(l.mean_k),
      max: formatTemp(l.max_k),
    });
  }
  rows.push({ scope: "stack", name: "-", mean: "-", max: formatTemp(summary.stack_max_k) });
  return rows;
}

/** Minimal drawing surface so tests can record paint calls. */
export interface PaintSurface {
  fillStyle: string;
  fillRect(x: number, y: number, w: number, h: number): void;
}

export function drawHeatmap(
  surface: PaintSurface,
  map: HeatmapResponse,
  scale: ColorScale,
  cellPx: number,
): void {
  for (let r = 0; r < map.rows; r++) {
    for (let c = 0; c < map.cols; c++) {
      surface.fillStyle = colorFor(map.temperatures[r][c], scale);
      // row 0 is the south edge; canvases grow downward, so flip
      surface.fillRect(c * cellPx, (map.rows - 1 - r) * cellPx, cellPx, cellPx);
    }
  }
}
