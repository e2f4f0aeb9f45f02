// Side-by-side comparison of two finished runs. Deltas are plain
// subtractions of gateway summary values, so they equal the server's own
// differences exactly.

import { formatTemp } from "./heatmap.js";
import type { SummaryResponse } from "./types.js";

export interface BlockDelta {
  layer: number;
  name: string;
  leftMax: number;
  rightMax: number;
  delta: number;
}

export interface Comparison {
  blocks: BlockDelta[];
  stackDelta: number;
  leftStackMax: number;
  rightStackMax: number;
}

function blockKeys(s: SummaryResponse): Map<string, number> {
  // blocks pair by name so comparisons survive layer-index shifts (for
  // example after inserting a cooling layer); duplicated names fall back to
  // a layer-qualified key
  const counts = new Map<string, number>();
  for (const b of s.blocks) counts.set(b.name, (counts.get(b.name) ?? 0) + 1);
  const out = new Map<string, number>();
  for (const b of s.blocks) {
    const key = counts.get(b.name) === 1 ? b.name : `${b.layer}:${b.name}`;
    out.set(key, b.max_k);
  }
  return out;
}

export function compareSummaries(left: SummaryResponse, right: SummaryResponse): Comparison {
  const rightByKey = blockKeys(right);
  const leftCounts = new Map<string, number>();
  for (const b of left.blocks) leftCounts.set(b.name, (leftCounts.get(b.name) ?? 0) + 1);
  const blocks: BlockDelta[] = [];
  for (const b of left.blocks) {
    const key = leftCounts.get(b.name) === 1 ? b.name : `${b.layer}:${b.name}`;
    const other = rightByKey.get(key);
    if (other === undefined) continue;
    blocks.push({
      layer: b.layer,
      name: b.name,
      leftMax: b.max_k,
      rightMax: other,
      delta: other - b.max_k,
    });
  }
  return {
    blocks,
    stackDelta: right.stack_max_k - left.stack_max_k,
    leftStackMax: left.stack_max_k,
    rightStackMax: right.stack_max_k,
  };
}

/** Block keys only present on one side (renames, removed blocks). */
export function unmatchedBlocks(left: SummaryResponse, right: SummaryResponse): string[] {
  const l = blockKeys(left);
  const r = blockKeys(right);
  const out: string[] = [];
  for (const k of l.keys()) if (!r.has(k)) out.push(k);
  for (const k of r.keys()) if (!l.has(k)) out.push(k);
  return out;
}

export function formatDelta(delta: number): string {
  const sign = delta > 0 ? "+" : "";
  return `${sign}${formatTemp(delta)}`;
}
