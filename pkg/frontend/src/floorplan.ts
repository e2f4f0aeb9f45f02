// Client-side floorplan model: the same text format, validation rules, and
// tolerances as the gateway, so a draft that passes here parses there.

export interface Block {
  name: string;
  width: number;
  height: number;
  leftX: number;
  bottomY: number;
}

export interface Outline {
  width: number;
  height: number;
}

export const OVERLAP_TOL_M2 = 1e-15;
export const COVERAGE_REL_TOL = 1e-9;
export const TIE_BREAK_EPS_M = 1e-12;

export function blockArea(b: Block): number {
  return b.width * b.height;
}

export function parseFloorplan(text: string): Block[] {
  const blocks: Block[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].split("#", 1)[0].trim();
    if (!line) continue;
    const fields = line.split(/\s+/);
    if (fields.length !== 5) {
      throw new Error(`line ${i + 1}: expected name width height left_x bottom_y`);
    }
    const [name, w, h, x, y] = fields;
    const nums = [w, h, x, y].map(Number);
    if (nums.some((n) => Number.isNaN(n))) {
      throw new Error(`line ${i + 1}: bad numeric field`);
    }
    blocks.push({ name, width: nums[0], height: nums[1], leftX: nums[2], bottomY: nums[3] });
  }
  if (!blocks.length) throw new Error("no blocks in floorplan");
  return blocks;
}

export function emitFloorplan(blocks: Block[]): string {
  const lines = ["# floorplan (units: m): name width height left_x bottom_y"];
  for (const b of blocks) {
    lines.push(`${b.name}\t${b.width}\t${b.height}\t${b.leftX}\t${b.bottomY}`);
  }
  return lines.join("\n") + "\n";
}

function overlapArea(a: Block, b: Block): number {
  const w = Math.min(a.leftX + a.width, b.leftX + b.width) - Math.max(a.leftX, b.leftX);
  const h =
    Math.min(a.bottomY + a.height, b.bottomY + b.height) - Math.max(a.bottomY, b.bottomY);
  return Math.max(0, w) * Math.max(0, h);
}

/** Mirrors the gateway's floorplan invariants; empty list means exportable. */
export function checkFloorplan(blocks: Block[], outline: Outline): string[] {
  const problems: string[] = [];
  const seen = new Set<string>();
  for (const b of blocks) {
    if (seen.has(b.name)) problems.push(`duplicate block name '${b.name}'`);
    seen.add(b.name);
    if (b.width <= 0 || b.height <= 0) {
      problems.push(`block '${b.name}' has non-positive dimensions`);
    }
    const out =
      b.leftX < -OVERLAP_TOL_M2 ||
      b.bottomY < -OVERLAP_TOL_M2 ||
      b.leftX + b.width > outline.width * (1 + COVERAGE_REL_TOL) + OVERLAP_TOL_M2 ||
      b.bottomY + b.height > outline.height * (1 + COVERAGE_REL_TOL) + OVERLAP_TOL_M2;
    if (out) problems.push(`block '${b.name}' extends outside the die outline`);
  }
  for (let i = 0; i < blocks.length; i++) {
    for (let j = i + 1; j < blocks.length; j++) {
      const ov = overlapArea(blocks[i], blocks[j]);
      if (ov > OVERLAP_TOL_M2) {
        problems.push(
          `blocks '${blocks[i].name}' and '${blocks[j].name}' overlap by ${ov.toExponential(3)} m^2`,
        );
      }
    }
  }
  const covered = blocks.reduce((acc, b) => acc + blockArea(b), 0);
  const dieArea = outline.width * outline.height;
  const gap = dieArea - covered;
  if (Math.abs(gap) > COVERAGE_REL_TOL * dieArea) {
    problems.push(`coverage gap of ${gap.toExponential(6)} m^2`);
  }
  return problems;
}

// --- generation and editing ops ----------------------------------------------

function gridShape(n: number): [number, number] {
  let r = Math.floor(Math.sqrt(n));
  while (n % r) r--;
  return [r, n / r];
}

/** Equal-block grid template named prefix_0..prefix_{n-1}, row-major from
 * the bottom-left corner; matches the gateway's generator. */
export function generateTemplate(outline: Outline, count: number, prefix: string): Block[] {
  if (count < 1) throw new Error("count must be >= 1");
  const [rows, cols] = gridShape(count);
  const bw = outline.width / cols;
  const bh = outline.height / rows;
  const blocks: Block[] = [];
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      blocks.push({
        name: `${prefix}_${r * cols + c}`,
        width: bw,
        height: bh,
        leftX: c * bw,
        bottomY: r * bh,
      });
    }
  }
  return blocks;
}

export function snap(value: number, cell: number): number {
  return Math.round(value / cell) * cell;
}

function replaceBlock(blocks: Block[], name: string, update: (b: Block) => Block): Block[] {
  let found = false;
  const next = blocks.map((b) => {
    if (b.name !== name) return b;
    found = true;
    return update(b);
  });
  if (!found) throw new Error(`no block named '${name}'`);
  return next;
}

/** Translate a block, snapping its corner to the simulation cell size. */
export function moveBlock(
  blocks: Block[],
  name: string,
  dx: number,
  dy: number,
  cellW: number,
  cellH: number,
): Block[] {
  return replaceBlock(blocks, name, (b) => ({
    ...b,
    leftX: snap(b.leftX + dx, cellW),
    bottomY: snap(b.bottomY + dy, cellH),
  }));
}

/** Resize a block, snapping its extent to the simulation cell size. */
export function resizeBlock(
  blocks: Block[],
  name: string,
  width: number,
  height: number,
  cellW: number,
  cellH: number,
): Block[] {
  return replaceBlock(blocks, name, (b) => ({
    ...b,
    width: Math.max(cellW, snap(width, cellW)),
    height: Math.max(cellH, snap(height, cellH)),
  }));
}

export function renameBlock(blocks: Block[], name: string, next: string): Block[] {
  return replaceBlock(blocks, name, (b) => ({ ...b, name: next }));
}

export function removeBlock(blocks: Block[], name: string): Block[] {
  const next = blocks.filter((b) => b.name !== name);
  if (next.length === blocks.length) throw new Error(`no block named '${name}'`);
  return next;
}

/** Cell-center block lookup with the gateway's (x - eps, y - eps) tie-break. */
export function blockAt(
  blocks: Block[],
  row: number,
  col: number,
  cellW: number,
  cellH: number,
): string | null {
  const x = (col + 0.5) * cellW - TIE_BREAK_EPS_M;
  const y = (row + 0.5) * cellH - TIE_BREAK_EPS_M;
  for (const b of blocks) {
    if (x >= b.leftX && x < b.leftX + b.width && y >= b.bottomY && y < b.bottomY + b.height) {
      return b.name;
    }
  }
  return null;
}
