// Microchannel pattern generation for the composer: the same three styles
// and geometry rules as the gateway's generator, emitted in its file format
// so exported documents validate server-side. Also feeds the live schematic.

export type PatternStyle = "vertical" | "horizontal" | "bent90";

export interface PatternDraft {
  rows: number;
  cols: number;
  // 0 wall, 1 +x, 2 -x, 3 +y, 4 -y (matches the gateway's glyphs > < ^ v)
  cells: Uint8Array;
  inlets: [number, number][];
  outlets: [number, number][];
  coolant: CoolantSpec;
}

export interface CoolantSpec {
  name: string;
  volumetricHeatCapacity: number;
  inletTemperature: number;
  flowRatePerChannel: number;
  convectionCoefficient: number;
}

const GLYPHS: Record<number, string> = { 1: ">", 2: "<", 3: "^", 4: "v" };
const NUSSELT_LAMINAR = 4.36;
const WATER_K = 0.6;

export function waterCoolant(channelWidthM: number, channelDepthM: number): CoolantSpec {
  const dH = (2 * channelWidthM * channelDepthM) / (channelWidthM + channelDepthM);
  return {
    name: "water",
    volumetricHeatCapacity: 4.18e6,
    inletTemperature: 300.0,
    flowRatePerChannel: 2e-8,
    convectionCoefficient: (NUSSELT_LAMINAR * WATER_K) / dH,
  };
}

export function generatePattern(
  rows: number,
  cols: number,
  style: PatternStyle,
  widthCells: number,
  pitchCells: number,
  coolant: CoolantSpec,
): PatternDraft {
  const w = widthCells;
  const p = pitchCells;
  if (w < 1) throw new Error("channel width must span at least 1 cell");
  if (p < 2) throw new Error("channel pitch must span at least 2 cells");
  if (w > p) throw new Error(`channel width (${w} cells) exceeds pitch (${p} cells)`);
  const cells = new Uint8Array(rows * cols);
  const at = (r: number, c: number) => r * cols + c;
  let off = Math.floor((p - w) / 2);

  if (style === "vertical") {
    if (cols % p) throw new Error(`pitch of ${p} cells must divide the ${cols}-column extent`);
    for (let k = 0; k < cols / p; k++) {
      for (let j = 0; j < w; j++) {
        const c = k * p + off + j;
        for (let r = 0; r < rows; r++) cells[at(r, c)] = 3;
      }
    }
  } else if (style === "horizontal") {
    if (rows % p) throw new Error(`pitch of ${p} cells must divide the ${rows}-row extent`);
    for (let k = 0; k < rows / p; k++) {
      for (let j = 0; j < w; j++) {
        const r = k * p + off + j;
        for (let c = 0; c < cols; c++) cells[at(r, c)] = 1;
      }
    }
  } else {
    if (rows !== cols) throw new Error(`bent90 needs a square grid, got ${rows}x${cols}`);
    if (rows % (2 * p)) {
      throw new Error(`bent90 needs the grid side (${rows}) to be a multiple of ${2 * p}`);
    }
    if (off === 0 && p > w) off = 1; // keep bent runs off the die edge
    const half = rows / 2;
    // nested L runs in the south-west quadrant, mirrored to the other three
    for (let k = 0; k < Math.floor(half / p); k++) {
      for (let j = 0; j < w; j++) {
        const c = k * p + off + j;
        const rTurn = k * p + off + j;
        for (let r = 0; r < rTurn; r++) cells[at(r, c)] = 3;
        cells[at(rTurn, c)] = 2;
        for (let cc = 0; cc < c; cc++) cells[at(rTurn, cc)] = 2;
      }
    }
    const mirrorX: Record<number, number> = { 0: 0, 1: 2, 2: 1, 3: 3, 4: 4 };
    const mirrorY: Record<number, number> = { 0: 0, 1: 1, 2: 2, 3: 4, 4: 3 };
    for (let r = 0; r < half; r++) {
      for (let c = 0; c < half; c++) {
        cells[at(r, cols - 1 - c)] = mirrorX[cells[at(r, c)]];
      }
    }
    for (let r = 0; r < half; r++) {
      for (let c = 0; c < cols; c++) {
        cells[at(rows - 1 - r, c)] = mirrorY[cells[at(r, c)]];
      }
    }
  }

  const inlets: [number, number][] = [];
  const outlets: [number, number][] = [];
  if (style === "vertical") {
    for (let c = 0; c < cols; c++) {
      if (cells[at(0, c)]) inlets.push([0, c]);
      if (cells[at(rows - 1, c)]) outlets.push([rows - 1, c]);
    }
  } else if (style === "horizontal") {
    for (let r = 0; r < rows; r++) {
      if (cells[at(r, 0)]) inlets.push([r, 0]);
      if (cells[at(r, cols - 1)]) outlets.push([r, cols - 1]);
    }
  } else {
    for (let c = 0; c < cols; c++) {
      if (cells[at(0, c)]) inlets.push([0, c]);
      if (cells[at(rows - 1, c)]) inlets.push([rows - 1, c]);
    }
    for (let r = 0; r < rows; r++) {
      if (cells[at(r, 0)]) outlets.push([r, 0]);
      if (cells[at(r, cols - 1)]) outlets.push([r, cols - 1]);
    }
  }
  return { rows, cols, cells, inlets, outlets, coolant };
}

export function emitPattern(p: PatternDraft): string {
  const c = p.coolant;
  const lines = [
    `grid ${p.rows} ${p.cols}`,
    `coolant ${c.name} ${c.volumetricHeatCapacity} ${c.inletTemperature} ` +
      `${c.flowRatePerChannel} ${c.convectionCoefficient}`,
  ];
  for (let r = 0; r < p.rows; r++) {
    let row = "";
    for (let col = 0; col < p.cols; col++) {
      const v = p.cells[r * p.cols + col];
      row += v ? GLYPHS[v] : "#";
    }
    lines.push(row);
  }
  for (const [r, col] of sortPorts(p.inlets, p.rows)) lines.push(`inlet ${r} ${col}`);
  for (const [r, col] of sortPorts(p.outlets, p.rows)) lines.push(`outlet ${r} ${col}`);
  return lines.join("\n") + "\n";
}

// canonical port order: grouped by boundary edge, groups and cells in
// position order (matches the gateway's emission)
function sortPorts(cells: [number, number][], rows: number): [number, number][] {
  const byPos = (a: [number, number], b: [number, number]) => a[0] - b[0] || a[1] - b[1];
  const edges: Record<string, [number, number][]> = { south: [], north: [], west: [], east: [] };
  for (const [r, c] of cells) {
    if (r === 0) edges.south.push([r, c]);
    else if (r === rows - 1) edges.north.push([r, c]);
    else if (c === 0) edges.west.push([r, c]);
    else edges.east.push([r, c]);
  }
  const groups = Object.values(edges)
    .filter((g) => g.length)
    .map((g) => g.sort(byPos));
  groups.sort((a, b) => byPos(a[0], b[0]));
  return groups.flat();
}

export function fluidCellCount(p: PatternDraft): number {
  let n = 0;
  for (const v of p.cells) if (v) n++;
  return n;
}
