// Browser entry: wires the editor state, composer, and run/compare views to
// the DOM. All numeric temperature output flows through the render-only
// helpers in heatmap.ts / compare.ts.

import { fetchTransport, GatewayClient } from "./api.js";
import { compareSummaries, formatDelta, unmatchedBlocks } from "./compare.js";
import { starterDesign } from "./defaults.js";
import { EditorState } from "./editorState.js";
import {
  checkFloorplan,
  emitFloorplan,
  generateTemplate,
  parseFloorplan,
  type Block,
} from "./floorplan.js";
import {
  drawHeatmap,
  formatTemp,
  legendLabels,
  sharedScale,
  summaryRows,
  tooltipText,
  type ColorScale,
} from "./heatmap.js";
import { emitPattern, generatePattern, waterCoolant, type PatternStyle } from "./pattern.js";
import { pollJob } from "./polling.js";
import { emitStack, insertLayer, moveLayer, parseStack, removeLayer } from "./stack.js";
import type { HeatmapResponse, SummaryResponse } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const client = new GatewayClient(fetchTransport(""));
const editor = new EditorState(starterDesign());
let designId: string | null = null;
let designVersion = 0;
let activeFloorplanRef = "cores.flp";
let finishedRuns: { label: string; jobId: string }[] = [];

// --- floorplan editor ---------------------------------------------------------

interface DragState {
  name: string;
  mode: "move" | "resize";
  startX: number;
  startY: number;
  origin: Block;
}

let drag: DragState | null = null;

function outline() {
  const stack = parseStack(editor.draft.stack);
  return { width: stack.outlineWidth, height: stack.outlineHeight };
}

function cellSize() {
  const o = outline();
  const g = editor.draft.grid;
  return { w: o.width / g.cols, h: o.height / g.rows };
}

function currentBlocks(): Block[] {
  const text = editor.draft.floorplans[activeFloorplanRef];
  return text ? parseFloorplan(text) : [];
}

function pxPerMeter(canvas: HTMLCanvasElement): number {
  return canvas.width / outline().width;
}

function renderFloorplan(): void {
  const canvas = $<HTMLCanvasElement>("fp-canvas");
  const ctx = canvas.getContext("2d")!;
  const o = outline();
  const scale = pxPerMeter(canvas);
  canvas.height = Math.round(o.height * scale);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const blocks = currentBlocks();
  const problems = checkFloorplan(blocks, o);
  const bad = new Set<string>();
  for (const p of problems) {
    for (const b of blocks) if (p.includes(`'${b.name}'`)) bad.add(b.name);
  }
  for (const b of blocks) {
    const x = b.leftX * scale;
    const y = canvas.height - (b.bottomY + b.height) * scale;
    const w = b.width * scale;
    const h = b.height * scale;
    ctx.fillStyle = bad.has(b.name)
      ? "rgba(220,60,60,0.55)"
      : b.name === editor.selection
        ? "rgba(80,140,220,0.55)"
        : "rgba(120,160,200,0.35)";
    ctx.fillRect(x, y, w, h);
    ctx.strokeStyle = "#335";
    ctx.strokeRect(x, y, w, h);
    ctx.fillStyle = "#123";
    ctx.font = "11px sans-serif";
    ctx.fillText(b.name, x + 3, y + 12);
  }
  const list = $("fp-violations");
  list.innerHTML = "";
  for (const p of problems) {
    const li = document.createElement("li");
    li.textContent = p;
    list.appendChild(li);
  }
  $("fp-status").textContent = problems.length
    ? `${problems.length} violation(s); submit disabled`
    : "floorplan valid";
  ($("btn-run") as HTMLButtonElement).disabled = !editor.submittable;
  ($("btn-save") as HTMLButtonElement).disabled = !editor.submittable;
}

function canvasToDie(canvas: HTMLCanvasElement, ev: MouseEvent): { x: number; y: number } {
  const rect = canvas.getBoundingClientRect();
  const scale = pxPerMeter(canvas);
  const x = (ev.clientX - rect.left) / scale;
  const y = (canvas.height - (ev.clientY - rect.top)) / scale;
  return { x, y };
}

function setupFloorplanEditor(): void {
  const canvas = $<HTMLCanvasElement>("fp-canvas");
  canvas.addEventListener("mousedown", (ev) => {
    const { x, y } = canvasToDie(canvas, ev);
    const blocks = currentBlocks();
    const hit = blocks.find(
      (b) => x >= b.leftX && x < b.leftX + b.width && y >= b.bottomY && y < b.bottomY + b.height,
    );
    if (!hit) return;
    editor.selection = hit.name;
    const nearCorner =
      Math.abs(x - (hit.leftX + hit.width)) < hit.width * 0.2 &&
      Math.abs(y - hit.bottomY) < hit.height * 0.2;
    drag = {
      name: hit.name,
      mode: nearCorner ? "resize" : "move",
      startX: x,
      startY: y,
      origin: { ...hit },
    };
    renderFloorplan();
  });
  canvas.addEventListener("mousemove", (ev) => {
    if (!drag) return;
    const { x, y } = canvasToDie(canvas, ev);
    const { w, h } = cellSize();
    const dx = x - drag.startX;
    const dy = y - drag.startY;
    const blocks = currentBlocks();
    let next: Block[];
    if (drag.mode === "move") {
      next = blocks.map((b) =>
        b.name === drag!.name
          ? {
              ...b,
              leftX: Math.round((drag!.origin.leftX + dx) / w) * w,
              bottomY: Math.round((drag!.origin.bottomY + dy) / h) * h,
            }
          : b,
      );
    } else {
      next = blocks.map((b) =>
        b.name === drag!.name
          ? {
              ...b,
              width: Math.max(w, Math.round((drag!.origin.width + dx) / w) * w),
              height: Math.max(h, Math.round((drag!.origin.height - dy) / h) * h),
            }
          : b,
      );
    }
    // live preview without committing an undo step per mouse event
    editor.draft.floorplans[activeFloorplanRef] = emitFloorplan(next);
    renderFloorplan();
  });
  canvas.addEventListener("mouseup", () => {
    if (!drag) return;
    const origin = drag.origin;
    const name = drag.name;
    const final = currentBlocks().find((b) => b.name === name);
    drag = null;
    if (!final) return;
    // rewind the preview, then commit the whole gesture as one undo step
    const rewound = currentBlocks().map((b) => (b.name === name ? origin : b));
    editor.draft.floorplans[activeFloorplanRef] = emitFloorplan(rewound);
    editor.apply((draft) => {
      draft.floorplans[activeFloorplanRef] = emitFloorplan(
        parseFloorplan(draft.floorplans[activeFloorplanRef]).map((b) =>
          b.name === name ? final : b,
        ),
      );
      return draft;
    });
    renderFloorplan();
  });
  $("btn-template-2x2").addEventListener("click", () => {
    editor.apply((draft) => {
      draft.floorplans[activeFloorplanRef] = emitFloorplan(
        generateTemplate(outline(), 4, "C"),
      );
      return draft;
    });
    renderFloorplan();
  });
  $("btn-template-4x4").addEventListener("click", () => {
    editor.apply((draft) => {
      draft.floorplans[activeFloorplanRef] = emitFloorplan(
        generateTemplate(outline(), 16, "B"),
      );
      return draft;
    });
    renderFloorplan();
  });
  $("btn-undo").addEventListener("click", () => {
    editor.undo();
    renderAll();
  });
  $("btn-redo").addEventListener("click", () => {
    editor.redo();
    renderAll();
  });
  $<HTMLSelectElement>("fp-select").addEventListener("change", (ev) => {
    activeFloorplanRef = (ev.target as HTMLSelectElement).value;
    renderFloorplan();
  });
}

// --- stack & cooling composer --------------------------------------------------

function renderStack(): void {
  const stack = parseStack(editor.draft.stack);
  const list = $("stack-list");
  list.innerHTML = "";
  stack.layers.forEach((layer, i) => {
    const li = document.createElement("li");
    li.textContent = `${i}: ${layer.kind} ${layer.thickness * 1e6} um ${layer.material} ${layer.ref ?? ""}`;
    const up = document.createElement("button");
    up.textContent = "up";
    up.disabled = i === stack.layers.length - 1;
    up.onclick = () => {
      editor.apply((d) => ({ ...d, stack: emitStack(moveLayer(parseStack(d.stack), i, i + 1)) }));
      renderAll();
    };
    const down = document.createElement("button");
    down.textContent = "down";
    down.disabled = i === 0;
    down.onclick = () => {
      editor.apply((d) => ({ ...d, stack: emitStack(moveLayer(parseStack(d.stack), i, i - 1)) }));
      renderAll();
    };
    const del = document.createElement("button");
    del.textContent = "remove";
    del.onclick = () => {
      editor.apply((d) => ({ ...d, stack: emitStack(removeLayer(parseStack(d.stack), i)) }));
      renderAll();
    };
    li.append(" ", up, down, del);
    list.appendChild(li);
  });
  const fpSelect = $<HTMLSelectElement>("fp-select");
  fpSelect.innerHTML = "";
  for (const ref of Object.keys(editor.draft.floorplans)) {
    const opt = document.createElement("option");
    opt.value = ref;
    opt.textContent = ref;
    opt.selected = ref === activeFloorplanRef;
    fpSelect.appendChild(opt);
  }
  renderPatternSchematic();
}

function composerPattern() {
  const style = $<HTMLSelectElement>("cool-style").value as PatternStyle;
  const g = editor.draft.grid;
  const widthCells = Number($<HTMLInputElement>("cool-width").value) || 1;
  const pitchCells = Number($<HTMLInputElement>("cool-pitch").value) || 2;
  const o = outline();
  const coolant = waterCoolant((o.width / g.cols) * widthCells, 2e-4);
  return generatePattern(g.rows, g.cols, style, widthCells, pitchCells, coolant);
}

function renderPatternSchematic(): void {
  const canvas = $<HTMLCanvasElement>("cool-canvas");
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  let pattern;
  try {
    pattern = composerPattern();
  } catch (e) {
    $("cool-status").textContent = (e as Error).message;
    return;
  }
  $("cool-status").textContent = "";
  const px = Math.floor(Math.min(canvas.width / pattern.cols, canvas.height / pattern.rows));
  for (let r = 0; r < pattern.rows; r++) {
    for (let c = 0; c < pattern.cols; c++) {
      const v = pattern.cells[r * pattern.cols + c];
      ctx.fillStyle = v ? "#3b82d6" : "#e8e8ee";
      ctx.fillRect(c * px, (pattern.rows - 1 - r) * px, px - 1, px - 1);
    }
  }
}

function setupComposer(): void {
  for (const id of ["cool-style", "cool-width", "cool-pitch"]) {
    $(id).addEventListener("change", renderPatternSchematic);
  }
  $("btn-insert-channel").addEventListener("click", () => {
    let pattern;
    try {
      pattern = composerPattern();
    } catch (e) {
      $("cool-status").textContent = (e as Error).message;
      return;
    }
    const position = Number($<HTMLInputElement>("cool-position").value) || 0;
    const style = $<HTMLSelectElement>("cool-style").value;
    const ref = `${style}.pat`;
    editor.apply((d) => {
      d.patterns[ref] = emitPattern(pattern);
      const stack = insertLayer(parseStack(d.stack), position, {
        kind: "microchannel",
        thickness: 2e-4,
        material: "silicon",
        ref,
      });
      return { ...d, stack: emitStack(stack) };
    });
    renderAll();
  });
}

// --- run & compare --------------------------------------------------------------

async function saveDesign(): Promise<string> {
  const content = editor.exportForSubmit();
  if (designId === null) {
    const created = await client.createDesign(content);
    designId = created.id;
    designVersion = created.version;
  } else {
    const updated = await client.updateDesign(designId, content, designVersion);
    designVersion = updated.version;
  }
  editor.markSaved();
  $("run-status").textContent = `design ${designId} v${designVersion} saved`;
  return designId;
}

let currentHeatmaps: HeatmapResponse[] = [];
let currentSummary: SummaryResponse | null = null;
let currentScale: ColorScale | null = null;
let activeLayer = 0;

async function runSimulate(): Promise<void> {
  try {
    const id = await saveDesign();
    const { job_id } = await client.submitJob(id, "simulate");
    $("run-status").textContent = `job ${job_id} submitted`;
    const done = await pollJob(client, job_id, {
      onProgress: (s) => {
        $("run-status").textContent = `job ${s.state}, ${(s.progress * 100).toFixed(0)}%`;
        ($<HTMLProgressElement>("run-progress") as HTMLProgressElement).value = s.progress;
      },
    });
    if (done.state === "failed") {
      $("run-status").textContent = `job failed: ${done.error}`;
      return;
    }
    currentSummary = await client.summary(job_id);
    const stack = parseStack(editor.draft.stack);
    currentHeatmaps = [];
    for (let layer = 0; layer < stack.layers.length; layer++) {
      currentHeatmaps.push(await client.heatmap(job_id, layer));
    }
    currentScale = sharedScale(currentHeatmaps);
    finishedRuns.push({ label: `${editor.draft.name} #${finishedRuns.length + 1}`, jobId: job_id });
    renderRunResults();
    renderCompareSelectors();
  } catch (e) {
    $("run-status").textContent = `error: ${(e as Error).message}`;
  }
}

function renderRunResults(): void {
  if (!currentSummary || !currentScale) return;
  const tabs = $("layer-tabs");
  tabs.innerHTML = "";
  currentHeatmaps.forEach((hm, i) => {
    const b = document.createElement("button");
    b.textContent = `layer ${i} (${hm.kind})`;
    b.disabled = i === activeLayer;
    b.onclick = () => {
      activeLayer = i;
      renderRunResults();
    };
    tabs.appendChild(b);
  });
  const canvas = $<HTMLCanvasElement>("hm-canvas");
  const hm = currentHeatmaps[activeLayer];
  const px = Math.max(2, Math.floor(canvas.width / hm.cols));
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const surface = {
    set fillStyle(v: string) {
      ctx.fillStyle = v;
    },
    get fillStyle() {
      return String(ctx.fillStyle);
    },
    fillRect: (x: number, y: number, w: number, h: number) => ctx.fillRect(x, y, w, h),
  };
  drawHeatmap(surface, hm, currentScale, px);
  const legend = legendLabels(currentScale);
  $("hm-legend").textContent = `${legend.min} K … ${legend.max} K (shared scale)`;

  canvas.onmousemove = (ev) => {
    const rect = canvas.getBoundingClientRect();
    const c = Math.floor((ev.clientX - rect.left) / px);
    const rFromTop = Math.floor((ev.clientY - rect.top) / px);
    const r = hm.rows - 1 - rFromTop;
    if (r < 0 || r >= hm.rows || c < 0 || c >= hm.cols) return;
    const stack = parseStack(editor.draft.stack);
    const ref = stack.layers[activeLayer]?.ref;
    const blocks =
      ref && editor.draft.floorplans[ref] ? parseFloorplan(editor.draft.floorplans[ref]) : null;
    $("hm-tooltip").textContent = tooltipText(hm, r, c, blocks);
  };

  const tbody = $("summary-body");
  tbody.innerHTML = "";
  for (const row of summaryRows(currentSummary)) {
    const tr = document.createElement("tr");
    for (const v of [row.scope, row.name, row.mean, row.max]) {
      const td = document.createElement("td");
      td.textContent = v;
      tr.appendChild(td);
    }
    tbody.appendChild(tr);
  }
}

function renderCompareSelectors(): void {
  for (const id of ["cmp-left", "cmp-right"]) {
    const sel = $<HTMLSelectElement>(id);
    const prev = sel.value;
    sel.innerHTML = "";
    for (const run of finishedRuns) {
      const opt = document.createElement("option");
      opt.value = run.jobId;
      opt.textContent = `${run.label} (${run.jobId.slice(0, 8)})`;
      sel.appendChild(opt);
    }
    if (prev) sel.value = prev;
  }
}

async function runCompare(): Promise<void> {
  const leftId = $<HTMLSelectElement>("cmp-left").value;
  const rightId = $<HTMLSelectElement>("cmp-right").value;
  if (!leftId || !rightId) return;
  const [left, right] = await Promise.all([client.summary(leftId), client.summary(rightId)]);
  const cmp = compareSummaries(left, right);
  const tbody = $("cmp-body");
  tbody.innerHTML = "";
  for (const b of cmp.blocks) {
    const tr = document.createElement("tr");
    for (const v of [b.name, formatTemp(b.leftMax), formatTemp(b.rightMax), formatDelta(b.delta)]) {
      const td = document.createElement("td");
      td.textContent = v;
      tr.appendChild(td);
    }
    tbody.appendChild(tr);
  }
  $("cmp-stack").textContent =
    `stack max: ${formatTemp(cmp.leftStackMax)} K vs ${formatTemp(cmp.rightStackMax)} K ` +
    `(delta ${formatDelta(cmp.stackDelta)} K)`;
  const missing = unmatchedBlocks(left, right);
  $("cmp-note").textContent = missing.length
    ? `blocks only on one side: ${missing.join(", ")}`
    : "";
}

function renderAll(): void {
  renderStack();
  renderFloorplan();
}

export function start(): void {
  setupFloorplanEditor();
  setupComposer();
  $("btn-save").addEventListener("click", () => void saveDesign());
  $("btn-run").addEventListener("click", () => void runSimulate());
  $("btn-compare").addEventListener("click", () => void runCompare());
  renderAll();
}

if (typeof document !== "undefined" && document.getElementById("fp-canvas")) {
  start();
}
