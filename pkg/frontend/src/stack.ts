// Stack description text: parse, emit, and the composer's layer operations.

export interface LayerLine {
  kind: "die" | "tim" | "microchannel" | "spreader" | "sink";
  thickness: number;
  material: string;
  ref?: string;
}

export interface StackDraft {
  outlineWidth: number;
  outlineHeight: number;
  ambient: number;
  layers: LayerLine[];
}

const KINDS = new Set(["die", "tim", "microchannel", "spreader", "sink"]);

export function parseStack(text: string): StackDraft {
  let outline: [number, number] | null = null;
  let ambient = 318.15;
  const layers: LayerLine[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].split("#", 1)[0].trim();
    if (!line) continue;
    const fields = line.split(/\s+/);
    if (fields[0] === "outline") {
      outline = [Number(fields[1]), Number(fields[2])];
    } else if (fields[0] === "ambient") {
      ambient = Number(fields[1]);
    } else if (KINDS.has(fields[0])) {
      layers.push({
        kind: fields[0] as LayerLine["kind"],
        thickness: Number(fields[1]),
        material: fields[2],
        ref: fields[3],
      });
    } else {
      throw new Error(`line ${i + 1}: unknown directive '${fields[0]}'`);
    }
  }
  if (!outline) throw new Error("missing 'outline' line");
  return { outlineWidth: outline[0], outlineHeight: outline[1], ambient, layers };
}

export function emitStack(draft: StackDraft): string {
  const lines = [
    "# stack description (units: m, K); bottom layer first, sink side last",
    `outline\t${draft.outlineWidth}\t${draft.outlineHeight}`,
    `ambient\t${draft.ambient}`,
  ];
  for (const l of draft.layers) {
    const fields = [l.kind, String(l.thickness), l.material];
    if (l.ref) fields.push(l.ref);
    lines.push(fields.join("\t"));
  }
  return lines.join("\n") + "\n";
}

/** Move the layer at `from` to position `to` (composer drag). */
export function moveLayer(draft: StackDraft, from: number, to: number): StackDraft {
  const layers = draft.layers.slice();
  if (from < 0 || from >= layers.length || to < 0 || to >= layers.length) {
    throw new Error(`layer index out of range`);
  }
  const [layer] = layers.splice(from, 1);
  layers.splice(to, 0, layer);
  return { ...draft, layers };
}

export function insertLayer(draft: StackDraft, index: number, layer: LayerLine): StackDraft {
  if (index < 0 || index > draft.layers.length) throw new Error("insertion index out of range");
  const layers = draft.layers.slice();
  layers.splice(index, 0, layer);
  return { ...draft, layers };
}

export function removeLayer(draft: StackDraft, index: number): StackDraft {
  if (index < 0 || index >= draft.layers.length) throw new Error("layer index out of range");
  const layers = draft.layers.slice();
  layers.splice(index, 1);
  return { ...draft, layers };
}

/** Mirrors the gateway's structural stack checks for live feedback. */
export function checkStack(draft: StackDraft): string[] {
  const problems: string[] = [];
  if (!draft.layers.some((l) => l.kind === "die")) problems.push("stack has no die layer");
  const sinks = draft.layers
    .map((l, i) => [l, i] as const)
    .filter(([l]) => l.kind === "sink");
  if (sinks.length > 1) problems.push("more than one sink layer");
  if (sinks.length === 1 && sinks[0][1] !== draft.layers.length - 1) {
    problems.push("sink layer must be last (warning: no sink on top)");
  }
  draft.layers.forEach((l, i) => {
    if (l.thickness <= 0) problems.push(`layer ${i}: thickness must be > 0`);
    if (l.kind === "die" && !l.ref) problems.push(`layer ${i}: die layer needs a floorplan ref`);
    if (l.kind === "microchannel" && !l.ref) {
      problems.push(`layer ${i}: microchannel layer needs a pattern ref`);
    }
    if (l.kind === "microchannel" && draft.layers[i + 1]?.kind === "microchannel") {
      problems.push(`layers ${i} and ${i + 1}: adjacent microchannel layers`);
    }
  });
  return problems;
}
