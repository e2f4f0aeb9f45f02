// Shared shapes for gateway payloads and client-side drafts.

export interface GridSpec {
  rows: number;
  cols: number;
}

export interface PowerModelSpec {
  block: string;
  static_power: number;
  switching_energy: number;
  clock_frequency: number;
  activity_factor_default?: number;
}

/** The gateway design document: embedded text artifacts, JSON envelope. */
export interface DesignContent {
  name: string;
  grid: GridSpec;
  stack: string;
  floorplans: Record<string, string>;
  patterns: Record<string, string>;
  power_models: PowerModelSpec[];
  activity: Record<string, unknown>;
  mapping_rules?: string;
  workloads?: Record<string, string>;
  solver?: Record<string, number>;
  sweep?: string;
}

export interface DesignRecord {
  id: string;
  name: string;
  version: number;
  created: number;
  modified: number;
  content: DesignContent;
}

export interface JobState {
  id: string;
  design_id: string;
  kind: "simulate" | "sweep";
  state: "queued" | "running" | "done" | "failed";
  progress: number;
  error: string | null;
}

export interface BlockStat {
  layer: number;
  name: string;
  mean_k: number;
  max_k: number;
}

export interface LayerStat {
  layer: number;
  mean_k: number;
  max_k: number;
}

export interface SummaryResponse {
  blocks: BlockStat[];
  layers: LayerStat[];
  stack_max_k: number;
}

export interface HeatmapResponse {
  layer: number;
  kind: string;
  rows: number;
  cols: number;
  cell_width_m: number;
  cell_height_m: number;
  unit: string;
  temperatures: number[][];
}

export interface RankingRow {
  point: string;
  workload: string;
  max_k: number;
  delta_k: number;
}

export interface RankingResponse {
  baseline: string;
  rows: RankingRow[];
  ranking: string[];
  errors: { point: string; workload: string | null; message: string }[];
}

export interface ValidationFailure {
  violations: string[];
}
