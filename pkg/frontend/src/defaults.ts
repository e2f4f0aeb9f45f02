// Starter design: the three-die reference topology (quad-core compute die
// plus two 16-bank memory dies under a copper sink), built entirely
// client-side so the cockpit works against an empty gateway.

import { emitFloorplan, generateTemplate } from "./floorplan.js";
import type { DesignContent, PowerModelSpec } from "./types.js";

export const DIE_W = 8e-3;
export const DIE_H = 8e-3;

export function defaultPowerModels(): PowerModelSpec[] {
  const models: PowerModelSpec[] = [];
  for (let i = 0; i < 4; i++) {
    models.push({
      block: `C_${i}`,
      static_power: 0.8,
      switching_energy: 1.5e-9,
      clock_frequency: 2e9,
      activity_factor_default: 0.12,
    });
  }
  for (let i = 0; i < 32; i++) {
    models.push({
      block: `B_${i}`,
      static_power: 0.05,
      switching_energy: 2e-10,
      clock_frequency: 1e9,
      activity_factor_default: 0.3,
    });
  }
  return models;
}

export function memoryFloorplan(offset: number): string {
  const blocks = generateTemplate({ width: DIE_W, height: DIE_H }, 16, "B").map((b) => ({
    ...b,
    name: `B_${Number(b.name.split("_")[1]) + offset}`,
  }));
  return emitFloorplan(blocks);
}

export function defaultStackText(order: "baseline" | "case1a" | "case1b" = "baseline"): string {
  const dies = {
    baseline: ["cores.flp", "mem0.flp", "mem1.flp"],
    case1a: ["mem0.flp", "cores.flp", "mem1.flp"],
    case1b: ["mem0.flp", "mem1.flp", "cores.flp"],
  }[order];
  const lines = [
    `outline\t${DIE_W}\t${DIE_H}`,
    "ambient\t318.15",
    ...dies.map((ref) => `die\t0.0005\tsilicon\t${ref}`),
    "sink\t0.002\tcopper",
  ];
  return lines.join("\n") + "\n";
}

export function starterDesign(rows = 32, cols = 32): DesignContent {
  return {
    name: "starter",
    grid: { rows, cols },
    stack: defaultStackText(),
    floorplans: {
      "cores.flp": emitFloorplan(generateTemplate({ width: DIE_W, height: DIE_H }, 4, "C")),
      "mem0.flp": memoryFloorplan(0),
      "mem1.flp": memoryFloorplan(16),
    },
    patterns: {},
    power_models: defaultPowerModels(),
    activity: {
      profile: {
        kind: "one_hot",
        base: 0.12,
        skew: 5.87,
        hot_block: "C_0",
        intervals: 8,
        interval_s: 1e-3,
      },
    },
  };
}
