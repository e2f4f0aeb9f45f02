import { describe, expect, test } from "vitest";

import { starterDesign } from "../src/defaults.js";
import { EditorState } from "../src/editorState.js";
import { emitFloorplan, generateTemplate } from "../src/floorplan.js";

describe("undo/redo", () => {
  test("undo then redo restores the exact prior draft", () => {
    const editor = new EditorState(starterDesign());
    const before = JSON.stringify(editor.draft);
    editor.apply((d) => ({ ...d, name: "edited" }));
    const after = JSON.stringify(editor.draft);
    editor.undo();
    expect(JSON.stringify(editor.draft)).toBe(before);
    editor.redo();
    expect(JSON.stringify(editor.draft)).toBe(after);
  });

  test("a new edit clears the redo stack", () => {
    const editor = new EditorState(starterDesign());
    editor.apply((d) => ({ ...d, name: "one" }));
    editor.undo();
    editor.apply((d) => ({ ...d, name: "two" }));
    expect(editor.canRedo).toBe(false);
    expect(editor.draft.name).toBe("two");
  });

  test("dirty tracks the saved snapshot", () => {
    const editor = new EditorState(starterDesign());
    expect(editor.dirty).toBe(false);
    editor.apply((d) => ({ ...d, name: "x" }));
    expect(editor.dirty).toBe(true);
    editor.markSaved();
    expect(editor.dirty).toBe(false);
    editor.undo();
    expect(editor.dirty).toBe(true);
  });
});

describe("submit guard", () => {
  test("valid starter design is submittable", () => {
    const editor = new EditorState(starterDesign());
    expect(editor.validate()).toEqual([]);
    expect(editor.submittable).toBe(true);
    expect(() => editor.exportForSubmit()).not.toThrow();
  });

  test("an overlapping floorplan blocks submission", () => {
    const editor = new EditorState(starterDesign());
    editor.apply((d) => {
      const blocks = generateTemplate({ width: 8e-3, height: 8e-3 }, 4, "C").map((b) =>
        b.name === "C_1" ? { ...b, leftX: 1e-3 } : b,
      );
      d.floorplans["cores.flp"] = emitFloorplan(blocks);
      return d;
    });
    expect(editor.submittable).toBe(false);
    expect(() => editor.exportForSubmit()).toThrow(/validation/);
    editor.undo();
    expect(editor.submittable).toBe(true);
  });

  test("an unresolved ref blocks submission", () => {
    const editor = new EditorState(starterDesign());
    editor.apply((d) => ({ ...d, stack: d.stack.replace("cores.flp", "ghost.flp") }));
    expect(editor.validate().some((p) => p.includes("ghost.flp"))).toBe(true);
  });

  test("adjacent microchannel layers are flagged", () => {
    const editor = new EditorState(starterDesign());
    editor.apply((d) => ({
      ...d,
      stack:
        "outline\t0.008\t0.008\nambient\t318.15\n" +
        "die\t0.0005\tsilicon\tcores.flp\n" +
        "microchannel\t0.0002\tsilicon\tp.pat\n" +
        "microchannel\t0.0002\tsilicon\tp.pat\n",
    }));
    expect(editor.validate().some((p) => p.includes("adjacent"))).toBe(true);
  });
});
