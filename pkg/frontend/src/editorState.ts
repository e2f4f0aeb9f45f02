// Draft editing with exact undo/redo and a submit guard: the UI never sends
// the gateway a draft that fails the mirrored client-side validation.

import { checkFloorplan, parseFloorplan } from "./floorplan.js";
import { checkStack, parseStack } from "./stack.js";
import type { DesignContent } from "./types.js";

function deepCopy<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export class EditorState {
  private history: DesignContent[] = [];
  private future: DesignContent[] = [];
  private savedSnapshot: string;
  private current: DesignContent;
  selection: string | null = null;

  constructor(content: DesignContent) {
    this.current = deepCopy(content);
    this.savedSnapshot = JSON.stringify(this.current);
  }

  get draft(): DesignContent {
    return this.current;
  }

  get dirty(): boolean {
    return JSON.stringify(this.current) !== this.savedSnapshot;
  }

  get canUndo(): boolean {
    return this.history.length > 0;
  }

  get canRedo(): boolean {
    return this.future.length > 0;
  }

  /** Apply an edit as a new undoable step. */
  apply(edit: (draft: DesignContent) => DesignContent): void {
    this.history.push(deepCopy(this.current));
    this.future = [];
    this.current = deepCopy(edit(deepCopy(this.current)));
  }

  undo(): void {
    const prev = this.history.pop();
    if (prev === undefined) return;
    this.future.push(this.current);
    this.current = prev;
  }

  redo(): void {
    const next = this.future.pop();
    if (next === undefined) return;
    this.history.push(this.current);
    this.current = next;
  }

  markSaved(): void {
    this.savedSnapshot = JSON.stringify(this.current);
  }

  /** Mirrored validation across every embedded artifact. */
  validate(): string[] {
    const problems: string[] = [];
    const c = this.current;
    let stackDraft;
    try {
      stackDraft = parseStack(c.stack);
      problems.push(...checkStack(stackDraft));
    } catch (e) {
      problems.push(`stack: ${(e as Error).message}`);
    }
    const outline = stackDraft
      ? { width: stackDraft.outlineWidth, height: stackDraft.outlineHeight }
      : null;
    for (const [key, text] of Object.entries(c.floorplans)) {
      try {
        const blocks = parseFloorplan(text);
        if (outline) {
          problems.push(...checkFloorplan(blocks, outline).map((p) => `${key}: ${p}`));
        }
      } catch (e) {
        problems.push(`${key}: ${(e as Error).message}`);
      }
    }
    if (stackDraft) {
      for (const l of stackDraft.layers) {
        if (l.kind === "die" && l.ref && !(l.ref in c.floorplans)) {
          problems.push(`stack: unresolved floorplan ref '${l.ref}'`);
        }
        if (l.kind === "microchannel" && l.ref && !(l.ref in c.patterns)) {
          problems.push(`stack: unresolved pattern ref '${l.ref}'`);
        }
      }
    }
    return problems;
  }

  get submittable(): boolean {
    return this.validate().length === 0;
  }

  /** Guarded draft for submission; throws when client validation fails. */
  exportForSubmit(): DesignContent {
    const problems = this.validate();
    if (problems.length) {
      throw new Error(`draft fails validation: ${problems.join("; ")}`);
    }
    return deepCopy(this.current);
  }
}
