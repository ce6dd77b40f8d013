/** Builds the render-ready board view-model from the last server state.
 *
 * The view-model mirrors SessionState exactly — values, hint flags and
 * mistake flags all come from the server payload — plus transient UI facts
 * (forced-hint highlight, banner override) supplied by the controller.
 */

import type { Condition, SessionState, SessionStatus } from "./types.js";

export interface CellView {
  readonly index: number;
  readonly value: number | null;
  readonly isHint: boolean;
  readonly editable: boolean;
  readonly flaggedUnsolvable: boolean;
  readonly forcedHighlight: boolean;
}

export interface InequalityGlyph {
  /** Adjacent cell pair in board order (left/right or top/bottom). */
  readonly between: readonly [number, number];
  readonly orientation: "horizontal" | "vertical";
  readonly glyph: "<" | ">" | "^" | "v";
}

export interface BoardViewModel {
  readonly family: SessionState["family"];
  readonly rows: number;
  readonly columns: number;
  readonly boxSide: number | null;
  readonly cells: readonly CellView[];
  readonly status: SessionStatus;
  readonly banner: string;
  readonly hintDisabled: boolean;
  readonly rowClues: ReadonlyArray<readonly number[]> | null;
  readonly columnClues: ReadonlyArray<readonly number[]> | null;
  readonly inequalities: readonly InequalityGlyph[];
}

export interface ViewOptions {
  forcedCell?: number | null;
  banner?: string;
  hintDisabled?: boolean;
}

function defaultBanner(status: SessionStatus): string {
  switch (status) {
    case "solved":
      return "Solved — well done!";
    case "stuck":
      return "This position cannot be completed. Undo to continue.";
    default:
      return "";
  }
}

function clueGutters(
  state: SessionState,
): { rowClues: number[][]; columnClues: number[][] } | null {
  const clues = state.conditions.filter((c): c is Extract<Condition, { kind: "clue" }> => {
    return c.kind === "clue";
  });
  if (clues.length === 0) {
    return null;
  }
  const rowClues: number[][] = Array.from({ length: state.rows }, () => []);
  const columnClues: number[][] = Array.from({ length: state.columns }, () => []);
  for (const clue of clues) {
    const first = clue.cells[0];
    if (first === undefined) {
      continue;
    }
    const row = Math.floor(first / state.columns);
    const sameRow = clue.cells.every((c) => Math.floor(c / state.columns) === row);
    if (sameRow && clue.cells.length === state.columns) {
      rowClues[row] = [...clue.runs];
    } else {
      columnClues[first % state.columns] = [...clue.runs];
    }
  }
  return { rowClues, columnClues };
}

function inequalityGlyphs(state: SessionState): InequalityGlyph[] {
  const glyphs: InequalityGlyph[] = [];
  for (const condition of state.conditions) {
    if (condition.kind !== "less") {
      continue;
    }
    const { a, b } = condition; // constraint: value(a) < value(b)
    const lo = Math.min(a, b);
    const hi = Math.max(a, b);
    if (hi - lo === 1 && Math.floor(lo / state.columns) === Math.floor(hi / state.columns)) {
      glyphs.push({
        between: [lo, hi],
        orientation: "horizontal",
        glyph: a === lo ? "<" : ">",
      });
    } else if (hi - lo === state.columns) {
      glyphs.push({
        between: [lo, hi],
        orientation: "vertical",
        glyph: a === lo ? "^" : "v",
      });
    }
  }
  return glyphs;
}

export function buildViewModel(state: SessionState, opts: ViewOptions = {}): BoardViewModel {
  const hintMap = new Map(state.hints.map((h) => [h.cell, h.value]));
  const filledMap = new Map(state.filled.map((f) => [f.cell, f.value]));
  const flagged = new Set(
    state.history.filter((h) => h.verdict === "acceptedButUnsolvable").map((h) => h.cell),
  );
  const cellCount = state.rows * state.columns;
  const cells: CellView[] = [];
  for (let index = 0; index < cellCount; index += 1) {
    const isHint = hintMap.has(index);
    const value = hintMap.get(index) ?? filledMap.get(index) ?? null;
    cells.push({
      index,
      value,
      isHint,
      editable: !isHint,
      flaggedUnsolvable: flagged.has(index),
      forcedHighlight: opts.forcedCell === index,
    });
  }
  const full = cells.every((c) => c.value !== null);
  const gutters = clueGutters(state);
  return {
    family: state.family,
    rows: state.rows,
    columns: state.columns,
    boxSide: state.boxSide,
    cells,
    status: state.status,
    banner: opts.banner ?? defaultBanner(state.status),
    hintDisabled: opts.hintDisabled ?? (state.status === "solved" || full),
    rowClues: gutters ? gutters.rowClues : null,
    columnClues: gutters ? gutters.columnClues : null,
    inequalities: inequalityGlyphs(state),
  };
}
