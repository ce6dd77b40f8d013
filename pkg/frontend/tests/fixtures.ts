/** Canned service payloads and a recording fetch mock.
 *
 * The sudoku fixture mirrors the bundled 4x4 board byte-for-byte as the
 * service serializes it (same hints, same condition order).
 */

import type { FetchLike } from "../src/api.js";
import type {
  CellValue,
  Condition,
  HistoryEntry,
  MoveResponse,
  SessionState,
  Verdict,
} from "../src/types.js";

export const SUDOKU_HINTS: readonly CellValue[] = [
  { cell: 1, value: 4 },
  { cell: 5, value: 1 },
  { cell: 7, value: 3 },
  { cell: 13, value: 3 },
  { cell: 15, value: 1 },
];

export const SUDOKU_SOLUTION: readonly number[] = [
  3, 4, 1, 2,
  2, 1, 4, 3,
  1, 2, 3, 4,
  4, 3, 2, 1,
];

function allDifferent(cells: number[]): Condition {
  return { kind: "allDifferent", cells };
}

function sudokuConditions(): Condition[] {
  const range = [0, 1, 2, 3];
  const rows = range.map((r) => allDifferent(range.map((c) => 4 * r + c)));
  const columns = range.map((c) => allDifferent(range.map((r) => 4 * r + c)));
  const boxes = [0, 2, 8, 10].map((corner) =>
    allDifferent([corner, corner + 1, corner + 4, corner + 5]),
  );
  return [...rows, ...columns, ...boxes];
}

export function sudokuState(overrides: Partial<SessionState> = {}): SessionState {
  return {
    sessionId: "session-1",
    family: "sudoku",
    displayName: "Sudoku",
    size: 4,
    name: "Sudoku 4x4",
    rows: 4,
    columns: 4,
    boxSide: 2,
    domain: [1, 2, 3, 4],
    playValues: [1, 2, 3, 4],
    hints: [...SUDOKU_HINTS],
    conditions: sudokuConditions(),
    filled: [],
    history: [],
    status: "open",
    ...overrides,
  };
}

/** State after the given moves, mirroring how the service accumulates them. */
export function withMoves(
  base: SessionState,
  moves: ReadonlyArray<readonly [number, number, Verdict?]>,
): SessionState {
  const filled: CellValue[] = [...base.filled];
  const history: HistoryEntry[] = [...base.history];
  for (const [cell, value, verdict] of moves) {
    filled.push({ cell, value });
    history.push({ cell, value, verdict: verdict ?? "accepted", unverified: false });
  }
  filled.sort((a, b) => a.cell - b.cell);
  const lastVerdict = history[history.length - 1]?.verdict;
  const status = lastVerdict === "acceptedButUnsolvable" ? "stuck" : base.status;
  return { ...base, filled, history, status };
}

export function moveResponse(
  state: SessionState,
  verdict: Verdict = "accepted",
  unverified = false,
): MoveResponse {
  return { verdict, unverified, state };
}

export function nonogramState(): SessionState {
  const rowRuns: number[][] = [[1, 1], [1], [3]];
  const columnRuns: number[][] = [[1, 1], [2], [1, 1]];
  const conditions: Condition[] = [
    ...rowRuns.map((runs, r): Condition => ({
      kind: "clue",
      cells: [3 * r, 3 * r + 1, 3 * r + 2],
      runs,
    })),
    ...columnRuns.map((runs, c): Condition => ({
      kind: "clue",
      cells: [c, c + 3, c + 6],
      runs,
    })),
  ];
  return {
    sessionId: "session-nono",
    family: "nonogram",
    displayName: "Nonogram",
    size: 3,
    name: "Nono 3x3",
    rows: 3,
    columns: 3,
    boxSide: null,
    domain: [0, 1],
    playValues: [0, 1],
    hints: [],
    conditions,
    filled: [],
    history: [],
    status: "open",
  };
}

export function futoshikiState(): SessionState {
  const range = [0, 1, 2, 3];
  const conditions: Condition[] = [
    ...range.map((r) => allDifferent(range.map((c) => 4 * r + c))),
    ...range.map((c) => allDifferent(range.map((r) => 4 * r + c))),
    { kind: "less", a: 0, b: 1 }, // 0 < 1 : "<" between 0 and 1
    { kind: "less", a: 2, b: 1 }, // 2 < 1 : ">" between 1 and 2
    { kind: "less", a: 4, b: 8 }, // 4 < 8 : "^" between rows 1 and 2
    { kind: "less", a: 14, b: 10 }, // 14 < 10 : "v" between rows 2 and 3
  ];
  return {
    sessionId: "session-futo",
    family: "futoshiki",
    displayName: "Futoshiki",
    size: 4,
    name: "Futoshiki 4x4",
    rows: 4,
    columns: 4,
    boxSide: null,
    domain: [1, 2, 3, 4],
    playValues: [1, 2, 3, 4],
    hints: [],
    conditions,
    filled: [],
    history: [],
    status: "open",
  };
}

// ---------------------------------------------------------------------------
// Fetch mock

export interface RecordedCall {
  readonly url: string;
  readonly method: string;
  readonly body: unknown;
}

export type CannedReply = { status?: number; body: unknown } | Error;

export interface FetchMock {
  readonly fetchImpl: FetchLike;
  readonly calls: RecordedCall[];
  push(reply: CannedReply): void;
}

export function mockFetch(replies: CannedReply[] = []): FetchMock {
  const queue = [...replies];
  const calls: RecordedCall[] = [];
  const fetchImpl: FetchLike = (input, init) => {
    calls.push({
      url: input,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    });
    const next = queue.shift();
    if (next === undefined) {
      return Promise.reject(new Error(`mock fetch queue exhausted at ${input}`));
    }
    if (next instanceof Error) {
      return Promise.reject(next);
    }
    return Promise.resolve(
      new Response(JSON.stringify(next.body), {
        status: next.status ?? 200,
        headers: { "content-type": "application/json" },
      }),
    );
  };
  return { fetchImpl, calls, push: (reply) => queue.push(reply) };
}
