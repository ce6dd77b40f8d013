/** JSON shapes of the assist-service API, mirrored field-for-field. */

export type Family =
  | "futoshiki"
  | "latin"
  | "magic"
  | "nqueens"
  | "nonogram"
  | "sudoku";

export type Verdict = "accepted" | "acceptedButUnsolvable" | "rejected";

export type SessionStatus = "open" | "solved" | "stuck";

export interface CellValue {
  readonly cell: number;
  readonly value: number;
}

export interface HistoryEntry {
  readonly cell: number;
  readonly value: number;
  readonly verdict: Verdict;
  readonly unverified: boolean;
}

export type Condition =
  | { readonly kind: "allDifferent"; readonly cells: readonly number[] }
  | {
      readonly kind: "sum";
      readonly cells: readonly number[];
      readonly op: "eq" | "le" | "ge";
      readonly target: number;
    }
  | { readonly kind: "less"; readonly a: number; readonly b: number }
  | { readonly kind: "clue"; readonly cells: readonly number[]; readonly runs: readonly number[] };

export interface SessionState {
  readonly sessionId: string;
  readonly family: Family;
  readonly displayName: string;
  readonly size: number;
  readonly name: string;
  readonly rows: number;
  readonly columns: number;
  readonly boxSide: number | null;
  readonly domain: readonly number[];
  readonly playValues: readonly number[];
  readonly hints: readonly CellValue[];
  readonly conditions: readonly Condition[];
  readonly filled: readonly CellValue[];
  readonly history: readonly HistoryEntry[];
  readonly status: SessionStatus;
}

export interface MoveResponse {
  readonly verdict: Verdict;
  readonly unverified: boolean;
  readonly state: SessionState;
}

export interface HintResponse {
  readonly cell: number;
  readonly value: number;
  readonly forced: boolean;
  readonly verified: boolean;
}

export interface FamilyInfo {
  readonly family: Family;
  readonly displayName: string;
  readonly sizes: readonly number[];
}

export interface FamiliesResponse {
  readonly families: readonly FamilyInfo[];
}

export interface ErrorBody {
  readonly error: string;
  readonly detail: string;
}
