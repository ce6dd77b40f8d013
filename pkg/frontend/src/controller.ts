/** UI-facing game controller: one session, one in-flight request.
 *
 * Every verdict rendered comes from the service; the controller only
 * sequences requests, composes banner text and holds transient view facts
 * (forced-hint highlight, hint-button state, strict-mode toggle).
 */

import { ApiClient, ApiError, NetworkError } from "./api.js";
import type { Family, SessionState } from "./types.js";
import { buildViewModel, type BoardViewModel, type ViewOptions } from "./viewmodel.js";

function describeError(err: unknown, fallback: string): string {
  if (err instanceof ApiError) {
    return err.detail;
  }
  if (err instanceof Error) {
    return `${fallback}: ${err.message}`;
  }
  return fallback;
}

export class GameController {
  strictMode = false;

  private state: SessionState | null = null;
  private banner = "";
  private forcedCell: number | null = null;
  private hintDisabled = false;
  private busy = false;

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: () => void = () => {},
  ) {}

  getState(): SessionState | null {
    return this.state;
  }

  isBusy(): boolean {
    return this.busy;
  }

  bannerText(): string {
    const vm = this.viewModel();
    return vm === null ? this.banner : vm.banner;
  }

  viewModel(): BoardViewModel | null {
    if (this.state === null) {
      return null;
    }
    const opts: ViewOptions = { forcedCell: this.forcedCell };
    if (this.banner !== "") {
      opts.banner = this.banner;
    }
    if (this.hintDisabled) {
      opts.hintDisabled = true;
    }
    return buildViewModel(this.state, opts);
  }

  async startGame(family: Family, size: number, seed?: number): Promise<void> {
    await this.guard(async () => {
      this.banner = "";
      try {
        this.state = await this.api.createSession(family, size, seed);
        this.forcedCell = null;
        this.hintDisabled = false;
      } catch (err) {
        if (err instanceof NetworkError) {
          this.banner = "Could not start the game — the service is unreachable.";
        } else {
          this.banner = describeError(err, "could not start the game");
        }
        // Non-blocking: any previously rendered board stays as it was.
      }
    });
  }

  async enterValue(cell: number, value: number): Promise<void> {
    await this.guard(async () => {
      if (this.state === null) {
        return;
      }
      if (this.state.hints.some((h) => h.cell === cell)) {
        this.banner = "That cell is a given hint and cannot be changed.";
        return;
      }
      this.banner = "";
      this.forcedCell = null;
      try {
        const result = await this.api.move(this.state.sessionId, cell, value);
        this.state = result.state;
        this.hintDisabled = false;
        if (result.verdict === "acceptedButUnsolvable") {
          if (this.strictMode) {
            this.state = await this.api.undo(this.state.sessionId);
            this.banner =
              "Strict mode: that entry makes the puzzle unsolvable, so it was retracted.";
          } else {
            this.banner = "That entry makes the puzzle unsolvable — you can undo it.";
          }
        } else if (result.unverified) {
          this.banner = "Accepted (not verified: the solver budget ran out).";
        }
      } catch (err) {
        if (err instanceof ApiError && err.code === "RejectedMove") {
          this.banner = err.detail; // grid unchanged, reason as tooltip text
        } else if (err instanceof NetworkError) {
          this.banner = "Move not sent — the service is unreachable. Retry when connected.";
        } else {
          this.banner = describeError(err, "move failed");
        }
      }
    });
  }

  async requestHint(): Promise<void> {
    await this.guard(async () => {
      if (this.state === null || this.hintDisabled) {
        return;
      }
      this.banner = "";
      try {
        const hint = await this.api.hint(this.state.sessionId);
        const result = await this.api.move(this.state.sessionId, hint.cell, hint.value);
        this.state = result.state;
        this.forcedCell = hint.forced ? hint.cell : null;
        if (!hint.verified) {
          this.banner = "Hint given without full verification (solver budget ran out).";
        } else if (!hint.forced) {
          this.banner = "Suggestion: this value keeps the puzzle solvable.";
        }
      } catch (err) {
        if (err instanceof ApiError && err.code === "NoHintNeeded") {
          this.hintDisabled = true;
          this.banner = err.detail;
        } else if (err instanceof ApiError && err.code === "Unsolvable") {
          this.banner = "No hint here — the current position is unsolvable. Undo to continue.";
        } else if (err instanceof NetworkError) {
          this.banner = "Hint request failed — the service is unreachable.";
        } else {
          this.banner = describeError(err, "hint failed");
        }
      }
    });
  }

  async undoMove(): Promise<void> {
    await this.guard(async () => {
      if (this.state === null) {
        return;
      }
      this.forcedCell = null;
      try {
        this.state = await this.api.undo(this.state.sessionId);
        this.banner = "";
        this.hintDisabled = false;
      } catch (err) {
        if (err instanceof NetworkError) {
          this.banner = "Undo failed — the service is unreachable.";
        } else {
          this.banner = describeError(err, "undo failed");
        }
      }
    });
  }

  /** Serializes requests: a call arriving while one is in flight is a no-op. */
  private async guard(work: () => Promise<void>): Promise<void> {
    if (this.busy) {
      return;
    }
    this.busy = true;
    this.onChange(); // lets the UI disable inputs while awaiting the verdict
    try {
      await work();
    } finally {
      this.busy = false;
      this.onChange();
    }
  }
}
