import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { GameController } from "../src/controller.js";
import { renderBoard } from "../src/render.js";
import type { SessionState } from "../src/types.js";
import {
  SUDOKU_SOLUTION,
  mockFetch,
  moveResponse,
  sudokuState,
  withMoves,
} from "./fixtures.js";

function controllerWith(
  replies: Parameters<typeof mockFetch>[0],
  onChange?: () => void,
): { controller: GameController; mock: ReturnType<typeof mockFetch> } {
  const mock = mockFetch(replies);
  const controller = new GameController(new ApiClient("", mock.fetchImpl), onChange);
  return { controller, mock };
}

describe("GameController.startGame", () => {
  it("renders the created board with read-only hints", async () => {
    const { controller } = controllerWith([{ status: 201, body: sudokuState() }]);
    await controller.startGame("sudoku", 4);
    const vm = controller.viewModel();
    expect(vm).not.toBeNull();
    expect(vm?.cells[1]?.value).toBe(4);
    expect(vm?.cells[1]?.editable).toBe(false);
    expect(controller.bannerText()).toBe("");
  });

  it("surfaces a 422 as a banner without a board", async () => {
    const { controller } = controllerWith([
      { status: 422, body: { error: "InfeasibleParams", detail: "sudoku size 3 is out of range" } },
    ]);
    await controller.startGame("sudoku", 3);
    expect(controller.viewModel()).toBeNull();
    expect(controller.bannerText()).toContain("size 3");
  });

  it("keeps the previous board when a restart fails on the network", async () => {
    const { controller } = controllerWith([
      { status: 201, body: sudokuState() },
      new Error("connection refused"),
    ]);
    await controller.startGame("sudoku", 4);
    await controller.startGame("sudoku", 4);
    expect(controller.viewModel()).not.toBeNull();
    expect(controller.bannerText()).toContain("unreachable");
  });
});

describe("GameController.enterValue", () => {
  it("renders an accepted move normally", async () => {
    const base = sudokuState();
    const { controller, mock } = controllerWith([
      { status: 201, body: base },
      { body: moveResponse(withMoves(base, [[0, 3]])) },
    ]);
    await controller.startGame("sudoku", 4);
    await controller.enterValue(0, 3);
    expect(controller.viewModel()?.cells[0]?.value).toBe(3);
    expect(controller.bannerText()).toBe("");
    expect(mock.calls[1]).toEqual({
      url: "/sessions/session-1/moves",
      method: "POST",
      body: { cell: 0, value: 3 },
    });
  });

  it("marks a flagged move and offers undo", async () => {
    const base = sudokuState();
    const { controller } = controllerWith([
      { status: 201, body: base },
      {
        body: moveResponse(withMoves(base, [[0, 4, "acceptedButUnsolvable"]]), "acceptedButUnsolvable"),
      },
    ]);
    await controller.startGame("sudoku", 4);
    await controller.enterValue(0, 4);
    const vm = controller.viewModel();
    expect(vm?.cells[0]?.flaggedUnsolvable).toBe(true);
    expect(controller.bannerText()).toContain("undo");
  });

  it("auto-undoes flagged moves in strict mode", async () => {
    const base = sudokuState();
    const { controller, mock } = controllerWith([
      { status: 201, body: base },
      {
        body: moveResponse(withMoves(base, [[0, 4, "acceptedButUnsolvable"]]), "acceptedButUnsolvable"),
      },
      { body: base },
    ]);
    await controller.startGame("sudoku", 4);
    const before = renderBoard(controller.viewModel() as NonNullable<ReturnType<typeof controller.viewModel>>);
    controller.strictMode = true;
    await controller.enterValue(0, 4);
    expect(mock.calls.map((c) => [c.method, c.url])).toEqual([
      ["POST", "/sessions"],
      ["POST", "/sessions/session-1/moves"],
      ["POST", "/sessions/session-1/undo"],
    ]);
    const vm = controller.viewModel();
    expect(vm?.cells[0]?.value).toBeNull();
    expect(renderBoard(vm as NonNullable<typeof vm>)).toBe(before);
    expect(controller.bannerText()).toContain("Strict mode");
  });

  it("leaves the grid unchanged on a rejected move and shows the reason", async () => {
    const base = withMoves(sudokuState(), [[0, 3]]);
    const { controller } = controllerWith([
      { status: 201, body: base },
      { status: 409, body: { error: "RejectedMove", detail: "cell 0 is already filled" } },
    ]);
    await controller.startGame("sudoku", 4);
    const before = renderBoard(controller.viewModel() as NonNullable<ReturnType<typeof controller.viewModel>>);
    await controller.enterValue(0, 2);
    expect(renderBoard(controller.viewModel() as NonNullable<ReturnType<typeof controller.viewModel>>)).toBe(before);
    expect(controller.bannerText()).toContain("already filled");
  });

  it("refuses hint cells locally with a tooltip message", async () => {
    const { controller, mock } = controllerWith([{ status: 201, body: sudokuState() }]);
    await controller.startGame("sudoku", 4);
    await controller.enterValue(1, 2);
    expect(mock.calls).toHaveLength(1); // no move request was sent
    expect(controller.bannerText()).toContain("hint");
  });

  it("does not render a move that failed on the network", async () => {
    const base = sudokuState();
    const { controller } = controllerWith([
      { status: 201, body: base },
      new Error("connection reset"),
    ]);
    await controller.startGame("sudoku", 4);
    await controller.enterValue(0, 3);
    expect(controller.viewModel()?.cells[0]?.value).toBeNull();
    expect(controller.bannerText()).toContain("Retry");
  });

  it("shows the completion banner when the last move solves the puzzle", async () => {
    const base = sudokuState();
    const finalMoves = SUDOKU_SOLUTION.map((value, cell): [number, number] => [cell, value]).filter(
      ([cell]) => !base.hints.some((h) => h.cell === cell),
    );
    const solved: SessionState = { ...withMoves(base, finalMoves), status: "solved" };
    const { controller } = controllerWith([
      { status: 201, body: base },
      { body: moveResponse(solved) },
    ]);
    await controller.startGame("sudoku", 4);
    await controller.enterValue(14, 2);
    expect(controller.viewModel()?.status).toBe("solved");
    expect(controller.bannerText()).toContain("Solved");
  });
});

describe("GameController.requestHint", () => {
  it("fills the hinted cell and highlights forced hints", async () => {
    const base = sudokuState();
    const after = withMoves(base, [[14, 2]]);
    const { controller, mock } = controllerWith([
      { status: 201, body: base },
      { body: { cell: 14, value: 2, forced: true, verified: true } },
      { body: moveResponse(after) },
    ]);
    await controller.startGame("sudoku", 4);
    await controller.requestHint();
    expect(mock.calls.map((c) => [c.method, c.url])).toEqual([
      ["POST", "/sessions"],
      ["GET", "/sessions/session-1/hint"],
      ["POST", "/sessions/session-1/moves"],
    ]);
    const vm = controller.viewModel();
    expect(vm?.cells[14]?.value).toBe(2);
    expect(vm?.cells[14]?.forcedHighlight).toBe(true);
  });

  it("labels non-forced hints as suggestions", async () => {
    const base = sudokuState();
    const { controller } = controllerWith([
      { status: 201, body: base },
      { body: { cell: 0, value: 3, forced: false, verified: true } },
      { body: moveResponse(withMoves(base, [[0, 3]])) },
    ]);
    await controller.startGame("sudoku", 4);
    await controller.requestHint();
    expect(controller.viewModel()?.cells[0]?.forcedHighlight).toBe(false);
    expect(controller.bannerText()).toContain("Suggestion");
  });

  it("disables the hint button after NoHintNeeded", async () => {
    const base = sudokuState();
    const { controller, mock } = controllerWith([
      { status: 201, body: base },
      { status: 409, body: { error: "NoHintNeeded", detail: "the puzzle is already solved" } },
    ]);
    await controller.startGame("sudoku", 4);
    await controller.requestHint();
    expect(controller.viewModel()?.hintDisabled).toBe(true);
    await controller.requestHint(); // now a local no-op
    expect(mock.calls).toHaveLength(2);
  });

  it("prompts for undo when the position is unsolvable", async () => {
    const base = sudokuState();
    const { controller } = controllerWith([
      { status: 201, body: base },
      { status: 409, body: { error: "Unsolvable", detail: "no completion" } },
    ]);
    await controller.startGame("sudoku", 4);
    await controller.requestHint();
    expect(controller.bannerText()).toContain("Undo");
  });
});

describe("GameController.undoMove", () => {
  it("restores the previously rendered grid exactly", async () => {
    const base = sudokuState();
    const { controller } = controllerWith([
      { status: 201, body: base },
      { body: moveResponse(withMoves(base, [[0, 3]])) },
      { body: base },
    ]);
    await controller.startGame("sudoku", 4);
    const before = renderBoard(controller.viewModel() as NonNullable<ReturnType<typeof controller.viewModel>>);
    await controller.enterValue(0, 3);
    await controller.undoMove();
    const after = renderBoard(controller.viewModel() as NonNullable<ReturnType<typeof controller.viewModel>>);
    expect(after).toBe(before);
    expect(controller.bannerText()).toBe("");
  });
});

describe("GameController concurrency", () => {
  it("ignores calls while a request is in flight and reports busy transitions", async () => {
    const base = sudokuState();
    let release: (response: Response) => void = () => {};
    const pending = new Promise<Response>((resolve) => {
      release = resolve;
    });
    const urls: string[] = [];
    const replies = [
      () =>
        Promise.resolve(
          new Response(JSON.stringify(base), {
            status: 201,
            headers: { "content-type": "application/json" },
          }),
        ),
      () => pending,
    ];
    const busySeen: boolean[] = [];
    const controller = new GameController(
      new ApiClient("", (url) => {
        urls.push(url);
        const next = replies.shift();
        if (next === undefined) {
          return Promise.reject(new Error("unexpected extra request"));
        }
        return next();
      }),
      () => busySeen.push(controller.isBusy()),
    );
    await controller.startGame("sudoku", 4);
    const inFlight = controller.enterValue(0, 3);
    const ignored = controller.enterValue(2, 1);
    await ignored;
    expect(urls).toHaveLength(2); // create + the one in-flight move
    release(
      new Response(JSON.stringify(moveResponse(withMoves(base, [[0, 3]]))), {
        status: 200,
        headers: { "content-type": "application/json" },
      }),
    );
    await inFlight;
    expect(controller.viewModel()?.cells[0]?.value).toBe(3);
    expect(busySeen).toEqual([true, false, true, false]);
  });
});
