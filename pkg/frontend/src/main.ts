/** Browser bootstrap: wires DOM controls to the game controller.
 *
 * All rendering goes through the pure functions in render.ts; this module
 * only moves strings into the document and forwards events.
 */

import { ApiClient } from "./api.js";
import { GameController } from "./controller.js";
import { renderBanner, renderBoard } from "./render.js";
import type { FamilyInfo } from "./types.js";

const api = new ApiClient("");
let families: readonly FamilyInfo[] = [];
let selectedCell: number | null = null;

const el = (id: string): HTMLElement => {
  const found = document.getElementById(id);
  if (found === null) {
    throw new Error(`missing element #${id}`);
  }
  return found;
};

const controller = new GameController(api, () => render());

function render(): void {
  const vm = controller.viewModel();
  const busy = controller.isBusy();
  el("banner").innerHTML = renderBanner(controller.bannerText(), vm ? vm.status : null);
  el("board").innerHTML = vm ? renderBoard(vm) : "";
  if (selectedCell !== null) {
    const td = document.querySelector(`td.cell[data-cell="${selectedCell}"]`);
    td?.classList.add("selected");
  }

  const state = controller.getState();
  const palette = el("palette");
  if (state === null) {
    palette.innerHTML = "";
  } else {
    palette.innerHTML = state.playValues
      .map((v) => `<button class="value" data-value="${v}">${v}</button>`)
      .join("");
  }
  for (const button of palette.querySelectorAll("button")) {
    button.toggleAttribute("disabled", busy || selectedCell === null);
  }
  (el("hint") as HTMLButtonElement).disabled = busy || vm === null || vm.hintDisabled;
  (el("undo") as HTMLButtonElement).disabled = busy || vm === null;
  (el("new-game") as HTMLButtonElement).disabled = busy;
}

function fillSizeOptions(): void {
  const family = (el("family") as HTMLSelectElement).value;
  const info = families.find((f) => f.family === family);
  (el("size") as HTMLSelectElement).innerHTML = (info ? info.sizes : [])
    .map((s) => `<option value="${s}">${s}×${s}</option>`)
    .join("");
}

async function start(): Promise<void> {
  const family = (el("family") as HTMLSelectElement).value;
  const size = Number((el("size") as HTMLSelectElement).value);
  const seedText = (el("seed") as HTMLInputElement).value.trim();
  selectedCell = null;
  if (seedText === "") {
    await controller.startGame(family as FamilyInfo["family"], size);
  } else {
    await controller.startGame(family as FamilyInfo["family"], size, Number(seedText));
  }
}

function onBoardClick(event: Event): void {
  const target = event.target as HTMLElement | null;
  const td = target?.closest?.("td.cell");
  if (!(td instanceof HTMLElement)) {
    return;
  }
  const cell = Number(td.dataset["cell"]);
  const vm = controller.viewModel();
  const view = vm?.cells[cell];
  if (view === undefined) {
    return;
  }
  if (!view.editable) {
    selectedCell = null;
  } else {
    selectedCell = selectedCell === cell ? null : cell;
  }
  render();
  if (view !== undefined && !view.editable) {
    void controller.enterValue(cell, view.value ?? 0); // surfaces the hint-cell tooltip
  }
}

function onPaletteClick(event: Event): void {
  const target = event.target as HTMLElement | null;
  const button = target?.closest?.("button.value");
  if (!(button instanceof HTMLElement) || selectedCell === null) {
    return;
  }
  const cell = selectedCell;
  selectedCell = null;
  void controller.enterValue(cell, Number(button.dataset["value"]));
}

async function init(): Promise<void> {
  try {
    families = (await api.families()).families;
  } catch {
    el("banner").innerHTML = renderBanner("Could not load the family list — is the service running?", null);
    return;
  }
  (el("family") as HTMLSelectElement).innerHTML = families
    .map((f) => `<option value="${f.family}">${f.displayName}</option>`)
    .join("");
  fillSizeOptions();

  el("family").addEventListener("change", fillSizeOptions);
  el("new-game").addEventListener("click", () => void start());
  el("hint").addEventListener("click", () => void controller.requestHint());
  el("undo").addEventListener("click", () => void controller.undoMove());
  el("strict").addEventListener("change", (event) => {
    controller.strictMode = (event.target as HTMLInputElement).checked;
  });
  el("board").addEventListener("click", onBoardClick);
  el("palette").addEventListener("click", onPaletteClick);
  render();
}

void init();
