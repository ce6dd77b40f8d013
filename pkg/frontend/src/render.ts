/** Pure HTML-string rendering of the board view-model.
 *
 * Grid-only for all six families: nonograms add clue gutters, futoshiki
 * interleaves inequality glyphs between cells.  Keeping this a pure function
 * of the view-model makes the "undo restores the previous grid exactly"
 * invariant directly testable on strings.
 */

import type { BoardViewModel, CellView } from "./viewmodel.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function cellGlyph(vm: BoardViewModel, cell: CellView): string {
  if (cell.value === null) {
    return "";
  }
  if (vm.family === "nonogram") {
    return cell.value === 1 ? "■" : "·";
  }
  if (vm.family === "nqueens") {
    return cell.value === 1 ? "♛" : "·";
  }
  return String(cell.value);
}

function cellTd(vm: BoardViewModel, cell: CellView): string {
  const classes = ["cell"];
  if (cell.isHint) {
    classes.push("hint");
  }
  if (cell.value === null) {
    classes.push("empty");
  }
  if (cell.flaggedUnsolvable) {
    classes.push("flagged");
  }
  if (cell.forcedHighlight) {
    classes.push("forced");
  }
  if (vm.boxSide !== null) {
    const row = Math.floor(cell.index / vm.columns);
    const column = cell.index % vm.columns;
    if (column % vm.boxSide === 0 && column > 0) {
      classes.push("box-left");
    }
    if (row % vm.boxSide === 0 && row > 0) {
      classes.push("box-top");
    }
  }
  return `<td class="${classes.join(" ")}" data-cell="${cell.index}">${cellGlyph(vm, cell)}</td>`;
}

function renderPlain(vm: BoardViewModel): string {
  const rows: string[] = [];
  for (let r = 0; r < vm.rows; r += 1) {
    const tds = vm.cells
      .slice(r * vm.columns, (r + 1) * vm.columns)
      .map((cell) => cellTd(vm, cell));
    rows.push(`<tr>${tds.join("")}</tr>`);
  }
  return rows.join("");
}

function renderNonogram(vm: BoardViewModel): string {
  const rowClues = vm.rowClues ?? [];
  const columnClues = vm.columnClues ?? [];
  const clueText = (runs: readonly number[] | undefined): string =>
    runs && runs.length > 0 ? runs.join(" ") : "0";
  const header =
    `<tr><th class="corner"></th>` +
    Array.from(
      { length: vm.columns },
      (_, c) => `<th class="clue column-clue">${clueText(columnClues[c])}</th>`,
    ).join("") +
    `</tr>`;
  const rows: string[] = [header];
  for (let r = 0; r < vm.rows; r += 1) {
    const tds = vm.cells
      .slice(r * vm.columns, (r + 1) * vm.columns)
      .map((cell) => cellTd(vm, cell));
    rows.push(`<tr><th class="clue row-clue">${clueText(rowClues[r])}</th>${tds.join("")}</tr>`);
  }
  return rows.join("");
}

function renderFutoshiki(vm: BoardViewModel): string {
  const horizontal = new Map<number, string>();
  const vertical = new Map<number, string>();
  for (const g of vm.inequalities) {
    const lo = g.between[0];
    if (g.orientation === "horizontal") {
      horizontal.set(lo, g.glyph);
    } else {
      vertical.set(lo, g.glyph);
    }
  }
  const rows: string[] = [];
  for (let r = 0; r < vm.rows; r += 1) {
    const tds: string[] = [];
    for (let c = 0; c < vm.columns; c += 1) {
      const index = r * vm.columns + c;
      const cell = vm.cells[index];
      if (cell !== undefined) {
        tds.push(cellTd(vm, cell));
      }
      if (c + 1 < vm.columns) {
        const glyph = horizontal.get(index) ?? "";
        tds.push(`<td class="glyph horizontal">${escapeHtml(glyph)}</td>`);
      }
    }
    rows.push(`<tr>${tds.join("")}</tr>`);
    if (r + 1 < vm.rows) {
      const gaps: string[] = [];
      for (let c = 0; c < vm.columns; c += 1) {
        const index = r * vm.columns + c;
        const glyph = vertical.get(index) ?? "";
        gaps.push(`<td class="glyph vertical">${escapeHtml(glyph)}</td>`);
        if (c + 1 < vm.columns) {
          gaps.push(`<td class="glyph filler"></td>`);
        }
      }
      rows.push(`<tr class="glyph-row">${gaps.join("")}</tr>`);
    }
  }
  return rows.join("");
}

export function renderBoard(vm: BoardViewModel): string {
  let body: string;
  if (vm.family === "nonogram") {
    body = renderNonogram(vm);
  } else if (vm.family === "futoshiki") {
    body = renderFutoshiki(vm);
  } else {
    body = renderPlain(vm);
  }
  return `<table class="board family-${vm.family}">${body}</table>`;
}

export function renderBanner(banner: string, status: BoardViewModel["status"] | null): string {
  if (banner === "") {
    return "";
  }
  const statusClass = status === null ? "none" : status;
  return `<div class="banner status-${statusClass}">${escapeHtml(banner)}</div>`;
}
