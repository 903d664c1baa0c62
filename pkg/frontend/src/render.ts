/**
 * DOM rendering: grid, palette, circuit strip, banner, and score panel.
 *
 * Rendering is a pure function of the view state; every call repaints from
 * the engine-mirrored data (cell colors arrive precomputed from the
 * engine, so the client never re-derives game semantics).
 */

import type { Cell, CellColor } from "./protocol";
import type { ViewState } from "./state";

export interface Handlers {
  onCellClick: (cell: Cell) => void;
  onCellHover: (cell: Cell) => void;
  onPaletteClick: (kind: string) => void;
}

const COLOR_CLASS: Record<CellColor, string> = {
  green: "cell-green",
  blue: "cell-blue",
  orange: "cell-orange",
  grey: "cell-grey",
};

function gateLabel(g: { g: string; q: number[] }): string {
  return `${g.g}(${g.q.join(",")})`;
}

export function render(root: HTMLElement, state: ViewState, handlers: Handlers): void {
  root.textContent = "";
  if (!state.level) {
    const note = document.createElement("p");
    note.textContent = "Pick a level to start.";
    root.appendChild(note);
    return;
  }

  const circuit = document.createElement("div");
  circuit.className = "circuit";
  circuit.textContent =
    `${state.level.id} ${state.level.name} | qubits: ${state.level.n} | ` +
    `circuit: ${state.level.gates.map(gateLabel).join("  ") || "identity"}`;
  root.appendChild(circuit);

  const banner = document.createElement("div");
  banner.className = "banner";
  if (state.banner) {
    banner.classList.add("banner-error");
    banner.textContent = state.banner;
  }
  root.appendChild(banner);

  const grid = document.createElement("div");
  grid.className = "grid";
  grid.style.gridTemplateColumns = `repeat(${state.level.grid.w}, 28px)`;
  const outputIndex = new Map<string, number>();
  for (const mark of state.outputs) {
    outputIndex.set(mark.cell.join(","), mark.q);
  }
  state.cells.forEach((row, r) => {
    row.forEach((color, c) => {
      const cell: Cell = [r + 1, c + 1];
      const div = document.createElement("div");
      div.className = `cell ${COLOR_CLASS[color]}`;
      const q = outputIndex.get(cell.join(","));
      if (q !== undefined) {
        div.classList.add("cell-output");
        div.textContent = String(q);
      }
      div.addEventListener("click", () => handlers.onCellClick(cell));
      div.addEventListener("mouseenter", () => handlers.onCellHover(cell));
      grid.appendChild(div);
    });
  });
  root.appendChild(grid);

  const palette = document.createElement("div");
  palette.className = "palette";
  for (const kind of state.palette) {
    const button = document.createElement("button");
    button.textContent = kind;
    if (state.selected?.kind === kind) {
      button.classList.add("selected");
      button.textContent = `${kind} r${state.selected.rot}`;
    }
    button.addEventListener("click", () => handlers.onPaletteClick(kind));
    palette.appendChild(button);
  }
  root.appendChild(palette);

  const status = document.createElement("div");
  status.className = "status";
  const previewNote = state.preview
    ? state.preview.legal
      ? " | preview: ok"
      : " | preview: illegal"
    : "";
  status.textContent =
    `mode: ${state.mode} | wire: ${state.wireKind} | covered: ${state.covered} ` +
    `| par: ${state.level.par} | moves: ${state.historyLen}${previewNote}`;
  root.appendChild(status);

  if (state.result) {
    const result = document.createElement("div");
    result.className = state.result.correct ? "result result-ok" : "result result-bad";
    const headline = state.result.correct
      ? `Correct! score ${state.result.score}` +
        (state.result.par_reached ? " (par reached)" : "")
      : `Not yet: ${state.result.diagnostics.join("; ") || "wrong state"}`;
    result.textContent = headline;
    root.appendChild(result);
  }
}
