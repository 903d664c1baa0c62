/**
 * Browser entry point: wires gestures -> protocol client -> state -> render.
 */

import { EngineClient } from "./protocol";
import type { Cell, ProtocolReply } from "./protocol";
import {
  applyReply,
  initialState,
  rotateSelection,
  selectBlock,
  setMode,
  setWireKind,
  type UiMode,
  type ViewState,
} from "./state";
import { gestureToMessage, type Gesture } from "./gestures";
import { render } from "./render";

const client = new EngineClient("");
let state: ViewState = initialState();
let hoverCell: Cell | null = null;

const root = document.getElementById("app") as HTMLElement;
const controls = document.getElementById("controls") as HTMLElement;

function repaint(): void {
  render(root, state, {
    onCellClick: handleCellClick,
    onCellHover: (cell) => {
      hoverCell = cell;
    },
    onPaletteClick: (kind) => {
      state = selectBlock(state, kind);
      repaint();
    },
  });
}

async function dispatch(gesture: Gesture): Promise<void> {
  const message = gestureToMessage(state, gesture);
  if (!message) {
    return;
  }
  let reply: ProtocolReply;
  try {
    reply = await client.send(message);
  } catch (err) {
    state = { ...state, banner: `connection lost, retry: ${err}` };
    repaint();
    return;
  }
  state = applyReply(state, reply);
  repaint();
}

function handleCellClick(cell: Cell): void {
  switch (state.mode) {
    case "place":
      void dispatch({ type: "drop", cell });
      break;
    case "wire":
      void dispatch({ type: "insertWire", site: cell });
      break;
    case "out":
      void dispatch({ type: "chooseOut", cells: [cell] });
      break;
    case "mark":
      void dispatch({ type: "markOutput", cell });
      break;
  }
}

function button(label: string, onClick: () => void): HTMLButtonElement {
  const b = document.createElement("button");
  b.textContent = label;
  b.addEventListener("click", onClick);
  controls.appendChild(b);
  return b;
}

async function start(): Promise<void> {
  const levels = ["L1", "L2", "L3", "L4", "L5", "L6", "L7"];
  const picker = document.createElement("select");
  for (const id of levels) {
    const option = document.createElement("option");
    option.value = id;
    option.textContent = id;
    picker.appendChild(option);
  }
  controls.appendChild(picker);
  button("start level", () => {
    state = initialState();
    void dispatch({ type: "newSession", level: picker.value });
  });
  for (const mode of ["place", "wire", "out", "mark"] as UiMode[]) {
    button(mode, () => {
      state = setMode(state, mode);
      repaint();
    });
  }
  button("wire kind", () => {
    state = setWireKind(state, state.wireKind === "X2" ? "Y3" : "X2");
    repaint();
  });
  button("undo", () => void dispatch({ type: "undo" }));
  button("clear marks", () => void dispatch({ type: "clearMarks" }));
  button("submit", () => void dispatch({ type: "submit" }));

  document.addEventListener("keydown", (event) => {
    if (event.code === "Space" && state.selected) {
      event.preventDefault();
      state = rotateSelection(state);
      repaint();
      if (hoverCell) {
        void dispatch({ type: "preview", cell: hoverCell });
      }
    }
  });

  void dispatch({ type: "newSession", level: "L1" });
}

void start();
