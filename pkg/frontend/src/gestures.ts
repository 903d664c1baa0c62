/**
 * Gesture-to-message mapping.
 *
 * Each user gesture yields at most one protocol request; legality always
 * comes back from the engine (rotation previews use dry-run placement
 * requests rather than local rules).
 */

import type { Cell, ProtocolRequest } from "./protocol";
import type { ViewState } from "./state";

export type Gesture =
  | { type: "newSession"; level: string }
  | { type: "drop"; cell: Cell }
  | { type: "preview"; cell: Cell }
  | { type: "insertWire"; site: Cell }
  | { type: "chooseOut"; cells: Cell[] }
  | { type: "markOutput"; cell: Cell }
  | { type: "clearMarks" }
  | { type: "undo" }
  | { type: "submit"; mode?: "unsigned" | "strict" };

function message(
  state: ViewState,
  op: string,
  payload: Record<string, unknown> = {},
): ProtocolRequest {
  return { op, session: state.session, payload };
}

/**
 * Translate a gesture into a protocol request, or null when the gesture
 * only affects local selection state (handled in state.ts).
 */
export function gestureToMessage(
  state: ViewState,
  gesture: Gesture,
): ProtocolRequest | null {
  switch (gesture.type) {
    case "newSession":
      return { op: "new_session", session: null, payload: { level: gesture.level } };
    case "drop": {
      if (!state.selected) {
        return null;
      }
      return message(state, "place", {
        kind: state.selected.kind,
        anchor: gesture.cell,
        rot: state.selected.rot,
      });
    }
    case "preview": {
      if (!state.selected) {
        return null;
      }
      return message(state, "place", {
        kind: state.selected.kind,
        anchor: gesture.cell,
        rot: state.selected.rot,
        dry: true,
      });
    }
    case "insertWire":
      return message(state, "insert_wire", {
        site: gesture.site,
        kind: state.wireKind,
      });
    case "chooseOut":
      return message(state, "choose_out", { cells: gesture.cells });
    case "markOutput": {
      const marks = state.outputs.map((o) => ({ cell: o.cell, q: o.q }));
      marks.push({ cell: gesture.cell, q: marks.length + 1 });
      return message(state, "mark_outputs", { marks });
    }
    case "clearMarks":
      return message(state, "mark_outputs", { marks: [] });
    case "undo":
      return message(state, "undo");
    case "submit":
      return message(state, "submit", gesture.mode ? { mode: gesture.mode } : {});
  }
}
