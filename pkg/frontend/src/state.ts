/**
 * View state: a pure mirror of the engine's latest reply.
 *
 * The client never computes game legality. Every accepted reply replaces
 * the mirrored board wholesale (revision-checked so stale replies cannot
 * regress the view); rejections only set the banner.
 */

import type {
  Cell,
  CellColor,
  LevelInfo,
  BoardJson,
  ProtocolReply,
  StatePayload,
  SubmitPayload,
} from "./protocol";

export type UiMode = "place" | "wire" | "out" | "mark";

export interface Selection {
  kind: string;
  rot: number;
}

export interface ViewState {
  session: string | null;
  rev: number;
  level: LevelInfo | null;
  cells: CellColor[][];
  board: BoardJson | null;
  outputs: { cell: Cell; q: number }[];
  palette: string[];
  historyLen: number;
  covered: string;
  mode: UiMode;
  selected: Selection | null;
  wireKind: "X2" | "Y3";
  banner: string | null;
  preview: { legal: boolean; message?: string } | null;
  result: SubmitPayload | null;
}

export function initialState(): ViewState {
  return {
    session: null,
    rev: -1,
    level: null,
    cells: [],
    board: null,
    outputs: [],
    palette: [],
    historyLen: 0,
    covered: "0",
    mode: "place",
    selected: null,
    wireKind: "X2",
    banner: null,
    preview: null,
    result: null,
  };
}

function isStatePayload(payload: Record<string, unknown>): payload is Record<string, unknown> & StatePayload {
  return "board" in payload && "cells" in payload;
}

/** Fold one engine reply into the view. Pure: returns a new state. */
export function applyReply(state: ViewState, reply: ProtocolReply): ViewState {
  if (!reply.ok) {
    const error = reply.error;
    const banner =
      error && error.rule != null
        ? `Rule ${error.rule}: ${error.message}`
        : error
          ? error.message
          : "request failed";
    return { ...state, banner };
  }
  const next: ViewState = { ...state, banner: null };
  if (reply.session) {
    next.session = reply.session;
  }
  const payload = reply.payload ?? {};
  if (reply.op === "submit") {
    next.result = payload as unknown as SubmitPayload;
    return next;
  }
  if ("legal" in payload) {
    // dry-run preview reply: no state change beyond the hint
    next.preview = {
      legal: payload["legal"] === true,
      message: typeof payload["message"] === "string" ? payload["message"] : undefined,
    };
    return next;
  }
  if (isStatePayload(payload)) {
    if (reply.rev < state.rev && reply.session === state.session) {
      return state; // stale reply; keep the newer mirror
    }
    next.rev = reply.rev;
    next.level = payload.level;
    next.cells = payload.cells;
    next.board = payload.board;
    next.outputs = payload.outputs;
    next.palette = payload.palette;
    next.historyLen = payload.history_len;
    next.covered = payload.covered;
    next.result = null;
  }
  return next;
}

/** Local (engine-free) UI adjustments: selection, mode, rotation. */
export function selectBlock(state: ViewState, kind: string): ViewState {
  return { ...state, selected: { kind, rot: 0 }, mode: "place", banner: null };
}

export function rotateSelection(state: ViewState): ViewState {
  if (!state.selected) {
    return state;
  }
  return {
    ...state,
    selected: { ...state.selected, rot: (state.selected.rot + 1) % 4 },
  };
}

export function setMode(state: ViewState, mode: UiMode): ViewState {
  return { ...state, mode, banner: null };
}

export function setWireKind(state: ViewState, wireKind: "X2" | "Y3"): ViewState {
  return { ...state, wireKind };
}
