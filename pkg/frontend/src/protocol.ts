/**
 * Engine protocol types and the HTTP client.
 *
 * Requests and replies are the same JSON objects the engine speaks over
 * stdio; the HTTP mirror at POST /api/protocol never changes their
 * semantics, so this client is nothing more than fetch plus types.
 */

export type Cell = [number, number];

export type CellColor = "green" | "blue" | "orange" | "grey";

export interface GateJson {
  g: string;
  q: number[];
}

export interface LevelInfo {
  id: string;
  name: string;
  n: number;
  gates: GateJson[];
  grid: { w: number; h: number };
  par: string;
}

export interface PlacementJson {
  kind: string;
  anchor: Cell;
  rot: number;
  wires?: { site: Cell; kind: string }[];
  out?: Cell[];
}

export interface BoardJson {
  grid: { w: number; h: number };
  placements: PlacementJson[];
  outputs: { cell: Cell; q: number }[];
}

export interface StatePayload {
  level: LevelInfo;
  board: BoardJson;
  cells: CellColor[][];
  outputs: { cell: Cell; q: number }[];
  unconsumed_outs: Cell[];
  covered: string;
  palette: string[];
  history_len: number;
}

export interface SubmitPayload {
  correct: boolean;
  mode: string;
  covered_fraction: string;
  score: string;
  covered_float: number;
  score_float: number;
  diagnostics: string[];
  par: string;
  par_reached: boolean;
}

export interface ProtocolRequest {
  op: string;
  session: string | null;
  payload: Record<string, unknown>;
}

export interface ProtocolError {
  kind: string;
  rule: number | null;
  message: string;
}

export interface ProtocolReply {
  ok: boolean;
  op: string;
  session: string | null;
  rev: number;
  payload?: Record<string, unknown>;
  error?: ProtocolError;
}

/** Thin transport wrapper; one in-flight request per session. */
export class EngineClient {
  private base: string;
  private busy: Promise<unknown> = Promise.resolve();

  constructor(base = "") {
    this.base = base.replace(/\/$/, "");
  }

  /** Send one protocol message; requests queue so the session stays serial. */
  send(request: ProtocolRequest): Promise<ProtocolReply> {
    const run = async (): Promise<ProtocolReply> => {
      const response = await fetch(`${this.base}/api/protocol`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(request),
      });
      if (!response.ok) {
        throw new Error(`transport failure: HTTP ${response.status}`);
      }
      return (await response.json()) as ProtocolReply;
    };
    const next = this.busy.then(run, run);
    this.busy = next.catch(() => undefined);
    return next;
  }
}
