"""Line-delimited JSON request/response protocol for game sessions.

Every request is an object ``{"op": ..., "session": ..., "payload": {...}}``
and yields exactly one reply ``{"ok": true|false, "op": ..., "session": ...,
"rev": ..., "payload" | "error": ...}``.  The revision counter increases on
every state-changing move, and illegal moves are rejected with the number
of the violated game rule.  The same messages travel unchanged over the
HTTP mirror (POST /api/protocol).

Ops: new_session, get_state, place, insert_wire, choose_out, mark_outputs,
undo, submit, list_levels.  Move ops accept ``"dry": true`` to validate
without committing, which the UI uses for placement previews.
"""

from __future__ import annotations

import json
import os
import sys
import threading
import uuid
from dataclasses import dataclass, field

from .board import (
    Board,
    choose_out_in_place,
    insert_wire_in_place,
    mark_outputs,
    place_block,
)
from .canonical import ComparisonMode
from .errors import MoveError, ParseError, ProtocolError, PuzzleError
from .evaluator import evaluate, score_board
from .levels import Level, builtin_levels, load_builtin
from .patterns import ALL_KINDS
from .tableau import OutcomePolicy

#: cell colors by measurement basis; unmeasured tiles render grey.
CELL_COLORS = {"X": "blue", "Y": "orange", "Z": "green"}


@dataclass
class Session:
    id: str
    level: Level
    board: Board
    history: list[dict] = field(default_factory=list)
    rev: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionStore:
    """In-memory session registry; individual sessions serialize their own
    requests, distinct sessions run concurrently."""

    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, level: Level) -> Session:
        session = Session(id=uuid.uuid4().hex[:12], level=level, board=level.fresh_board())
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            if session_id not in self._sessions:
                raise ProtocolError(f"unknown session {session_id!r}")
            return self._sessions[session_id]


def default_seed() -> int:
    """Outcome-policy seed for random runs; ENGINE_SEED overrides."""
    env = os.environ.get("ENGINE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ProtocolError(f"ENGINE_SEED must be an integer, got {env!r}") from exc
    return 0


def policy_from_payload(payload: dict) -> OutcomePolicy:
    spec = payload.get("policy") or {}
    kind = spec.get("kind", "plus_one")
    if kind == "plus_one":
        return OutcomePolicy.plus_one()
    if kind == "random":
        seed = spec.get("seed")
        return OutcomePolicy.random(default_seed() if seed is None else int(seed))
    raise ProtocolError(f"unknown outcome policy {kind!r}")


def _cell_grid(board: Board) -> list[list[str]]:
    colored = board.colored_cells()
    grey = board.grey_cells()
    rows = []
    for r in range(1, board.grid.height + 1):
        row = []
        for c in range(1, board.grid.width + 1):
            cell = (r, c)
            if cell in colored:
                row.append(CELL_COLORS[colored[cell]])
            elif cell in grey:
                row.append("grey")
            else:
                row.append("green")
        rows.append(row)
    return rows


def _state_payload(session: Session) -> dict:
    board = session.board
    covered, _ = score_board(board)
    level = session.level
    return {
        "level": {
            "id": level.id,
            "name": level.name,
            "n": level.circuit.n,
            "gates": [{"g": g.kind, "q": list(g.qubits)} for g in level.circuit.gates],
            "grid": {"w": level.grid.width, "h": level.grid.height},
            "par": str(level.par),
        },
        "board": board.to_json(),
        "cells": _cell_grid(board),
        "outputs": [{"cell": list(c), "q": q} for c, q in board.outputs],
        "unconsumed_outs": sorted(list(c) for c in board.unconsumed_outs()),
        "covered": str(covered),
        "palette": list(ALL_KINDS),
        "history_len": len(session.history),
    }


def _ok(op: str, session: Session | None, payload: dict) -> dict:
    return {
        "ok": True,
        "op": op,
        "session": session.id if session else None,
        "rev": session.rev if session else 0,
        "payload": payload,
    }


def _err(op: str, session_id: str | None, rev: int, kind: str, message: str,
         rule: int | None = None) -> dict:
    return {
        "ok": False,
        "op": op,
        "session": session_id,
        "rev": rev,
        "error": {"kind": kind, "rule": rule, "message": message},
    }


def _apply_move(board: Board, op: str, payload: dict) -> Board:
    if op == "place":
        for key in ("kind", "anchor"):
            if key not in payload:
                raise ProtocolError(f"place needs a '{key}' field")
        wires = tuple(
            (tuple(w["site"]), w["kind"]) for w in payload.get("wires", [])
        )
        return place_block(
            board,
            payload["kind"],
            tuple(payload["anchor"]),
            int(payload.get("rot", 0)),
            wires,
            tuple(tuple(c) for c in payload.get("out", [])),
        )
    if op == "insert_wire":
        for key in ("site", "kind"):
            if key not in payload:
                raise ProtocolError(f"insert_wire needs a '{key}' field")
        return insert_wire_in_place(board, tuple(payload["site"]), payload["kind"])
    if op == "choose_out":
        if "cells" not in payload:
            raise ProtocolError("choose_out needs a 'cells' field")
        return choose_out_in_place(board, payload["cells"])
    if op == "mark_outputs":
        if "marks" not in payload:
            raise ProtocolError("mark_outputs needs a 'marks' field")
        marks = [(tuple(m["cell"]), int(m["q"])) for m in payload["marks"]]
        return mark_outputs(board, marks)
    raise ProtocolError(f"unknown move op {op!r}")


MOVE_OPS = ("place", "insert_wire", "choose_out", "mark_outputs")


def handle_request(store: SessionStore, msg: dict) -> dict:
    """Process one protocol message; never raises."""
    if not isinstance(msg, dict):
        return _err("?", None, 0, "protocol", "message must be a JSON object")
    op = msg.get("op")
    if not isinstance(op, str):
        return _err("?", None, 0, "protocol", "message needs a string 'op' field")
    payload = msg.get("payload") or {}
    if not isinstance(payload, dict):
        return _err(op, msg.get("session"), 0, "protocol", "'payload' must be an object")

    try:
        if op == "list_levels":
            return _ok(op, None, {"levels": [lv.to_json() for lv in builtin_levels()]})
        if op == "new_session":
            level_id = payload.get("level", "L1")
            level = load_builtin(level_id)
            session = store.create(level)
            return _ok(op, session, _state_payload(session))

        session_id = msg.get("session")
        if not isinstance(session_id, str):
            return _err(op, None, 0, "protocol", "message needs a 'session' field")
        session = store.get(session_id)
        with session.lock:
            if op == "get_state":
                return _ok(op, session, _state_payload(session))
            if op in MOVE_OPS:
                try:
                    new_board = _apply_move(session.board, op, payload)
                except MoveError as exc:
                    if payload.get("dry"):
                        return _ok(op, session, {"legal": False, "rule": exc.rule,
                                                 "message": str(exc)})
                    return _err(op, session.id, session.rev, type(exc).__name__,
                                str(exc), exc.rule)
                if payload.get("dry"):
                    return _ok(op, session, {"legal": True})
                session.board = new_board
                session.history.append({"op": op, "payload": payload})
                session.rev += 1
                return _ok(op, session, _state_payload(session))
            if op == "undo":
                if not session.history:
                    return _err(op, session.id, session.rev, "protocol",
                                "nothing to undo")
                session.history.pop()
                board = session.level.fresh_board()
                for move in session.history:
                    board = _apply_move(board, move["op"], move["payload"])
                session.board = board
                session.rev += 1
                return _ok(op, session, _state_payload(session))
            if op == "submit":
                mode = ComparisonMode(payload.get("mode", "unsigned"))
                policy = policy_from_payload(payload)
                result = evaluate(session.board, session.level.circuit, mode, policy)
                data = result.to_json()
                data["par"] = str(session.level.par)
                data["par_reached"] = bool(
                    result.correct
                    and result.covered_fraction <= session.level.par
                )
                return _ok(op, session, data)
        return _err(op, msg.get("session"), 0, "protocol", f"unknown op {op!r}")
    except (ProtocolError, ParseError) as exc:
        return _err(op, msg.get("session"), 0, "protocol", str(exc))
    except MoveError as exc:
        return _err(op, msg.get("session"), 0, type(exc).__name__, str(exc), exc.rule)
    except PuzzleError as exc:
        return _err(op, msg.get("session"), 0, "engine", str(exc))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        return _err(op, msg.get("session"), 0, "protocol", f"malformed payload: {exc}")


def run_stdio(store: SessionStore | None = None, stdin=None, stdout=None) -> None:
    """Serve the protocol over standard streams, one JSON message per line."""
    store = store or SessionStore()
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            reply = _err("?", None, 0, "protocol", f"invalid JSON: {exc.msg}")
        else:
            reply = handle_request(store, msg)
        stdout.write(json.dumps(reply) + "\n")
        stdout.flush()
