"""FastAPI service wrapping the puzzle engine.

The UI talks to POST /api/protocol, which carries the exact same JSON
messages as the stdio protocol (errors travel inside the reply envelope,
so the transport never changes message semantics).  Typed convenience
endpoints cover level listing and batch verification, and a built static
frontend is served from / when available.
"""

from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import __version__
from .board import board_from_json
from .canonical import ComparisonMode
from .circuit import parse_circuit
from .errors import MoveError, ParseError, PuzzleError
from .evaluator import evaluate
from .levels import builtin_levels, load_builtin
from .protocol import SessionStore, default_seed, handle_request
from .tableau import OutcomePolicy


class ProtocolMessage(BaseModel):
    op: str
    session: str | None = None
    payload: dict = Field(default_factory=dict)


class VerifyRequest(BaseModel):
    circuit: dict
    board: dict
    mode: str = "unsigned"
    seed: int | None = None
    random_outcomes: bool = False


def create_app(store: SessionStore | None = None, static_dir: str | None = None) -> FastAPI:
    store = store or SessionStore()
    app = FastAPI(title="mbqctiles", version=__version__)
    app.state.store = store

    @app.get("/health")
    def health():
        return {"ok": True, "version": __version__}

    @app.post("/api/protocol")
    def protocol(message: ProtocolMessage):
        return handle_request(store, message.model_dump())

    @app.get("/api/levels")
    def levels():
        return {"levels": [lv.to_json() for lv in builtin_levels()]}

    @app.get("/api/levels/{level_id}")
    def level(level_id: str):
        try:
            return load_builtin(level_id).to_json()
        except ParseError as exc:
            return JSONResponse({"error": str(exc)}, status_code=404)

    @app.post("/api/verify")
    def verify(req: VerifyRequest):
        try:
            circuit = parse_circuit(req.circuit)
            mode = ComparisonMode(req.mode)
        except (ParseError, ValueError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        if req.random_outcomes or req.seed is not None:
            policy = OutcomePolicy.random(
                default_seed() if req.seed is None else req.seed
            )
        else:
            policy = OutcomePolicy.plus_one()
        try:
            board = board_from_json(req.board)
        except ParseError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except MoveError as exc:
            return {
                "correct": False,
                "mode": mode.value,
                "diagnostics": [f"illegal board (rule {exc.rule}): {exc}"],
            }
        except PuzzleError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        return evaluate(board, circuit, mode, policy).to_json()

    static = static_dir or os.environ.get("MBQCTILES_STATIC")
    if static is None:
        default = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static = str(default) if default.is_dir() else None
    if static and Path(static).is_dir():
        app.mount("/", StaticFiles(directory=static, html=True), name="ui")
    return app


app = create_app()
