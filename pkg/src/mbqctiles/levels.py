"""Level definitions: a circuit, a grid, and a par covered-fraction.

Level files are circuit files extended with grid and par fields::

    {"id": "L4", "name": "Entangle", "n": 2,
     "gates": [{"g": "H", "q": [1]}, {"g": "CZ", "q": [1, 2]}],
     "grid": {"w": 10, "h": 3}, "par": "7/30",
     "reference_board": { ... board file ... }}

``par`` is the covered fraction a solution should reach for full marks;
the shipped values are derived from each level's reference board (the
minimal-pattern chain), which also certifies at load time that the grid
can host a correct solution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .board import Board, board_from_json
from .circuit import Circuit, circuit_to_json, parse_circuit
from .cluster import Grid
from .errors import InvariantViolation, ParseError

BUILTIN_IDS = ("L1", "L2", "L3", "L4", "L5", "L6", "L7")


@dataclass(frozen=True)
class Level:
    id: str
    name: str
    circuit: Circuit
    grid: Grid
    par: Fraction
    reference_board: dict | None = None

    def fresh_board(self) -> Board:
        return Board.empty(self.grid)

    def to_json(self) -> dict:
        data = circuit_to_json(self.circuit)
        data["id"] = self.id
        data["name"] = self.name
        data["grid"] = {"w": self.grid.width, "h": self.grid.height}
        data["par"] = str(self.par)
        if self.reference_board is not None:
            data["reference_board"] = self.reference_board
        return data


def parse_level(source: str | dict) -> Level:
    if isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from exc
    else:
        data = source
    circuit = parse_circuit(data)
    if "id" not in data or "grid" not in data:
        raise ParseError("level needs 'id' and 'grid' fields")
    g = data["grid"]
    try:
        grid = Grid(width=int(g["w"]), height=int(g["h"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("grid needs integer fields 'w' and 'h'", "grid") from exc
    try:
        par = Fraction(data.get("par", "1"))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"invalid par fraction: {data.get('par')}", "par") from exc
    return Level(
        id=str(data["id"]),
        name=str(data.get("name", data["id"])),
        circuit=circuit,
        grid=grid,
        par=par,
        reference_board=data.get("reference_board"),
    )


def certify_level(level: Level) -> Board:
    """Check that the level's reference board solves its circuit; returns
    the replayed board."""
    from .evaluator import evaluate

    if level.reference_board is None:
        raise InvariantViolation(f"level {level.id} ships no reference board")
    board = board_from_json(level.reference_board)
    if (board.grid.width, board.grid.height) != (level.grid.width, level.grid.height):
        raise InvariantViolation(f"level {level.id} reference board grid differs")
    result = evaluate(board, level.circuit)
    if not result.correct:
        raise InvariantViolation(
            f"level {level.id} reference board is wrong: {result.diagnostics}"
        )
    return board


def load_builtin(level_id: str) -> Level:
    if level_id not in BUILTIN_IDS:
        raise ParseError(f"unknown level {level_id!r}")
    text = (
        resources.files("mbqctiles").joinpath(f"levels/{level_id}.json").read_text()
    )
    return parse_level(text)


def builtin_levels() -> list[Level]:
    return [load_builtin(i) for i in BUILTIN_IDS]
