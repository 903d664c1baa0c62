"""Board state and placement rules.

A board is a grid plus an ordered list of placements and a set of marked
output cells.  Placement legality implements the game rules:

1. Blocks go on the grid; every tile must stay in bounds.
2. Deformations must keep each tile's non-green neighborhood (enforced
   structurally by the pattern operations; the submission verdict is
   always semantic).
3. A block's In tiles must land on unconsumed Out tiles of earlier blocks,
   or on untouched green cells when the block starts a new logical line
   (a placement that touches nothing existing).  Apart from those shared
   In-on-Out junction cells, tiles of distinct blocks may neither overlap
   nor sit 4-adjacent: any other shared lattice edge would entangle the
   blocks and change their function.
4. Out tiles may be re-chosen among a block's allowed candidates.
5. Blocks rotate in 90-degree steps.
6. Wires may be spliced into a block after a flow tile with at most two
   neighbors.
7. Outputs are marked on unmeasured cells with indices 1..n.

Monominoes are raw paint for freeform patterns: they skip the In/Out and
touch rules entirely; the evaluator remains the arbiter of what they do.

Boards serialize to JSON::

    {"grid": {"w": 10, "h": 3},
     "placements": [{"kind": "H", "anchor": [2, 1], "rot": 0,
                     "wires": [{"site": [2, 1], "kind": "X2"}],
                     "out": [[2, 2]]}],
     "outputs": [{"cell": [2, 2], "q": 1}]}

Cells are 1-based [row, col]; ``anchor`` is the translation applied to the
block's library offsets after ``rot`` quarter-turns; ``wires`` list
absolute insertion sites in application order; ``out`` lists committed out
cells per leg (omit to keep library defaults).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .cluster import Cell, Grid
from .errors import (
    BoundsError,
    CollisionError,
    IllegalTouchError,
    MarkingError,
    ParseError,
    UnconnectedError,
)
from .patterns import (
    ALL_KINDS,
    Polyomino,
    _adjacent,
    _library,
    choose_out,
    insert_wire,
    rotate,
    translate,
)


@dataclass(frozen=True)
class Placement:
    """A realized placement: the serializable spec plus the absolute shape."""

    kind: str
    anchor: Cell
    rot: int
    wires: tuple[tuple[Cell, str], ...]
    outs: tuple[Cell, ...]
    shape: Polyomino
    consumed: tuple[Cell, ...]  # In cells that landed on earlier Out tiles

    def spec_json(self) -> dict:
        rec: dict = {"kind": self.kind, "anchor": list(self.anchor), "rot": self.rot}
        if self.wires:
            rec["wires"] = [{"site": list(c), "kind": k} for c, k in self.wires]
        if self.outs:
            rec["out"] = [list(c) for c in self.outs]
        return rec


@dataclass(frozen=True)
class Board:
    grid: Grid
    placements: tuple[Placement, ...] = ()
    outputs: tuple[tuple[Cell, int], ...] = ()

    @classmethod
    def empty(cls, grid: Grid) -> "Board":
        return cls(grid=grid)

    # -- derived cell views -------------------------------------------

    def colored_cells(self) -> dict[Cell, str]:
        """Final basis per measured cell; later In tiles recolor the grey
        Out cells they consume."""
        tiles: dict[Cell, str] = {}
        for p in self.placements:
            tiles.update(p.shape.colored())
        return tiles

    def grey_cells(self) -> set[Cell]:
        """Unmeasured block cells: committed outs and resting tiles that no
        later In tile has recolored."""
        colored = self.colored_cells()
        grey: set[Cell] = set()
        for p in self.placements:
            grey.update(p.shape.grey_cells())
        return grey - set(colored)

    def occupied(self) -> set[Cell]:
        cells: set[Cell] = set()
        for p in self.placements:
            cells.update(p.shape.cells())
        cells.update(c for c, _ in self.outputs)
        return cells

    def unconsumed_outs(self) -> set[Cell]:
        """Grey out/rest cells still available for a successor's In tile."""
        marked = {c for c, _ in self.outputs}
        return {
            c
            for c in self.grey_cells()
            if c not in marked
        }

    def output_map(self) -> dict[int, Cell]:
        return {q: cell for cell, q in self.outputs}

    def covered_cells(self) -> set[Cell]:
        """Cells rendered non-green: X/Y tiles, grey tiles, marked outputs."""
        colored = {
            c for c, basis in self.colored_cells().items() if basis in ("X", "Y")
        }
        return colored | self.grey_cells() | {c for c, _ in self.outputs}

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        return {
            "grid": {"w": self.grid.width, "h": self.grid.height},
            "placements": [p.spec_json() for p in self.placements],
            "outputs": [{"cell": list(c), "q": q} for c, q in self.outputs],
        }


def _cell(value, what: str = "cell") -> Cell:
    """Coerce a [row, col] pair to an integer cell, or raise ParseError."""
    try:
        r, c = value
        return (int(r), int(c))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what} must be a [row, col] pair, got {value!r}") from exc


def realize(kind: str, anchor: Cell, rot: int, wires=(), outs=()) -> Polyomino:
    """Build the absolute shape for a placement spec."""
    if kind not in ALL_KINDS:
        raise ParseError(f"unknown block kind {kind!r}", "kind")
    if rot not in (0, 1, 2, 3):
        raise ParseError(f"rotation must be 0..3, got {rot}", "rot")
    anchor = _cell(anchor, "anchor")
    shape = _library()[kind]
    for _ in range(rot):
        shape = rotate(shape)
    shape = translate(shape, anchor[0], anchor[1])
    for site, wire_kind in wires:
        shape = insert_wire(shape, _cell(site, "wire site"), wire_kind)
    outs = tuple(_cell(c, "out") for c in outs)
    if outs:
        if len(outs) != len(shape.legs):
            raise ParseError(
                f"{kind} has {len(shape.legs)} legs but {len(outs)} out cells",
                "out",
            )
        for leg, cell in zip(shape.legs, outs):
            if cell != leg.out:
                shape = choose_out(shape, cell)
    return shape


def place_block(
    board: Board,
    kind: str,
    anchor: Cell,
    rot: int = 0,
    wires=(),
    outs=(),
) -> Board:
    """Validate and append a placement, returning the new board."""
    wires = tuple((_cell(site, "wire site"), wk) for site, wk in wires)
    shape = realize(kind, _cell(anchor, "anchor"), rot, wires, outs)
    for cell in shape.cells():
        if not board.grid.contains(cell):
            raise BoundsError(f"tile {cell} is outside the grid")

    is_paint = not shape.legs
    in_cells = set(shape.in_cells())
    available = board.unconsumed_outs()
    occupied = board.occupied()
    marked = {c for c, _ in board.outputs}

    consumed: list[Cell] = []
    for cell in sorted(in_cells):
        if cell in available:
            consumed.append(cell)
        elif cell not in occupied:
            continue  # fresh green cell: starts a new logical line
        else:
            raise UnconnectedError(
                f"In tile {cell} must land on an unconsumed Out tile or a "
                "fresh green cell"
            )
    for cell in shape.cells():
        if cell in in_cells:
            continue
        if cell in occupied or cell in marked:
            raise CollisionError(f"tile {cell} overlaps an existing tile")

    if not is_paint:
        new_cells = shape.cells()
        for prev in board.placements:
            prev_cells = prev.shape.cells()
            shared = new_cells & prev_cells
            mine = new_cells - prev_cells
            theirs = prev_cells - new_cells
            # In-on-Out junctions are the only legal overlap.
            for cell in shared:
                if cell not in consumed:
                    raise CollisionError(
                        f"tile {cell} overlaps a tile of an earlier block"
                    )
            if prev.shape.legs:  # monominoes are exempt from the touch rule
                for a in mine:
                    for b in theirs:
                        if _adjacent(a, b):
                            raise IllegalTouchError(
                                f"tiles {a} and {b} of different blocks may "
                                "touch only at In/Out junctions"
                            )
    placement = Placement(
        kind=kind,
        anchor=tuple(anchor),
        rot=rot,
        wires=wires,
        outs=tuple(tuple(c) for c in outs),
        shape=shape,
        consumed=tuple(consumed),
    )
    return Board(board.grid, board.placements + (placement,), board.outputs)


def _replace_last(board: Board, **changes) -> Board:
    """Re-place the final placement with modified spec fields, revalidating
    against the rest of the board."""
    if not board.placements:
        raise UnconnectedError("no block placed yet")
    last = board.placements[-1]
    trimmed = Board(board.grid, board.placements[:-1], board.outputs)
    spec = {
        "kind": last.kind,
        "anchor": last.anchor,
        "rot": last.rot,
        "wires": last.wires,
        "outs": last.outs,
    }
    spec.update(changes)
    return place_block(
        trimmed,
        spec["kind"],
        spec["anchor"],
        spec["rot"],
        spec["wires"],
        spec["outs"],
    )


def insert_wire_in_place(board: Board, site: Cell, wire_kind: str) -> Board:
    """Splice a wire into the most recent placement at ``site``."""
    if not board.placements:
        raise UnconnectedError("no block to insert a wire into")
    last = board.placements[-1]
    return _replace_last(board, wires=last.wires + ((tuple(site), wire_kind),))


def choose_out_in_place(board: Board, cells) -> Board:
    """Re-commit the most recent placement's out tiles."""
    return _replace_last(board, outs=tuple(tuple(c) for c in cells))


def mark_outputs(board: Board, marks) -> Board:
    """Replace the board's output marking.

    Cells must be unmeasured: grey out/rest tiles no In has consumed, or
    untouched green cells (a bare output is a fresh |+> qubit).  Indices
    must be exactly 1..len(marks).
    """
    marks = [(_cell(cell, "output cell"), int(q)) for cell, q in marks]
    indices = sorted(q for _, q in marks)
    if indices != list(range(1, len(marks) + 1)):
        raise MarkingError(
            f"output indices must be a permutation of 1..{len(marks)}, got {indices}"
        )
    cells = [c for c, _ in marks]
    if len(set(cells)) != len(cells):
        raise MarkingError("the same cell is marked twice")
    colored = board.colored_cells()
    grey = board.grey_cells()
    block_cells = {c for p in board.placements for c in p.shape.cells()}
    for cell in cells:
        if not board.grid.contains(cell):
            raise MarkingError(f"output cell {cell} is outside the grid")
        if cell in colored:
            raise MarkingError(f"cell {cell} is measured; outputs must be unmeasured")
        if cell in block_cells and cell not in grey:
            raise MarkingError(f"cell {cell} is not an available out tile")
    return Board(board.grid, board.placements, tuple(marks))


def board_from_json(data: str | dict) -> Board:
    """Parse and replay a board file, validating every placement."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from exc
    if not isinstance(data, dict) or "grid" not in data:
        raise ParseError("board file must be an object with a 'grid' field")
    g = data["grid"]
    try:
        grid = Grid(width=int(g["w"]), height=int(g["h"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("grid needs integer fields 'w' and 'h'", "grid") from exc
    board = Board.empty(grid)
    for i, rec in enumerate(data.get("placements", [])):
        loc = f"placements[{i}]"
        if not isinstance(rec, dict) or "kind" not in rec or "anchor" not in rec:
            raise ParseError("placement needs 'kind' and 'anchor'", loc)
        try:
            wires = tuple(
                (tuple(w["site"]), w["kind"]) for w in rec.get("wires", [])
            )
            anchor = tuple(rec["anchor"])
            rot = int(rec.get("rot", 0))
            outs = tuple(tuple(c) for c in rec.get("out", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed placement record: {exc}", loc) from exc
        board = place_block(board, rec["kind"], anchor, rot, wires, outs)
    try:
        marks = [(tuple(m["cell"]), int(m["q"])) for m in data.get("outputs", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed output record: {exc}", "outputs") from exc
    if marks:
        board = mark_outputs(board, marks)
    return board
