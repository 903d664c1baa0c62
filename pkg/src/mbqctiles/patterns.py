"""Polyomino pattern library and shape manipulation.

Every gate block is a set of legs.  A leg is the flow path of one logical
qubit through the block: an ordered chain of colored (measured) tiles
starting at the In tile, followed by a grey committed Out tile where the
qubit's state comes to rest.  Tile colors encode measurement bases:
X = blue, Y = orange, Z = green.  Grey tiles are unmeasured.

Library shapes (canonical orientation, (row, col) offsets):

    H        [X]>          single X tile, out to the right
    S        [Y X]>        phase gate, exact up to a sign byproduct
    I / X2   [X X]>        blue wire, identity
    I / Y3   [Y Y Y]>      orange wire, identity
    CZ       [X X > <" X X]   two wires whose rest cells are adjacent;
                              the lattice edge between the two grey outs
                              applies the controlled-phase
    CNOT     [X X]> with a grey control tile hanging off the second X;
             the control qubit rests in place (its In and Out coincide)
    SWAP     three chained in-place CNOTs folded into a 2x5 footprint

The drawn shapes are locked by a semantic certification test: each block,
alone on its minimal enclosing grid with green (Z) padding, must evaluate
as its gate.  Deformations (rotation, wire insertion, out re-choice) are
accepted only when they provably preserve the tile neighborhood structure,
and the same certification backs them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

from .errors import (
    CollisionError,
    IllegalInsertionError,
    IllegalOutError,
    InvalidSizeError,
    InvariantViolation,
)
from .tableau import Basis

Cell = tuple[int, int]

GATE_BLOCKS = ("H", "S", "CNOT", "CZ", "SWAP")
WIRE_KINDS = ("X2", "Y3")
MONOMINO_KINDS = ("MX", "MY", "MZ")
ALL_KINDS = GATE_BLOCKS + WIRE_KINDS + MONOMINO_KINDS

WIRE_BASES: dict[str, tuple[Basis, ...]] = {"X2": ("X", "X"), "Y3": ("Y", "Y", "Y")}


def _adjacent(a: Cell, b: Cell) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def _neighbors(c: Cell) -> tuple[Cell, ...]:
    r, k = c
    return ((r - 1, k), (r + 1, k), (r, k - 1), (r, k + 1))


@dataclass(frozen=True)
class Leg:
    """One logical qubit's path through a block.

    ``chain`` lists the colored tiles in flow order (empty for an in-place
    leg such as the CNOT control, whose In and Out are the same grey
    cell).  ``out`` is the committed rest cell; ``out_candidates`` are the
    cells the player may re-commit it to.
    """

    chain: tuple[tuple[Cell, Basis], ...]
    out: Cell
    out_candidates: tuple[Cell, ...] = ()

    @property
    def in_cell(self) -> Cell:
        return self.chain[0][0] if self.chain else self.out

    @property
    def terminal(self) -> Cell | None:
        """Last colored tile of the leg, None for in-place legs."""
        return self.chain[-1][0] if self.chain else None


@dataclass(frozen=True)
class Polyomino:
    """A placeable block: legs for gate/wire blocks, bare paint tiles for
    monominoes."""

    kind: str
    legs: tuple[Leg, ...] = ()
    paint: tuple[tuple[Cell, Basis], ...] = ()

    @property
    def arity(self) -> int:
        return len(self.legs)

    def colored(self) -> dict[Cell, Basis]:
        tiles: dict[Cell, Basis] = {}
        for leg in self.legs:
            for cell, basis in leg.chain:
                tiles[cell] = basis
        for cell, basis in self.paint:
            tiles[cell] = basis
        return tiles

    def grey_cells(self) -> set[Cell]:
        return {leg.out for leg in self.legs}

    def cells(self) -> set[Cell]:
        return set(self.colored()) | self.grey_cells()

    def in_cells(self) -> tuple[Cell, ...]:
        return tuple(leg.in_cell for leg in self.legs)

    def edges(self) -> set[frozenset]:
        cells = self.cells()
        return {
            frozenset((a, b))
            for a in cells
            for b in _neighbors(a)
            if b in cells
        }

    def tile_roles(self) -> dict[Cell, frozenset]:
        """Roles per cell: subsets of {'in', 'out', 'body'}."""
        roles: dict[Cell, set] = {c: set() for c in self.cells()}
        for leg in self.legs:
            roles[leg.in_cell].add("in")
            roles[leg.out].add("out")
        for cell in self.colored():
            if not roles[cell]:
                roles[cell].add("body")
        for cell in roles:
            if not roles[cell]:
                roles[cell].add("body")
        return {c: frozenset(s) for c, s in roles.items()}

    def validate(self) -> None:
        """Check structural invariants: distinct tiles, chain contiguity,
        outs adjacent to terminals, 4-connectivity of the whole block."""
        seen: set[Cell] = set()
        for leg in self.legs:
            for cell, _ in leg.chain:
                if cell in seen:
                    raise InvariantViolation(f"tile {cell} used twice")
                seen.add(cell)
        for cell, _ in self.paint:
            if cell in seen:
                raise InvariantViolation(f"tile {cell} used twice")
            seen.add(cell)
        outs = [leg.out for leg in self.legs]
        if len(set(outs)) != len(outs):
            raise InvariantViolation("two legs share an out tile")
        for leg in self.legs:
            if leg.out in self.colored():
                raise InvariantViolation(f"out {leg.out} collides with a colored tile")
            for (a, _), (b, _) in zip(leg.chain, leg.chain[1:]):
                if not _adjacent(a, b):
                    raise InvariantViolation(f"chain tiles {a}, {b} not adjacent")
            if leg.terminal is not None and not _adjacent(leg.terminal, leg.out):
                raise InvariantViolation(
                    f"out {leg.out} not adjacent to terminal {leg.terminal}"
                )
        cells = self.cells()
        if not cells:
            raise InvariantViolation("empty polyomino")
        stack = [next(iter(cells))]
        reached = {stack[0]}
        while stack:
            for nb in _neighbors(stack.pop()):
                if nb in cells and nb not in reached:
                    reached.add(nb)
                    stack.append(nb)
        if reached != cells:
            raise InvariantViolation("polyomino tiles are not edge-connected")


def _map_cells(p: Polyomino, f) -> Polyomino:
    legs = tuple(
        Leg(
            chain=tuple((f(c), b) for c, b in leg.chain),
            out=f(leg.out),
            out_candidates=tuple(f(c) for c in leg.out_candidates),
        )
        for leg in p.legs
    )
    paint = tuple((f(c), b) for c, b in p.paint)
    return Polyomino(p.kind, legs, paint)


def rotate(p: Polyomino) -> Polyomino:
    """Rotate 90 degrees: (row, col) -> (col, -row).  Bases and roles are
    unchanged; rotating four times is the identity."""
    return _map_cells(p, lambda c: (c[1], -c[0]))


def translate(p: Polyomino, dr: int, dc: int) -> Polyomino:
    return _map_cells(p, lambda c: (c[0] + dr, c[1] + dc))


def bounding_box(p: Polyomino) -> tuple[Cell, Cell]:
    cells = p.cells()
    rows = [c[0] for c in cells]
    cols = [c[1] for c in cells]
    return (min(rows), min(cols)), (max(rows), max(cols))


def insert_wire(p: Polyomino, after: Cell, wire: str) -> Polyomino:
    """Splice a wire into a leg right after the colored tile ``after``.

    The wire sits between ``after`` and its flow successor (the next chain
    tile, or the leg's rest cell when ``after`` is the terminal); every
    tile from the successor onward shifts to make room.  Insertion is
    rejected when ``after`` has more than two neighboring tiles, when the
    shift would overlap tiles, or when it would change any other tile
    adjacency (which would alter the block's function).
    """
    if wire not in WIRE_BASES:
        raise InvalidSizeError(f"unknown wire kind {wire!r}")
    bases = WIRE_BASES[wire]
    leg_idx = pos = None
    for li, leg in enumerate(p.legs):
        for i, (cell, _) in enumerate(leg.chain):
            if cell == after:
                leg_idx, pos = li, i
                break
        if leg_idx is not None:
            break
    if leg_idx is None:
        raise IllegalInsertionError(
            f"wires can only follow a colored flow tile, not {after}"
        )
    cells = p.cells()
    degree = sum(1 for nb in _neighbors(after) if nb in cells)
    if degree > 2:
        raise IllegalInsertionError(
            f"tile {after} has {degree} neighbors; wires may only follow "
            "tiles with at most two"
        )
    leg = p.legs[leg_idx]
    succ = leg.chain[pos + 1][0] if pos + 1 < len(leg.chain) else leg.out
    d = (succ[0] - after[0], succ[1] - after[1])
    k = len(bases)
    shift = (d[0] * k, d[1] * k)

    # Downstream component: everything reachable from the successor without
    # using the (after, succ) edge.  If `after` itself is reachable the edge
    # lies on a cycle and a rigid shift would tear other adjacencies.
    comp = {succ}
    stack = [succ]
    while stack:
        cur = stack.pop()
        for nb in _neighbors(cur):
            if nb in cells and nb not in comp:
                if frozenset((cur, nb)) == frozenset((after, succ)):
                    continue
                comp.add(nb)
                stack.append(nb)
    if after in comp:
        raise IllegalInsertionError(
            f"insertion after {after} would tear a tile cycle"
        )

    def move(c: Cell) -> Cell:
        return (c[0] + shift[0], c[1] + shift[1]) if c in comp else c

    wire_tiles = tuple(
        ((after[0] + d[0] * (j + 1), after[1] + d[1] * (j + 1)), bases[j])
        for j in range(k)
    )
    new_legs = []
    for li, old in enumerate(p.legs):
        chain = tuple((move(c), b) for c, b in old.chain)
        if li == leg_idx:
            chain = chain[: pos + 1] + wire_tiles + chain[pos + 1 :]
        shift_cands = old.out in comp
        new_legs.append(
            Leg(
                chain=chain,
                out=move(old.out),
                out_candidates=tuple(
                    (c[0] + shift[0], c[1] + shift[1]) if shift_cands else c
                    for c in old.out_candidates
                ),
            )
        )
    result = Polyomino(p.kind, tuple(new_legs), tuple((move(c), b) for c, b in p.paint))

    new_cells = result.cells()
    if len(new_cells) != len(cells) + k:
        raise CollisionError("wire insertion overlaps existing tiles")
    expected = {frozenset((move(a), move(b))) for e in p.edges() for a, b in [tuple(e)]}
    expected.discard(frozenset((after, move(succ))))
    expected.discard(frozenset((after, succ)))
    chain_cells = [after] + [c for c, _ in wire_tiles] + [move(succ)]
    expected |= {frozenset(pair) for pair in zip(chain_cells, chain_cells[1:])}
    if result.edges() != expected:
        raise IllegalInsertionError(
            "wire insertion would change the block's tile neighborhoods"
        )
    result.validate()
    return result


def choose_out(p: Polyomino, cell: Cell) -> Polyomino:
    """Commit a leg's Out tile to ``cell``.

    The cell must be one of the leg's allowed out candidates, 4-adjacent
    to the leg's terminal colored tile, and must touch exactly one tile of
    the block once its old out is vacated.  In-place legs (CNOT control)
    have a fixed out.
    """
    for li, leg in enumerate(p.legs):
        if cell in leg.out_candidates and leg.terminal is not None:
            others = p.cells() - {leg.out}
            touching = {c for c in _neighbors(cell) if c in others}
            if touching != {leg.terminal}:
                raise IllegalOutError(
                    f"out tile {cell} must touch only the leg's last colored tile"
                )
            new_leg = replace(leg, out=cell)
            legs = p.legs[:li] + (new_leg,) + p.legs[li + 1 :]
            result = Polyomino(p.kind, legs, p.paint)
            result.validate()
            return result
    raise IllegalOutError(
        f"{cell} is not an allowed out position for any leg of this block"
    )


def neighborhood_equivalent(a: Polyomino, b: Polyomino) -> bool:
    """Structural deformation test: true when a basis/role-preserving
    bijection between the blocks' tiles also preserves each tile's
    multiset of non-green neighbor bases (direction-insensitive)."""

    def signature(p: Polyomino):
        colored = p.colored()
        roles = p.tile_roles()
        cells = p.cells()

        def tile_sig(c: Cell):
            nb = sorted(
                colored.get(x, "grey") for x in _neighbors(c) if x in cells
            )
            return (colored.get(c, "grey"), tuple(sorted(roles[c])), tuple(nb))

        return sorted(tile_sig(c) for c in cells)

    return signature(a) == signature(b)


def _leg(cells: list[tuple[Cell, Basis]], out: Cell, candidates: list[Cell]) -> Leg:
    return Leg(chain=tuple(cells), out=out, out_candidates=tuple(candidates))


@lru_cache(maxsize=None)
def _library() -> dict[str, Polyomino]:
    lib = {
        "H": Polyomino(
            "H",
            legs=(
                _leg(
                    [((0, 0), "X")],
                    (0, 1),
                    [(0, 1), (1, 0), (-1, 0), (0, -1)],
                ),
            ),
        ),
        "S": Polyomino(
            "S",
            legs=(
                _leg(
                    [((0, 0), "Y"), ((0, 1), "X")],
                    (0, 2),
                    [(0, 2), (-1, 1), (1, 1)],
                ),
            ),
        ),
        "X2": Polyomino(
            "X2",
            legs=(
                _leg(
                    [((0, 0), "X"), ((0, 1), "X")],
                    (0, 2),
                    [(0, 2), (-1, 1), (1, 1)],
                ),
            ),
        ),
        "Y3": Polyomino(
            "Y3",
            legs=(
                _leg(
                    [((0, 0), "Y"), ((0, 1), "Y"), ((0, 2), "Y")],
                    (0, 3),
                    [(0, 3), (-1, 2), (1, 2)],
                ),
            ),
        ),
        # Controlled-phase: both wires point at a pair of adjacent rest
        # cells; the lattice edge between the outs is the gate.
        "CZ": Polyomino(
            "CZ",
            legs=(
                _leg([((0, 0), "X"), ((0, 1), "X")], (0, 2), [(0, 2)]),
                _leg([((0, 5), "X"), ((0, 4), "X")], (0, 3), [(0, 3)]),
            ),
        ),
        # CNOT: the control rests on a grey tile (In = Out) hanging off the
        # target wire's second tile; only the In/Out marks distinguish the
        # colored part from a plain blue wire.
        "CNOT": Polyomino(
            "CNOT",
            legs=(
                _leg([], (1, 1), [(1, 1)]),
                _leg([((0, 0), "X"), ((0, 1), "X")], (0, 2), [(0, 2), (-1, 1)]),
            ),
        ),
        # SWAP = three alternating in-place CNOTs; every tile adjacency in
        # the 2x5 footprint is one of their chain or control edges.
        "SWAP": Polyomino(
            "SWAP",
            legs=(
                _leg(
                    [((1, 0), "X"), ((1, 1), "X"), ((1, 2), "X"), ((1, 3), "X")],
                    (1, 4),
                    [(1, 4), (2, 3)],
                ),
                _leg([((0, 1), "X"), ((0, 2), "X")], (0, 3), [(0, 3)]),
            ),
        ),
        "MX": Polyomino("MX", paint=(((0, 0), "X"),)),
        "MY": Polyomino("MY", paint=(((0, 0), "Y"),)),
        "MZ": Polyomino("MZ", paint=(((0, 0), "Z"),)),
    }
    for p in lib.values():
        p.validate()
    return lib


def minimal_pattern(kind: str) -> Polyomino:
    """Library block for a gate kind; ``I`` returns the blue wire."""
    if kind == "I":
        kind = "X2"
    lib = _library()
    if kind not in lib:
        raise InvalidSizeError(f"no library pattern for kind {kind!r}")
    return lib[kind]


def wire_pattern(kind: str) -> Polyomino:
    if kind not in WIRE_KINDS:
        raise InvalidSizeError(f"unknown wire kind {kind!r}")
    return _library()[kind]


def monomino(basis: Basis) -> Polyomino:
    key = f"M{basis}"
    if key not in MONOMINO_KINDS:
        raise InvalidSizeError(f"unknown monomino basis {basis!r}")
    return _library()[key]


#: Circuit gate implemented by each placeable block kind (wires act as I).
BLOCK_GATE = {
    "H": "H",
    "S": "S",
    "CNOT": "CNOT",
    "CZ": "CZ",
    "SWAP": "SWAP",
    "X2": "I",
    "Y3": "I",
}


@lru_cache(maxsize=None)
def certify_library() -> bool:
    """Semantic self-test: every library block, alone on its minimal
    enclosing grid, evaluates as its gate (unsigned).  Raises on failure;
    returns True so callers can assert it."""
    from .board import Board, mark_outputs, place_block
    from .circuit import Circuit
    from .cluster import Grid
    from .evaluator import evaluate
    from .tableau import Gate

    for kind, gate_kind in BLOCK_GATE.items():
        block = _library()[kind]
        (minr, minc), (maxr, maxc) = bounding_box(block)
        grid = Grid(width=maxc - minc + 1, height=maxr - minr + 1)
        anchor = (1 - minr, 1 - minc)
        board = place_block(Board.empty(grid), kind, anchor)
        placed = board.placements[-1].shape
        marks = [(leg.out, i + 1) for i, leg in enumerate(placed.legs)]
        board = mark_outputs(board, marks)
        arity = block.arity
        circuit = Circuit(arity, (Gate(gate_kind, tuple(range(1, arity + 1))),))
        result = evaluate(board, circuit)
        if not result.correct:
            raise InvariantViolation(
                f"library block {kind} failed certification: {result.diagnostics}"
            )
    return True
