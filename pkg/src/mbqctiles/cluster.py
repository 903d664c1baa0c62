"""Square-grid cluster states: grid indexing and the stabilizer tableau.

A W x H grid hosts one qubit per cell, numbered row-major and 1-based:
cell (row, col) -> (row - 1) * W + col.  The cluster state stabilizer for
cell i is X_i with a Z on every 4-neighbor; equivalently, |+> on every
cell followed by a CZ on every lattice edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSizeError, QubitIndexError
from .tableau import Tableau

Cell = tuple[int, int]


@dataclass(frozen=True)
class Grid:
    """Grid dimensions plus the cell <-> qubit-id bijection."""

    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise InvalidSizeError(
                f"grid must be at least 1x1, got {self.width}x{self.height}"
            )

    @property
    def size(self) -> int:
        return self.width * self.height

    def contains(self, cell: Cell) -> bool:
        r, c = cell
        return 1 <= r <= self.height and 1 <= c <= self.width

    def cell_index(self, cell: Cell) -> int:
        if not self.contains(cell):
            raise QubitIndexError(f"cell {cell} outside {self.width}x{self.height} grid")
        r, c = cell
        return (r - 1) * self.width + c

    def index_cell(self, q: int) -> Cell:
        if not 1 <= q <= self.size:
            raise QubitIndexError(f"qubit {q} out of range 1..{self.size}")
        return ((q - 1) // self.width + 1, (q - 1) % self.width + 1)

    def cells(self) -> list[Cell]:
        return [(r, c) for r in range(1, self.height + 1) for c in range(1, self.width + 1)]

    def neighbors(self, cell: Cell) -> list[Cell]:
        r, c = cell
        return [
            (nr, nc)
            for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1))
            if self.contains((nr, nc))
        ]

    def edges(self) -> list[tuple[Cell, Cell]]:
        """All lattice edges, each listed once."""
        out = []
        for r in range(1, self.height + 1):
            for c in range(1, self.width + 1):
                if c < self.width:
                    out.append(((r, c), (r, c + 1)))
                if r < self.height:
                    out.append(((r, c), (r + 1, c)))
        return out


def build_cluster_tableau(grid: Grid) -> Tableau:
    """Stabilizer tableau of the cluster state on ``grid``.

    Stabilizer row i is X_i Z_N(i); destabilizer i is Z_i; all phases +1.
    """
    n = grid.size
    x = np.zeros((2 * n, n), dtype=np.uint8)
    z = np.zeros((2 * n, n), dtype=np.uint8)
    r = np.zeros(2 * n, dtype=np.uint8)
    for cell in grid.cells():
        i = grid.cell_index(cell) - 1
        z[i, i] = 1
        x[n + i, i] = 1
        for nb in grid.neighbors(cell):
            z[n + i, grid.cell_index(nb) - 1] = 1
    return Tableau(x, z, r)
