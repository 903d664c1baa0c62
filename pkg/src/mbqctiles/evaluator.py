"""Execute a finished board as cluster-state measurements and verify it.

The pipeline: build the grid's cluster-state tableau, measure every
measured cell (colored tiles in their basis, plain cells in Z, with
outcomes post-selected on +1 by default), reduce, extract the tableau of
the marked output qubits in logical order, and compare its stabilizer
group against the reference circuit's output tableau.  Grey (unmeasured)
tiles that the player left unmarked stay in the system; outputs that
remain entangled with them are reported as such.

Scoring: covered_fraction = non-green cells / grid area, and
score = 1 - covered_fraction for a correct board (0 otherwise), so
smaller measurement patterns rank higher.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .board import Board
from .canonical import (
    ComparisonMode,
    contains_row,
    extract_subsystem,
    groups_equal,
    reduce,
)
from .circuit import Circuit, simulate_circuit
from .cluster import build_cluster_tableau
from .errors import EntangledOutputError, MarkingError, PuzzleError
from .tableau import Basis, OutcomePolicy, measure_pauli


@dataclass(frozen=True)
class VerificationResult:
    correct: bool
    mode: ComparisonMode
    covered_fraction: Fraction
    score: Fraction
    diagnostics: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "correct": self.correct,
            "mode": self.mode.value,
            "covered_fraction": str(self.covered_fraction),
            "score": str(self.score),
            "covered_float": float(self.covered_fraction),
            "score_float": float(self.score),
            "diagnostics": list(self.diagnostics),
        }


def board_to_measurements(board: Board) -> list[tuple[int, Basis]]:
    """The measurement list for a finished board, in row-major qubit order.

    Colored cells are measured in their tile basis and every untouched cell
    in Z; marked outputs and grey (unmeasured) tiles are excluded.
    """
    if not board.outputs:
        raise MarkingError("outputs must be marked before evaluation")
    colored = board.colored_cells()
    grey = board.grey_cells()
    marked = {c for c, _ in board.outputs}
    out: list[tuple[int, Basis]] = []
    for cell in board.grid.cells():
        if cell in marked or (cell in grey and cell not in colored):
            continue
        out.append((board.grid.cell_index(cell), colored.get(cell, "Z")))
    return out


def score_board(board: Board) -> tuple[Fraction, Fraction]:
    """(covered_fraction, score) with score = 1 - covered_fraction.

    ``evaluate`` zeroes the score for incorrect boards; this standalone
    helper reports the formula value only.
    """
    covered = Fraction(len(board.covered_cells()), board.grid.size)
    return covered, 1 - covered


def evaluate(
    board: Board,
    circuit: Circuit,
    mode: ComparisonMode = ComparisonMode.UNSIGNED,
    policy: OutcomePolicy | None = None,
) -> VerificationResult:
    """Verify a board against a circuit.

    A merely-wrong board yields ``correct=False`` with diagnostics; only
    malformed inputs raise.
    """
    covered, score = score_board(board)
    diags: list[str] = []

    def incorrect(*messages: str) -> VerificationResult:
        return VerificationResult(
            correct=False,
            mode=mode,
            covered_fraction=covered,
            score=Fraction(0),
            diagnostics=tuple(diags + list(messages)),
        )

    n_marked = len(board.outputs)
    if n_marked != circuit.n:
        return incorrect(
            f"board marks {n_marked} outputs but the circuit has {circuit.n} qubits"
        )
    try:
        measurements = board_to_measurements(board)
    except MarkingError as exc:
        return incorrect(str(exc))

    if policy is None:
        policy = OutcomePolicy.plus_one()
    state = build_cluster_tableau(board.grid)
    for qubit, basis in measurements:
        state, _, _ = measure_pauli(state, qubit, basis, policy)

    output_cells = [board.output_map()[q] for q in range(1, circuit.n + 1)]
    output_qubits = [board.grid.cell_index(c) for c in output_cells]
    try:
        got = extract_subsystem(state, output_qubits)
    except EntangledOutputError as exc:
        return incorrect(f"entangled outputs: {exc}")
    except PuzzleError as exc:
        return incorrect(str(exc))

    want = reduce(simulate_circuit(circuit))
    if groups_equal(got, want, mode):
        return VerificationResult(
            correct=True,
            mode=mode,
            covered_fraction=covered,
            score=score,
            diagnostics=tuple(diags),
        )
    # Witness: a canonical generator of the board's output group that the
    # circuit's group does not contain.
    got_reduced = reduce(got)
    witness = None
    n = got_reduced.n
    for i in range(n):
        if not contains_row(
            want,
            got_reduced.x[n + i],
            got_reduced.z[n + i],
            int(got_reduced.r[n + i]),
            mode,
        ):
            witness = got_reduced.row(n + i + 1).label()
            break
    msg = "output stabilizers do not match the circuit"
    if witness is not None:
        msg += f"; witness generator {witness} is not a circuit stabilizer"
    return incorrect(msg)
