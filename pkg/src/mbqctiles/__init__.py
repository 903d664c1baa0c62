"""MBQC polyomino puzzle engine: map Clifford circuits to measurement
patterns on square-grid cluster states, verify player boards with a
stabilizer tableau simulator, and score them by covered area."""

from .canonical import ComparisonMode, extract_subsystem, groups_equal, reduce
from .circuit import Circuit, circuit_to_json, parse_circuit, simulate_circuit
from .cluster import Grid, build_cluster_tableau
from .tableau import (
    Basis,
    Gate,
    OutcomePolicy,
    PauliRow,
    Tableau,
    apply_gate,
    g_phase,
    measure_pauli,
    new_plus_tableau,
    rowsum,
)

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "Circuit",
    "ComparisonMode",
    "Gate",
    "Grid",
    "OutcomePolicy",
    "PauliRow",
    "Tableau",
    "apply_gate",
    "build_cluster_tableau",
    "circuit_to_json",
    "extract_subsystem",
    "g_phase",
    "groups_equal",
    "measure_pauli",
    "new_plus_tableau",
    "parse_circuit",
    "reduce",
    "rowsum",
    "simulate_circuit",
    "__version__",
]
