"""Clifford circuit representation, JSON parsing, and simulation.

Circuit files are JSON objects::

    {"n": 2, "gates": [{"g": "H", "q": [1]}, {"g": "CZ", "q": [1, 2]}]}

Qubits are 1-based; CNOT lists (control, target); CZ and SWAP are
order-insensitive.  Circuits act on the fixed input state |+>^n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ParseError
from .tableau import GATE_ARITY, Gate, Tableau, _apply_gate_inplace, new_plus_tableau


@dataclass(frozen=True)
class Circuit:
    """An ordered list of Clifford gates over n logical qubits."""

    n: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 1:
            raise ParseError(f"qubit count must be >= 1, got {self.n}", "n")
        for i, gate in enumerate(self.gates):
            for q in gate.qubits:
                if not 1 <= q <= self.n:
                    raise ParseError(
                        f"qubit {q} out of range 1..{self.n}", f"gates[{i}].q"
                    )


def parse_circuit(source: str | dict) -> Circuit:
    """Parse a circuit from JSON text or an already-decoded object."""
    if isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from exc
    else:
        data = source
    if not isinstance(data, dict):
        raise ParseError("circuit file must be a JSON object")
    if "n" not in data or not isinstance(data["n"], int):
        raise ParseError("missing or non-integer qubit count", "n")
    raw_gates = data.get("gates", [])
    if not isinstance(raw_gates, list):
        raise ParseError("gates must be a list", "gates")
    gates = []
    for i, item in enumerate(raw_gates):
        loc = f"gates[{i}]"
        if not isinstance(item, dict) or "g" not in item or "q" not in item:
            raise ParseError("each gate needs 'g' and 'q' fields", loc)
        kind = item["g"]
        if kind not in GATE_ARITY:
            raise ParseError(f"unknown gate name {kind!r}", f"{loc}.g")
        qubits = item["q"]
        if not isinstance(qubits, list) or not all(isinstance(q, int) for q in qubits):
            raise ParseError("qubit targets must be a list of integers", f"{loc}.q")
        if len(qubits) != GATE_ARITY[kind]:
            raise ParseError(
                f"{kind} takes {GATE_ARITY[kind]} target(s), got {len(qubits)}",
                f"{loc}.q",
            )
        if len(set(qubits)) != len(qubits):
            raise ParseError("duplicate qubit targets", f"{loc}.q")
        for q in qubits:
            if q < 1 or q > data["n"]:
                raise ParseError(f"qubit {q} out of range 1..{data['n']}", f"{loc}.q")
        gates.append(Gate(kind, tuple(qubits)))
    return Circuit(data["n"], tuple(gates))


def circuit_to_json(c: Circuit) -> dict:
    return {
        "n": c.n,
        "gates": [{"g": g.kind, "q": list(g.qubits)} for g in c.gates],
    }


def simulate_circuit(c: Circuit) -> Tableau:
    """Apply the circuit's gates left to right to |+>^n and return the
    resulting tableau."""
    t = new_plus_tableau(c.n)
    for gate in c.gates:
        _apply_gate_inplace(t, gate)
    return t
