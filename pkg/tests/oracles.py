"""Independent brute-force oracles the engine is tested against.

Two deliberately separate implementations live here:

* ``DenseState``: a dense state-vector simulator (numpy matrices, explicit
  projectors) for circuits and post-selected measurements on up to ~8
  qubits.
* ``PauliTerm``: symbolic Pauli strings with exact i^k phase arithmetic,
  used to cross-check the tableau's rowsum/g bookkeeping and to enumerate
  full stabilizer groups element by element.

Neither shares code with the tableau path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)

GATE_MATRICES = {"H": H, "S": S, "I": I2, "CNOT": CNOT, "CZ": CZ, "SWAP": SWAP}
PAULI_MATRICES = {"I": I2, "X": X, "Y": Y, "Z": Z}


def _embed(u: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Full 2^n matrix for a 1- or 2-qubit gate on 1-based qubits, with
    qubit 1 as the most significant tensor factor."""
    k = len(qubits)
    full = np.zeros((2**n, 2**n), dtype=complex)
    axes = [q - 1 for q in qubits]
    for col in range(2**n):
        bits = [(col >> (n - 1 - j)) & 1 for j in range(n)]
        sub_in = 0
        for a in axes:
            sub_in = (sub_in << 1) | bits[a]
        for sub_out in range(2**k):
            amp = u[sub_out, sub_in]
            if amp == 0:
                continue
            out_bits = bits[:]
            for idx, a in enumerate(axes):
                out_bits[a] = (sub_out >> (k - 1 - idx)) & 1
            row = 0
            for bit in out_bits:
                row = (row << 1) | bit
            full[row, col] += amp
    return full


def pauli_string_matrix(labels: str) -> np.ndarray:
    m = np.array([[1]], dtype=complex)
    for ch in labels:
        m = np.kron(m, PAULI_MATRICES[ch])
    return m


class DenseState:
    """Dense state-vector simulator over 1-based qubits."""

    def __init__(self, n: int):
        self.n = n
        self.psi = np.zeros(2**n, dtype=complex)
        self.psi[:] = 1 / np.sqrt(2**n)  # |+>^n

    def apply(self, kind: str, qubits: tuple[int, ...]) -> None:
        self.psi = _embed(GATE_MATRICES[kind], qubits, self.n) @ self.psi

    def measure(self, q: int, basis: str, force_plus: bool = True) -> int:
        """Project qubit q onto a +/-1 eigenspace of the basis Pauli.

        Prefers +1 when possible (mirroring the engine's post-selection);
        deterministically -1 outcomes project onto -1.
        """
        op = _embed(PAULI_MATRICES[basis], (q,), self.n)
        plus = (np.eye(2**self.n) + op) / 2
        proj = plus @ self.psi
        if np.linalg.norm(proj) > 1e-12 and force_plus:
            self.psi = proj / np.linalg.norm(proj)
            return +1
        minus = (np.eye(2**self.n) - op) / 2
        proj = minus @ self.psi
        if np.linalg.norm(proj) < 1e-12:
            raise AssertionError("both projections vanished")
        self.psi = proj / np.linalg.norm(proj)
        return -1

    def projector(self) -> np.ndarray:
        return np.outer(self.psi, self.psi.conj())


@dataclass(frozen=True)
class PauliTerm:
    """i^phase * (Pauli string); phase is mod 4."""

    phase: int
    labels: tuple[str, ...]

    SINGLE = {
        ("I", "I"): (0, "I"), ("I", "X"): (0, "X"), ("I", "Y"): (0, "Y"), ("I", "Z"): (0, "Z"),
        ("X", "I"): (0, "X"), ("X", "X"): (0, "I"), ("X", "Y"): (1, "Z"), ("X", "Z"): (3, "Y"),
        ("Y", "I"): (0, "Y"), ("Y", "X"): (3, "Z"), ("Y", "Y"): (0, "I"), ("Y", "Z"): (1, "X"),
        ("Z", "I"): (0, "Z"), ("Z", "X"): (1, "Y"), ("Z", "Y"): (3, "X"), ("Z", "Z"): (0, "I"),
    }

    def __mul__(self, other: "PauliTerm") -> "PauliTerm":
        phase = (self.phase + other.phase) % 4
        labels = []
        for a, b in zip(self.labels, other.labels):
            dp, lab = self.SINGLE[(a, b)]
            phase = (phase + dp) % 4
            labels.append(lab)
        return PauliTerm(phase, tuple(labels))

    def commutes(self, other: "PauliTerm") -> bool:
        anti = sum(
            1
            for a, b in zip(self.labels, other.labels)
            if a != "I" and b != "I" and a != b
        )
        return anti % 2 == 0

    def matrix(self) -> np.ndarray:
        return (1j**self.phase) * pauli_string_matrix("".join(self.labels))

    @classmethod
    def from_bits(cls, xbits, zbits, r: int) -> "PauliTerm":
        """A tableau row as a symbolic term: (x, z) = (1, 1) encodes the
        Hermitian Y and r contributes (-1)^r."""
        table = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
        labels = tuple(
            table[(int(xb), int(zb))] for xb, zb in zip(xbits, zbits)
        )
        return cls((2 * int(r)) % 4, labels)

    @classmethod
    def identity(cls, n: int) -> "PauliTerm":
        return cls(0, tuple("I" for _ in range(n)))


def tableau_group(tab) -> set[PauliTerm]:
    """All 2^n signed elements generated by a tableau's stabilizer rows."""
    n = tab.n
    gens = [
        PauliTerm.from_bits(tab.x[n + i], tab.z[n + i], int(tab.r[n + i]))
        for i in range(n)
    ]
    group = set()
    for picks in itertools.product((0, 1), repeat=n):
        term = PauliTerm.identity(n)
        for g, pick in zip(gens, picks):
            if pick:
                term = term * g
        group.add(term)
    return group


def stabilizer_projector(tab) -> np.ndarray:
    """(1/2^n) sum of all stabilizer group elements as dense matrices."""
    n = tab.n
    total = np.zeros((2**n, 2**n), dtype=complex)
    for term in tableau_group(tab):
        total += term.matrix()
    return total / 2**n


def random_circuit(rng: np.random.Generator, n: int, length: int):
    """Random gate list over the engine's gate set (as (kind, qubits))."""
    kinds1 = ["H", "S", "I"]
    kinds2 = ["CNOT", "CZ", "SWAP"]
    gates = []
    for _ in range(length):
        if n >= 2 and rng.integers(0, 2) == 1:
            kind = kinds2[rng.integers(0, len(kinds2))]
            a, b = rng.choice(n, size=2, replace=False) + 1
            gates.append((kind, (int(a), int(b))))
        else:
            kind = kinds1[rng.integers(0, len(kinds1))]
            gates.append((kind, (int(rng.integers(1, n + 1)),)))
    return gates
