"""Stabilizer tableau simulation of Clifford gates and Pauli measurements.

An n-qubit stabilizer state is stored as a 2n x (2n+1) bit matrix: rows
0..n-1 are destabilizer generators, rows n..2n-1 are stabilizer generators.
Each row holds x-bits, z-bits and a phase bit r, and represents the Pauli
operator ``(-1)^r  P_1 ... P_n`` where ``P_j`` is I, X, Z, Y for
(x, z) = (0,0), (1,0), (0,1), (1,1).  Phases are tracked exactly through
row multiplication (``rowsum``) via the four-case ``g_phase`` function, so
products of commuting rows always land back on a +/-1 phase.

Qubit and row indices are 1-based in the public API.  All public operations
are value-semantic: they return a new tableau and never mutate their input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .errors import InvalidSizeError, InvariantViolation, QubitIndexError

GATE_ARITY = {"H": 1, "S": 1, "I": 1, "CNOT": 2, "CZ": 2, "SWAP": 2}

#: Measurement bases, rendered in the game as blue / orange / green tiles.
BASES = ("X", "Y", "Z")

Basis = Literal["X", "Y", "Z"]


@dataclass(frozen=True)
class Gate:
    """A Clifford gate application: kind plus 1-based target qubits.

    For CNOT the qubit order is (control, target); CZ and SWAP are
    symmetric.
    """

    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise InvalidSizeError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != GATE_ARITY[self.kind]:
            raise InvalidSizeError(
                f"{self.kind} takes {GATE_ARITY[self.kind]} qubit(s), "
                f"got {self.qubits}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise InvalidSizeError(f"{self.kind} targets must be distinct")


@dataclass(frozen=True)
class PauliRow:
    """One tableau row: the Pauli ``(-1)^r prod_j X^x_j Z^z_j``."""

    x: tuple[int, ...]
    z: tuple[int, ...]
    r: int

    def label(self) -> str:
        """Human-readable form like ``-X1Z3`` (identity renders as ``+I``)."""
        sign = "-" if self.r else "+"
        parts = []
        for j, (xb, zb) in enumerate(zip(self.x, self.z), start=1):
            p = {(0, 0): "", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}[(xb, zb)]
            if p:
                parts.append(f"{p}{j}")
        return sign + ("".join(parts) or "I")


class OutcomePolicy:
    """Decides the outcome of non-deterministic measurements.

    ``plus_one`` post-selects every random outcome on +1 (the convention
    used when verifying boards).  ``random`` draws seeded fair coins, used
    to exercise sign byproducts in tests.
    """

    def __init__(self, kind: str, seed: int | None = None):
        if kind not in ("plus_one", "random"):
            raise InvalidSizeError(f"unknown outcome policy {kind!r}")
        self.kind = kind
        self.seed = seed
        self._rng = np.random.default_rng(seed) if kind == "random" else None

    @classmethod
    def plus_one(cls) -> "OutcomePolicy":
        return cls("plus_one")

    @classmethod
    def random(cls, seed: int | None = None) -> "OutcomePolicy":
        return cls("random", seed)

    def draw(self) -> int:
        """Return +1 or -1 for a random-outcome measurement."""
        if self._rng is None:
            return +1
        return +1 if self._rng.integers(0, 2) == 0 else -1


class Tableau:
    """Destabilizer/stabilizer tableau for an n-qubit pure stabilizer state.

    Attributes:
        n: Qubit count.
        x, z: uint8 arrays of shape (2n, n); rows 0..n-1 are destabilizers,
            rows n..2n-1 stabilizers.
        r: uint8 array of length 2n; phase bits (0 -> +1, 1 -> -1).
    """

    __slots__ = ("n", "x", "z", "r")

    def __init__(self, x: np.ndarray, z: np.ndarray, r: np.ndarray):
        n = x.shape[1]
        if x.shape != (2 * n, n) or z.shape != (2 * n, n) or r.shape != (2 * n,):
            raise InvalidSizeError("tableau arrays have inconsistent shapes")
        self.n = n
        self.x = x
        self.z = z
        self.r = r

    @classmethod
    def from_arrays(
        cls, x: Iterable, z: Iterable, r: Iterable, validate: bool = True
    ) -> "Tableau":
        """Build a tableau from raw bit rows (copied).

        With ``validate`` the commutation and rank invariants are checked;
        tests use ``validate=False`` to build deliberately odd tableaus.
        """
        t = cls(
            np.array(x, dtype=np.uint8) & 1,
            np.array(z, dtype=np.uint8) & 1,
            np.array(r, dtype=np.uint8) & 1,
        )
        if validate:
            t.check_invariants()
        return t

    def copy(self) -> "Tableau":
        return Tableau(self.x.copy(), self.z.copy(), self.r.copy())

    def stabilizers(self) -> list[PauliRow]:
        return [self.row(i) for i in range(self.n + 1, 2 * self.n + 1)]

    def destabilizers(self) -> list[PauliRow]:
        return [self.row(i) for i in range(1, self.n + 1)]

    def row(self, i: int) -> PauliRow:
        """Return row ``i`` (1-based, destabilizers first)."""
        if not 1 <= i <= 2 * self.n:
            raise QubitIndexError(f"row {i} out of range 1..{2 * self.n}")
        k = i - 1
        return PauliRow(
            tuple(int(b) for b in self.x[k]),
            tuple(int(b) for b in self.z[k]),
            int(self.r[k]),
        )

    def stabilizer_labels(self) -> list[str]:
        return [row.label() for row in self.stabilizers()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tableau):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
            and np.array_equal(self.r, other.r)
        )

    def __repr__(self) -> str:
        return f"Tableau(n={self.n}, stabilizers={self.stabilizer_labels()})"

    # -- invariants ----------------------------------------------------

    def check_invariants(self) -> None:
        """Raise InvariantViolation unless this is a valid tableau.

        Checks: stabilizers pairwise commute, destabilizer i anticommutes
        with stabilizer i and commutes with every other stabilizer, and the
        combined 2n x 2n bit matrix has full rank over GF(2).
        """
        n = self.n
        sx, sz = self.x[n:], self.z[n:]
        dx, dz = self.x[:n], self.z[:n]
        stab_prod = (sx @ sz.T + sz @ sx.T) % 2
        if stab_prod.any():
            raise InvariantViolation("stabilizer rows do not all commute")
        pair_prod = (dx @ sz.T + dz @ sx.T) % 2
        if not np.array_equal(pair_prod, np.eye(n, dtype=pair_prod.dtype)):
            raise InvariantViolation("destabilizer pairing is broken")
        m = np.concatenate([self.x, self.z], axis=1)
        if gf2_rank(m) != 2 * n:
            raise InvariantViolation("tableau bit matrix is rank deficient")


def gf2_rank(m: np.ndarray) -> int:
    """Rank of a binary matrix over GF(2) (XOR Gaussian elimination)."""
    a = (np.array(m, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        pivots = np.nonzero(a[rank:, c])[0]
        if pivots.size == 0:
            continue
        p = rank + pivots[0]
        if p != rank:
            a[[rank, p]] = a[[p, rank]]
        for i in range(rows):
            if i != rank and a[i, c]:
                a[i] ^= a[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def new_plus_tableau(n: int) -> Tableau:
    """Tableau of the product state |+>^n.

    Destabilizers are Z_1..Z_n, stabilizers X_1..X_n, all phases +1.
    """
    if n < 1:
        raise InvalidSizeError(f"qubit count must be >= 1, got {n}")
    x = np.zeros((2 * n, n), dtype=np.uint8)
    z = np.zeros((2 * n, n), dtype=np.uint8)
    r = np.zeros(2 * n, dtype=np.uint8)
    eye = np.eye(n, dtype=np.uint8)
    z[:n] = eye
    x[n:] = eye
    return Tableau(x, z, r)


def g_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent of i contributed by multiplying single-qubit Paulis.

    Arguments are the (x, z) bits of the left factor followed by those of
    the right factor; the result is -1, 0 or +1.
    """
    if x1 == 0 and z1 == 0:
        return 0
    if x1 == 0 and z1 == 1:
        return x2 * (1 - 2 * z2)
    if x1 == 1 and z1 == 0:
        return z2 * (2 * x2 - 1)
    return z2 - x2


def _g_total(xk, zk, xh, zh) -> int:
    """Sum of g_phase over all qubit positions, vectorized."""
    xk = xk.astype(np.int64)
    zk = zk.astype(np.int64)
    xh = xh.astype(np.int64)
    zh = zh.astype(np.int64)
    g = np.where(
        (xk == 0) & (zk == 0),
        0,
        np.where(
            (xk == 0) & (zk == 1),
            xh * (1 - 2 * zh),
            np.where((xk == 1) & (zk == 0), zh * (2 * xh - 1), zh - xh),
        ),
    )
    return int(g.sum())


def _rowsum_inplace(t: Tableau, h: int, k: int, tolerant: bool = False) -> None:
    """Row h <- row h * row k (0-based), with exact phase tracking.

    ``p = 2 r_h + 2 r_k + sum_j g(...)`` must be 0 or 2 mod 4 for commuting
    rows.  ``tolerant`` is used for destabilizer targets, whose phases are
    never observable: an odd p there is silently mapped to phase 0.
    """
    p = 2 * int(t.r[h]) + 2 * int(t.r[k]) + _g_total(t.x[k], t.z[k], t.x[h], t.z[h])
    t.x[h] ^= t.x[k]
    t.z[h] ^= t.z[k]
    p %= 4
    if p == 0:
        t.r[h] = 0
    elif p == 2:
        t.r[h] = 1
    elif tolerant:
        t.r[h] = 0
    else:
        raise InvariantViolation(
            f"rowsum of anticommuting rows (p = {p} mod 4); "
            "rows must commute for a +/-1 phase"
        )


def rowsum(t: Tableau, h: int, k: int) -> Tableau:
    """Return a tableau with row h replaced by (row h) * (row k).

    Rows are 1-based across destabilizers then stabilizers.  Raises
    InvariantViolation when the rows anticommute (phase would leave
    {+1, -1}), which cannot happen for two commuting stabilizer rows.
    """
    if h == k:
        raise QubitIndexError("rowsum requires two distinct rows")
    for i in (h, k):
        if not 1 <= i <= 2 * t.n:
            raise QubitIndexError(f"row {i} out of range 1..{2 * t.n}")
    out = t.copy()
    _rowsum_inplace(out, h - 1, k - 1, tolerant=False)
    return out


def _check_qubit(t: Tableau, q: int) -> int:
    if not 1 <= q <= t.n:
        raise QubitIndexError(f"qubit {q} out of range 1..{t.n}")
    return q - 1


def _apply_gate_inplace(t: Tableau, gate: Gate) -> None:
    kind = gate.kind
    if kind == "I":
        _check_qubit(t, gate.qubits[0])
        return
    if kind == "H":
        q = _check_qubit(t, gate.qubits[0])
        t.r ^= t.x[:, q] & t.z[:, q]
        t.x[:, q], t.z[:, q] = t.z[:, q].copy(), t.x[:, q].copy()
    elif kind == "S":
        q = _check_qubit(t, gate.qubits[0])
        t.r ^= t.x[:, q] & t.z[:, q]
        t.z[:, q] ^= t.x[:, q]
    elif kind == "SDG":
        q = _check_qubit(t, gate.qubits[0])
        t.z[:, q] ^= t.x[:, q]
        t.r ^= t.x[:, q] & t.z[:, q]
    elif kind == "CNOT":
        c = _check_qubit(t, gate.qubits[0])
        a = _check_qubit(t, gate.qubits[1])
        t.r ^= t.x[:, c] & t.z[:, a] & (t.x[:, a] ^ t.z[:, c] ^ 1)
        t.x[:, a] ^= t.x[:, c]
        t.z[:, c] ^= t.z[:, a]
    elif kind == "CZ":
        c = _check_qubit(t, gate.qubits[0])
        a = _check_qubit(t, gate.qubits[1])
        t.r ^= t.x[:, c] & t.x[:, a] & (t.z[:, c] ^ t.z[:, a])
        t.z[:, c] ^= t.x[:, a]
        t.z[:, a] ^= t.x[:, c]
    elif kind == "SWAP":
        c = _check_qubit(t, gate.qubits[0])
        a = _check_qubit(t, gate.qubits[1])
        t.x[:, [c, a]] = t.x[:, [a, c]]
        t.z[:, [c, a]] = t.z[:, [a, c]]
    else:  # pragma: no cover - Gate validates kinds
        raise InvalidSizeError(f"unknown gate kind {kind!r}")


def _make_internal_gate(kind: str, qubits: tuple[int, ...]) -> Gate:
    # SDG (S-dagger) backs the Y-basis change but is not a public gate
    # kind, so bypass Gate.__post_init__ validation.
    g = object.__new__(Gate)
    object.__setattr__(g, "kind", kind)
    object.__setattr__(g, "qubits", qubits)
    return g


def apply_gate(t: Tableau, gate: Gate) -> Tableau:
    """Conjugate every tableau row by the gate's Clifford action."""
    out = t.copy()
    _apply_gate_inplace(out, gate)
    return out


def _measure_z_inplace(t: Tableau, q0: int, policy: OutcomePolicy) -> tuple[int, bool]:
    """Measure Z on 0-based qubit q0, collapsing in place.

    Returns (outcome, deterministic) with outcome in {+1, -1}.
    """
    n = t.n
    anti = np.nonzero(t.x[n:, q0])[0]
    if anti.size > 0:
        p = int(anti[0]) + n
        for i in range(2 * n):
            if i != p and i != p - n and t.x[i, q0]:
                _rowsum_inplace(t, i, p, tolerant=i < n)
        t.x[p - n] = t.x[p].copy()
        t.z[p - n] = t.z[p].copy()
        t.r[p - n] = t.r[p]
        t.x[p] = 0
        t.z[p] = 0
        t.z[p, q0] = 1
        outcome = policy.draw()
        t.r[p] = 0 if outcome == +1 else 1
        return outcome, False
    # Deterministic: accumulate the stabilizer product that equals +/- Z_q.
    acc_x = np.zeros(n, dtype=np.uint8)
    acc_z = np.zeros(n, dtype=np.uint8)
    acc_r = 0
    for i in range(n):
        if t.x[i, q0]:
            p = 2 * acc_r + 2 * int(t.r[i + n]) + _g_total(
                t.x[i + n], t.z[i + n], acc_x, acc_z
            )
            acc_x ^= t.x[i + n]
            acc_z ^= t.z[i + n]
            p %= 4
            if p == 0:
                acc_r = 0
            elif p == 2:
                acc_r = 1
            else:
                raise InvariantViolation("deterministic measurement phase not +/-1")
    return (+1 if acc_r == 0 else -1), True


_BASIS_CHANGE = {
    # gates mapping the measured basis onto Z, and back
    "X": (("H",), ("H",)),
    "Y": (("SDG", "H"), ("H", "S")),
    "Z": ((), ()),
}


def measure_pauli(
    t: Tableau, q: int, basis: Basis, policy: OutcomePolicy | None = None
) -> tuple[Tableau, int, bool]:
    """Measure the single-qubit Pauli ``basis`` on qubit q.

    X and Y measurements are conjugated into a Z measurement and back.
    Returns (new tableau, outcome in {+1, -1}, deterministic flag).  The
    deterministic flag is true iff the basis operator (up to sign) already
    lies in the stabilizer group; only non-deterministic outcomes consult
    the policy (default: post-select +1).
    """
    if basis not in BASES:
        raise InvalidSizeError(f"unknown measurement basis {basis!r}")
    if policy is None:
        policy = OutcomePolicy.plus_one()
    q0 = _check_qubit(t, q)
    out = t.copy()
    fwd, back = _BASIS_CHANGE[basis]
    for kind in fwd:
        _apply_gate_inplace(out, _make_internal_gate(kind, (q,)))
    outcome, deterministic = _measure_z_inplace(out, q0, policy)
    for kind in back:
        _apply_gate_inplace(out, _make_internal_gate(kind, (q,)))
    return out, outcome, deterministic
