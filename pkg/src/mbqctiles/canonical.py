"""Canonical reduction of stabilizer tableaus and group comparison.

``reduce`` brings the stabilizer block to a unique minimal-support form:
the x-block is put in reduced column echelon form (Gaussian elimination
over GF(2), destabilizers co-updated through paired row products so the
tableau invariants survive), then the rows left with no x-support are
echelon-reduced over their z-bits and those z-pivot columns are cleared
from every other row.  Two tableaus generate the same signed group exactly
when their reduced stabilizer blocks are bit-identical, which is what
``groups_equal`` exploits.
"""

from __future__ import annotations

from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (
    DimensionError,
    EntangledOutputError,
    InvariantViolation,
    QubitIndexError,
)
from .tableau import Tableau, _g_total, _rowsum_inplace


class ComparisonMode(Enum):
    """Whether stabilizer signs take part in group comparison.

    The game ignores sign byproducts from measurement outcomes, so
    ``UNSIGNED`` is the default mode everywhere; ``STRICT`` also compares
    phase bits.
    """

    STRICT = "strict"
    UNSIGNED = "unsigned"


def _swap_pair(t: Tableau, a: int, b: int) -> None:
    """Swap stabilizer rows a and b (0-based among stabilizers) and their
    paired destabilizers."""
    if a == b:
        return
    n = t.n
    for lo in (0, n):
        t.x[[lo + a, lo + b]] = t.x[[lo + b, lo + a]]
        t.z[[lo + a, lo + b]] = t.z[[lo + b, lo + a]]
        t.r[[lo + a, lo + b]] = t.r[[lo + b, lo + a]]


def _eliminate(t: Tableau, pivot: int, column_bits: np.ndarray) -> None:
    """Multiply stabilizer ``pivot`` into every other stabilizer row whose
    ``column_bits`` entry is set, with the paired destabilizer update."""
    n = t.n
    for m in range(n):
        if m != pivot and column_bits[m]:
            _rowsum_inplace(t, m + n, pivot + n)
            _rowsum_inplace(t, pivot, m, tolerant=True)


def reduce(t: Tableau) -> Tableau:
    """Return the canonical minimal-support form of ``t``.

    The generated stabilizer group (signs included) is unchanged; the
    function is idempotent and two tableaus reduce to bit-identical
    stabilizer blocks iff they generate the same signed group.
    """
    out = t.copy()
    n = out.n
    rank = 0
    for c in range(n):
        hits = np.nonzero(out.x[n + rank : 2 * n, c])[0]
        if hits.size == 0:
            continue
        _swap_pair(out, rank, rank + int(hits[0]))
        _eliminate(out, rank, out.x[n : 2 * n, c])
        rank += 1
    for c in range(n):
        hits = np.nonzero(out.z[n + rank : 2 * n, c])[0]
        if hits.size == 0:
            continue
        _swap_pair(out, rank, rank + int(hits[0]))
        # Clear this pure-Z pivot column from every other stabilizer row,
        # including rows that kept x-support (their echelon form survives
        # because the pivot row has no x-bits).
        _eliminate(out, rank, out.z[n : 2 * n, c])
        rank += 1
    if rank != n:
        raise InvariantViolation(
            f"stabilizer block has rank {rank}, expected {n}"
        )
    return out


def groups_equal(
    a: Tableau, b: Tableau, mode: ComparisonMode = ComparisonMode.UNSIGNED
) -> bool:
    """True iff a and b generate the same stabilizer group.

    In UNSIGNED mode phase bits are ignored; in STRICT mode they must
    match too.
    """
    if a.n != b.n:
        raise DimensionError(f"cannot compare {a.n}-qubit and {b.n}-qubit groups")
    ra, rb = reduce(a), reduce(b)
    n = a.n
    same_bits = np.array_equal(ra.x[n:], rb.x[n:]) and np.array_equal(
        ra.z[n:], rb.z[n:]
    )
    if not same_bits:
        return False
    if mode is ComparisonMode.STRICT:
        return np.array_equal(ra.r[n:], rb.r[n:])
    return True


def contains_row(
    reduced: Tableau,
    x: np.ndarray,
    z: np.ndarray,
    r: int = 0,
    mode: ComparisonMode = ComparisonMode.UNSIGNED,
) -> bool:
    """Membership of the Pauli (x, z, r) in a *reduced* tableau's group.

    In the canonical form each generator owns a pivot column (the first
    x-bit of an x-supported row, or the first z-bit of a pure-Z row) that no
    other generator touches, so the candidate's coefficient on generator i
    can be read straight off the candidate's bit at that pivot.  The product
    of the selected generators must then reproduce the candidate exactly.
    """
    n = reduced.n
    cx = np.array(x, dtype=np.uint8) & 1
    cz = np.array(z, dtype=np.uint8) & 1
    acc_x = np.zeros(n, dtype=np.uint8)
    acc_z = np.zeros(n, dtype=np.uint8)
    acc_r = 0
    for i in range(n):
        gx, gz = reduced.x[n + i], reduced.z[n + i]
        hit = np.nonzero(gx)[0]
        if hit.size:
            coeff = cx[hit[0]]
        else:
            hit = np.nonzero(gz)[0]
            if hit.size == 0:
                continue
            coeff = cz[hit[0]]
        if coeff:
            p = 2 * acc_r + 2 * int(reduced.r[n + i]) + _g_total(gx, gz, acc_x, acc_z)
            acc_x ^= gx
            acc_z ^= gz
            if p % 2:
                raise InvariantViolation("stabilizer product left the +/-1 phases")
            acc_r = (p % 4) // 2
    if not (np.array_equal(acc_x, cx) and np.array_equal(acc_z, cz)):
        return False
    if mode is ComparisonMode.STRICT:
        return acc_r == (r & 1)
    return True


def _complete_destabilizers(sx: np.ndarray, sz: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Find destabilizer rows for given independent commuting stabilizers.

    Solves the symplectic conditions over GF(2): destabilizer i
    anticommutes with stabilizer i, commutes with every other stabilizer,
    and the destabilizers pairwise commute.
    """
    n = sx.shape[0]
    # symplectic product of candidate d=(x|z) with stabilizer row i is
    # [sz_i | sx_i] . d, so solve M d_i = e_i for each i.
    m = np.concatenate([sz, sx], axis=1).astype(np.uint8)
    aug = np.concatenate([m, np.eye(n, dtype=np.uint8)], axis=1)
    rows, cols = n, 2 * n
    pivot_cols: list[int] = []
    rank = 0
    for c in range(cols):
        hits = np.nonzero(aug[rank:, c])[0]
        if hits.size == 0:
            continue
        p = rank + int(hits[0])
        if p != rank:
            aug[[rank, p]] = aug[[p, rank]]
        for i in range(rows):
            if i != rank and aug[i, c]:
                aug[i] ^= aug[rank]
        pivot_cols.append(c)
        rank += 1
        if rank == rows:
            break
    if rank != n:
        raise InvariantViolation("stabilizer rows are linearly dependent")
    d = np.zeros((n, 2 * n), dtype=np.uint8)
    for i in range(n):
        # particular solution: set pivot variables from the transformed rhs
        rhs = aug[:, cols + i]
        for row_idx, c in enumerate(pivot_cols):
            if rhs[row_idx]:
                d[i, c] = 1
    dx, dz = d[:, :n].copy(), d[:, n:].copy()

    def symp(i: int, j: int) -> int:
        return int((dx[i] @ dz[j] + dz[i] @ dx[j]) % 2)

    for i in range(n):
        for j in range(i + 1, n):
            if symp(i, j):
                # adding stabilizer j to destabilizer i flips only this pair
                dx[i] ^= sx[j]
                dz[i] ^= sz[j]
    return dx, dz


def extract_subsystem(t: Tableau, outputs: Sequence[int]) -> Tableau:
    """Restrict a fully measured tableau to its unmeasured output qubits.

    ``outputs`` lists 1-based qubit ids in the order the columns of the
    result should take.  The stabilizer rows whose support lies entirely
    inside the outputs become the new stabilizer block; exactly
    len(outputs) such rows must exist, otherwise the outputs are still
    entangled with the rest of the system.
    """
    outs = list(outputs)
    if len(set(outs)) != len(outs) or not outs:
        raise QubitIndexError("outputs must be a non-empty list of distinct qubits")
    for q in outs:
        if not 1 <= q <= t.n:
            raise QubitIndexError(f"output qubit {q} out of range 1..{t.n}")
    red = reduce(t)
    n = red.n
    out_idx = np.array([q - 1 for q in outs], dtype=np.intp)
    mask = np.ones(n, dtype=bool)
    mask[out_idx] = False
    supported = [
        i
        for i in range(n)
        if not red.x[n + i][mask].any() and not red.z[n + i][mask].any()
    ]
    k = len(outs)
    if len(supported) < k:
        raise EntangledOutputError(
            f"only {len(supported)} of {k} output stabilizers are local to the "
            "marked outputs; they remain entangled with unmeasured cells"
        )
    if len(supported) > k:
        raise InvariantViolation(
            "more local stabilizers than outputs; not every other qubit was measured"
        )
    sx = red.x[[n + i for i in supported]][:, out_idx]
    sz = red.z[[n + i for i in supported]][:, out_idx]
    sr = red.r[[n + i for i in supported]]
    dx, dz = _complete_destabilizers(sx, sz)
    x = np.concatenate([dx, sx]).astype(np.uint8)
    z = np.concatenate([dz, sz]).astype(np.uint8)
    r = np.concatenate([np.zeros(k, dtype=np.uint8), sr.astype(np.uint8)])
    result = Tableau(x, z, r)
    result.check_invariants()
    return result
