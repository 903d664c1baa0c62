"""Reduction, group equality, and subsystem extraction tests."""

import numpy as np
import pytest

from mbqctiles import (
    ComparisonMode,
    Gate,
    OutcomePolicy,
    apply_gate,
    extract_subsystem,
    groups_equal,
    measure_pauli,
    new_plus_tableau,
    reduce,
)
from mbqctiles.canonical import contains_row
from mbqctiles.cluster import Grid, build_cluster_tableau
from mbqctiles.errors import DimensionError, EntangledOutputError
from mbqctiles.tableau import Tableau, _rowsum_inplace

from .oracles import random_circuit, tableau_group


def random_tableau(seed: int, n: int) -> Tableau:
    rng = np.random.default_rng(seed)
    t = new_plus_tableau(n)
    for kind, qubits in random_circuit(rng, n, 16):
        t = apply_gate(t, Gate(kind, qubits))
    return t


def reshuffle(t: Tableau, seed: int) -> Tableau:
    """Scramble the generators without changing the signed group."""
    rng = np.random.default_rng(seed)
    out = t.copy()
    n = out.n
    for _ in range(3 * n):
        h, k = rng.choice(n, size=2, replace=False)
        _rowsum_inplace(out, int(h) + n, int(k) + n)
        _rowsum_inplace(out, int(k), int(h), tolerant=True)
    perm = rng.permutation(n)
    out.x[n:] = out.x[n:][perm]
    out.z[n:] = out.z[n:][perm]
    out.r[n:] = out.r[n:][perm]
    out.x[:n] = out.x[:n][perm]
    out.z[:n] = out.z[:n][perm]
    out.r[:n] = out.r[:n][perm]
    out.check_invariants()
    return out


class TestReduce:
    def test_spec_example_x1x2_x2(self):
        t = Tableau.from_arrays(
            x=[[0, 0], [0, 0], [1, 1], [0, 1]],
            z=[[1, 0], [1, 1], [0, 0], [0, 0]],
            r=[0, 0, 0, 0],
        )
        assert reduce(t).stabilizer_labels() == ["+X1", "+X2"]

    def test_spec_example_pure_z_subset(self):
        t = Tableau.from_arrays(
            x=[[1, 1], [0, 1], [0, 0], [0, 0]],
            z=[[0, 0], [0, 0], [1, 0], [1, 1]],
            r=[0, 0, 0, 0],
        )
        assert t.stabilizer_labels() == ["+Z1", "+Z1Z2"]
        assert reduce(t).stabilizer_labels() == ["+Z1", "+Z2"]

    @pytest.mark.parametrize("seed", range(10))
    def test_idempotent(self, seed):
        t = random_tableau(seed, 4)
        once = reduce(t)
        twice = reduce(once)
        assert once == twice

    @pytest.mark.parametrize("seed", range(15))
    def test_signed_group_preserved(self, seed):
        n = 2 + seed % 3
        t = random_tableau(seed, n)
        assert tableau_group(reduce(t)) == tableau_group(t)
        reduce(t).check_invariants()

    @pytest.mark.parametrize("seed", range(15))
    def test_canonical_form_unique_under_reshuffling(self, seed):
        n = 2 + seed % 3
        t = random_tableau(seed, n)
        shuffled = reshuffle(t, seed + 1000)
        ra, rb = reduce(t), reduce(shuffled)
        assert np.array_equal(ra.x[n:], rb.x[n:])
        assert np.array_equal(ra.z[n:], rb.z[n:])
        assert np.array_equal(ra.r[n:], rb.r[n:])

    @pytest.mark.parametrize("seed", range(8))
    def test_different_groups_reduce_differently(self, seed):
        n = 3
        a = random_tableau(seed, n)
        b = random_tableau(seed + 500, n)
        same_group = tableau_group(a) == tableau_group(b)
        assert groups_equal(a, b, ComparisonMode.STRICT) == same_group


class TestGroupsEqual:
    def test_same_group_different_generators(self):
        a = Tableau.from_arrays(
            x=[[0, 0], [0, 0], [1, 1], [0, 1]],
            z=[[1, 0], [1, 1], [0, 0], [0, 0]],
            r=[0, 0, 0, 0],
        )
        b = new_plus_tableau(2)
        assert groups_equal(a, b, ComparisonMode.UNSIGNED)
        assert groups_equal(a, b, ComparisonMode.STRICT)

    def test_sign_only_difference(self):
        plus = new_plus_tableau(1)  # +X
        minus = Tableau.from_arrays(x=[[0], [1]], z=[[1], [0]], r=[0, 1])  # -X
        assert groups_equal(plus, minus, ComparisonMode.UNSIGNED)
        assert not groups_equal(plus, minus, ComparisonMode.STRICT)

    def test_different_groups(self):
        plus = new_plus_tableau(1)  # X
        zero = apply_gate(plus, Gate("H", (1,)))  # Z
        assert not groups_equal(plus, zero, ComparisonMode.UNSIGNED)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            groups_equal(new_plus_tableau(1), new_plus_tableau(2))

    @pytest.mark.parametrize("seed", range(6))
    def test_equivalence_relation_and_mode_implication(self, seed):
        a = random_tableau(seed, 3)
        b = reshuffle(a, seed + 1)
        c = random_tableau(seed + 90, 3)
        assert groups_equal(a, a, ComparisonMode.STRICT)
        assert groups_equal(a, b, ComparisonMode.STRICT)
        assert groups_equal(b, a, ComparisonMode.STRICT)
        for other in (b, c):
            if groups_equal(a, other, ComparisonMode.STRICT):
                assert groups_equal(a, other, ComparisonMode.UNSIGNED)


class TestContainsRow:
    def test_member_with_sign(self):
        t = reduce(apply_gate(new_plus_tableau(2), Gate("CZ", (1, 2))))
        # X1Z2 is a stabilizer; -X1Z2 only unsigned
        assert contains_row(t, [1, 0], [0, 1], 0, ComparisonMode.STRICT)
        assert not contains_row(t, [1, 0], [0, 1], 1, ComparisonMode.STRICT)
        assert contains_row(t, [1, 0], [0, 1], 1, ComparisonMode.UNSIGNED)

    def test_non_member(self):
        t = reduce(new_plus_tableau(2))
        assert not contains_row(t, [0, 0], [1, 0], 0, ComparisonMode.UNSIGNED)


class TestExtractSubsystem:
    def test_wire_chain_measured_in_x(self):
        grid = Grid(3, 1)
        t = build_cluster_tableau(grid)
        for q in (1, 2):
            t, _, _ = measure_pauli(t, q, "X", OutcomePolicy.plus_one())
        sub = extract_subsystem(t, [3])
        assert groups_equal(sub, new_plus_tableau(1), ComparisonMode.UNSIGNED)

    def test_pair_measured_in_z(self):
        grid = Grid(2, 1)
        t = build_cluster_tableau(grid)
        t, _, _ = measure_pauli(t, 1, "Z", OutcomePolicy.plus_one())
        sub = extract_subsystem(t, [2])
        assert sub.stabilizer_labels() == ["+X1"]

    def test_entangled_outputs_rejected(self):
        t = build_cluster_tableau(Grid(2, 1))
        with pytest.raises(EntangledOutputError):
            extract_subsystem(t, [2])

    def test_column_order_follows_outputs(self):
        grid = Grid(3, 1)
        t = build_cluster_tableau(grid)
        t, _, _ = measure_pauli(t, 2, "Z", OutcomePolicy.plus_one())
        ab = extract_subsystem(t, [1, 3])
        ba = extract_subsystem(t, [3, 1])
        assert sorted(ab.stabilizer_labels()) == sorted(ba.stabilizer_labels())
        assert groups_equal(ab, ba, ComparisonMode.STRICT)
        ab.check_invariants()
        ba.check_invariants()

    def test_column_order_asymmetric_state(self):
        grid = Grid(3, 1)
        t = build_cluster_tableau(grid)
        t, _, _ = measure_pauli(t, 2, "Z", OutcomePolicy.plus_one())
        t = apply_gate(t, Gate("H", (1,)))  # qubit 1 now |0>, qubit 3 |+>
        fwd = extract_subsystem(t, [1, 3])
        rev = extract_subsystem(t, [3, 1])
        z_then_x = Tableau.from_arrays(
            x=[[1, 0], [0, 0], [0, 0], [0, 1]],
            z=[[0, 0], [0, 1], [1, 0], [0, 0]],
            r=[0, 0, 0, 0],
        )  # stabilizers {Z1, X2}
        assert groups_equal(fwd, z_then_x, ComparisonMode.STRICT)
        assert not groups_equal(rev, z_then_x, ComparisonMode.UNSIGNED)
        assert sorted(rev.stabilizer_labels()) == ["+X1", "+Z2"]

    @pytest.mark.parametrize("seed", range(6))
    def test_extracted_tableau_satisfies_invariants(self, seed):
        rng = np.random.default_rng(seed)
        grid = Grid(3, 2)
        t = build_cluster_tableau(grid)
        keep = sorted(rng.choice(range(1, 7), size=2, replace=False).tolist())
        for q in range(1, 7):
            if q not in keep:
                basis = "XYZ"[rng.integers(0, 3)]
                t, _, _ = measure_pauli(t, q, basis)
        sub = extract_subsystem(t, keep)
        sub.check_invariants()
        assert sub.n == 2
