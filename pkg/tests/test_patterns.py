"""Pattern library and shape-manipulation tests.

The heart of this suite is semantic certification: every library block
must implement its gate not just on the fixed |+> inputs (the game's
check) but as a channel, verified by entangling a reference qubit with
each In cell and comparing the joint output against the ideal gate's
Choi state.
"""

import pytest

from mbqctiles import (
    Circuit,
    ComparisonMode,
    Gate,
    OutcomePolicy,
    extract_subsystem,
    groups_equal,
    measure_pauli,
    new_plus_tableau,
)
from mbqctiles.cluster import Grid
from mbqctiles.errors import IllegalInsertionError, IllegalOutError, InvalidSizeError
from mbqctiles.patterns import (
    BLOCK_GATE,
    Leg,
    Polyomino,
    bounding_box,
    certify_library,
    choose_out,
    insert_wire,
    minimal_pattern,
    monomino,
    neighborhood_equivalent,
    rotate,
    translate,
    wire_pattern,
)
from mbqctiles.tableau import _apply_gate_inplace


def channel_matches(shape: Polyomino, gates, mode=ComparisonMode.UNSIGNED) -> bool:
    """Choi test: measure the block on its enclosing grid with a reference
    qubit CZ-attached to every In cell; the refs+outs state must equal the
    ideal gate applied to half of per-qubit entangled pairs."""
    (minr, minc), (maxr, maxc) = bounding_box(shape)
    shape = translate(shape, 1 - minr, 1 - minc)
    grid = Grid(width=maxc - minc + 1, height=maxr - minr + 1)
    n = grid.size
    k = shape.arity
    t = new_plus_tableau(n + k)
    for a, b in grid.edges():
        _apply_gate_inplace(t, Gate("CZ", (grid.cell_index(a), grid.cell_index(b))))
    for i, cell in enumerate(shape.in_cells()):
        _apply_gate_inplace(t, Gate("CZ", (grid.cell_index(cell), n + 1 + i)))
    colored = shape.colored()
    outs = {grid.cell_index(leg.out) for leg in shape.legs}
    for cell in grid.cells():
        q = grid.cell_index(cell)
        if q in outs:
            continue
        t, _, _ = measure_pauli(t, q, colored.get(cell, "Z"), OutcomePolicy.plus_one())
    got = extract_subsystem(
        t, [n + 1 + i for i in range(k)] + [grid.cell_index(leg.out) for leg in shape.legs]
    )
    want = new_plus_tableau(2 * k)
    for i in range(1, k + 1):
        _apply_gate_inplace(want, Gate("CZ", (i, k + i)))
    for gate in gates:
        _apply_gate_inplace(want, Gate(gate.kind, tuple(k + q for q in gate.qubits)))
    return groups_equal(got, want, mode)


def block_gates(kind: str) -> tuple[Gate, ...]:
    shape = minimal_pattern(kind)
    return (Gate(BLOCK_GATE[kind], tuple(range(1, shape.arity + 1))),)


class TestLibraryShapes:
    def test_blue_wire_shape(self):
        p = minimal_pattern("I")
        assert p.kind == "X2"
        assert p.colored() == {(0, 0): "X", (0, 1): "X"}
        assert p.in_cells() == ((0, 0),)
        assert p.legs[0].out == (0, 2)

    def test_orange_wire_shape(self):
        p = wire_pattern("Y3")
        assert list(p.colored().values()) == ["Y", "Y", "Y"]
        assert len(p.colored()) == 3

    def test_cnot_colored_part_is_a_domino(self):
        """Only the In/Out marks distinguish CNOT from the blue wire."""
        cnot = minimal_pattern("CNOT")
        wire = minimal_pattern("X2")
        assert cnot.colored() == wire.colored()
        assert cnot.arity == 2 and wire.arity == 1

    def test_unsupported_kind(self):
        with pytest.raises(InvalidSizeError):
            minimal_pattern("TOFFOLI")

    def test_certification_self_test(self):
        assert certify_library()

    @pytest.mark.parametrize("kind", ["H", "CNOT", "CZ", "SWAP", "X2", "Y3"])
    def test_channel_exact_up_to_strict_signs(self, kind):
        assert channel_matches(minimal_pattern(kind), block_gates(kind),
                               ComparisonMode.STRICT)

    def test_phase_block_channel_unsigned(self):
        # the two-tile phase block realizes S up to a sign byproduct
        assert channel_matches(minimal_pattern("S"), block_gates("S"),
                               ComparisonMode.UNSIGNED)
        assert not channel_matches(minimal_pattern("S"), block_gates("S"),
                                   ComparisonMode.STRICT)


class TestRotate:
    def test_horizontal_wire_becomes_vertical(self):
        p = rotate(minimal_pattern("X2"))
        assert set(p.colored()) == {(0, 0), (1, 0)}

    @pytest.mark.parametrize("kind", list(BLOCK_GATE))
    def test_four_rotations_identity(self, kind):
        p = minimal_pattern(kind)
        q = p
        for _ in range(4):
            q = rotate(q)
        assert q == p

    def test_monomino_rotates_to_itself(self):
        p = monomino("X")
        assert rotate(p) == p

    @pytest.mark.parametrize("kind", list(BLOCK_GATE))
    @pytest.mark.parametrize("turns", [1, 2, 3])
    def test_rotations_stay_channel_correct(self, kind, turns):
        p = minimal_pattern(kind)
        for _ in range(turns):
            p = rotate(p)
        assert channel_matches(p, block_gates(kind))


def legal_insert_sites(p: Polyomino):
    sites = []
    cells = p.cells()
    for leg in p.legs:
        for cell, _ in leg.chain:
            degree = sum(
                1 for nb in ((cell[0]-1, cell[1]), (cell[0]+1, cell[1]),
                             (cell[0], cell[1]-1), (cell[0], cell[1]+1))
                if nb in cells
            )
            if degree <= 2:
                sites.append(cell)
    return sites


class TestInsertWire:
    def test_blue_into_blue_makes_long_wire(self):
        p = insert_wire(minimal_pattern("X2"), (0, 0), "X2")
        assert sorted(p.colored()) == [(0, 0), (0, 1), (0, 2), (0, 3)]
        assert set(p.colored().values()) == {"X"}
        assert channel_matches(p, (Gate("I", (1,)),))

    def test_blue_into_h_tail_still_hadamard(self):
        p = insert_wire(minimal_pattern("H"), (0, 0), "X2")
        assert len(p.colored()) == 3
        assert channel_matches(p, (Gate("H", (1,)),))

    def test_orange_into_h_still_hadamard(self):
        p = insert_wire(minimal_pattern("H"), (0, 0), "Y3")
        assert channel_matches(p, (Gate("H", (1,)),))

    def test_insertion_after_three_neighbor_tile_rejected(self):
        # the CNOT junction tile touches the first tile, the control, and
        # the target out
        with pytest.raises(IllegalInsertionError):
            insert_wire(minimal_pattern("CNOT"), (0, 1), "X2")

    def test_insertion_site_must_be_colored_flow_tile(self):
        with pytest.raises(IllegalInsertionError):
            insert_wire(minimal_pattern("CZ"), (0, 2), "X2")  # grey out cell

    def test_swap_second_leg_insertion_rejected_as_cycle_tear(self):
        with pytest.raises(IllegalInsertionError):
            insert_wire(minimal_pattern("SWAP"), (0, 1), "X2")

    @pytest.mark.parametrize("kind", ["H", "S", "CNOT", "CZ", "SWAP", "X2", "Y3"])
    @pytest.mark.parametrize("wire", ["X2", "Y3"])
    def test_deformation_soundness_every_legal_site(self, kind, wire):
        """Any single wire insertion at any legal site stays the same gate."""
        base = minimal_pattern(kind)
        inserted = 0
        for site in legal_insert_sites(base):
            try:
                deformed = insert_wire(base, site, wire)
            except IllegalInsertionError:
                continue  # structural rejection (cycle tear) is acceptable
            assert channel_matches(deformed, block_gates(kind)), (kind, site, wire)
            inserted += 1
        assert inserted >= 1

    def test_insertions_compose(self):
        p = minimal_pattern("X2")
        p = insert_wire(p, (0, 0), "Y3")
        p = insert_wire(p, (0, 4), "X2")
        assert len(p.colored()) == 7
        assert channel_matches(p, (Gate("I", (1,)),))


class TestChooseOut:
    def test_wire_out_moves_up(self):
        p = choose_out(minimal_pattern("X2"), (-1, 1))
        assert p.legs[0].out == (-1, 1)
        assert channel_matches(p, (Gate("I", (1,)),))

    def test_diagonal_cell_rejected(self):
        with pytest.raises(IllegalOutError):
            choose_out(minimal_pattern("X2"), (-1, 2))

    def test_cz_outs_are_fixed(self):
        with pytest.raises(IllegalOutError):
            choose_out(minimal_pattern("CZ"), (-1, 1))

    def test_cnot_target_out_above(self):
        p = choose_out(minimal_pattern("CNOT"), (-1, 1))
        assert channel_matches(p, block_gates("CNOT"))

    def test_swap_leg_out_below(self):
        p = choose_out(minimal_pattern("SWAP"), (2, 3))
        assert channel_matches(p, block_gates("SWAP"))


class TestNeighborhoodEquivalent:
    def test_straight_vs_bent_orange_wire(self):
        straight = wire_pattern("Y3")
        bent = Polyomino(
            "Y3",
            legs=(
                Leg(
                    chain=(((0, 0), "Y"), ((0, 1), "Y"), ((1, 1), "Y")),
                    out=(2, 1),
                    out_candidates=((2, 1), (1, 2), (1, 0)),
                ),
            ),
        )
        bent.validate()
        assert neighborhood_equivalent(straight, bent)

    def test_blue_wire_vs_orange_wire(self):
        assert not neighborhood_equivalent(minimal_pattern("X2"), wire_pattern("Y3"))

    def test_h_vs_h_with_stray_tile(self):
        h = minimal_pattern("H")
        bigger = insert_wire(h, (0, 0), "X2")
        assert not neighborhood_equivalent(h, bigger)

    def test_rotation_is_equivalent(self):
        p = minimal_pattern("S")
        assert neighborhood_equivalent(p, rotate(p))

    def test_bent_wire_is_still_identity(self):
        bent = Polyomino(
            "Y3",
            legs=(
                Leg(
                    chain=(((0, 0), "Y"), ((0, 1), "Y"), ((1, 1), "Y")),
                    out=(2, 1),
                    out_candidates=((2, 1),),
                ),
            ),
        )
        assert channel_matches(bent, (Gate("I", (1,)),))

    def test_structural_test_sound_on_deformation_family(self):
        """Whenever the structural test calls two family members equivalent,
        they must certify to the same gate."""
        family: list[tuple[str, Polyomino]] = []
        for kind in BLOCK_GATE:
            base = minimal_pattern(kind)
            shapes = [base]
            for turns in (1, 2, 3):
                p = base
                for _ in range(turns):
                    p = rotate(p)
                shapes.append(p)
            for site in legal_insert_sites(base):
                for wire in ("X2", "Y3"):
                    try:
                        shapes.append(insert_wire(base, site, wire))
                    except IllegalInsertionError:
                        continue
            family.extend((kind, p) for p in shapes)
        checked = 0
        for i, (kind_a, a) in enumerate(family):
            for kind_b, b in family[i + 1 :]:
                if neighborhood_equivalent(a, b):
                    assert BLOCK_GATE[kind_a] == BLOCK_GATE[kind_b], (kind_a, kind_b)
                    checked += 1
        assert checked >= 10  # rotations at minimum
