import random

import pytest

from perclat import fixtures
from perclat.errors import BridgeEdge, NotConnected, NotPlanar, TooFewSharedVertices, UnknownCell, UnknownEdge
from perclat.generators import gen_perturbed_lattice, gen_square_lattice
from perclat.lattice import (
    Adjacency,
    canonical_cycle,
    cells_adjacent,
    cycle_edges,
    decompose_cells,
    is_unicellular,
    merge_cycles,
    shell_cycles,
    validate_lattice,
)

SQUARE = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}
SQUARE_EDGES = [(0, 1), (1, 2), (2, 3), (3, 0)]


def test_validate_accepts_grid_and_rejects_bad_graphs():
    assert len(gen_square_lattice(2, 2).edges) == 12
    with pytest.raises(BridgeEdge):
        validate_lattice({"a": (0, 0), "b": (1, 0), "c": (2, 1)}, [("a", "b"), ("b", "c")])
    k4 = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}
    with pytest.raises(NotPlanar) as info:
        validate_lattice(k4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)])
    assert set(info.value.edges) == {(0, 2), (1, 3)}
    two = {**SQUARE, 4: (5, 5), 5: (6, 5), 6: (6, 6)}
    with pytest.raises(NotConnected):
        validate_lattice(two, SQUARE_EDGES + [(4, 5), (5, 6), (6, 4)])


def test_bridge_is_named():
    verts = {**SQUARE, 4: (2, 0), 5: (3, 0), 6: (3, 1), 7: (2, 1)}
    edges = SQUARE_EDGES + [(4, 5), (5, 6), (6, 7), (7, 4), (1, 4)]
    with pytest.raises(BridgeEdge) as info:
        validate_lattice(verts, edges)
    assert info.value.edge == (1, 4)


def test_decomposition_examples():
    dec = decompose_cells(validate_lattice(SQUARE, SQUARE_EDGES))
    assert dec.ids == [(0, 1, 2, 3)]
    assert all(is_unicellular(dec, e) for e in SQUARE_EDGES)
    dec = decompose_cells(gen_square_lattice(2, 2))
    assert len(dec.cells) == 4
    fig1 = fixtures.four_cells()
    assert len(fig1.dec.cells) == 4
    assert {fig1.cell(n) for n in fig1.cells} == set(fig1.dec.ids)


@pytest.mark.parametrize("n,m", [(1, 1), (2, 3), (4, 4), (6, 5)])
def test_euler_count(n, m):
    lat = gen_square_lattice(n, m)
    dec = decompose_cells(lat)
    assert len(dec.cells) == len(lat.edges) - len(lat.coords) + 1 == n * m
    assert all(len(v) in (1, 2) for v in dec.edge_to_cells.values())


def test_cells_are_ccw_and_start_at_min_vertex():
    dec = decompose_cells(gen_perturbed_lattice(4, 4, 0.2, 1))
    assert len(dec.cells) == 16
    for c in dec.cells:
        assert c.cell_id[0] == min(c.cell_id)
        assert c.area > 0


def test_decomposition_independent_of_input_order():
    lat = gen_perturbed_lattice(4, 3, 0.2, 5)
    ref = decompose_cells(lat)
    rng = random.Random(0)
    for _ in range(5):
        verts = list(lat.coords.items())
        rng.shuffle(verts)
        edges = [e[::-1] if rng.random() < 0.5 else e for e in lat.edges]
        rng.shuffle(edges)
        dec = decompose_cells(validate_lattice(dict(verts), edges))
        assert dec.ids == ref.ids
        assert dec.plus_adj == ref.plus_adj


def test_unicellular_and_adjacency_on_2x2():
    dec = decompose_cells(gen_square_lattice(2, 2))
    assert is_unicellular(dec, (0, 1))
    assert not is_unicellular(dec, (1, 4))
    with pytest.raises(UnknownEdge):
        is_unicellular(dec, (0, 4))
    bl, br, tl, tr = (0, 1, 4, 3), (1, 2, 5, 4), (3, 4, 7, 6), (4, 5, 8, 7)
    assert cells_adjacent(dec, tl, tr, Adjacency.PLUS)
    assert not cells_adjacent(dec, bl, tr, Adjacency.PLUS)
    assert cells_adjacent(dec, bl, tr, Adjacency.STAR)
    with pytest.raises(UnknownCell):
        cells_adjacent(dec, bl, (0, 1, 2), Adjacency.STAR)
    for a in dec.ids:
        assert dec.plus_adj[a] <= dec.star_adj[a]


def test_merge_examples():
    lat = gen_square_lattice(2, 1)
    assert merge_cycles(lat, (0, 1, 4, 3), (1, 2, 5, 4)) == (0, 1, 2, 5, 4, 3)
    assert merge_cycles(lat, (0, 1, 4, 3), (0, 1, 4, 3)) == (0, 1, 4, 3)
    fx = fixtures.merge()
    merged = merge_cycles(fx.lattice, tuple(fx.cells["C"]), tuple(fx.cells["D"]))
    assert merged == canonical_cycle(tuple("abcdfg"), fx.lattice.coords)


def test_merge_needs_two_shared_vertices():
    fx = fixtures.bowtie()
    a, b = fx.dec.ids
    with pytest.raises(TooFewSharedVertices):
        merge_cycles(fx.lattice, a, b)


def test_shells():
    assert shell_cycles(decompose_cells(gen_square_lattice(2, 2))).shells == ((0, 1, 2, 5, 8, 7, 6, 3),)
    bow = shell_cycles(fixtures.bowtie().dec)
    assert len(bow) == 2
    dec = fixtures.four_cells().dec
    shells = shell_cycles(dec)
    on_shell = {e for s in shells.shells for e in cycle_edges(s)}
    assert on_shell == {e for e in dec.lattice.edges if is_unicellular(dec, e)}
    assert set(shells.cell_shell) == set(dec.ids)


def test_shell_property_on_corner_touching_grids():
    dec = fixtures.corner_touch().dec
    shells = shell_cycles(dec)
    assert len(shells) == 2
    assert len(set(shells.shells[0]) & set(shells.shells[1])) == 1
    on_shell = {e for s in shells.shells for e in cycle_edges(s)}
    assert on_shell == {e for e in dec.lattice.edges if is_unicellular(dec, e)}


def test_locate_and_lookup():
    dec = decompose_cells(gen_square_lattice(3, 3))
    assert dec.locate((1.5, 1.5)) == (5, 6, 10, 9)
    assert dec.locate((10, 10)) is None
    assert dec.lookup((10, 9, 5, 6)) == (5, 6, 10, 9)
    with pytest.raises(UnknownCell):
        dec.lookup((0, 1, 2))
