from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perclat import fixtures
from perclat import verify as V
from perclat.boundary import (
    OutermostBoundary,
    component,
    euler_circuit,
    outermost_boundary_plus,
    outermost_boundary_star,
    with_euler,
)
from perclat.errors import OriginVacant
from perclat.generators import SiteConfig, gen_perturbed_lattice, gen_square_lattice
from perclat.lattice import Adjacency, canonical_cycle, cycle_edges, decompose_cells, edge_key

GRID2 = decompose_cells(gen_square_lattice(2, 2))
GRID3 = decompose_cells(gen_square_lattice(3, 3))
BL, BR, TL, TR = (0, 1, 4, 3), (1, 2, 5, 4), (3, 4, 7, 6), (4, 5, 8, 7)


def _cfg(occ, origin):
    return SiteConfig(frozenset(occ), origin)


def test_component_examples():
    full = _cfg(GRID2.ids, BL)
    assert component(GRID2, full, Adjacency.STAR).cells == set(GRID2.ids)
    assert component(GRID2, _cfg([BL], BL), Adjacency.STAR).cells == {BL}
    diag = _cfg([BL, TR], BL)
    assert component(GRID2, diag, Adjacency.PLUS).cells == {BL}
    assert component(GRID2, diag, Adjacency.STAR).cells == {BL, TR}


def test_component_needs_occupied_origin():
    with pytest.raises(OriginVacant):
        component(GRID2, SiteConfig(frozenset([BR])), Adjacency.STAR, origin=BL)
    with pytest.raises(ValueError):
        SiteConfig(frozenset([BR]), BL)


def test_component_is_maximal():
    cfg = _cfg([BL, TR, BR], BL)
    comp = component(GRID2, cfg, Adjacency.PLUS)
    for c in set(cfg.occupied) - comp.cells:
        assert not GRID2.plus_adj[c] & comp.cells


def test_star_boundary_two_cycles_meeting_at_a_vertex():
    fx = fixtures.star_two_cycles()
    dec = fx.dec
    cfg = _cfg([fx.cell(n) for n in fx.occupied], fx.cell("abmg"))
    comp = component(dec, cfg, Adjacency.STAR)
    assert len(comp.cells) == 4
    ob = outermost_boundary_star(dec, comp)
    coords = dec.lattice.coords
    assert set(ob.cycles) == {canonical_cycle(tuple("abcdefg"), coords), canonical_cycle(tuple("fhk"), coords)}
    circuit = euler_circuit(ob)
    assert len(circuit) - 1 == 7 + 3
    assert V.check_euler(ob, circuit) == []
    assert V.check_star_boundary(dec, cfg, comp, ob) == []


def test_plus_boundary_of_edge_sharing_pair():
    fx = fixtures.star_two_cycles()
    dec = fx.dec
    cfg = _cfg([fx.cell("bcdem"), fx.cell("efgm")], fx.cell("bcdem"))
    comp = component(dec, cfg, Adjacency.PLUS)
    cyc = outermost_boundary_plus(dec, comp)
    assert cyc == canonical_cycle(tuple("bcdefgm"), dec.lattice.coords)


def test_single_cell_boundary_is_the_cell():
    cfg = _cfg([(5, 6, 10, 9)], (5, 6, 10, 9))
    star = component(GRID3, cfg, Adjacency.STAR)
    assert outermost_boundary_star(GRID3, star).cycles == ((5, 6, 10, 9),)
    plus = component(GRID3, cfg, Adjacency.PLUS)
    assert outermost_boundary_plus(GRID3, plus) == (5, 6, 10, 9)
    assert euler_circuit(OutermostBoundary(((5, 6, 10, 9),))) == (5, 6, 10, 9, 5)


def test_full_grids():
    cfg = _cfg(GRID3.ids, GRID3.ids[0])
    ob = outermost_boundary_star(GRID3, component(GRID3, cfg, Adjacency.STAR))
    assert len(ob.cycles) == 1 and len(ob.cycles[0]) == 12
    cfg = _cfg(GRID2.ids, BL)
    cyc = outermost_boundary_plus(GRID2, component(GRID2, cfg, Adjacency.PLUS))
    assert len(cyc) == 8


def test_hole_is_not_boundary():
    # ring of eight occupied cells around a vacant centre: only the outside counts
    occ = [c for c in GRID3.ids if c != (5, 6, 10, 9)]
    cfg = _cfg(occ, occ[0])
    comp = component(GRID3, cfg, Adjacency.STAR)
    ob = outermost_boundary_star(GRID3, comp)
    assert len(ob.cycles) == 1 and len(ob.cycles[0]) == 12
    assert not {edge_key(5, 6), edge_key(6, 10)} & ob.edges


def test_euler_on_bowtie_chain():
    fx = fixtures.bowtie_chain(3)
    dec = fx.dec
    cfg = _cfg(dec.ids, dec.ids[0])
    ob = with_euler(outermost_boundary_star(dec, component(dec, cfg, Adjacency.STAR)))
    assert len(ob.cycles) == 3
    steps = Counter(edge_key(a, b) for a, b in zip(ob.euler_circuit, ob.euler_circuit[1:]))
    assert steps == Counter(e for c in ob.cycles for e in cycle_edges(c))
    assert ob.euler_circuit[0] == ob.euler_circuit[-1]


def test_diagonal_pair_gives_two_cycles_sharing_a_corner():
    cfg = _cfg([BL, TR], BL)
    ob = outermost_boundary_star(GRID2, component(GRID2, cfg, Adjacency.STAR))
    assert set(ob.cycles) == {BL, TR}
    assert len(euler_circuit(ob)) == 9


GRID4 = decompose_cells(gen_square_lattice(4, 4))


@st.composite
def grid_config(draw, dec=GRID4):
    bits = draw(st.lists(st.booleans(), min_size=len(dec.ids), max_size=len(dec.ids)))
    origin = draw(st.sampled_from(dec.ids))
    occ = {c for c, b in zip(dec.ids, bits) if b} | {origin}
    return SiteConfig(frozenset(occ), origin)


@settings(max_examples=150, deadline=None)
@given(grid_config())
def test_star_boundary_matches_oracles(cfg):
    comp = component(GRID4, cfg, Adjacency.STAR)
    ob = outermost_boundary_star(GRID4, comp)
    assert ob.edges == V.flood_fill_outermost_edges(GRID4, comp)
    if len(comp.cells) <= 12:
        assert ob.edges == V.brute_force_outermost_edges(GRID4, comp)
    assert V.check_star_boundary(GRID4, cfg, comp, ob) == []
    assert V.check_euler(ob, euler_circuit(ob)) == []


@settings(max_examples=150, deadline=None)
@given(grid_config())
def test_plus_boundary_properties(cfg):
    comp = component(GRID4, cfg, Adjacency.PLUS)
    cyc = outermost_boundary_plus(GRID4, comp)
    assert V.check_plus_boundary(GRID4, cfg, comp, cyc) == []
    star = component(GRID4, cfg, Adjacency.STAR)
    if star.cells == comp.cells:
        assert outermost_boundary_star(GRID4, star).cycles == (cyc,)


def test_perturbed_lattice_boundaries():
    dec = decompose_cells(gen_perturbed_lattice(6, 6, 0.2, 11))
    rng = np.random.default_rng(4)
    for _ in range(20):
        occ = {c for c in dec.ids if rng.random() < 0.55}
        origin = dec.ids[int(rng.integers(len(dec.ids)))]
        cfg = SiteConfig(frozenset(occ | {origin}), origin)
        comp = component(dec, cfg, Adjacency.STAR)
        ob = outermost_boundary_star(dec, comp)
        assert V.check_star_boundary(dec, cfg, comp, ob) == []
