import pytest

from perclat import fixtures
from perclat import verify as V
from perclat.boundary import component, outermost_boundary_plus
from perclat.errors import DualAcyclic, DualNotConnected, HypothesisViolated, MissingVacantNeighbor
from perclat.generators import SiteConfig, gen_perturbed_lattice, gen_square_lattice, sample_site_config
from perclat.lattice import Adjacency, decompose_cells
from perclat.dual import (
    construct_dual,
    surrounds,
    vacant_cell_cycle_around_plus,
    vacant_dual_cycle_around_star,
    verify_duality_properties,
)


def _grid(n, m=None):
    return decompose_cells(gen_square_lattice(n, m or n))


def _cell_at(dec, x, y):
    return dec.locate((x + 0.5, y + 0.5))


def test_grid_dual_sits_at_centres():
    dec = _grid(3, 2)
    dual = construct_dual(dec)
    for cid, p in dual.dual_vertices.items():
        assert p == pytest.approx(dec.cell(cid).site)
        xs = [dec.lattice.coords[v][0] for v in cid]
        ys = [dec.lattice.coords[v][1] for v in cid]
        assert p == pytest.approx((sum(xs) / 4, sum(ys) / 4))
    assert len(dual.dual_edges) == 2 * 2 + 3 * 1
    for a, b in dual.dual_edges:
        assert b in dec.plus_adj[a]


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_square_grids_pass_all_properties(n):
    rep = verify_duality_properties(_grid(n))
    assert rep.all_passed, rep.first_failure()


def test_two_squares_is_acyclic():
    dec = fixtures.two_squares().dec
    with pytest.raises(DualAcyclic):
        construct_dual(dec)
    rep = verify_duality_properties(dec)
    assert rep.a1.passed and rep.a2.passed
    assert not rep.a3.passed and rep.a3.counterexample == "DualAcyclic"


def test_corner_touch_dual_not_connected():
    dec = fixtures.corner_touch().dec
    with pytest.raises(DualNotConnected):
        construct_dual(dec)
    assert verify_duality_properties(dec).first_failure() == "a3"


def test_double_edge_fails_niceness_with_that_pair():
    fx = fixtures.double_edge()
    dec = fx.dec
    rep = verify_duality_properties(dec)
    assert not rep.a1.passed
    a, b = rep.a1.counterexample
    shared = set(e for e in dec.cell(a).edges) & set(dec.cell(b).edges)
    assert len(shared) == 2


def test_bijection_and_double_duality():
    dec = decompose_cells(gen_perturbed_lattice(5, 5, 0.2, 2))
    dual = construct_dual(dec)
    housed = dual.vertex_to_dual_cell
    assert len(dual.dual_cells.cells) == len(housed)
    assert sorted(housed.values()) == sorted(dual.dual_cells.ids)
    lat = dec.lattice
    for u in housed:
        for v in housed:
            if u < v:
                assert (housed[v] in dual.dual_cells.plus_adj[housed[u]]) == lat.has_edge(u, v)


def test_single_cell_star_surround_is_eight_cycle():
    dec = _grid(5)
    dual = construct_dual(dec)
    mid = _cell_at(dec, 2, 2)
    cfg = SiteConfig(frozenset([mid]), mid)
    comp = component(dec, cfg, Adjacency.STAR)
    p_out = vacant_dual_cycle_around_star(dec, dual, comp, cfg)
    assert len(p_out) == 8
    assert set(p_out) == dec.star_adj[mid]
    assert p_out == V.brute_force_p_out(dec, dual, cfg, comp)


def test_domino_star_surround_is_ten_cycle():
    dec = _grid(6)
    dual = construct_dual(dec)
    a, b = _cell_at(dec, 2, 2), _cell_at(dec, 3, 2)
    cfg = SiteConfig(frozenset([a, b]), a)
    comp = component(dec, cfg, Adjacency.STAR)
    p_out = vacant_dual_cycle_around_star(dec, dual, comp, cfg)
    assert len(p_out) == 10
    assert p_out == V.brute_force_p_out(dec, dual, cfg, comp)
    assert surrounds(dec, dual, cfg, comp, p_out)


def test_pocket_outermost_cycle():
    fx = fixtures.pocket()
    dec = fx.dec
    dual = construct_dual(dec)
    assert verify_duality_properties(dec, dual).all_passed
    name = {fx.cell(n): n for n in fx.cells}
    cfg = SiteConfig(frozenset(fx.cell(n) for n in fx.occupied), fx.cell("A"))
    comp = component(dec, cfg, Adjacency.STAR)

    def label(cycle):
        seq = [name[c] for c in cycle]
        k = seq.index("1")
        seq = seq[k:] + seq[:k]
        return "".join(seq) if seq[1] < seq[-1] else "1" + "".join(reversed(seq[1:]))

    found = sorted(label(c) for c in V.surrounding_dual_cycles(dec, dual, cfg, comp))
    assert found == ["1234567", "123459867"]
    p_out = vacant_dual_cycle_around_star(dec, dual, comp, cfg, exhaustive=True)
    assert label(p_out) == "1234567"
    assert p_out == V.brute_force_p_out(dec, dual, cfg, comp)


def test_star_surround_needs_housed_vertices():
    dec = _grid(4)
    dual = construct_dual(dec)
    corner = _cell_at(dec, 0, 0)
    cfg = SiteConfig(frozenset([corner]), corner)
    with pytest.raises(HypothesisViolated):
        vacant_dual_cycle_around_star(dec, dual, component(dec, cfg, Adjacency.STAR), cfg)
    assert V.brute_force_p_out(dec, dual, cfg, component(dec, cfg, Adjacency.STAR)) is None


def test_plus_surround_single_cell():
    dec = _grid(5)
    mid = _cell_at(dec, 2, 2)
    cfg = SiteConfig(frozenset([mid]), mid)
    comp = component(dec, cfg, Adjacency.PLUS)
    m_out = vacant_cell_cycle_around_plus(dec, cfg, comp)
    assert set(m_out) == dec.plus_adj[mid]
    # consecutive plus neighbours meet at a corner of the centre cell
    assert V.check_m_out(dec, cfg, comp, outermost_boundary_plus(dec, comp), m_out) == []


def test_plus_surround_domino():
    dec = _grid(6)
    a, b = _cell_at(dec, 2, 2), _cell_at(dec, 3, 2)
    cfg = SiteConfig(frozenset([a, b]), a)
    comp = component(dec, cfg, Adjacency.PLUS)
    m_out = vacant_cell_cycle_around_plus(dec, cfg, comp)
    assert len(m_out) == 6
    assert set(m_out) == (dec.plus_adj[a] | dec.plus_adj[b]) - {a, b}


def test_plus_surround_rejects_non_maximal_component():
    dec = _grid(5)
    a, b = _cell_at(dec, 2, 2), _cell_at(dec, 3, 2)
    cfg = SiteConfig(frozenset([a, b]), a)
    fake = CellComponentStub(dec, [a])
    with pytest.raises(MissingVacantNeighbor):
        vacant_cell_cycle_around_plus(dec, cfg, fake)
    edge_cell = _cell_at(dec, 0, 2)
    cfg = SiteConfig(frozenset([edge_cell]), edge_cell)
    with pytest.raises(MissingVacantNeighbor):
        vacant_cell_cycle_around_plus(dec, cfg, component(dec, cfg, Adjacency.PLUS))


def CellComponentStub(dec, cells):
    from perclat.boundary import CellComponent
    from perclat.lattice import cycle_edges

    cells = frozenset(cells)
    return CellComponent(Adjacency.PLUS, min(cells), cells,
                         frozenset(e for c in cells for e in cycle_edges(c)), frozenset(v for c in cells for v in c))


def test_pocket_walk_is_loop_erased():
    # a vacant cell in a notch of the component makes the boundary walk double back
    dec = _grid(8)
    cells = [(2, 1), (2, 2), (2, 4), (3, 2), (3, 4), (4, 2), (4, 3), (4, 4), (4, 5), (4, 6), (5, 3)]
    occ = frozenset(_cell_at(dec, x, y) for x, y in cells)
    cfg = SiteConfig(occ, _cell_at(dec, 4, 4))
    comp = component(dec, cfg, Adjacency.PLUS)
    m_out = vacant_cell_cycle_around_plus(dec, cfg, comp)
    assert _cell_at(dec, 3, 3) not in m_out
    assert V.check_m_out(dec, cfg, comp, outermost_boundary_plus(dec, comp), m_out) == []


def test_random_enclosed_components_match_brute_force():
    dec = _grid(5)
    dual = construct_dual(dec)
    inner = [c for c in dec.ids if all(0 < v % 6 < 5 and 0 < v // 6 < 5 for v in c)]
    mid = _cell_at(dec, 2, 2)
    for t in range(30):
        cfg = sample_site_config(inner, 0.5, 17, t, origin=mid)
        comp = component(dec, cfg, Adjacency.STAR)
        assert vacant_dual_cycle_around_star(dec, dual, comp, cfg) == V.brute_force_p_out(dec, dual, cfg, comp)
