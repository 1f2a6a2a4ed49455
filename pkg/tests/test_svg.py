import re

from perclat import fixtures
from perclat.boundary import component, outermost_boundary_star, with_euler
from perclat.crossings import build_rectangle_cover, find_site_crossing, square_cover_rect
from perclat.dual import construct_dual
from perclat.generators import SiteConfig, gen_square_lattice
from perclat.lattice import Adjacency, decompose_cells
from perclat.svg import SceneSpec, render_svg


def _group(svg, gid):
    m = re.search(rf'<g id="{gid}"[^>]*>(.*?)</g>', svg, re.S)
    return m and m.group(1)


def test_empty_config_leaves_cells_uncoloured():
    svg = render_svg(SceneSpec(decompose_cells(gen_square_lattice(2, 2))))
    cells = _group(svg, "cells").strip().splitlines()
    assert len(cells) == 4 and all('fill="none"' in c for c in cells)
    assert svg.startswith("<svg xmlns=") and svg.endswith("</svg>\n")
    assert _group(svg, "boundary") is None


def test_two_boundary_cycles_are_highlighted():
    fx = fixtures.star_two_cycles()
    occ = frozenset(fx.cell(n) for n in fx.occupied)
    cfg = SiteConfig(occ, fx.cell("abmg"))
    ob = with_euler(outermost_boundary_star(fx.dec, component(fx.dec, cfg, Adjacency.STAR)))
    scene = SceneSpec(fx.dec, occ, ob.cycles, ob.euler_circuit, construct_dual(fx.dec), title="two cycles")
    svg = render_svg(scene)
    polys = _group(svg, "boundary").strip().splitlines()
    assert len(polys) == 2 and polys[0] != polys[1]
    assert len(set(re.findall(r'stroke="(#[0-9a-f]+)"', _group(svg, "boundary")))) == 2
    assert _group(svg, "euler").count("marker-end") == 10
    assert svg == render_svg(scene)


def test_witness_path_is_drawn():
    dec = decompose_cells(gen_square_lattice(5, 5))
    cover = build_rectangle_cover(dec, square_cover_rect(5, 5))
    cfg = SiteConfig(frozenset(cover.interior_cells))
    path = find_site_crossing(cover, cfg, Adjacency.PLUS, "LR", "occupied")
    svg = render_svg(SceneSpec(dec, cfg.occupied, rect=cover.rect, classification=cover.classification,
                               cell_paths=(path,)))
    assert svg.count('class="witness"') == 1
    assert "stroke-dasharray" in svg
