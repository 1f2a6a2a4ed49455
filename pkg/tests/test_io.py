import random

import pytest

from perclat.errors import InputError
from perclat.generators import BondConfig, SiteConfig, gen_perturbed_lattice, gen_square_lattice
from perclat.io import LatticeSyntaxError, parse_lattice, read_lattice, resolve_lattice, serialize_lattice
from perclat.lattice import decompose_cells, edge_key


def test_round_trip_grid():
    lat = gen_square_lattice(2, 2)
    dec = decompose_cells(lat)
    configs = {"a": SiteConfig(frozenset(dec.ids[:2]), dec.ids[0]), "b": BondConfig(frozenset([edge_key(0, 1)]))}
    text = serialize_lattice(lat, configs)
    lat2, configs2 = parse_lattice(text)
    assert lat2.coords == lat.coords and set(lat2.edges) == set(lat.edges)
    assert decompose_cells(lat2).ids == dec.ids
    assert configs2["a"] == configs["a"]
    assert configs2["b"].open_edges == configs["b"].open_edges
    assert serialize_lattice(lat2, configs2) == text


def test_round_trip_keeps_float_coordinates_exactly():
    lat = gen_perturbed_lattice(4, 4, 0.3, 5)
    assert parse_lattice(serialize_lattice(lat))[0].coords == lat.coords


def test_shuffled_records_give_the_same_lattice():
    lat = gen_square_lattice(3, 2)
    dec = decompose_cells(lat)
    text = serialize_lattice(lat, {"s": SiteConfig(frozenset(dec.ids[1:4]))})
    head, *body = text.splitlines()
    rng = random.Random(1)
    for _ in range(5):
        rng.shuffle(body)
        lat2, cfg = parse_lattice("\n".join([head, "# shuffled", *body]) + "\n")
        assert serialize_lattice(lat2, cfg) == text


def test_dangling_edge_reports_location():
    doc = "perclat-lattice 1\nvertex 0 0 0\nvertex 1 1 0\nedge 0 7\n"
    with pytest.raises(LatticeSyntaxError) as info:
        parse_lattice(doc)
    assert (info.value.line, info.value.col) == (4, 8)
    assert "line 4, column 8" in str(info.value)


@pytest.mark.parametrize("doc,line", [
    ("", 1),
    ("lattice 1\n", 1),
    ("perclat-lattice 9\n", 1),
    ("perclat-lattice 1\nvertex 0 0\n", 2),
    ("perclat-lattice 1\nvertex 0 0 x\n", 2),
    ("perclat-lattice 1\nvertex 0 0 0\nvertex 0 1 1\n", 3),
    ("perclat-lattice 1\nface 0 1 2\n", 2),
])
def test_syntax_errors(doc, line):
    with pytest.raises(LatticeSyntaxError) as info:
        parse_lattice(doc)
    assert info.value.line == line


def test_unknown_cell_in_config():
    text = serialize_lattice(gen_square_lattice(1, 1)) + "site s 0,1,2\n"
    with pytest.raises(LatticeSyntaxError) as info:
        parse_lattice(text)
    assert info.value.line == text.count("\n")


def test_validation_errors_pass_through():
    doc = "perclat-lattice 1\nvertex a 0 0\nvertex b 1 0\nedge a b\n"
    with pytest.raises(InputError):
        parse_lattice(doc)


def test_resolve_shorthands(tmp_path):
    assert len(resolve_lattice("grid3x2")[0].edges) == 17
    assert resolve_lattice("perturbed4x4:0.1:3")[0].coords == gen_perturbed_lattice(4, 4, 0.1, 3).coords
    lat, cfg = resolve_lattice("fixture:pocket")
    assert "default" in cfg
    p = tmp_path / "g.lat"
    p.write_text(serialize_lattice(lat))
    assert read_lattice(p)[0].coords == lat.coords
    with pytest.raises(InputError):
        resolve_lattice("fixture:nope")
    with pytest.raises(InputError):
        resolve_lattice(str(tmp_path / "missing.lat"))
