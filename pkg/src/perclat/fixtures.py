"""Small hand-built lattices with labelled vertices and cells."""

from __future__ import annotations

from dataclasses import dataclass, field

from .generators import gen_square_lattice
from .lattice import CellDecomposition, PlanarLattice, decompose_cells, validate_lattice


@dataclass(frozen=True)
class Fixture:
    lattice: PlanarLattice
    cells: dict = field(default_factory=dict)
    occupied: tuple = ()

    @property
    def dec(self) -> CellDecomposition:
        return decompose_cells(self.lattice)

    def cell(self, name: str):
        return self.dec.lookup(self.cells[name])


def _path_edges(*cycles: str) -> list[tuple[str, str]]:
    edges = set()
    for c in cycles:
        for a, b in zip(c, c[1:] + c[0]):
            edges.add(tuple(sorted((a, b))))
    return sorted(edges)


def merge() -> Fixture:
    """Two cycles sharing the path b..d whose merge is abcdfg."""
    coords = {
        "a": (0, 3), "b": (2, 3), "e": (2, 2), "d": (2, 0), "f": (1, 0),
        "g": (0, 0), "c": (4, 1.5), "h": (3, 1),
    }
    cells = {"C": "abedfg", "D": "behdc"}
    lat = validate_lattice(coords, _path_edges("abedfg", "ehdcb"))
    return Fixture(lat, cells)


def star_two_cycles() -> Fixture:
    """Six cells; the occupied star component has a boundary of two cycles meeting at f."""
    coords = {
        "a": (0, 4), "b": (2, 4), "c": (4, 4), "d": (4, 2), "e": (4, 0), "f": (2, 0),
        "g": (0, 0), "m": (2, 2), "h": (1, -2), "k": (3, -2), "y": (4, -2), "z": (0, -2),
    }
    cells = {"abmg": "abmg", "bcdem": "bcdem", "efgm": "efgm", "fhk": "fhk", "fkye": "fkye", "gzhf": "gzhf"}
    lat = validate_lattice(coords, _path_edges(*cells.values()))
    return Fixture(lat, cells, ("abmg", "bcdem", "efgm", "fhk"))


def corner_touch() -> Fixture:
    """Two 2x2 grids meeting at one corner; every edge lies on a cycle but the dual falls apart."""
    coords = {}
    edges = []
    for ox, oy, tag in ((0, 0, "p"), (2, 2, "q")):
        for j in range(3):
            for i in range(3):
                coords[f"{tag}{i}{j}"] = (ox + i, oy + j)
        for j in range(3):
            for i in range(3):
                if i < 2:
                    edges.append((f"{tag}{i}{j}", f"{tag}{i + 1}{j}"))
                if j < 2:
                    edges.append((f"{tag}{i}{j}", f"{tag}{i}{j + 1}"))
    # q00 sits on p22
    del coords["q00"]
    edges = [tuple("p22" if v == "q00" else v for v in e) for e in edges]
    return Fixture(validate_lattice(coords, edges))


def double_edge() -> Fixture:
    """Two ring cells between nested squares that share two disjoint spokes."""
    coords = {
        "o0": (0, 0), "o1": (4, 0), "o2": (4, 4), "o3": (0, 4),
        "i0": (1, 1), "i1": (3, 1), "i2": (3, 3), "i3": (1, 3),
    }
    edges = [("o1", "i1"), ("o3", "i3")]
    for t in "oi":
        edges += [(f"{t}{k}", f"{t}{(k + 1) % 4}") for k in range(4)]
    return Fixture(validate_lattice(coords, edges))


def four_cells() -> Fixture:
    """Irregular quadrilateral split into four triangles at an off-centre hub."""
    coords = {"a": (0, 0), "b": (4, 0), "c": (5, 3), "d": (1, 4), "m": (2.5, 2)}
    edges = [("a", "b"), ("b", "c"), ("c", "d"), ("a", "d"), ("a", "m"), ("b", "m"), ("c", "m"), ("d", "m")]
    cells = {"Q1": "abm", "Q2": "bcm", "Q3": "cdm", "Q4": "adm"}
    return Fixture(validate_lattice(coords, edges), cells)


def two_squares() -> Fixture:
    return Fixture(gen_square_lattice(2, 1))


def bowtie() -> Fixture:
    """Two unit squares sharing a single corner."""
    coords = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1), 4: (2, 1), 5: (2, 2), 6: (1, 2)}
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (5, 6), (6, 2)]
    return Fixture(validate_lattice(coords, edges))


def bowtie_chain(k: int = 3) -> Fixture:
    """``k`` unit squares in a diagonal chain, consecutive ones sharing a corner."""
    coords = {}
    edges = []
    for s in range(k):
        base = [(s, s), (s + 1, s), (s + 1, s + 1), (s, s + 1)]
        ids = []
        for p in base:
            vid = int(p[0] * 100 + p[1])
            coords[vid] = (float(p[0]), float(p[1]))
            ids.append(vid)
        edges += [(ids[t], ids[(t + 1) % 4]) for t in range(4)]
    return Fixture(validate_lattice(coords, sorted(set(tuple(sorted(e)) for e in edges))))


def pocket() -> Fixture:
    """Two occupied cells ringed by vacant cells 1..7 with two small cells 8, 9 in a pocket.

    Both dual cycles 1234567 and 123459867 surround the occupied pair;
    the first holds the second, so it is the outermost one.
    """
    coords = {
        "LL": (-1, -1), "B0": (0, -1), "B2": (2, -1), "LR": (3, -1),
        "W0": (-1, 0), "p": (0, 0), "q": (1, 0), "r": (2, 0), "E0": (3, 0),
        "W1": (-1, 1), "s": (0, 1), "t": (1, 1), "u": (2, 1), "E1": (3, 1),
        "n": (1, 1.5), "UL": (-1, 3), "UM": (1, 3), "UR": (3, 3),
    }
    cells = {
        "A": ("p", "q", "t", "s"),
        "B": ("q", "r", "u", "t"),
        "1": ("B2", "LR", "E0", "r"),
        "2": ("B0", "B2", "r", "q", "p"),
        "3": ("LL", "B0", "p", "W0"),
        "4": ("W0", "p", "s", "W1"),
        "5": ("W1", "s", "n", "UM", "UL"),
        "6": ("n", "u", "E1", "UR", "UM"),
        "7": ("r", "E0", "E1", "u"),
        "8": ("t", "u", "n"),
        "9": ("s", "t", "n"),
    }
    edges = set()
    for c in cells.values():
        for a, b in zip(c, c[1:] + c[:1]):
            edges.add(tuple(sorted((a, b))))
    return Fixture(validate_lattice(coords, sorted(edges)), cells, ("A", "B"))


ALL = {
    "four_cells": four_cells,
    "merge": merge,
    "star_two_cycles": star_two_cycles,
    "corner_touch": corner_touch,
    "double_edge": double_edge,
    "two_squares": two_squares,
    "bowtie": bowtie,
    "bowtie_chain": bowtie_chain,
    "pocket": pocket,
}
