"""Percolation lattices: validation, cell decomposition, cycle merging, shells."""

from __future__ import annotations

import enum
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from . import geometry as geo
from .errors import (
    BridgeEdge,
    Degenerate,
    NotCellular,
    NotConnected,
    NotPlanar,
    TooFewSharedVertices,
    UnknownCell,
    UnknownEdge,
)
from .geometry import Location, Point

VertexId = Hashable
Edge = tuple  # (u, v) with u < v
Cycle = tuple  # vertex ids, first vertex not repeated
CellId = tuple


class Adjacency(str, enum.Enum):
    STAR = "star"
    PLUS = "plus"


def edge_key(u, v) -> Edge:
    return (u, v) if u < v else (v, u)


def cycle_edges(cycle: Sequence) -> list[Edge]:
    n = len(cycle)
    return [edge_key(cycle[i], cycle[(i + 1) % n]) for i in range(n)]


def canonical_cycle(cycle: Sequence, coords: Mapping[VertexId, Point]) -> Cycle:
    """Rotate to start at the smallest vertex id, oriented counterclockwise."""
    cyc = list(cycle)
    if len(cyc) > 1 and cyc[0] == cyc[-1]:
        cyc.pop()
    if geo.signed_area([coords[v] for v in cyc]) < 0:
        cyc.reverse()
    k = cyc.index(min(cyc))
    return tuple(cyc[k:] + cyc[:k])


def split_closed_walk(walk: Sequence) -> list[Cycle]:
    """Split a closed walk into simple cycles at repeated vertices."""
    stack: list = []
    where: dict = {}
    cycles = []
    for v in list(walk) + [walk[0]]:
        if v in where:
            k = where[v]
            cyc = stack[k:]
            if len(cyc) > 1:
                cycles.append(tuple(cyc))
            for x in stack[k + 1 :]:
                del where[x]
            del stack[k + 1 :]
        else:
            where[v] = len(stack)
            stack.append(v)
    return cycles


def outer_walk(coords: Mapping[VertexId, Point], edges: Iterable[Edge]) -> tuple:
    """Counterclockwise walk around the unbounded face of a connected subgraph."""
    edges = list(edges)
    used = {v for e in edges for v in e}
    sub = {v: coords[v] for v in used}
    faces = geo.trace_faces(geo.build_rotation_system(sub, edges))
    return tuple(reversed(faces.outer))


@dataclass(frozen=True)
class PlanarLattice:
    coords: Mapping[VertexId, Point]
    edges: tuple[Edge, ...]
    rotation: geo.RotationSystem = field(repr=False, compare=False)

    @property
    def vertices(self) -> list:
        return sorted(self.coords)

    def neighbors(self, v) -> tuple:
        return self.rotation.order[v]

    def has_edge(self, u, v) -> bool:
        return v in self.rotation.order.get(u, ())

    def point(self, v) -> Point:
        return self.coords[v]

    def polygon(self, cycle: Sequence) -> list[Point]:
        return [self.coords[v] for v in cycle]

    def segment(self, e: Edge) -> tuple[Point, Point]:
        return (self.coords[e[0]], self.coords[e[1]])

    def midpoint(self, e: Edge) -> Point:
        (x1, y1), (x2, y2) = self.segment(e)
        return (0.5 * (x1 + x2), 0.5 * (y1 + y2))


def _normalize_vertices(vertices) -> dict:
    if isinstance(vertices, Mapping):
        items = [(k, v[0], v[1]) for k, v in vertices.items()]
    else:
        items = [tuple(r) for r in vertices]
    coords: dict = {}
    for rec in items:
        if len(rec) != 3:
            raise Degenerate(f"vertex record {rec!r} must be (id, x, y)")
        vid, x, y = rec
        if vid in coords:
            raise Degenerate(f"duplicate vertex id {vid!r}")
        x, y = float(x), float(y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise Degenerate(f"vertex {vid!r} has non-finite coordinates")
        coords[vid] = (x, y)
    return coords


def _bridges(order: Mapping) -> list[Edge]:
    disc: dict = {}
    low: dict = {}
    out = []
    counter = 0
    for root in sorted(order):
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        stack = [(root, None, iter(order[root]))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = counter
                    counter += 1
                    stack.append((w, v, iter(order[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if parent is not None:
                    low[parent] = min(low[parent], low[v])
                    if low[v] > disc[parent]:
                        out.append(edge_key(parent, v))
    return sorted(out)


def _first_crossing(coords: Mapping, edges: Sequence[Edge]):
    if len(edges) < 2:
        return None
    lengths = [math.dist(coords[u], coords[v]) for u, v in edges]
    h = max(sum(lengths) / len(lengths), 1e-12)
    buckets: dict = defaultdict(list)
    for idx, (u, v) in enumerate(edges):
        (x1, y1), (x2, y2) = coords[u], coords[v]
        for i in range(math.floor(min(x1, x2) / h), math.floor(max(x1, x2) / h) + 1):
            for j in range(math.floor(min(y1, y2) / h), math.floor(max(y1, y2) / h) + 1):
                buckets[(i, j)].append(idx)
    pairs = set()
    for members in buckets.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                pairs.add((members[a], members[b]))
    boxes = []
    for u, v in edges:
        (x1, y1), (x2, y2) = coords[u], coords[v]
        boxes.append((min(x1, x2), min(y1, y2), max(x1, x2), max(y1, y2)))
    for a, b in sorted(pairs):
        ba, bb = boxes[a], boxes[b]
        if ba[2] < bb[0] or bb[2] < ba[0] or ba[3] < bb[1] or bb[3] < ba[1]:
            continue
        ea, eb = edges[a], edges[b]
        if geo.segments_properly_intersect(
            (coords[ea[0]], coords[ea[1]]), (coords[eb[0]], coords[eb[1]])
        ):
            return ea, eb
    return None


def validate_lattice(vertices, edges: Iterable[Sequence]) -> PlanarLattice:
    """Build a :class:`PlanarLattice`, rejecting the first violated property.

    Checks run in the order: degeneracy, connectivity, planarity, bridges.
    """
    coords = _normalize_vertices(vertices)
    if not coords:
        raise Degenerate("lattice has no vertices")
    kinds = {type(v) for v in coords}
    if len(kinds) > 1:
        raise Degenerate(f"vertex ids must share one type, got {sorted(k.__name__ for k in kinds)}")
    by_point: dict = {}
    for v in sorted(coords):
        p = coords[v]
        if p in by_point:
            raise Degenerate(f"vertices {by_point[p]!r} and {v!r} coincide")
        by_point[p] = v
    raw = []
    for e in edges:
        e = tuple(e)
        if len(e) != 2:
            raise Degenerate(f"edge record {e!r} must name two vertices")
        for v in e:
            if v not in coords:
                raise Degenerate(f"edge {e!r} references unknown vertex {v!r}")
        raw.append(e)
    if not raw:
        raise Degenerate("lattice has no edges")
    rotation = geo.build_rotation_system(coords, raw)
    edge_list = tuple(sorted(edge_key(u, v) for u, v in raw))

    start = min(coords)
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in rotation.order[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != len(coords):
        raise NotConnected(min(set(coords) - seen))

    crossing = _first_crossing(coords, edge_list)
    if crossing is not None:
        raise NotPlanar(*crossing)

    bridges = _bridges(rotation.order)
    if bridges:
        raise BridgeEdge(bridges[0])
    return PlanarLattice(coords=coords, edges=edge_list, rotation=rotation)


# --------------------------------------------------------------------------
# cells
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    cell_id: CellId
    area: float
    polygon: tuple[Point, ...] = field(repr=False)
    site: Point = field(repr=False)

    @property
    def boundary(self) -> Cycle:
        return self.cell_id

    @property
    def edges(self) -> list[Edge]:
        return cycle_edges(self.cell_id)


@dataclass(frozen=True)
class CellDecomposition:
    lattice: PlanarLattice
    cells: tuple[Cell, ...]
    edge_to_cells: Mapping[Edge, tuple[CellId, ...]]
    vertex_to_cells: Mapping[VertexId, tuple[CellId, ...]]
    star_adj: Mapping[CellId, frozenset]
    plus_adj: Mapping[CellId, frozenset]
    by_id: Mapping[CellId, Cell] = field(repr=False)

    def cell(self, cid: CellId) -> Cell:
        try:
            return self.by_id[cid]
        except KeyError:
            raise UnknownCell(cid) from None

    @property
    def ids(self) -> list[CellId]:
        return [c.cell_id for c in self.cells]

    def neighbors(self, cid: CellId, mode: Adjacency) -> frozenset:
        table = self.plus_adj if Adjacency(mode) is Adjacency.PLUS else self.star_adj
        return table[cid]

    def lookup(self, cycle: Sequence) -> CellId:
        """Resolve any rotation/orientation of a cell boundary to its id."""
        try:
            cid = canonical_cycle(cycle, self.lattice.coords)
        except (KeyError, ValueError):
            raise UnknownCell(tuple(cycle)) from None
        if cid not in self.by_id:
            raise UnknownCell(tuple(cycle))
        return cid

    def locate(self, p: Point) -> CellId | None:
        for c in self.cells:
            if geo.point_in_polygon(p, c.polygon, check=False) is Location.INSIDE:
                return c.cell_id
        return None


def decompose_cells(lat: PlanarLattice) -> CellDecomposition:
    """Cells are the bounded faces of the embedding, keyed by canonical id."""
    faces = geo.trace_faces(lat.rotation)
    cells = []
    for walk in faces.bounded:
        if len(set(walk)) != len(walk):
            raise NotCellular(walk)
        cid = canonical_cycle(walk, lat.coords)
        poly = tuple(lat.coords[v] for v in cid)
        cells.append(Cell(cid, geo.signed_area(poly), poly, geo.interior_point(poly)))
    cells.sort(key=lambda c: c.cell_id)
    e2c: dict = defaultdict(list)
    v2c: dict = defaultdict(list)
    for c in cells:
        for e in c.edges:
            e2c[e].append(c.cell_id)
        for v in c.cell_id:
            v2c[v].append(c.cell_id)
    star: dict = {c.cell_id: set() for c in cells}
    plus: dict = {c.cell_id: set() for c in cells}
    for members in v2c.values():
        for a in members:
            star[a].update(m for m in members if m != a)
    for members in e2c.values():
        if len(members) == 2:
            a, b = members
            plus[a].add(b)
            plus[b].add(a)
    return CellDecomposition(
        lattice=lat,
        cells=tuple(cells),
        edge_to_cells={e: tuple(v) for e, v in e2c.items()},
        vertex_to_cells={v: tuple(m) for v, m in v2c.items()},
        star_adj={k: frozenset(v) for k, v in star.items()},
        plus_adj={k: frozenset(v) for k, v in plus.items()},
        by_id={c.cell_id: c for c in cells},
    )


def is_unicellular(dec: CellDecomposition, e: Sequence) -> bool:
    key = edge_key(*e)
    try:
        return len(dec.edge_to_cells[key]) == 1
    except KeyError:
        raise UnknownEdge(tuple(e)) from None


def cells_adjacent(dec: CellDecomposition, a: CellId, b: CellId, mode: Adjacency) -> bool:
    dec.cell(a)
    dec.cell(b)
    if a == b:
        raise ValueError("adjacency is defined for distinct cells only")
    return b in dec.neighbors(a, mode)


# --------------------------------------------------------------------------
# cycles
# --------------------------------------------------------------------------


def check_cycle(lat: PlanarLattice, cycle: Sequence) -> Cycle:
    cyc = tuple(cycle)
    if len(cyc) > 1 and cyc[0] == cyc[-1]:
        cyc = cyc[:-1]
    if len(cyc) < 3 or len(set(cyc)) != len(cyc):
        raise ValueError(f"{cycle!r} is not a simple cycle")
    for u, v in cycle_edges(cyc):
        if not lat.has_edge(u, v):
            raise ValueError(f"cycle uses non-edge {(u, v)!r}")
    return cyc


def merge_cycles(lat: PlanarLattice, c: Sequence, d: Sequence) -> Cycle:
    """Smallest cycle of ``c`` and ``d`` whose closed interior holds both.

    This is the outer face of the subgraph ``c ∪ d``, which is 2-connected
    as soon as the cycles share two or more vertices.
    """
    c = check_cycle(lat, c)
    d = check_cycle(lat, d)
    if len(set(c) & set(d)) < 2:
        raise TooFewSharedVertices(f"cycles share {len(set(c) & set(d))} vertices")
    edges = set(cycle_edges(c)) | set(cycle_edges(d))
    walk = outer_walk(lat.coords, sorted(edges))
    return canonical_cycle(walk, lat.coords)


def cycle_contains(lat: PlanarLattice, cycle: Sequence, p: Point) -> Location:
    return geo.point_in_polygon(p, lat.polygon(cycle), check=False)


@dataclass(frozen=True)
class ShellSet:
    shells: tuple[Cycle, ...]
    cell_shell: Mapping[CellId, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.shells)


def shell_cycles(dec: CellDecomposition) -> ShellSet:
    """Grow shells by merging edge-sharing exterior cells, in canonical order."""
    lat = dec.lattice
    assigned: dict[CellId, int] = {}
    shells: list[Cycle] = []
    order = dec.ids
    while len(assigned) < len(order):
        start = None
        if shells:
            touched = {v for s in shells for v in s}
            for cid in order:
                if cid not in assigned and touched & set(cid):
                    start = cid
                    break
        if start is None:
            start = next(cid for cid in order if cid not in assigned)
        idx = len(shells)
        shell = start
        assigned[start] = idx
        while True:
            cand = None
            poly = lat.polygon(shell)
            for e in cycle_edges(shell):
                for cid in dec.edge_to_cells[e]:
                    if cid in assigned:
                        continue
                    if geo.point_in_polygon(dec.by_id[cid].site, poly, check=False) is Location.OUTSIDE:
                        if cand is None or cid < cand:
                            cand = cid
            if cand is None:
                break
            shell = merge_cycles(lat, shell, cand)
            poly = lat.polygon(shell)
            for cid in order:
                if cid not in assigned and (
                    geo.point_in_polygon(dec.by_id[cid].site, poly, check=False) is Location.INSIDE
                ):
                    assigned[cid] = idx
        shells.append(canonical_cycle(shell, lat.coords))
    return ShellSet(shells=tuple(shells), cell_shell=assigned)
