"""Dual lattice construction, duality axioms and vacant surrounding cycles.

Each dual edge is drawn as two segments, from the dual vertex of one cell
to the midpoint of the shared primal edge and on to the other dual vertex.
Internally the dual is stored as a straight-line lattice in which that
midpoint is an extra degree-two "bend" vertex, so validation, cell
decomposition and boundary extraction are shared with the primal code.
Sub-lattice ids are ``(0, cell_id)`` for dual vertices and ``(1, edge)``
for bends.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import geometry as geo
from .boundary import (
    CellComponent,
    component,
    outermost_boundary_plus,
    outermost_boundary_star,
)
from .errors import (
    BridgeEdge,
    Degenerate,
    DualAcyclic,
    DualError,
    DualNotConnected,
    DualNotPlanar,
    HypothesisViolated,
    MissingVacantNeighbor,
    NotCellular,
    NotConnected,
    NotPlanar,
    PerclatError,
)
from .generators import SiteConfig
from .geometry import Location, Point
from .lattice import (
    Adjacency,
    CellDecomposition,
    CellId,
    Cycle,
    Edge,
    PlanarLattice,
    check_cycle,
    cycle_edges,
    decompose_cells,
    edge_key,
    merge_cycles,
    validate_lattice,
)

DualEdge = tuple  # (cell_id, cell_id), sorted


def dv(cid: CellId) -> tuple:
    return (0, cid)


def bend(e: Edge) -> tuple:
    return (1, e)


@dataclass(frozen=True)
class DualLattice:
    dual_vertices: Mapping[CellId, Point]
    dual_edges: tuple[DualEdge, ...]
    crossed: Mapping[DualEdge, Edge]
    shared_edges: Mapping[DualEdge, tuple[Edge, ...]] = field(repr=False)
    sub_lattice: PlanarLattice | None = field(default=None, repr=False)
    dual_cells: CellDecomposition | None = field(default=None, repr=False)
    vertex_to_dual_cell: Mapping = field(default_factory=dict, repr=False)
    dual_cell_vertex: Mapping = field(default_factory=dict, repr=False)
    issues: tuple[DualError, ...] = ()

    def polyline(self, de: DualEdge) -> tuple[Point, Point, Point]:
        a, b = de
        (x1, y1), (x2, y2) = (self._primal_coords[v] for v in self.crossed[de])
        return (self.dual_vertices[a], (0.5 * (x1 + x2), 0.5 * (y1 + y2)), self.dual_vertices[b])

    _primal_coords: Mapping = field(default_factory=dict, repr=False)

    def strip(self, sub_cycle: Sequence) -> tuple:
        """Dual-vertex cycle (cell ids) of a sub-lattice cycle."""
        return tuple(v[1] for v in sub_cycle if v[0] == 0)

    def expand(self, cycle: Sequence[CellId]) -> tuple:
        """Sub-lattice cycle for a cycle of dual vertices."""
        out = []
        n = len(cycle)
        for i in range(n):
            a, b = cycle[i], cycle[(i + 1) % n]
            de = (a, b) if a < b else (b, a)
            if de not in self.crossed:
                raise ValueError(f"{a!r} and {b!r} are not dual-adjacent")
            out.append(dv(a))
            out.append(bend(self.crossed[de]))
        return tuple(out)

    def polygon(self, cycle: Sequence[CellId]) -> list[Point]:
        pts = []
        for v in self.expand(cycle):
            pts.append(self.dual_vertices[v[1]] if v[0] == 0 else self.sub_lattice.coords[v])
        return pts

    def canonical(self, cycle: Sequence[CellId]) -> tuple:
        cyc = list(cycle)
        if geo.signed_area(self.polygon(cyc)) < 0:
            cyc.reverse()
        k = cyc.index(min(cyc))
        return tuple(cyc[k:] + cyc[:k])


def construct_dual(dec: CellDecomposition, strict: bool = True) -> DualLattice:
    """One vertex inside each cell, one edge per plus-adjacent pair.

    With ``strict`` a dual that is not a connected, planar, bridgeless
    lattice raises the matching DualError; otherwise the failure is
    recorded in ``issues`` and the dual cells are left empty.
    """
    lat = dec.lattice
    verts = {c.cell_id: c.site for c in dec.cells}
    shared: dict = {}
    for e, cells in dec.edge_to_cells.items():
        if len(cells) == 2:
            a, b = sorted(cells)
            shared.setdefault((a, b), []).append(e)
    crossed = {de: min(es) for de, es in shared.items()}
    sub_coords: dict = {dv(c): p for c, p in verts.items()}
    sub_edges = []
    for de, e in sorted(crossed.items()):
        m = bend(e)
        sub_coords[m] = lat.midpoint(e)
        sub_edges.append((dv(de[0]), m))
        sub_edges.append((m, dv(de[1])))
    base = dict(
        dual_vertices=verts,
        dual_edges=tuple(sorted(crossed)),
        crossed=crossed,
        shared_edges={k: tuple(sorted(v)) for k, v in shared.items()},
        _primal_coords=lat.coords,
    )
    issue: DualError | None = None
    sub = cells = None
    if not sub_edges:
        issue = DualAcyclic("dual has no edges")
    else:
        try:
            sub = validate_lattice(sub_coords, sub_edges)
            cells = decompose_cells(sub)
        except NotConnected as exc:
            issue = DualNotConnected(f"dual is not connected: {exc}")
        except NotPlanar as exc:
            issue = DualNotPlanar(f"dual edges cross: {exc}")
        except BridgeEdge as exc:
            b = exc.edge
            tip = b[0] if b[0][0] == 0 else b[1]
            issue = DualAcyclic(f"dual edge at cell {tip[1]!r} lies on no dual cycle")
        except (Degenerate, NotCellular) as exc:
            issue = DualNotPlanar(f"dual embedding is degenerate: {exc}")
    if issue is not None:
        if strict:
            raise issue
        return DualLattice(**base, issues=(issue,))
    housed: dict = {}
    owner: dict = {}
    for v in sorted(lat.coords):
        cid = cells.locate(lat.coords[v])
        if cid is not None:
            housed[v] = cid
            owner.setdefault(cid, []).append(v)
    return DualLattice(
        **base,
        sub_lattice=sub,
        dual_cells=cells,
        vertex_to_dual_cell=housed,
        dual_cell_vertex={k: tuple(v) for k, v in owner.items()},
    )


# --------------------------------------------------------------------------
# duality axioms
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PropertyResult:
    passed: bool
    counterexample: object = None
    detail: str = ""


@dataclass(frozen=True)
class DualityReport:
    a1: PropertyResult
    a2: PropertyResult
    a3: PropertyResult
    a4: PropertyResult
    a5: PropertyResult

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results().values())

    def results(self) -> dict[str, PropertyResult]:
        return {k: getattr(self, k) for k in ("a1", "a2", "a3", "a4", "a5")}

    def first_failure(self) -> str | None:
        for k, r in self.results().items():
            if not r.passed:
                return k
        return None


def niceness_violation(cycles: Iterable[Sequence]):
    """First pair of edge-sharing cycles that share more than one edge and its ends."""
    cycles = [tuple(c) for c in cycles]
    by_edge: dict = {}
    for i, c in enumerate(cycles):
        for e in cycle_edges(c):
            by_edge.setdefault(e, []).append(i)
    pairs = {tuple(sorted(v)) for v in by_edge.values() if len(v) == 2}
    for i, j in sorted(pairs):
        common_e = set(cycle_edges(cycles[i])) & set(cycle_edges(cycles[j]))
        common_v = set(cycles[i]) & set(cycles[j])
        if len(common_e) != 1:
            return (cycles[i], cycles[j]), f"share {len(common_e)} edges"
        (e,) = common_e
        if common_v != set(e):
            return (cycles[i], cycles[j]), f"share {len(common_v)} vertices"
    return None


def _samples(points: Sequence[Point], steps: int = 4) -> list[Point]:
    out = []
    for k in range(len(points) - 1):
        (x1, y1), (x2, y2) = points[k], points[k + 1]
        for t in range(steps):
            s = t / steps
            out.append((x1 + s * (x2 - x1), y1 + s * (y2 - y1)))
    out.append(points[-1])
    return out


def _a2(dec: CellDecomposition, dual: DualLattice) -> PropertyResult:
    lat = dec.lattice
    for de in dual.dual_edges:
        merged = merge_cycles(lat, de[0], de[1])
        poly = lat.polygon(merged)
        for p in _samples(dual.polyline(de)):
            if geo.point_in_polygon(p, poly, check=False) is not Location.INSIDE:
                return PropertyResult(False, de, f"dual edge point {p} not interior to merged cycle")
    return PropertyResult(True)


def _a3(dec: CellDecomposition, dual: DualLattice) -> PropertyResult:
    if dual.issues:
        return PropertyResult(False, type(dual.issues[0]).__name__, str(dual.issues[0]))
    cells = dual.dual_cells
    for w in cells.ids:
        owners = dual.dual_cell_vertex.get(w, ())
        if len(owners) != 1:
            return PropertyResult(False, dual.strip(w), f"dual cell houses {len(owners)} primal vertices")
    housed = dual.vertex_to_dual_cell
    lat = dec.lattice
    for u in sorted(housed):
        for v in sorted(housed):
            if not u < v:
                continue
            adj = housed[v] in cells.plus_adj[housed[u]]
            if adj != lat.has_edge(u, v):
                return PropertyResult(False, (u, v), "dual-cell adjacency does not match primal adjacency")
    return PropertyResult(True)


def _a4(dec: CellDecomposition, dual: DualLattice) -> PropertyResult:
    if dual.dual_cells is None:
        return PropertyResult(False, None, "dual is not a percolation lattice")
    bad = niceness_violation(dual.strip(c) for c in dual.dual_cells.ids)
    if bad is not None:
        return PropertyResult(False, bad[0], "dual niceness: " + bad[1])
    lat = dec.lattice
    sub = dual.sub_lattice
    housed = dual.vertex_to_dual_cell
    for u, v in lat.edges:
        if u not in housed or v not in housed:
            continue
        wu, wv = housed[u], housed[v]
        if wv not in dual.dual_cells.plus_adj[wu]:
            continue
        merged = merge_cycles(sub, wu, wv)
        poly = sub.polygon(merged)
        for p in _samples([lat.coords[u], lat.coords[v]]):
            if geo.point_in_polygon(p, poly, check=False) is not Location.INSIDE:
                return PropertyResult(False, (u, v), "primal edge not interior to merged dual cells")
    return PropertyResult(True)


def _a5(dec: CellDecomposition, dual: DualLattice) -> PropertyResult:
    if dual.dual_cells is None:
        return PropertyResult(False, None, "dual is not a percolation lattice")
    for v, w in sorted(dual.vertex_to_dual_cell.items()):
        for z in dual.strip(w):
            if v not in z:
                return PropertyResult(False, (v, z), "vertex is not a corner of the cell holding a dual corner")
    return PropertyResult(True)


def verify_duality_properties(dec: CellDecomposition, dual: DualLattice | None = None) -> DualityReport:
    if dual is None:
        dual = construct_dual(dec, strict=False)
    bad = niceness_violation(dec.ids)
    a1 = PropertyResult(True) if bad is None else PropertyResult(False, bad[0], bad[1])
    return DualityReport(a1=a1, a2=_a2(dec, dual), a3=_a3(dec, dual), a4=_a4(dec, dual), a5=_a5(dec, dual))


# --------------------------------------------------------------------------
# vacant surrounding cycles
# --------------------------------------------------------------------------


def cell_strictly_inside(dec: CellDecomposition, cid: CellId, poly: Sequence[Point]) -> bool:
    cell = dec.cell(cid)
    pts = list(cell.polygon) + [cell.site]
    return all(geo.point_in_polygon(p, poly, check=False) is Location.INSIDE for p in pts)


def surrounds(
    dec: CellDecomposition, dual: DualLattice, cfg: SiteConfig, comp: CellComponent, cycle: Sequence[CellId]
) -> bool:
    """Whether a dual cycle passes only through vacant cells star-adjacent to
    the component and strictly encloses every component cell."""
    for w in cycle:
        if w in cfg.occupied:
            return False
        if not dec.star_adj[w] & comp.cells:
            return False
    poly = dual.polygon(cycle)
    return all(cell_strictly_inside(dec, c, poly) for c in comp.cells)


def _contains_cycle(poly: Sequence[Point], pts: Iterable[Point]) -> bool:
    return all(geo.point_in_polygon(p, poly, check=False) is not Location.OUTSIDE for p in pts)


def vacant_dual_cycle_around_star(
    dec: CellDecomposition,
    dual: DualLattice,
    comp: CellComponent,
    cfg: SiteConfig | None = None,
    candidates: Iterable[Sequence[CellId]] = (),
    exhaustive: bool = False,
) -> tuple:
    """Outermost vacant dual cycle around a star component.

    Collects the dual cells around the vertices of the component's outermost
    boundary, takes the plus outermost boundary of that dual blob and then
    merges in any ``candidates`` that also surround the component. With
    ``exhaustive`` every surrounding dual cycle is enumerated as a candidate,
    which is only feasible on small lattices.
    """
    if comp.mode is not Adjacency.STAR:
        raise ValueError("needs a star component")
    if dual.dual_cells is None:
        raise HypothesisViolated("dual is not a percolation lattice")
    for v in sorted(comp.vertices):
        if v not in dual.vertex_to_dual_cell:
            raise HypothesisViolated(f"component vertex {v!r} is not inside any dual cell")
    ob = outermost_boundary_star(dec, comp)
    ring = {dual.vertex_to_dual_cell[v] for c in ob.cycles for v in c}
    dcfg = SiteConfig(frozenset(ring), min(ring))
    blob = component(dual.dual_cells, dcfg, Adjacency.PLUS)
    if blob.cells != ring:
        raise PerclatError("dual cells around the boundary are not plus connected")
    sub_cycle = outermost_boundary_plus(dual.dual_cells, blob)
    best = sub_cycle
    sub = dual.sub_lattice
    if exhaustive:
        if cfg is None:
            raise ValueError("exhaustive search needs the configuration")
        from .verify import surrounding_dual_cycles

        candidates = [*candidates, *surrounding_dual_cycles(dec, dual, cfg, comp)]
    for cand in candidates:
        cand = tuple(cand)
        if cfg is not None and not surrounds(dec, dual, cfg, comp, cand):
            continue
        csub = check_cycle(sub, dual.expand(cand))
        if len(set(csub) & set(best)) >= 2:
            best = merge_cycles(sub, best, csub)
        elif not _contains_cycle(sub.polygon(best), sub.polygon(csub)):
            best = csub
    return dual.canonical(dual.strip(best))


def _star_chain(seq: Sequence[CellId]) -> bool:
    n = len(seq)
    return n < 2 or all(set(seq[i]) & set(seq[(i + 1) % n]) for i in range(n))


def _loop_erased(walk: Sequence[CellId]) -> list:
    stack: list = []
    for z in walk:
        if z in stack:
            del stack[stack.index(z) + 1:]
        else:
            stack.append(z)
    return stack


def vacant_cell_cycle_around_plus(dec: CellDecomposition, cfg: SiteConfig, comp: CellComponent) -> tuple:
    """Vacant cells across the plus boundary with recurring entries removed.

    The cells across consecutive boundary edges form a closed walk. Keeping
    first occurrences is tried first; when a pocket makes the walk double
    back, the walk is loop-erased instead, starting from the first rotation
    that leaves consecutive cells star adjacent.
    """
    if comp.mode is not Adjacency.PLUS:
        raise ValueError("needs a plus component")
    cyc = outermost_boundary_plus(dec, comp)
    walk = []
    for e in cycle_edges(cyc):
        cells = dec.edge_to_cells[e]
        outside = [c for c in cells if c not in comp.cells]
        if not outside:
            raise MissingVacantNeighbor(e, f"boundary edge {e!r} has no cell outside the component")
        (z,) = outside
        if z in cfg.occupied:
            raise MissingVacantNeighbor(e, f"cell {z!r} across boundary edge {e!r} is occupied")
        if not walk or walk[-1] != z:
            walk.append(z)
    first = list(dict.fromkeys(walk))
    if _star_chain(first):
        return tuple(first)
    for k in range(len(walk)):
        seq = _loop_erased(walk[k:] + walk[:k])
        if _star_chain(seq):
            return tuple(seq)
    return tuple(first)


def dual_subgraph_cycles(dual: DualLattice, allowed: Iterable[CellId]) -> list[tuple]:
    """All simple dual cycles through ``allowed`` dual vertices (brute force)."""
    import networkx as nx

    allowed = set(allowed)
    g = nx.Graph()
    g.add_nodes_from(allowed)
    g.add_edges_from(de for de in dual.dual_edges if de[0] in allowed and de[1] in allowed)
    return [tuple(c) for c in nx.simple_cycles(g) if len(c) >= 3]


__all__ = [
    "DualLattice",
    "DualityReport",
    "PropertyResult",
    "construct_dual",
    "verify_duality_properties",
    "vacant_dual_cycle_around_star",
    "vacant_cell_cycle_around_plus",
    "surrounds",
    "niceness_violation",
    "dual_subgraph_cycles",
    "edge_key",
]
