"""Independent checkers and brute-force oracles for boundaries and surrounding cycles.

Every checker returns a list of human-readable violations; an empty list
means the property holds. None of them reuse the constructions they check
beyond the basic lattice data.
"""

from __future__ import annotations

from collections import Counter, deque
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from . import geometry as geo
from .boundary import CellComponent, OutermostBoundary, cycle_graph
from .generators import SiteConfig
from .geometry import Location, Point
from .lattice import Adjacency, CellDecomposition, CellId, Cycle, Edge, PlanarLattice, cycle_edges, edge_key


def _inside(lat: PlanarLattice, cycle: Sequence, p: Point) -> Location:
    return geo.point_in_polygon(p, lat.polygon(cycle), check=False)


def _cell_in(dec: CellDecomposition, cid: CellId, cycle: Sequence) -> bool:
    return _inside(dec.lattice, cycle, dec.cell(cid).site) is Location.INSIDE


def _edge_strictly_inside(lat: PlanarLattice, e: Edge, cycle: Sequence) -> bool:
    if e in set(cycle_edges(cycle)):
        return False
    return _inside(lat, cycle, lat.midpoint(e)) is Location.INSIDE


# --------------------------------------------------------------------------
# outermost boundary oracles
# --------------------------------------------------------------------------


def brute_force_outermost_edges(dec: CellDecomposition, comp: CellComponent) -> set[Edge]:
    """Edges of the component graph lying strictly inside no cycle of that graph.

    Enumerates every simple cycle, so only usable for small components.
    """
    lat = dec.lattice
    g = nx.Graph()
    g.add_edges_from(comp.edges)
    covered: set[Edge] = set()
    rest = set(comp.edges)
    for cyc in nx.simple_cycles(g):
        if len(cyc) < 3 or not rest:
            continue
        poly = lat.polygon(cyc)
        on = set(cycle_edges(cyc))
        for e in list(rest):
            if e not in on and geo.point_in_polygon(lat.midpoint(e), poly, check=False) is Location.INSIDE:
                covered.add(e)
                rest.discard(e)
    return set(comp.edges) - covered


def flood_fill_outermost_edges(dec: CellDecomposition, comp: CellComponent) -> set[Edge]:
    """Outermost edges by flooding the outside through edges not in the component graph.

    The outer face and every cell are regions; two regions touch across an
    edge. Regions reachable from the outer face without crossing a
    component edge lie outside all cycles, and an edge is outermost exactly
    when one of its two sides is reachable.
    """
    out = "OUT"
    sides: dict[Edge, list] = {}
    for e, cells in dec.edge_to_cells.items():
        sides[e] = list(cells) + ([out] if len(cells) == 1 else [])
    adj: dict = {}
    for e, (a, b) in sides.items():
        if e in comp.edges:
            continue
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = {out}
    queue = deque([out])
    while queue:
        x = queue.popleft()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return {e for e in comp.edges if any(s in seen for s in sides[e])}


# --------------------------------------------------------------------------
# property checkers
# --------------------------------------------------------------------------


def check_star_boundary(
    dec: CellDecomposition, cfg: SiteConfig, comp: CellComponent, ob: OutermostBoundary
) -> list[str]:
    """Properties (i) to (v) of the star outermost boundary."""
    lat = dec.lattice
    bad: list[str] = []
    cycles = list(ob.cycles)
    if not cycles:
        return ["no boundary cycles"]
    edges = ob.edges
    truth = flood_fill_outermost_edges(dec, comp)
    if edges != truth:
        bad.append(f"(i) boundary edges differ from outermost edges: extra {sorted(edges - truth)[:3]}, "
                   f"missing {sorted(truth - edges)[:3]}")
    if not edges <= comp.edges:
        bad.append("(ii) boundary leaves the component graph")
    adj = cycle_graph(cycles)
    seen, queue = {0}, deque([0])
    while queue:
        i = queue.popleft()
        for j in adj[i]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    if len(seen) != len(cycles):
        bad.append("(ii) union of cycles is not connected")
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            a, b = cycles[i], cycles[j]
            if len(set(a) & set(b)) > 1:
                bad.append(f"(iii) cycles {i} and {j} share more than one vertex")
            for c in dec.ids:
                if _cell_in(dec, c, a) and _cell_in(dec, c, b):
                    bad.append(f"(iii) cycles {i} and {j} overlap at cell {c!r}")
                    break
    for c in sorted(comp.cells):
        n = sum(_cell_in(dec, c, cyc) for cyc in cycles)
        if n != 1:
            bad.append(f"(iv) occupied cell {c!r} is inside {n} cycles")
    for cyc in cycles:
        for e in cycle_edges(cyc):
            cells = dec.edge_to_cells.get(e, ())
            inner = [c for c in cells if c in comp.cells and _cell_in(dec, c, cyc)]
            if not inner:
                bad.append(f"(v) edge {e!r} has no occupied cell inside its cycle")
            if len(cells) == 2:
                others = [c for c in cells if c not in comp.cells]
                if len(others) != 1:
                    bad.append(f"(v) edge {e!r} is not a boundary edge")
                    continue
                z = others[0]
                if z in cfg.occupied:
                    bad.append(f"(v) cell {z!r} across edge {e!r} is occupied")
                if any(_cell_in(dec, z, c2) for c2 in cycles):
                    bad.append(f"(v) vacant cell {z!r} across edge {e!r} lies inside a cycle")
    return bad


def check_plus_boundary(dec: CellDecomposition, cfg: SiteConfig, comp: CellComponent, cycle: Cycle) -> list[str]:
    """Single cycle around every plus member, each edge an occupied-vacant or unicellular boundary."""
    bad: list[str] = []
    if len(set(cycle)) != len(cycle) or len(cycle) < 3:
        return ["boundary is not a simple cycle"]
    for c in sorted(comp.cells):
        if not _cell_in(dec, c, cycle):
            bad.append(f"member {c!r} is not inside the boundary")
    for e in cycle_edges(cycle):
        cells = dec.edge_to_cells.get(e)
        if cells is None:
            bad.append(f"{e!r} is not a lattice edge")
            continue
        if not any(c in comp.cells for c in cells):
            bad.append(f"edge {e!r} touches no member")
        for z in cells:
            if z not in comp.cells:
                if z in cfg.occupied:
                    bad.append(f"cell {z!r} across edge {e!r} is occupied")
                if _cell_in(dec, z, cycle):
                    bad.append(f"outer cell {z!r} lies inside the boundary")
    return bad


def check_euler(ob: OutermostBoundary, circuit: Sequence) -> list[str]:
    bad: list[str] = []
    if len(circuit) < 4 or circuit[0] != circuit[-1]:
        return ["circuit is not closed"]
    used = Counter(edge_key(a, b) for a, b in zip(circuit, circuit[1:]))
    want = Counter(e for c in ob.cycles for e in cycle_edges(c))
    if used != want:
        bad.append("circuit edge multiset differs from the boundary edges")
    if any(n != 1 for n in used.values()):
        bad.append("some edge is traversed more than once")
    return bad


def check_m_out(dec: CellDecomposition, cfg: SiteConfig, comp: CellComponent, plus_cycle: Cycle, m_out: Sequence) -> list[str]:
    from .boundary import component, outermost_boundary_star

    bad: list[str] = []
    if not m_out:
        return ["empty cell cycle"]
    for y in m_out:
        if y in cfg.occupied:
            bad.append(f"{y!r} is occupied")
        if not dec.plus_adj[y] & comp.cells:
            bad.append(f"{y!r} is not plus adjacent to the component")
        if _cell_in(dec, y, plus_cycle):
            bad.append(f"{y!r} lies inside the plus boundary")
    t = len(m_out)
    if t > 1:
        for i in range(t):
            a, b = m_out[i], m_out[(i + 1) % t]
            if a != b and not set(a) & set(b):
                bad.append(f"consecutive cells {a!r} and {b!r} are not star adjacent")
    ring = SiteConfig(frozenset(m_out), m_out[0])
    rc = component(dec, ring, Adjacency.STAR)
    if rc.cells != set(m_out):
        bad.append("cell cycle is not star connected")
        return bad
    ob = outermost_boundary_star(dec, rc)
    if len(ob.cycles) != 1:
        bad.append(f"star boundary of the cell cycle has {len(ob.cycles)} cycles")
    else:
        for c in sorted(comp.cells | set(m_out)):
            if not _cell_in(dec, c, ob.cycles[0]):
                bad.append(f"{c!r} is not inside the boundary of the cell cycle")
    return bad


# --------------------------------------------------------------------------
# surrounding dual cycles
# --------------------------------------------------------------------------


def surrounding_dual_cycles(dec, dual, cfg: SiteConfig, comp: CellComponent) -> list[tuple]:
    """Every dual cycle through vacant cells star-adjacent to the component that encloses it."""
    from .dual import dual_subgraph_cycles, surrounds

    allowed = {c for c in dec.ids if c not in cfg.occupied and dec.star_adj[c] & comp.cells}
    return [c for c in dual_subgraph_cycles(dual, allowed) if surrounds(dec, dual, cfg, comp, c)]


def brute_force_p_out(dec, dual, cfg: SiteConfig, comp: CellComponent) -> tuple | None:
    """The surrounding dual cycle whose closed interior holds all the others, if any."""
    cands = surrounding_dual_cycles(dec, dual, cfg, comp)
    if not cands:
        return None
    polys = [dual.polygon(c) for c in cands]

    def holds(i, j):
        return all(geo.point_in_polygon(p, polys[i], check=False) is not Location.OUTSIDE for p in polys[j])

    for i in range(len(cands)):
        if all(holds(i, j) for j in range(len(cands)) if j != i):
            return dual.canonical(cands[i])
    raise AssertionError("no surrounding cycle contains all the others")


def _even_odd(pts: np.ndarray, poly: Sequence[Point]) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ray-casting containment and a mask of points clear of every edge."""
    a = np.asarray(poly, dtype=float)
    b = np.roll(a, -1, axis=0)
    x, y = pts[:, :1], pts[:, 1:]
    straddle = (a[:, 1] > y) != (b[:, 1] > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xc = a[:, 0] + (y - a[:, 1]) * (b[:, 0] - a[:, 0]) / (b[:, 1] - a[:, 1])
    inside = (straddle & (x < xc)).sum(axis=1) % 2 == 1
    d = b - a
    t = np.clip(((x - a[:, 0]) * d[:, 0] + (y - a[:, 1]) * d[:, 1]) / (d ** 2).sum(axis=1), 0, 1)
    dist = np.hypot(a[:, 0] + t * d[:, 0] - x, a[:, 1] + t * d[:, 1] - y).min(axis=1)
    return inside, dist > geo.EPS


def check_merge(lat: PlanarLattice, c: Sequence, d: Sequence, e: Sequence, samples: Iterable[Point]) -> list[str]:
    """Merged cycle holds both inputs, uses only their edges, and encloses every input edge it drops."""
    bad: list[str] = []
    ep = lat.polygon(e)
    cp, dp = lat.polygon(c), lat.polygon(d)
    pts = np.asarray(list(samples), dtype=float).reshape(-1, 2)
    if len(pts):
        in_c, clear_c = _even_odd(pts, cp)
        in_d, clear_d = _even_odd(pts, dp)
        in_e, clear_e = _even_odd(pts, ep)
        lost = (in_c | in_d) & ~in_e & clear_c & clear_d & clear_e
        if lost.any():
            p = tuple(pts[int(np.argmax(lost))])
            bad.append(f"sample {p} inside an input but outside the merge")
    ce, de, ee = set(cycle_edges(c)), set(cycle_edges(d)), set(cycle_edges(e))
    if not ee <= ce | de:
        bad.append("merge uses a foreign edge")
    for f in (ce | de) - ee:
        if geo.point_in_polygon(lat.midpoint(f), ep, check=False) is not Location.INSIDE:
            bad.append(f"dropped edge {f!r} is not inside the merge")
    outside = [f for f in de if geo.point_in_polygon(lat.midpoint(f), cp, check=False) is Location.OUTSIDE]
    if outside and not (set(outside) & ee):
        bad.append("no exterior edge of the second cycle survives")
    return bad
